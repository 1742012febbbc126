//! Deterministic seed derivation.
//!
//! Every random stream is a ChaCha8 generator keyed by a 64-bit seed. Seeds
//! for sub-streams are derived by hashing the parent seed with a tuple of
//! indices, so any trial can be regenerated on its own, on any thread.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream labels mixed into derived seeds.
pub mod stream {
    pub const NOISE: u64 = 1;
    pub const CODEWORD: u64 = 2;
    pub const VOTING_SET: u64 = 3;
    pub const OUTER_CODE: u64 = 4;
}

#[inline]
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Hashes `parent` together with `parts` into a new seed.
pub fn derive(parent: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix64(parent), |acc, &p| {
        splitmix64(acc ^ splitmix64(p))
    })
}

/// Seed of one Monte-Carlo trial.
pub fn trial_seed(master: u64, grid_index: u64, trial: u64) -> u64 {
    derive(master, &[grid_index, trial])
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
