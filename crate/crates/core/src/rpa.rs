//! Recursive projection-aggregation decoding.
//!
//! One RPA iteration on RM(m, r):
//! 1. project the current estimate onto the cosets of every line `{0, z0}`
//!    in the voting set, giving words of RM(m-1, r-1);
//! 2. decode every projection recursively (first-order projections are
//!    decoded by ML through the fast Hadamard transform);
//! 3. aggregate the decoded projections back into a new length-`2^m`
//!    estimate.
//!
//! Iterations stop after `n_max` rounds or at a fixed point. The projection
//! decodes of one iteration are independent; with the `std` feature and
//! `parallel_projections` they run on the rayon pool. Aggregation always
//! sums in voting-set order, so parallel and sequential runs are
//! bit-identical.
//!
//! The hard-decision decoder votes per coordinate and flips on a strict
//! majority. In both decoders, a first-order projection with several ML
//! solutions (exactly equal correlations) gives each solution an equal
//! share of that projection's vote. A final LLR of exactly zero is decided
//! by the sign of the LLR the call started from.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;

use crate::bits::BitWord;
use crate::channel::LlrWord;
use crate::error::{Error, Result};
use crate::fht::{
    affine_codeword, ml_decode_order1, order1_hard_maximizers, order1_soft_maximizers,
};
use crate::rm::{coset_1d, rep_1d, Subspace};
use crate::seed;

/// Default exit threshold of the LLR decoder.
pub const DEFAULT_THETA: f64 = 0.05;

/// `|L̂(z)|` below this counts as unchanged when `L(z) = 0`.
const ZERO_LLR_TOL: f64 = 1e-12;

/// Which one-dimensional subspaces take part in projection and voting.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum VotingSet {
    /// All `2^m - 1` lines, at every level.
    #[default]
    All,
    /// The lines `{0, z0}` for the listed `z0` at the top level; recursive
    /// calls use all lines.
    Explicit(Vec<u32>),
    /// `size` lines out of `2^m - 1` drawn uniformly from `seed` at the top
    /// level, and the same fraction (rounded, at least one) at every lower
    /// level.
    Random { size: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoderConfig {
    /// Iteration cap; `None` means `⌈m/2⌉` of the top-level code.
    pub n_max: Option<usize>,
    /// Relative exit threshold of the LLR decoder.
    pub theta: f64,
    pub voting_set: VotingSet,
    /// Decode the projections of the top level concurrently.
    pub parallel_projections: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            n_max: None,
            theta: DEFAULT_THETA,
            voting_set: VotingSet::All,
            parallel_projections: false,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_max == Some(0) {
            return Err(Error::InvalidConfig("n_max must be at least 1"));
        }
        if self.theta.is_nan() || self.theta < 0.0 {
            return Err(Error::InvalidConfig("theta must be non-negative"));
        }
        match &self.voting_set {
            VotingSet::Explicit(z) if z.is_empty() => {
                Err(Error::InvalidConfig("voting set must not be empty"))
            }
            VotingSet::Random { size: 0, .. } => {
                Err(Error::InvalidConfig("voting set must not be empty"))
            }
            _ => Ok(()),
        }
    }

    pub fn resolved_n_max(&self, m: u32) -> usize {
        self.n_max.unwrap_or((m as usize).div_ceil(2)).max(1)
    }
}

/// One decoded projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjectionDecode {
    Word(BitWord),
    /// Several equally likely first-order codewords.
    Tied(Vec<BitWord>),
}

impl ProjectionDecode {
    fn len(&self) -> usize {
        match self {
            Self::Word(w) => w.len(),
            Self::Tied(ws) => ws.first().map_or(0, BitWord::len),
        }
    }

    /// Fraction of the decodes that disagree with `bit` at coset `t`.
    #[inline]
    fn disagreement(&self, t: usize, bit: bool) -> f64 {
        match self {
            Self::Word(w) => (w.get(t) != bit) as u8 as f64,
            Self::Tied(ws) => {
                let d = ws.iter().filter(|w| w.get(t) != bit).count();
                d as f64 / ws.len() as f64
            }
        }
    }

    /// Mean of `1 - 2·ŷ(t)`.
    #[inline]
    fn sign(&self, t: usize) -> f64 {
        match self {
            Self::Word(w) => {
                if w.get(t) {
                    -1.0
                } else {
                    1.0
                }
            }
            Self::Tied(ws) => {
                let ones = ws.iter().filter(|w| w.get(t)).count() as f64;
                let len = ws.len() as f64;
                (len - 2.0 * ones) / len
            }
        }
    }
}

/// Decoded projections aligned with the lines `{0, z0}` they came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionDecodeSet {
    pub z0s: Vec<u32>,
    pub decodes: Vec<ProjectionDecode>,
}

impl ProjectionDecodeSet {
    pub fn new(z0s: Vec<u32>, decodes: Vec<ProjectionDecode>) -> Result<Self> {
        if z0s.len() != decodes.len() {
            return Err(Error::Misaligned("one decode per subspace"));
        }
        if z0s.is_empty() {
            return Err(Error::Misaligned("no subspaces"));
        }
        Ok(Self { z0s, decodes })
    }

    /// A set of plain words.
    pub fn from_words(z0s: Vec<u32>, words: Vec<BitWord>) -> Result<Self> {
        Self::new(z0s, words.into_iter().map(ProjectionDecode::Word).collect())
    }

    pub fn len(&self) -> usize {
        self.z0s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z0s.is_empty()
    }

    fn check(&self, n: usize) -> Result<()> {
        for (&z0, d) in self.z0s.iter().zip(&self.decodes) {
            if z0 == 0 || z0 as usize >= n {
                return Err(Error::Misaligned("z0 outside the ambient space"));
            }
            if d.len() != n / 2 {
                return Err(Error::Misaligned("decoded projection has the wrong length"));
            }
        }
        Ok(())
    }
}

/// `ln(1 + e^{a+b}) - ln(e^a + e^b)`, the LLR of the XOR of two bits.
///
/// Evaluated as `sign(a)·sign(b)·g(|a|, |b|)` with
/// `g(x, y) = min(x, y) + ln(1 + e^{-(x+y)}) - ln(1 + e^{-|x-y|})`, which
/// never overflows, is exactly odd in each argument and symmetric.
#[inline]
pub fn llr_xor(a: f64, b: f64) -> f64 {
    let (x, y) = (a.abs(), b.abs());
    let g = x.min(y) + libm::log1p(libm::exp(-(x + y))) - libm::log1p(libm::exp(-(x - y).abs()));
    let g = g.max(0.0);
    if (a < 0.0) != (b < 0.0) {
        -g
    } else {
        g
    }
}

fn project_llr_1d(llr: &[f64], z0: usize) -> Vec<f64> {
    (0..llr.len() / 2)
        .map(|t| {
            let z = rep_1d(t, z0);
            llr_xor(llr[z], llr[z ^ z0])
        })
        .collect()
}

fn project_hard_1d(y: &BitWord, z0: usize) -> BitWord {
    BitWord::from_fn(y.len() / 2, |t| {
        let z = rep_1d(t, z0);
        y.get(z) ^ y.get(z ^ z0)
    })
}

/// LLR projection onto the cosets of a line.
pub fn project_llr(llr: &[f64], sub: &Subspace) -> Result<LlrWord> {
    if sub.dim() != 1 {
        return Err(Error::NotOneDimensional(sub.dim()));
    }
    let n = 1usize << sub.m();
    if llr.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: llr.len(),
        });
    }
    Ok(LlrWord::new(project_llr_1d(llr, sub.basis()[0] as usize)))
}

/// Majority-vote aggregation of decoded hard projections.
///
/// `changevote(z)` counts the lines whose decode disagrees with the
/// projection at the coset of `z`; `y(z)` flips when more than half of the
/// `V` lines disagree.
pub fn aggregate_bsc(
    y: &BitWord,
    projections: &[BitWord],
    decoded: &ProjectionDecodeSet,
) -> Result<BitWord> {
    let n = y.len();
    check_ambient(n)?;
    decoded.check(n)?;
    if projections.len() != decoded.len() || projections.iter().any(|p| p.len() != n / 2) {
        return Err(Error::Misaligned(
            "projections do not match the decoded set",
        ));
    }
    Ok(aggregate_bsc_unchecked(y, projections, decoded).0)
}

fn aggregate_bsc_unchecked(
    y: &BitWord,
    projections: &[BitWord],
    decoded: &ProjectionDecodeSet,
) -> (BitWord, usize) {
    let n = y.len();
    let mut votes = vec![0.0f64; n];
    for ((&z0, proj), dec) in decoded.z0s.iter().zip(projections).zip(&decoded.decodes) {
        let z0 = z0 as usize;
        for (z, v) in votes.iter_mut().enumerate() {
            let t = coset_1d(z, z0);
            *v += dec.disagreement(t, proj.get(t));
        }
    }
    let half = decoded.len() as f64 / 2.0;
    let mut out = y.clone();
    let mut changes = 0;
    for (z, &v) in votes.iter().enumerate() {
        if v > half {
            out.flip(z);
            changes += 1;
        }
    }
    (out, changes)
}

/// `L̂(z) = (1/V) Σ_i (1 - 2·ŷ_i([z + B_i])) · L(z ⊕ z_i)`.
pub fn aggregate_llr(llr: &[f64], decoded: &ProjectionDecodeSet) -> Result<LlrWord> {
    check_ambient(llr.len())?;
    decoded.check(llr.len())?;
    Ok(LlrWord::new(aggregate_llr_unchecked(llr, decoded)))
}

fn aggregate_llr_unchecked(llr: &[f64], decoded: &ProjectionDecodeSet) -> Vec<f64> {
    let mut cumu = vec![0.0f64; llr.len()];
    for (&z0, dec) in decoded.z0s.iter().zip(&decoded.decodes) {
        let z0 = z0 as usize;
        for t in 0..llr.len() / 2 {
            let z = rep_1d(t, z0);
            let zp = z ^ z0;
            let s = dec.sign(t);
            cumu[z] += s * llr[zp];
            cumu[zp] += s * llr[z];
        }
    }
    let v = decoded.len() as f64;
    for c in &mut cumu {
        *c /= v;
    }
    cumu
}

fn check_ambient(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(())
}

/// Outcome of one top-level decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeReport {
    pub word: BitWord,
    /// Iterations run at the top level.
    pub iterations: usize,
    /// Whether the top level stopped at a fixed point before the cap.
    pub converged: bool,
}

/// An RPA decoder for one RM(m, r) with precomputed voting sets.
#[derive(Debug, Clone)]
pub struct RpaDecoder {
    m: u32,
    r: u32,
    n_max: usize,
    theta: f64,
    parallel: bool,
    // voting set (list of z0) for a call at dimension m', indexed by m'
    levels: Vec<Vec<u32>>,
}

impl RpaDecoder {
    pub fn new(m: u32, r: u32, cfg: &DecoderConfig) -> Result<Self> {
        if r == 0 || r > m || m > 24 {
            return Err(Error::InvalidOrder {
                m: m as i64,
                r: r as i64,
            });
        }
        cfg.validate()?;
        let mut levels = vec![Vec::new(); m as usize + 1];
        let top_lines = (1usize << m) - 1;
        for (depth, level) in (0..r.saturating_sub(1)).map(|d| (d, m - d)) {
            let lines = (1usize << level) - 1;
            levels[level as usize] = match &cfg.voting_set {
                VotingSet::All => (1..=lines as u32).collect(),
                VotingSet::Explicit(z0s) if depth == 0 => {
                    if z0s.iter().any(|&z| z == 0 || z as usize > lines) {
                        return Err(Error::InvalidConfig("voting set entry outside 1..2^m"));
                    }
                    let mut z = z0s.clone();
                    z.sort_unstable();
                    z.dedup();
                    z
                }
                VotingSet::Explicit(_) => (1..=lines as u32).collect(),
                VotingSet::Random { size, seed } => {
                    let want = if depth == 0 {
                        (*size).min(lines)
                    } else {
                        let scaled = (*size as f64) * lines as f64 / top_lines as f64;
                        (libm::round(scaled) as usize).clamp(1, lines)
                    };
                    let mut rng = seed::rng(seed::derive(
                        *seed,
                        &[seed::stream::VOTING_SET, level as u64],
                    ));
                    let mut z: Vec<u32> = index::sample(&mut rng, lines, want)
                        .into_iter()
                        .map(|i| i as u32 + 1)
                        .collect();
                    z.sort_unstable();
                    z
                }
            };
        }
        Ok(Self {
            m,
            r,
            n_max: cfg.resolved_n_max(m),
            theta: cfg.theta,
            parallel: cfg.parallel_projections,
            levels,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Voting set used by a call at dimension `m`.
    pub fn voting_set(&self, m: u32) -> &[u32] {
        &self.levels[m as usize]
    }

    /// LLR-based decoding; returns the hard decision of the final LLRs.
    pub fn decode(&self, llr: &[f64]) -> Result<BitWord> {
        self.decode_with_report(llr).map(|r| r.word)
    }

    pub fn decode_with_report(&self, llr: &[f64]) -> Result<DecodeReport> {
        let n = 1usize << self.m;
        if llr.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: llr.len(),
            });
        }
        if llr.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("LLRs must be finite"));
        }
        Ok(self.soft(llr.to_vec(), self.m, self.r, self.parallel))
    }

    /// Hard-decision decoding for the BSC. The result need not be a
    /// codeword.
    pub fn decode_bsc(&self, y: &BitWord) -> Result<BitWord> {
        self.decode_bsc_with_report(y).map(|r| r.word)
    }

    pub fn decode_bsc_with_report(&self, y: &BitWord) -> Result<DecodeReport> {
        let n = 1usize << self.m;
        if y.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: y.len(),
            });
        }
        if self.r == 1 {
            let l = LlrWord::from_codeword(y, 1.0);
            return Ok(DecodeReport {
                word: ml_decode_order1(&l, self.m)?,
                iterations: 0,
                converged: true,
            });
        }
        Ok(self.hard(y.clone(), self.m, self.r, self.parallel))
    }

    fn soft(&self, mut llr: Vec<f64>, m: u32, r: u32, parallel: bool) -> DecodeReport {
        if r == 1 {
            let word = ml_decode_order1(&llr, m).expect("length is 2^m");
            return DecodeReport {
                word,
                iterations: 0,
                converged: true,
            };
        }
        let input = llr.clone();
        let z0s = &self.levels[m as usize];
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.n_max {
            iterations += 1;
            let decode_one = |&z0: &u32| -> ProjectionDecode {
                let proj = project_llr_1d(&llr, z0 as usize);
                if r == 2 {
                    first_order_decode(order1_soft_maximizers(&proj), m - 1)
                } else {
                    ProjectionDecode::Word(self.soft(proj, m - 1, r - 1, false).word)
                }
            };
            let decodes = map_lines(z0s, parallel, decode_one);
            let set = ProjectionDecodeSet {
                z0s: z0s.clone(),
                decodes,
            };
            let next = aggregate_llr_unchecked(&llr, &set);
            let theta = self.theta;
            converged = llr.iter().zip(&next).all(|(&old, &new)| {
                if old == 0.0 {
                    new.abs() <= ZERO_LLR_TOL
                } else {
                    (new - old).abs() <= theta * old.abs()
                }
            });
            llr = next;
            if converged {
                break;
            }
        }
        DecodeReport {
            word: decide(&llr, &input),
            iterations,
            converged,
        }
    }

    fn hard(&self, mut y: BitWord, m: u32, r: u32, parallel: bool) -> DecodeReport {
        debug_assert!(r >= 2);
        let z0s = &self.levels[m as usize];
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.n_max {
            iterations += 1;
            let projections: Vec<BitWord> = z0s
                .iter()
                .map(|&z0| project_hard_1d(&y, z0 as usize))
                .collect();
            let decode_one = |i: &usize| -> ProjectionDecode {
                let proj = &projections[*i];
                if r == 2 {
                    first_order_decode(order1_hard_maximizers(proj), m - 1)
                } else {
                    ProjectionDecode::Word(self.hard(proj.clone(), m - 1, r - 1, false).word)
                }
            };
            let idx: Vec<usize> = (0..z0s.len()).collect();
            let decodes = map_lines(&idx, parallel, decode_one);
            let set = ProjectionDecodeSet {
                z0s: z0s.clone(),
                decodes,
            };
            let (next, changes) = aggregate_bsc_unchecked(&y, &projections, &set);
            y = next;
            if changes == 0 {
                converged = true;
                break;
            }
        }
        DecodeReport {
            word: y,
            iterations,
            converged,
        }
    }
}

fn first_order_decode(sols: Vec<(u32, bool)>, m: u32) -> ProjectionDecode {
    if let [(u, u0)] = sols[..] {
        ProjectionDecode::Word(affine_codeword(m, u, u0))
    } else {
        ProjectionDecode::Tied(
            sols.into_iter()
                .map(|(u, u0)| affine_codeword(m, u, u0))
                .collect(),
        )
    }
}

/// `1[L(z) < 0]`, with `L(z) = 0` decided by the sign of `fallback(z)`.
fn decide(llr: &[f64], fallback: &[f64]) -> BitWord {
    BitWord::from_fn(llr.len(), |z| {
        if llr[z] != 0.0 {
            llr[z] < 0.0
        } else {
            fallback[z] < 0.0
        }
    })
}

#[cfg(feature = "std")]
fn map_lines<T, U, F>(items: &[T], parallel: bool, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

#[cfg(not(feature = "std"))]
fn map_lines<T, U, F>(items: &[T], _parallel: bool, f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// LLR-based RPA decoding of RM(m, r).
pub fn rpa_decode(llr: &[f64], m: u32, r: u32, cfg: &DecoderConfig) -> Result<BitWord> {
    RpaDecoder::new(m, r, cfg)?.decode(llr)
}

/// Hard-decision RPA decoding of RM(m, r) over the BSC.
pub fn rpa_decode_bsc(y: &BitWord, m: u32, r: u32, cfg: &DecoderConfig) -> Result<BitWord> {
    RpaDecoder::new(m, r, cfg)?.decode_bsc(y)
}
