//! Reed-Muller codes and their recursive projection-aggregation (RPA) decoders.
//!
//! The crate is `no_std` + `alloc`. The default `std` feature only adds
//! rayon-backed concurrent decoding of projections and list candidates;
//! results are bit-identical with and without it.
//!
//! Coordinates of a length-`2^m` word are indexed by `z ∈ {0,1}^m`, stored
//! as the integer `Σ z_i 2^(i-1)` (so `z_1` is the least significant bit).
//! Every module follows this convention.
//!
//! Modules:
//! - [`rm`]: code construction, encoding, membership, coset projection and
//!   Reed's majority-logic decoder.
//! - [`channel`]: BSC and BPSK-AWGN channels, LLRs, hard decisions.
//! - [`fht`]: fast Hadamard transform and first-order ML decoding.
//! - [`rpa`]: the hard-decision and LLR-based RPA decoders.
//! - [`list`]: Chase-style list decoding and outer-code concatenation.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bits;
pub mod channel;
mod error;
pub mod fht;
pub mod list;
pub mod rm;
pub mod rpa;
pub mod seed;

pub use bits::BitWord;
pub use channel::{hard_decide, ChannelModel, LlrWord, Received};
pub use error::{Error, Result};
pub use fht::{fht, ml_decode_order1, RealSpectrum};
pub use list::{
    chase_candidates, ml_score, rpa_list_concat_decode, rpa_list_decode, ListConfig, ListOutcome,
    OuterCode,
};
pub use rm::{build_code, rm_dimension, RmCode, Subspace};
pub use rpa::{rpa_decode, rpa_decode_bsc, DecoderConfig, RpaDecoder, VotingSet};
