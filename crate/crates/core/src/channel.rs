//! Binary-input memoryless channels and log-likelihood ratios.
//!
//! `L(z) = ln(W(y(z)|0) / W(y(z)|1))`: positive values favour bit 0. The
//! AWGN channel uses BPSK with `0 -> +1`, `1 -> -1`.

use alloc::vec::Vec;
use core::ops::Deref;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::bits::BitWord;
use crate::error::{Error, Result};
use crate::seed;

/// Largest LLR magnitude that is ever produced.
pub const LLR_CLAMP: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    /// Binary symmetric channel with crossover probability `p ∈ (0, 0.5)`.
    Bsc { p: f64 },
    /// BPSK over additive white Gaussian noise with standard deviation `sigma`.
    Awgn { sigma: f64 },
}

impl ChannelModel {
    pub fn bsc(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 0.5) {
            return Err(Error::InvalidChannel("BSC crossover must lie in (0, 0.5)"));
        }
        Ok(Self::Bsc { p })
    }

    pub fn awgn(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidChannel(
                "AWGN sigma must be positive and finite",
            ));
        }
        Ok(Self::Awgn { sigma })
    }

    /// AWGN channel at `Eb/N0` (dB) for a code of rate `rate`:
    /// `sigma² = 1 / (2 · rate · 10^(EbN0/10))`.
    pub fn awgn_ebn0_db(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) || !ebn0_db.is_finite() {
            return Err(Error::InvalidChannel(
                "Eb/N0 needs a finite value and a rate in (0, 1]",
            ));
        }
        let ebn0 = libm::pow(10.0, ebn0_db / 10.0);
        Self::awgn(libm::sqrt(1.0 / (2.0 * rate * ebn0)))
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::Bsc { p } => Self::bsc(p).map(drop),
            Self::Awgn { sigma } => Self::awgn(sigma).map(drop),
        }
    }
}

/// A channel output word.
#[derive(Debug, Clone, PartialEq)]
pub enum Received {
    Hard(BitWord),
    Soft(Vec<f64>),
}

impl Received {
    pub fn len(&self) -> usize {
        match self {
            Self::Hard(w) => w.len(),
            Self::Soft(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A vector of per-coordinate log-likelihood ratios.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LlrWord(Vec<f64>);

impl LlrWord {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    /// `(-1)^{c(z)} · magnitude` at every coordinate.
    pub fn from_codeword(codeword: &BitWord, magnitude: f64) -> Self {
        Self(
            codeword
                .iter()
                .map(|b| if b { -magnitude } else { magnitude })
                .collect(),
        )
    }

    /// Coordinatewise `(-1)^{c(z)} · L(z)`.
    pub fn with_signs(&self, c: &BitWord) -> Self {
        assert_eq!(self.0.len(), c.len(), "LLR / codeword length mismatch");
        Self(
            self.0
                .iter()
                .zip(c.iter())
                .map(|(&l, b)| if b { -l } else { l })
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for LlrWord {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for LlrWord {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Sends `codeword` through `ch`; the noise is a pure function of `seed`.
pub fn transmit(ch: &ChannelModel, codeword: &BitWord, seed: u64) -> Received {
    let mut rng = seed::rng(seed);
    match *ch {
        ChannelModel::Bsc { p } => {
            let mut out = codeword.clone();
            for i in 0..out.len() {
                if rng.random::<f64>() < p {
                    out.flip(i);
                }
            }
            Received::Hard(out)
        }
        ChannelModel::Awgn { sigma } => Received::Soft(
            codeword
                .iter()
                .map(|b| {
                    let x = if b { -1.0 } else { 1.0 };
                    let g: f64 = rng.sample(StandardNormal);
                    x + sigma * g
                })
                .collect(),
        ),
    }
}

/// Per-symbol LLRs of a received word, clamped to `±LLR_CLAMP`.
pub fn llr(ch: &ChannelModel, received: &Received) -> Result<LlrWord> {
    ch.validate()?;
    match (ch, received) {
        (ChannelModel::Bsc { p }, Received::Hard(y)) => {
            let mag = libm::log((1.0 - p) / p).min(LLR_CLAMP);
            Ok(LlrWord::from_codeword(y, mag))
        }
        (ChannelModel::Awgn { sigma }, Received::Soft(y)) => {
            let scale = 2.0 / (sigma * sigma);
            Ok(LlrWord(
                y.iter()
                    .map(|&v| (scale * v).clamp(-LLR_CLAMP, LLR_CLAMP))
                    .collect(),
            ))
        }
        _ => Err(Error::AlphabetMismatch),
    }
}

/// Bit `z` is 1 iff `L(z) < 0`; zero decides to 0.
pub fn hard_decide(llr: &[f64]) -> BitWord {
    BitWord::from_fn(llr.len(), |i| llr[i] < 0.0)
}
