//! Transition width `w(δ) = P_e⁻¹(1-δ) - P_e⁻¹(δ)` of an error-rate curve.
//!
//! The estimated curve is first made nondecreasing by isotonic regression
//! (pool-adjacent-violators), then inverted by linear interpolation. Each
//! level maps to its leftmost crossing. AWGN curves fall with Eb/N0, so
//! their axis is negated on construction; widths come out in dB.

use crate::harness::{ChannelKind, PointSummary};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WidthError {
    #[error("a curve needs at least one point")]
    Empty,
    #[error("non-finite curve point ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("error rate {0} outside [0, 1]")]
    RateOutOfRange(f64),
    #[error("delta must lie in (0, 0.5), got {0}")]
    InvalidDelta(f64),
    #[error("the curve never reaches level {level} (fitted range [{lo}, {hi}])")]
    LevelOutOfRange { level: f64, lo: f64, hi: f64 },
    #[error("summaries mix different sweeps")]
    MixedSweeps,
}

/// Points `(ε, P_e(ε))` sorted by `ε`, with the isotonic fit.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionCurve {
    eps: Vec<f64>,
    raw: Vec<f64>,
    fitted: Vec<f64>,
}

impl TransitionCurve {
    /// Points may come in any order; equal `ε` keep their given order, so a
    /// vertical jump can be written as two points at the same `ε`.
    pub fn new(points: &[(f64, f64)]) -> Result<Self, WidthError> {
        if points.is_empty() {
            return Err(WidthError::Empty);
        }
        for &(e, p) in points {
            if !e.is_finite() || !p.is_finite() {
                return Err(WidthError::NonFinite(e, p));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(WidthError::RateOutOfRange(p));
            }
        }
        let mut sorted = points.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (eps, raw): (Vec<f64>, Vec<f64>) = sorted.into_iter().unzip();
        let fitted = isotonic(&raw);
        Ok(Self { eps, raw, fitted })
    }

    /// Block-error rates of one sweep. AWGN points are placed at `-Eb/N0`.
    pub fn from_summaries(points: &[PointSummary]) -> Result<Self, WidthError> {
        let first = points.first().ok_or(WidthError::Empty)?;
        let same = |p: &PointSummary| {
            (p.m, p.r, p.decoder, p.channel) == (first.m, first.r, first.decoder, first.channel)
        };
        if !points.iter().all(same) {
            return Err(WidthError::MixedSweeps);
        }
        let sign = match first.channel {
            ChannelKind::Bsc => 1.0,
            ChannelKind::Awgn => -1.0,
        };
        let pts: Vec<(f64, f64)> = points
            .iter()
            .map(|p| (sign * p.param, p.block_error_rate()))
            .collect();
        Self::new(&pts)
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    /// Nondecreasing least-squares fit of the raw rates.
    pub fn fitted(&self) -> &[f64] {
        &self.fitted
    }

    /// Leftmost `ε` where the interpolated fit reaches `level`.
    pub fn inverse(&self, level: f64) -> Result<f64, WidthError> {
        let f = &self.fitted;
        let out_of_range = || WidthError::LevelOutOfRange {
            level,
            lo: f[0],
            hi: f[f.len() - 1],
        };
        let i = f
            .iter()
            .position(|&v| v >= level)
            .ok_or_else(out_of_range)?;
        if f[i] == level {
            return Ok(self.eps[i]);
        }
        if i == 0 {
            return Err(out_of_range());
        }
        let (e0, e1, f0, f1) = (self.eps[i - 1], self.eps[i], f[i - 1], f[i]);
        Ok(e0 + (level - f0) / (f1 - f0) * (e1 - e0))
    }
}

/// Pool-adjacent-violators with unit weights.
pub fn isotonic(values: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (b, nb) = blocks[blocks.len() - 1];
            let (a, na) = blocks[blocks.len() - 2];
            if a <= b {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            blocks.push(((a * na as f64 + b * nb as f64) / (na + nb) as f64, na + nb));
        }
    }
    blocks
        .into_iter()
        .flat_map(|(v, n)| std::iter::repeat(v).take(n))
        .collect()
}

pub fn transition_width(curve: &TransitionCurve, delta: f64) -> Result<f64, WidthError> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(WidthError::InvalidDelta(delta));
    }
    Ok(curve.inverse(1.0 - delta)? - curve.inverse(delta)?)
}
