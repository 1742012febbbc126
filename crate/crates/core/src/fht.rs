//! Fast Hadamard transform and maximum-likelihood decoding of RM(m, 1).
//!
//! `L̂(u) = Σ_z (-1)^{<u,z>} L(z)`, where `<u,z>` is the parity of `u & z`.
//! For an affine codeword `c(z) = u0 ⊕ <u,z>` the correlation
//! `Σ_z (-1)^{c(z)} L(z)` equals `(-1)^{u0} L̂(u)`, so the ML codeword of the
//! first-order code is read off the largest `|L̂(u)|`.

use alloc::vec::Vec;
use core::ops::{Add, Deref, Sub};

use crate::bits::BitWord;
use crate::error::{Error, Result};

/// Hadamard spectrum `L̂(u)`, indexed by `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSpectrum(Vec<f64>);

impl RealSpectrum {
    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for RealSpectrum {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// In-place butterfly network; stage `i` pairs indices differing in bit `i`.
pub fn fht_in_place<T>(x: &mut [T]) -> Result<()>
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let n = x.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut h = 1;
    while h < n {
        for block in x.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        h *= 2;
    }
    Ok(())
}

pub fn fht(x: &[f64]) -> Result<RealSpectrum> {
    let mut v = x.to_vec();
    fht_in_place(&mut v)?;
    Ok(RealSpectrum(v))
}

/// Evaluation table of `u0 ⊕ <u, z>` over `{0,1}^m`.
pub fn affine_codeword(m: u32, u: u32, u0: bool) -> BitWord {
    BitWord::from_fn(1 << m, |z| ((z as u32 & u).count_ones() & 1 == 1) ^ u0)
}

/// ML decoding of RM(m, 1) from LLRs.
///
/// Ties in `|L̂(u)|` go to the smallest `u`; `L̂(u*) = 0` decodes to `u0 = 0`.
pub fn ml_decode_order1(llr: &[f64], m: u32) -> Result<BitWord> {
    let n = 1usize << m;
    if llr.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: llr.len(),
        });
    }
    let spec = fht(llr)?;
    let (mut best, mut best_abs) = (0usize, f64::NEG_INFINITY);
    for (u, v) in spec.iter().enumerate() {
        if v.abs() > best_abs {
            best = u;
            best_abs = v.abs();
        }
    }
    Ok(affine_codeword(m, best as u32, spec[best] < 0.0))
}

/// All ML solutions of RM(m, 1) for a hard word, as `(u, u0)` pairs in
/// ascending `u`.
///
/// Integer arithmetic keeps the correlations exact, so ties are detected
/// reliably.
pub(crate) fn order1_hard_maximizers(y: &BitWord) -> Vec<(u32, bool)> {
    let mut corr: Vec<i32> = y.iter().map(|b| if b { -1 } else { 1 }).collect();
    fht_in_place(&mut corr).expect("projected word length is a power of two");
    let best = corr.iter().map(|c| c.abs()).max().unwrap_or(0);
    corr.iter()
        .enumerate()
        .filter(|(_, c)| c.abs() == best)
        .map(|(u, &c)| (u as u32, c < 0))
        .collect()
}

/// All ML solutions of RM(m, 1) for real LLRs, as `(u, u0)` pairs in
/// ascending `u`. Only exactly equal `|L̂(u)|` count as ties; when the
/// maximum is zero both values of `u0` are returned.
pub(crate) fn order1_soft_maximizers(llr: &[f64]) -> Vec<(u32, bool)> {
    let mut spec = llr.to_vec();
    fht_in_place(&mut spec).expect("projected word length is a power of two");
    let best = spec.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let mut out = Vec::new();
    for (u, &v) in spec.iter().enumerate() {
        if v.abs() == best {
            if v == 0.0 {
                out.push((u as u32, false));
                out.push((u as u32, true));
            } else {
                out.push((u as u32, v < 0.0));
            }
        }
    }
    out
}
