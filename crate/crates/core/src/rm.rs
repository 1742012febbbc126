//! Reed-Muller codes RM(m, r).
//!
//! A codeword is the evaluation table of an `m`-variate polynomial over F_2
//! of degree at most `r`. The generator basis is the set of monomials
//! `Z_A = Π_{i∈A} Z_i` with `|A| <= r`, ordered by degree and then
//! lexicographically on the sorted index list of `A`. Monomials are stored as
//! bitmasks: variable `Z_i` is bit `i - 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitWord;
use crate::error::{Error, Result};

const MAX_M: u32 = 30;

/// Dimension `Σ_{i=0}^{r} C(m, i)` of RM(m, r).
pub fn rm_dimension(m: i64, r: i64) -> Result<usize> {
    validate(m, r)?;
    let (m, r) = (m as u64, r as u64);
    let mut binom = 1u64;
    let mut total = 1u64;
    for i in 1..=r {
        binom = binom * (m - i + 1) / i;
        total += binom;
    }
    Ok(total as usize)
}

fn validate(m: i64, r: i64) -> Result<()> {
    if m < 0 || r < 0 || r > m || m > MAX_M as i64 {
        return Err(Error::InvalidOrder { m, r });
    }
    Ok(())
}

/// Monomial masks of degree `<= r` in generator order.
fn monomials(m: u32, r: u32) -> Vec<u32> {
    let mut out = Vec::new();
    for d in 0..=r {
        // lexicographic combinations of {0..m-1} of size d
        let mut idx: Vec<u32> = (0..d).collect();
        loop {
            out.push(idx.iter().fold(0u32, |acc, &i| acc | (1 << i)));
            let mut pos = d as usize;
            let mut advanced = false;
            while pos > 0 {
                pos -= 1;
                if idx[pos] < m - d + pos as u32 {
                    idx[pos] += 1;
                    for j in pos + 1..d as usize {
                        idx[j] = idx[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    out
}

/// Evaluation of the monomial `mask` at every point of `{0,1}^m`.
pub fn monomial_row(m: u32, mask: u32) -> BitWord {
    BitWord::from_fn(1usize << m, |z| (z as u32) & mask == mask)
}

/// The code RM(m, r) with its monomial generator basis.
#[derive(Debug, Clone)]
pub struct RmCode {
    m: u32,
    r: u32,
    monomials: Vec<u32>,
    rows: Vec<BitWord>,
    // reduced row echelon form: (pivot column, row); each pivot column is
    // set in exactly one row
    echelon: Vec<(usize, BitWord)>,
}

/// Builds RM(m, r).
pub fn build_code(m: i64, r: i64) -> Result<RmCode> {
    RmCode::new(m, r)
}

impl RmCode {
    pub fn new(m: i64, r: i64) -> Result<Self> {
        validate(m, r)?;
        let (m, r) = (m as u32, r as u32);
        let monomials = monomials(m, r);
        let rows: Vec<BitWord> = monomials.iter().map(|&a| monomial_row(m, a)).collect();
        let echelon = reduce(&rows);
        debug_assert_eq!(echelon.len(), rows.len());
        Ok(Self {
            m,
            r,
            monomials,
            rows,
            echelon,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Block length `2^m`.
    pub fn n(&self) -> usize {
        1 << self.m
    }

    /// Dimension.
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn min_distance(&self) -> usize {
        1 << (self.m - self.r)
    }

    /// Code rate `k / n`.
    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    /// Monomial masks, aligned with message positions.
    pub fn monomials(&self) -> &[u32] {
        &self.monomials
    }

    /// Generator rows, aligned with [`RmCode::monomials`].
    pub fn rows(&self) -> &[BitWord] {
        &self.rows
    }

    /// Message position of the monomial `mask`, if it belongs to the basis.
    pub fn position_of(&self, mask: u32) -> Option<usize> {
        self.monomials.iter().position(|&a| a == mask)
    }

    /// `Σ_A u(A) v_m(A)` over F_2.
    pub fn encode(&self, message: &BitWord) -> Result<BitWord> {
        if message.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                got: message.len(),
            });
        }
        let mut cw = BitWord::zeros(self.n());
        for j in message.ones_positions() {
            cw ^= &self.rows[j];
        }
        Ok(cw)
    }

    pub fn is_codeword(&self, word: &BitWord) -> Result<bool> {
        self.check_len(word)?;
        let mut w = word.clone();
        for (pivot, row) in &self.echelon {
            if w.get(*pivot) {
                w ^= row;
            }
        }
        Ok(w.is_zero())
    }

    /// Reed's majority-logic decoder.
    ///
    /// Coefficients are recovered from the highest degree down. For `|A| = d`
    /// every coset of `span{e_i : i ∈ A}` sums the current residual to
    /// `u(A)` when the residual is a codeword of degree `<= d`, so `u(A)` is
    /// the majority of those `2^(m-d)` sums (an even split decodes to 0).
    /// Returns the message and its re-encoding.
    pub fn reed_decode(&self, word: &BitWord) -> Result<(BitWord, BitWord)> {
        self.check_len(word)?;
        let n = self.n();
        let mut residual = word.clone();
        let mut message = BitWord::zeros(self.k());
        for d in (0..=self.r).rev() {
            let mut layer = BitWord::zeros(n);
            for (j, &mask) in self.monomials.iter().enumerate() {
                if mask.count_ones() != d {
                    continue;
                }
                let cosets = 1usize << (self.m - d);
                let mut ones = 0usize;
                for base in 0..n as u32 {
                    if base & mask != 0 {
                        continue;
                    }
                    // walk every subset of `mask`
                    let mut sum = false;
                    let mut sub = 0u32;
                    loop {
                        sum ^= residual.get((base | sub) as usize);
                        sub = sub.wrapping_sub(mask) & mask;
                        if sub == 0 {
                            break;
                        }
                    }
                    ones += sum as usize;
                }
                if 2 * ones > cosets {
                    message.set(j, true);
                    layer ^= &self.rows[j];
                }
            }
            residual ^= &layer;
        }
        let codeword = self.encode(&message)?;
        Ok((message, codeword))
    }

    fn check_len(&self, word: &BitWord) -> Result<()> {
        if word.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: word.len(),
            });
        }
        Ok(())
    }
}

fn reduce(rows: &[BitWord]) -> Vec<(usize, BitWord)> {
    let mut echelon: Vec<(usize, BitWord)> = Vec::with_capacity(rows.len());
    for row in rows {
        let mut w = row.clone();
        for (pivot, r) in &echelon {
            if w.get(*pivot) {
                w ^= r;
            }
        }
        let Some(pivot) = w.ones_positions().next() else {
            continue;
        };
        for (_, r) in echelon.iter_mut() {
            if r.get(pivot) {
                *r ^= &w;
            }
        }
        echelon.push((pivot, w));
    }
    echelon
}

/// An `s`-dimensional subspace `B` of `F_2^m` with its coset table.
///
/// Cosets are numbered by the rank of their minimum element. The minimum
/// element of `z + B` is the unique member with zeros on the pivot bits of
/// the reduced basis, and the coset number is that member with the pivot
/// bits squeezed out. This numbering is an F_2-linear map with kernel `B`,
/// so projected codewords land in the standard coordinates of
/// RM(m - s, r - s).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    m: u32,
    basis: Vec<u32>,
    reduced: Vec<u32>,
    pivot_mask: u32,
    coset_table: Vec<u32>,
}

impl Subspace {
    pub fn new(m: u32, basis: &[u32]) -> Result<Self> {
        if m == 0 || m > 24 {
            return Err(Error::InvalidSubspace(
                "ambient dimension must be in 1..=24",
            ));
        }
        if basis.is_empty() || basis.len() > m as usize {
            return Err(Error::InvalidSubspace("dimension must be in 1..=m"));
        }
        let full = (1u64 << m) as u32;
        let mut reduced: Vec<u32> = Vec::new();
        for &b in basis {
            if b == 0 || b >= full {
                return Err(Error::InvalidSubspace("basis vector out of range or zero"));
            }
            let mut v = b;
            for &r in &reduced {
                let lead = 31 - r.leading_zeros();
                if v >> lead & 1 == 1 {
                    v ^= r;
                }
            }
            if v == 0 {
                return Err(Error::InvalidSubspace(
                    "basis vectors are linearly dependent",
                ));
            }
            let lead = 31 - v.leading_zeros();
            for r in reduced.iter_mut() {
                if *r >> lead & 1 == 1 {
                    *r ^= v;
                }
            }
            reduced.push(v);
        }
        let pivot_mask = reduced
            .iter()
            .fold(0u32, |acc, &r| acc | 1 << (31 - r.leading_zeros()));
        let mut sub = Self {
            m,
            basis: basis.to_vec(),
            reduced,
            pivot_mask,
            coset_table: Vec::new(),
        };
        sub.coset_table = (0..1u32 << m).map(|z| sub.compute_coset(z)).collect();
        Ok(sub)
    }

    /// The one-dimensional subspace `{0, z0}`.
    pub fn one_dim(m: u32, z0: u32) -> Result<Self> {
        Self::new(m, &[z0])
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn num_cosets(&self) -> usize {
        1 << (self.m - self.dim())
    }

    /// Coset number of `z`, in `[0, 2^(m-s))`.
    #[inline]
    pub fn coset_of(&self, z: u32) -> u32 {
        self.coset_table[z as usize]
    }

    pub fn coset_table(&self) -> &[u32] {
        &self.coset_table
    }

    /// Minimum element of the coset numbered `t`.
    pub fn representative(&self, t: u32) -> u32 {
        let free = !self.pivot_mask & low_mask(self.m);
        deposit(t, free)
    }

    /// All members of the subspace, ascending.
    pub fn elements(&self) -> Vec<u32> {
        let mut out = vec![0u32];
        for &b in &self.reduced {
            let more: Vec<u32> = out.iter().map(|&e| e ^ b).collect();
            out.extend(more);
        }
        out.sort_unstable();
        out
    }

    fn compute_coset(&self, z: u32) -> u32 {
        let mut rep = z;
        for &r in &self.reduced {
            let lead = 31 - r.leading_zeros();
            if rep >> lead & 1 == 1 {
                rep ^= r;
            }
        }
        extract(rep, !self.pivot_mask & low_mask(self.m))
    }
}

#[inline]
fn low_mask(m: u32) -> u32 {
    ((1u64 << m) - 1) as u32
}

// software pext: gather the bits of `x` selected by `mask` into the low bits
fn extract(x: u32, mask: u32) -> u32 {
    let (mut out, mut bit, mut m) = (0u32, 0u32, mask);
    while m != 0 {
        let low = m & m.wrapping_neg();
        if x & low != 0 {
            out |= 1 << bit;
        }
        bit += 1;
        m &= m - 1;
    }
    out
}

// software pdep: scatter the low bits of `x` into the positions of `mask`
fn deposit(x: u32, mask: u32) -> u32 {
    let (mut out, mut bit, mut m) = (0u32, 0u32, mask);
    while m != 0 {
        let low = m & m.wrapping_neg();
        if x >> bit & 1 == 1 {
            out |= low;
        }
        bit += 1;
        m &= m - 1;
    }
    out
}

/// The `2^m - 1` one-dimensional subspaces `{0, z0}`, ordered by `z0`.
pub fn enumerate_1d_subspaces(m: u32) -> Vec<Subspace> {
    (1..1u32 << m)
        .map(|z0| Subspace::one_dim(m, z0).expect("nonzero z0 spans a line"))
        .collect()
}

/// Coset projection: coordinate `T` of the result is `⊕_{z∈T} word(z)`.
pub fn project(word: &BitWord, sub: &Subspace) -> Result<BitWord> {
    let n = 1usize << sub.m();
    if word.len() != n {
        let got = word.len();
        return Err(if got.is_power_of_two() {
            Error::DimensionMismatch {
                subspace: sub.m(),
                word: got.trailing_zeros(),
            }
        } else {
            Error::LengthMismatch { expected: n, got }
        });
    }
    let mut out = BitWord::zeros(sub.num_cosets());
    for z in word.ones_positions() {
        out.flip(sub.coset_of(z as u32) as usize);
    }
    Ok(out)
}

/// Coset number of `z` under `{0, z0}`: drop the highest set bit of `z0`
/// after moving `z` to the member with that bit clear.
#[inline]
pub(crate) fn coset_1d(z: usize, z0: usize) -> usize {
    let h = usize::BITS - 1 - z0.leading_zeros();
    let rep = if z >> h & 1 == 1 { z ^ z0 } else { z };
    (rep & ((1 << h) - 1)) | ((rep >> (h + 1)) << h)
}

/// Minimum element of coset `t` under `{0, z0}`.
#[inline]
pub(crate) fn rep_1d(t: usize, z0: usize) -> usize {
    let h = usize::BITS - 1 - z0.leading_zeros();
    (t & ((1 << h) - 1)) | ((t >> h) << (h + 1))
}
