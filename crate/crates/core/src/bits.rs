//! Packed binary words.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{BitXor, BitXorAssign};

const LIMB_BITS: usize = 64;

/// A binary vector packed into 64-bit limbs.
///
/// Bit `i` lives in limb `i / 64` at position `i % 64`. Bits past `len` in
/// the last limb are always zero, so limb-wise equality and popcount are
/// exact.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitWord {
    len: usize,
    limbs: Vec<u64>,
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            limbs: vec![0; len.div_ceil(LIMB_BITS)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self {
            len,
            limbs: vec![u64::MAX; len.div_ceil(LIMB_BITS)],
        };
        w.clear_tail();
        w
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut w = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                w.limbs[i / LIMB_BITS] |= 1 << (i % LIMB_BITS);
            }
        }
        w
    }

    /// Builds a word from 0/1 values; any nonzero entry counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        Self::from_fn(bits.len(), |i| bits[i] != 0)
    }

    /// Builds a word from raw limbs, masking anything past `len`.
    pub fn from_limbs(len: usize, mut limbs: Vec<u64>) -> Self {
        limbs.resize(len.div_ceil(LIMB_BITS), 0);
        let mut w = Self { len, limbs };
        w.clear_tail();
        w
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.limbs[i / LIMB_BITS] >> (i % LIMB_BITS)) & 1 == 1
    }

    #[inline]
    pub fn bit(&self, i: usize) -> u8 {
        self.get(i) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % LIMB_BITS);
        if value {
            self.limbs[i / LIMB_BITS] |= mask;
        } else {
            self.limbs[i / LIMB_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.limbs[i / LIMB_BITS] ^= 1 << (i % LIMB_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// Parity of the bitwise AND with `other`.
    pub fn dot(&self, other: &BitWord) -> bool {
        assert_eq!(self.len, other.len, "BitWord length mismatch");
        self.limbs
            .iter()
            .zip(&other.limbs)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the set bits, ascending.
    pub fn ones_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.limbs.iter().enumerate().flat_map(|(li, &limb)| {
            let mut rest = limb;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(li * LIMB_BITS + tz)
            })
        })
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Little-endian byte packing: bit `i` is bit `i % 8` of byte `i / 8`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(nbytes);
        for b in 0..nbytes {
            out.push((self.limbs[b / 8] >> ((b % 8) * 8)) as u8);
        }
        out
    }

    /// Inverse of [`BitWord::to_bytes`]; bits past `len` must be zero.
    pub fn from_bytes(len: usize, bytes: &[u8]) -> Option<Self> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        let mut limbs = vec![0u64; len.div_ceil(LIMB_BITS)];
        for (b, &byte) in bytes.iter().enumerate() {
            limbs[b / 8] |= (byte as u64) << ((b % 8) * 8);
        }
        let w = Self { len, limbs };
        let mut masked = w.clone();
        masked.clear_tail();
        (masked == w).then_some(w)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % LIMB_BITS;
        if rem != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl BitXorAssign<&BitWord> for BitWord {
    fn bitxor_assign(&mut self, rhs: &BitWord) {
        assert_eq!(self.len, rhs.len, "BitWord length mismatch");
        for (a, b) in self.limbs.iter_mut().zip(&rhs.limbs) {
            *a ^= b;
        }
    }
}

impl BitXor for &BitWord {
    type Output = BitWord;

    fn bitxor(self, rhs: &BitWord) -> BitWord {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({})", self)
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}
