//! Chase-style list decoding around RPA, and outer-code concatenation.
//!
//! The `t` least reliable coordinates are overwritten with every sign
//! pattern in `{+L_max, -L_max}^t`. Each of the `2^t` modified LLR words is
//! decoded by RPA, then snapped to an RM codeword with Reed's decoder, and
//! the candidate with the largest correlation `Σ_z (-1)^{c(z)} L(z)` against
//! the unmodified LLRs wins. With an outer code, only candidates whose
//! message satisfies the outer parity checks compete.

use alloc::vec::Vec;

use crate::bits::BitWord;
use crate::channel::LlrWord;
use crate::error::{Error, Result};
use crate::rm::RmCode;
use crate::rpa::{DecoderConfig, RpaDecoder};
use crate::seed;

/// Largest supported list exponent.
pub const MAX_LIST_T: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ListConfig {
    /// The list holds `2^t` candidates.
    pub t: u32,
    /// `L_max = l_max_mult · max_z |L(z)|`; 1 or 2.
    pub l_max_mult: f64,
}

impl Default for ListConfig {
    fn default() -> Self {
        Self {
            t: 0,
            l_max_mult: 2.0,
        }
    }
}

impl ListConfig {
    pub fn new(t: u32) -> Self {
        Self {
            t,
            ..Self::default()
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.t > MAX_LIST_T || self.t as usize > n {
            return Err(Error::ListTooLarge { t: self.t, n });
        }
        if self.l_max_mult != 1.0 && self.l_max_mult != 2.0 {
            return Err(Error::InvalidConfig("l_max multiplier must be 1 or 2"));
        }
        Ok(())
    }
}

/// Indices of the `t` smallest `|L(z)|`, ties to the smaller index.
pub fn least_reliable(llr: &[f64], t: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..llr.len()).collect();
    idx.sort_by(|&a, &b| llr[a].abs().total_cmp(&llr[b].abs()).then(a.cmp(&b)));
    idx.truncate(t);
    idx
}

/// The `2^t` modified LLR words. Every least-reliable position is set to
/// magnitude `L_max`; in candidate `j` the `i`-th position keeps the sign
/// of `L` when bit `i` of `j` is clear and takes the opposite sign when it
/// is set (a zero LLR counts as positive). Candidate 0 is the hard decision
/// made reliable.
pub fn chase_candidates(llr: &[f64], cfg: &ListConfig) -> Result<Vec<LlrWord>> {
    cfg.validate(llr.len())?;
    let positions = least_reliable(llr, cfg.t as usize);
    let l_max = cfg.l_max_mult * llr.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok((0..1usize << cfg.t)
        .map(|j| {
            let mut c = llr.to_vec();
            for (i, &z) in positions.iter().enumerate() {
                let keep = if llr[z] < 0.0 { -l_max } else { l_max };
                c[z] = if j >> i & 1 == 1 { -keep } else { keep };
            }
            LlrWord::new(c)
        })
        .collect())
}

/// `Σ_z (-1)^{c(z)} L(z)`, twice the log-likelihood of `c` up to a
/// constant.
pub fn ml_score(candidate: &BitWord, llr: &[f64]) -> f64 {
    assert_eq!(
        candidate.len(),
        llr.len(),
        "candidate / LLR length mismatch"
    );
    llr.iter()
        .enumerate()
        .map(|(z, &l)| if candidate.get(z) { -l } else { l })
        .sum()
}

/// Random high-rate outer code given by a `q × k` parity-check matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterCode {
    k: usize,
    checks: Vec<BitWord>,
    // reduced form with pivots taken from the rightmost columns
    reduced: Vec<(usize, BitWord)>,
}

impl OuterCode {
    /// Parity checks with i.i.d. Bernoulli(1/2) entries, redrawn until they
    /// are independent.
    pub fn random(k: usize, q: usize, seed: u64) -> Result<Self> {
        if q == 0 || q >= k {
            return Err(Error::InvalidConfig("outer code needs 1 <= q < k"));
        }
        let mut rng = seed::rng(seed::derive(seed, &[seed::stream::OUTER_CODE]));
        loop {
            let checks: Vec<BitWord> = (0..q)
                .map(|_| BitWord::from_fn(k, |_| rand::Rng::random::<bool>(&mut rng)))
                .collect();
            let code = Self::from_checks(k, checks)?;
            if code.reduced.len() == q {
                return Ok(code);
            }
        }
    }

    /// An outer code with explicit parity checks (possibly dependent).
    pub fn from_checks(k: usize, checks: Vec<BitWord>) -> Result<Self> {
        if checks.iter().any(|c| c.len() != k) {
            return Err(Error::InvalidConfig("parity check length differs from k"));
        }
        let mut reduced: Vec<(usize, BitWord)> = Vec::new();
        for row in &checks {
            let mut w = row.clone();
            for (p, r) in &reduced {
                if w.get(*p) {
                    w ^= r;
                }
            }
            let Some(pivot) = w.ones_positions().last() else {
                continue;
            };
            for (_, r) in reduced.iter_mut() {
                if r.get(pivot) {
                    *r ^= &w;
                }
            }
            reduced.push((pivot, w));
        }
        Ok(Self { k, checks, reduced })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of parity checks.
    pub fn q(&self) -> usize {
        self.checks.len()
    }

    pub fn checks(&self) -> &[BitWord] {
        &self.checks
    }

    /// Number of free data bits, `k - rank(H)`.
    pub fn data_len(&self) -> usize {
        self.k - self.reduced.len()
    }

    /// `H · info = 0`.
    pub fn contains(&self, info: &BitWord) -> bool {
        info.len() == self.k && self.checks.iter().all(|h| !h.dot(info))
    }

    /// Places `data` on the non-pivot positions in order and solves the
    /// pivot positions so that every check is satisfied.
    pub fn encode(&self, data: &BitWord) -> Result<BitWord> {
        if data.len() != self.data_len() {
            return Err(Error::LengthMismatch {
                expected: self.data_len(),
                got: data.len(),
            });
        }
        let mut info = BitWord::zeros(self.k);
        let mut is_pivot = alloc::vec![false; self.k];
        for (p, _) in &self.reduced {
            is_pivot[*p] = true;
        }
        let free = (0..self.k).filter(|&i| !is_pivot[i]);
        for (bit, pos) in data.iter().zip(free) {
            info.set(pos, bit);
        }
        for (p, row) in &self.reduced {
            // the pivot is still zero, so the dot product only sees free bits
            info.set(*p, row.dot(&info));
        }
        Ok(info)
    }
}

/// A decoded list candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub codeword: BitWord,
    pub message: BitWord,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ListOutcome {
    Decoded(BitWord),
    /// No candidate passed the outer code; carries the all-zero codeword.
    Failure(BitWord),
}

impl ListOutcome {
    pub fn word(&self) -> &BitWord {
        match self {
            Self::Decoded(w) | Self::Failure(w) => w,
        }
    }

    pub fn into_word(self) -> BitWord {
        match self {
            Self::Decoded(w) | Self::Failure(w) => w,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Self::Failure(_))
    }
}

/// List decoder for one code, reusable across calls.
#[derive(Debug, Clone)]
pub struct ListDecoder<'a> {
    code: &'a RmCode,
    rpa: RpaDecoder,
    cfg: ListConfig,
    parallel: bool,
}

impl<'a> ListDecoder<'a> {
    pub fn new(code: &'a RmCode, dcfg: &DecoderConfig, lcfg: ListConfig) -> Result<Self> {
        lcfg.validate(code.n())?;
        let inner = DecoderConfig {
            parallel_projections: false,
            ..dcfg.clone()
        };
        Ok(Self {
            code,
            rpa: RpaDecoder::new(code.m(), code.r(), &inner)?,
            cfg: lcfg,
            parallel: dcfg.parallel_projections,
        })
    }

    /// Every candidate in enumeration order.
    pub fn candidates(&self, llr: &[f64]) -> Result<Vec<Candidate>> {
        if llr.len() != self.code.n() {
            return Err(Error::LengthMismatch {
                expected: self.code.n(),
                got: llr.len(),
            });
        }
        let modified = chase_candidates(llr, &self.cfg)?;
        let run = |c: &LlrWord| -> Result<Candidate> {
            let hard = self.rpa.decode(c)?;
            let (message, codeword) = self.code.reed_decode(&hard)?;
            let score = ml_score(&codeword, llr);
            Ok(Candidate {
                codeword,
                message,
                score,
            })
        };
        map_candidates(&modified, self.parallel, run)
            .into_iter()
            .collect()
    }

    pub fn decode(&self, llr: &[f64]) -> Result<BitWord> {
        let cands = self.candidates(llr)?;
        Ok(best(cands.iter())
            .expect("list is never empty")
            .codeword
            .clone())
    }

    pub fn decode_concat(&self, llr: &[f64], outer: &OuterCode) -> Result<ListOutcome> {
        if outer.k() != self.code.k() {
            return Err(Error::LengthMismatch {
                expected: self.code.k(),
                got: outer.k(),
            });
        }
        let cands = self.candidates(llr)?;
        Ok(
            match best(cands.iter().filter(|c| outer.contains(&c.message))) {
                Some(c) => ListOutcome::Decoded(c.codeword.clone()),
                None => ListOutcome::Failure(BitWord::zeros(self.code.n())),
            },
        )
    }
}

// first maximum in enumeration order
fn best<'c>(cands: impl Iterator<Item = &'c Candidate>) -> Option<&'c Candidate> {
    let mut winner: Option<&Candidate> = None;
    for c in cands {
        if winner.map_or(true, |w| c.score > w.score) {
            winner = Some(c);
        }
    }
    winner
}

#[cfg(feature = "std")]
fn map_candidates<U: Send>(
    items: &[LlrWord],
    parallel: bool,
    f: impl Fn(&LlrWord) -> U + Sync + Send,
) -> Vec<U> {
    use rayon::prelude::*;
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

#[cfg(not(feature = "std"))]
fn map_candidates<U>(items: &[LlrWord], _parallel: bool, f: impl Fn(&LlrWord) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}

/// List-RPA decoding (list size `2^t`).
pub fn rpa_list_decode(
    llr: &[f64],
    code: &RmCode,
    dcfg: &DecoderConfig,
    lcfg: &ListConfig,
) -> Result<BitWord> {
    ListDecoder::new(code, dcfg, *lcfg)?.decode(llr)
}

/// List-RPA decoding restricted to candidates whose message lies in the
/// outer code.
pub fn rpa_list_concat_decode(
    llr: &[f64],
    code: &RmCode,
    dcfg: &DecoderConfig,
    lcfg: &ListConfig,
    outer: &OuterCode,
) -> Result<ListOutcome> {
    ListDecoder::new(code, dcfg, *lcfg)?.decode_concat(llr, outer)
}
