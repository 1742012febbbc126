//! Monte-Carlo error-rate estimation.
//!
//! Every trial sends the all-zero codeword unless asked otherwise. Trial `t`
//! at grid point `g` draws all of its randomness from
//! `trial_seed(master, g, t)`, and per-point totals are sums of per-trial
//! counters, so results do not depend on the number of worker threads.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use rpa_core::channel::{llr, transmit};
use rpa_core::list::ListDecoder;
use rpa_core::seed::{self, stream};
use rpa_core::{
    hard_decide, ml_score, BitWord, ChannelModel, DecoderConfig, ListConfig, LlrWord, OuterCode,
    Received, RmCode, RpaDecoder,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] rpa_core::Error),
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("decoder {decoder} cannot run on a {channel} channel")]
    Incompatible {
        decoder: DecoderKind,
        channel: ChannelKind,
    },
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderKind {
    Reed,
    RpaBsc,
    Rpa,
    RpaList,
    RpaListConcat,
}

impl DecoderKind {
    pub const ALL: [Self; 5] = [
        Self::Reed,
        Self::RpaBsc,
        Self::Rpa,
        Self::RpaList,
        Self::RpaListConcat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Reed => "reed",
            Self::RpaBsc => "rpa-bsc",
            Self::Rpa => "rpa",
            Self::RpaList => "rpa-list",
            Self::RpaListConcat => "rpa-list-concat",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| format!("unknown decoder {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Bsc,
    Awgn,
}

impl ChannelKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Bsc => "bsc",
            Self::Awgn => "awgn",
        }
    }

    /// Whether the error rate rises with the grid parameter.
    pub fn rate_increases_with_param(self) -> bool {
        matches!(self, Self::Bsc)
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bsc" => Ok(Self::Bsc),
            "awgn" => Ok(Self::Awgn),
            _ => Err(format!("unknown channel {s:?}")),
        }
    }
}

/// One sweep over a grid of channel parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub m: u32,
    pub r: u32,
    pub decoder: DecoderKind,
    pub channel: ChannelKind,
    /// Crossover probabilities for BSC, Eb/N0 in dB for AWGN; ascending.
    pub grid: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub dcfg: DecoderConfig,
    pub lcfg: ListConfig,
    /// Parity checks of the outer code (`rpa-list-concat` only).
    pub parities: usize,
    /// Worker threads; 0 uses rayon's default.
    pub threads: usize,
    /// Record `wall_ms = 0` instead of the measured time.
    pub no_timing: bool,
}

impl SweepSpec {
    pub fn new(m: u32, r: u32, decoder: DecoderKind, channel: ChannelKind, grid: Vec<f64>) -> Self {
        Self {
            m,
            r,
            decoder,
            channel,
            grid,
            trials: 1000,
            seed: 0,
            dcfg: DecoderConfig::default(),
            lcfg: ListConfig::new(3),
            parities: 1,
            threads: 1,
            no_timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(HarnessError::InvalidSpec(s.into()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.grid.is_empty() {
            return bad("grid must not be empty");
        }
        if self
            .grid
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return bad("grid must be strictly ascending");
        }
        if self.decoder == DecoderKind::RpaBsc && self.channel != ChannelKind::Bsc {
            return Err(HarnessError::Incompatible {
                decoder: self.decoder,
                channel: self.channel,
            });
        }
        self.dcfg.validate()?;
        if matches!(
            self.decoder,
            DecoderKind::RpaList | DecoderKind::RpaListConcat
        ) {
            self.lcfg.validate(1 << self.m)?;
        }
        for &p in &self.grid {
            self.channel_at(p, 0.5)?;
        }
        Ok(())
    }

    fn channel_at(&self, param: f64, rate: f64) -> Result<ChannelModel> {
        Ok(match self.channel {
            ChannelKind::Bsc => ChannelModel::bsc(param)?,
            ChannelKind::Awgn => ChannelModel::awgn_ebn0_db(param, rate)?,
        })
    }

    /// Code and outer code of this spec. The outer code is seeded from
    /// the master seed alone, so every grid point sees the same code.
    pub fn build(&self) -> Result<Setup> {
        self.validate()?;
        let code = RmCode::new(self.m as i64, self.r as i64)?;
        let outer = match self.decoder {
            DecoderKind::RpaListConcat => Some(OuterCode::random(
                code.k(),
                self.parities,
                seed::derive(self.seed, &[stream::OUTER_CODE]),
            )?),
            _ => None,
        };
        let rpa = match self.decoder {
            DecoderKind::RpaBsc | DecoderKind::Rpa => {
                Some(RpaDecoder::new(self.m, self.r, &self.dcfg)?)
            }
            _ => None,
        };
        Ok(Setup {
            spec: self.clone(),
            code,
            outer,
            rpa,
        })
    }
}

/// Per-point counters; the CSV row of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub m: u32,
    pub r: u32,
    pub decoder: DecoderKind,
    pub channel: ChannelKind,
    pub param: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bit_errors: u64,
    pub failures: u64,
    pub ml_lb_errors: u64,
    pub seed: u64,
    pub wall_ms: f64,
}

impl PointSummary {
    pub fn block_error_rate(&self) -> f64 {
        self.block_errors as f64 / self.trials as f64
    }

    /// Standard error of the block-error rate.
    pub fn std_error(&self) -> f64 {
        let p = self.block_error_rate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn bit_error_rate(&self, n: usize) -> f64 {
        self.bit_errors as f64 / (self.trials as f64 * n as f64)
    }

    /// 95% Wilson interval of the block-error rate.
    pub fn wilson95(&self) -> (f64, f64) {
        wilson_interval(self.block_errors, self.trials, 1.959964)
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Whether the rates of a sweep are monotone in the expected direction up
/// to three combined standard errors, over every pair of points.
pub fn monotone_within_bands(points: &[PointSummary]) -> bool {
    monotonicity_violations(points).is_empty()
}

/// Index pairs `(i, j)`, `i < j` in grid order, that break monotonicity by
/// more than three combined standard errors.
pub fn monotonicity_violations(points: &[PointSummary]) -> Vec<(usize, usize)> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].param.total_cmp(&points[b].param));
    let mut out = Vec::new();
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            let (pi, pj) = (&points[i], &points[j]);
            let drop = if pi.channel.rate_increases_with_param() {
                pi.block_error_rate() - pj.block_error_rate()
            } else {
                pj.block_error_rate() - pi.block_error_rate()
            };
            let band = 3.0 * (pi.std_error().powi(2) + pj.std_error().powi(2)).sqrt();
            if drop > band {
                out.push((i, j));
            }
        }
    }
    out
}

/// What the transmitter sends in each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transmission {
    AllZero,
    /// A fresh uniformly random codeword per trial (of the outer code, for
    /// `rpa-list-concat`).
    RandomCodeword,
}

impl Transmission {
    pub fn name(self) -> &'static str {
        match self {
            Self::AllZero => "zero",
            Self::RandomCodeword => "random",
        }
    }
}

impl FromStr for Transmission {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "zero" => Ok(Self::AllZero),
            "random" => Ok(Self::RandomCodeword),
            _ => Err(format!("unknown transmission {s:?} (zero or random)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct TrialCounts {
    block_errors: u64,
    bit_errors: u64,
    failures: u64,
    ml_lb_errors: u64,
}

impl std::ops::Add for TrialCounts {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            block_errors: self.block_errors + o.block_errors,
            bit_errors: self.bit_errors + o.bit_errors,
            failures: self.failures + o.failures,
            ml_lb_errors: self.ml_lb_errors + o.ml_lb_errors,
        }
    }
}

/// Decoder output of one trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub word: BitWord,
    pub failure: bool,
}

/// Everything a sweep needs that does not change between trials.
#[derive(Debug, Clone)]
pub struct Setup {
    spec: SweepSpec,
    code: RmCode,
    outer: Option<OuterCode>,
    rpa: Option<RpaDecoder>,
}

impl Setup {
    pub fn code(&self) -> &RmCode {
        &self.code
    }

    pub fn outer(&self) -> Option<&OuterCode> {
        self.outer.as_ref()
    }

    /// Information rate used for the Eb/N0 conversion: `k / n`, or
    /// `(k - q) / n` with an outer code.
    pub fn rate(&self) -> f64 {
        let k = self
            .outer
            .as_ref()
            .map_or(self.code.k(), OuterCode::data_len);
        k as f64 / self.code.n() as f64
    }

    pub fn channel(&self, grid_index: usize) -> Result<ChannelModel> {
        self.spec
            .channel_at(self.spec.grid[grid_index], self.rate())
    }

    /// Decodes one channel output.
    pub fn decode(&self, received: &Received, l: &[f64]) -> Result<Decoded> {
        let word = |w| Decoded {
            word: w,
            failure: false,
        };
        let spec = &self.spec;
        Ok(match spec.decoder {
            DecoderKind::Reed => {
                let y = match received {
                    Received::Hard(y) => y.clone(),
                    Received::Soft(_) => hard_decide(l),
                };
                word(self.code.reed_decode(&y)?.1)
            }
            DecoderKind::RpaBsc => {
                let Received::Hard(y) = received else {
                    return Err(HarnessError::Incompatible {
                        decoder: spec.decoder,
                        channel: spec.channel,
                    });
                };
                word(
                    self.rpa
                        .as_ref()
                        .expect("built with the spec")
                        .decode_bsc(y)?,
                )
            }
            DecoderKind::Rpa => word(self.rpa.as_ref().expect("built with the spec").decode(l)?),
            DecoderKind::RpaList => {
                word(ListDecoder::new(&self.code, &spec.dcfg, spec.lcfg)?.decode(l)?)
            }
            DecoderKind::RpaListConcat => {
                let outer = self.outer.as_ref().expect("built with the spec");
                let out =
                    ListDecoder::new(&self.code, &spec.dcfg, spec.lcfg)?.decode_concat(l, outer)?;
                Decoded {
                    failure: out.is_failure(),
                    word: out.into_word(),
                }
            }
        })
    }

    fn random_codeword(&self, trial_seed: u64) -> Result<BitWord> {
        let mut rng = seed::rng(seed::derive(trial_seed, &[stream::CODEWORD]));
        let k = self.code.k();
        let info = match &self.outer {
            Some(outer) => {
                let data = BitWord::from_fn(outer.data_len(), |_| rand::Rng::random(&mut rng));
                outer.encode(&data)?
            }
            None => BitWord::from_fn(k, |_| rand::Rng::random(&mut rng)),
        };
        Ok(self.code.encode(&info)?)
    }

    fn trial(
        &self,
        ch: &ChannelModel,
        grid_index: usize,
        t: u64,
        tx: Transmission,
    ) -> Result<TrialCounts> {
        let ts = seed::trial_seed(self.spec.seed, grid_index as u64, t);
        let c = match tx {
            Transmission::AllZero => BitWord::zeros(self.code.n()),
            Transmission::RandomCodeword => self.random_codeword(ts)?,
        };
        let received = transmit(ch, &c, seed::derive(ts, &[stream::NOISE]));
        let l = llr(ch, &received)?;
        let out = self.decode(&received, &l)?;
        Ok(self.score(&c, &l, &out))
    }

    fn score(&self, c: &BitWord, l: &LlrWord, out: &Decoded) -> TrialCounts {
        let bit_errors = (&out.word ^ c).weight() as u64;
        let block_error = out.failure || bit_errors > 0;
        let ml_lb = block_error
            && !out.failure
            && self.code.is_codeword(&out.word).unwrap_or(false)
            && ml_score(&out.word, l) > ml_score(c, l);
        TrialCounts {
            block_errors: block_error as u64,
            bit_errors,
            failures: out.failure as u64,
            ml_lb_errors: ml_lb as u64,
        }
    }

    fn with_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.spec.threads)
            .build()?;
        Ok(pool.install(f))
    }

    /// Runs every trial of one grid point.
    pub fn run_point_with(&self, grid_index: usize, tx: Transmission) -> Result<PointSummary> {
        let spec = &self.spec;
        let param = *spec.grid.get(grid_index).ok_or_else(|| {
            HarnessError::InvalidSpec(format!("grid index {grid_index} out of range"))
        })?;
        let ch = self.channel(grid_index)?;
        let start = Instant::now();
        let counts = self.with_pool(|| {
            (0..spec.trials)
                .into_par_iter()
                .map(|t| self.trial(&ch, grid_index, t, tx))
                .try_reduce(TrialCounts::default, |a, b| Ok(a + b))
        })??;
        let wall_ms = if spec.no_timing {
            0.0
        } else {
            start.elapsed().as_secs_f64() * 1e3
        };
        Ok(PointSummary {
            m: spec.m,
            r: spec.r,
            decoder: spec.decoder,
            channel: spec.channel,
            param,
            trials: spec.trials,
            block_errors: counts.block_errors,
            bit_errors: counts.bit_errors,
            failures: counts.failures,
            ml_lb_errors: counts.ml_lb_errors,
            seed: spec.seed,
            wall_ms,
        })
    }

    /// Re-runs trials with random codewords and matched noise and compares
    /// each block-error indicator with the all-zero run.
    pub fn invariance_audit(&self, grid_index: usize, trials: u64) -> Result<AuditReport> {
        let ch = self.channel(grid_index)?;
        let results = self.with_pool(|| {
            (0..trials)
                .into_par_iter()
                .map(|t| self.audit_trial(&ch, grid_index, t))
                .collect::<Result<Vec<_>>>()
        })??;
        let mut report = AuditReport {
            trials,
            ..AuditReport::default()
        };
        for (zero_err, moved_err, same_offset) in results {
            report.block_errors += zero_err as u64;
            report.indicator_mismatches += (zero_err != moved_err) as u64;
            report.word_mismatches += !same_offset as u64;
        }
        Ok(report)
    }

    fn audit_trial(
        &self,
        ch: &ChannelModel,
        grid_index: usize,
        t: u64,
    ) -> Result<(bool, bool, bool)> {
        let ts = seed::trial_seed(self.spec.seed, grid_index as u64, t);
        let zero = BitWord::zeros(self.code.n());
        let c0 = self.random_codeword(ts)?;
        let r1 = transmit(ch, &zero, seed::derive(ts, &[stream::NOISE]));
        let r2 = match &r1 {
            Received::Hard(y) => Received::Hard(y ^ &c0),
            Received::Soft(y) => {
                Received::Soft(LlrWord::new(y.clone()).with_signs(&c0).into_inner())
            }
        };
        let (l1, l2) = (llr(ch, &r1)?, llr(ch, &r2)?);
        let (d1, d2) = (self.decode(&r1, &l1)?, self.decode(&r2, &l2)?);
        let e1 = d1.failure || !d1.word.is_zero();
        let e2 = d2.failure || d2.word != c0;
        let same_offset = d1.failure == d2.failure && (d1.failure || &d1.word ^ &d2.word == c0);
        Ok((e1, e2, same_offset))
    }
}

/// Result of [`Setup::invariance_audit`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub trials: u64,
    /// Block errors of the all-zero run.
    pub block_errors: u64,
    /// Trials whose block-error indicator changed.
    pub indicator_mismatches: u64,
    /// Trials where the decoded words do not differ by the codeword.
    pub word_mismatches: u64,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.indicator_mismatches == 0 && self.word_mismatches == 0
    }
}

/// Runs grid point `grid_index` with all-zero transmission.
pub fn run_point(spec: &SweepSpec, grid_index: usize) -> Result<PointSummary> {
    spec.build()?
        .run_point_with(grid_index, Transmission::AllZero)
}

/// Runs every grid point in order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<PointSummary>> {
    let setup = spec.build()?;
    (0..spec.grid.len())
        .map(|g| setup.run_point_with(g, Transmission::AllZero))
        .collect()
}

pub fn invariance_audit(spec: &SweepSpec, grid_index: usize, trials: u64) -> Result<AuditReport> {
    spec.build()?.invariance_audit(grid_index, trials)
}
