//! CSV emission and parsing of sweep results.
//!
//! Columns: `m,r,decoder,channel,param,trials,block_errors,bit_errors,
//! failures,ml_lb_errors,seed,wall_ms`. Floating columns are rounded to six
//! significant digits and written in shortest form. Lines starting with
//! `#` are comments.

use crate::harness::PointSummary;

pub const CSV_HEADER: [&str; 12] = [
    "m",
    "r",
    "decoder",
    "channel",
    "param",
    "trials",
    "block_errors",
    "bit_errors",
    "failures",
    "ml_lb_errors",
    "seed",
    "wall_ms",
];

/// Channel-parameter convention, written as a comment above CLI output.
pub const PARAM_CONVENTION: &str = "# param: bsc = crossover probability p; \
awgn = Eb/N0 in dB with BPSK (0 -> +1, 1 -> -1), sigma^2 = 1/(2 R Eb/N0), \
R = k/n or (k - parities)/n for rpa-list-concat";

/// `x` rounded to six significant digits.
pub fn round6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

fn fmt6(x: f64) -> String {
    format!("{}", round6(x))
}

pub fn emit_csv(points: &[PointSummary]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("writing to memory");
    for p in points {
        w.write_record([
            p.m.to_string(),
            p.r.to_string(),
            p.decoder.to_string(),
            p.channel.to_string(),
            fmt6(p.param),
            p.trials.to_string(),
            p.block_errors.to_string(),
            p.bit_errors.to_string(),
            p.failures.to_string(),
            p.ml_lb_errors.to_string(),
            p.seed.to_string(),
            fmt6(p.wall_ms),
        ])
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV is UTF-8")
}

/// `emit_csv` preceded by the parameter-convention comment.
pub fn emit_csv_with_comment(points: &[PointSummary]) -> String {
    format!("{PARAM_CONVENTION}\n{}", emit_csv(points))
}

pub fn parse_csv(text: &str) -> Result<Vec<PointSummary>, csv::Error> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
        .deserialize()
        .collect()
}
