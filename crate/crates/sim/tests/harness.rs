use proptest::prelude::*;
use rpa_sim::harness::{HarnessError, Setup};
use rpa_sim::report::{emit_csv, parse_csv, round6};
use rpa_sim::transition::isotonic;
use rpa_sim::{
    invariance_audit, run_point, run_sweep, transition_width, ChannelKind, DecoderKind,
    PointSummary, SweepSpec, TransitionCurve, Transmission,
};

fn spec(m: u32, r: u32, d: DecoderKind, ch: ChannelKind, grid: Vec<f64>, trials: u64) -> SweepSpec {
    let mut s = SweepSpec::new(m, r, d, ch, grid);
    s.trials = trials;
    s.seed = 11;
    s.no_timing = true;
    s
}

#[test]
fn noiseless_limit_has_no_errors() {
    for d in DecoderKind::ALL {
        let p = run_point(&spec(5, 2, d, ChannelKind::Bsc, vec![1e-9], 1000), 0).unwrap();
        assert_eq!(p.block_errors, 0, "{d}");
        assert_eq!(p.bit_errors, 0, "{d}");
    }
}

#[test]
fn same_seed_same_summary() {
    let s = spec(
        5,
        2,
        DecoderKind::RpaList,
        ChannelKind::Awgn,
        vec![1.0, 2.0],
        200,
    );
    assert_eq!(run_sweep(&s).unwrap(), run_sweep(&s).unwrap());
    let mut other = s.clone();
    other.seed = 12;
    assert_ne!(run_sweep(&s).unwrap(), run_sweep(&other).unwrap());
}

#[test]
fn thread_count_does_not_change_results() {
    let mut s = spec(
        6,
        2,
        DecoderKind::Rpa,
        ChannelKind::Bsc,
        vec![0.08, 0.12],
        300,
    );
    s.threads = 1;
    let one = emit_csv(&run_sweep(&s).unwrap());
    for threads in [2, 3, 8] {
        s.threads = threads;
        assert_eq!(emit_csv(&run_sweep(&s).unwrap()), one, "{threads} threads");
    }
}

#[test]
fn a_subset_of_trials_reproduces_in_isolation() {
    let full = spec(
        5,
        2,
        DecoderKind::Rpa,
        ChannelKind::Awgn,
        vec![0.0, 1.0],
        400,
    );
    let mut prefix = full.clone();
    prefix.trials = 150;
    let a = run_point(&full, 1).unwrap();
    let b = run_point(&prefix, 1).unwrap();
    assert!(b.block_errors <= a.block_errors);
    assert_eq!(b.param, 1.0);
}

#[test]
fn counters_are_consistent() {
    for d in DecoderKind::ALL {
        for (ch, grid) in [
            (ChannelKind::Bsc, vec![0.05, 0.1, 0.15]),
            (ChannelKind::Awgn, vec![0.0, 2.0]),
        ] {
            if d == DecoderKind::RpaBsc && ch == ChannelKind::Awgn {
                continue;
            }
            for p in run_sweep(&spec(5, 2, d, ch, grid, 300)).unwrap() {
                assert!(p.ml_lb_errors <= p.block_errors, "{d} {ch}");
                assert!(p.failures <= p.block_errors, "{d} {ch}");
                assert!(p.block_errors <= p.trials);
                assert!(p.bit_errors <= p.trials * 32);
                if d != DecoderKind::RpaListConcat {
                    assert_eq!(p.failures, 0);
                }
            }
        }
    }
}

#[test]
fn concat_reports_failures() {
    let mut s = spec(
        5,
        2,
        DecoderKind::RpaListConcat,
        ChannelKind::Awgn,
        vec![-1.0],
        400,
    );
    s.parities = 2;
    s.lcfg.t = 1;
    let p = run_point(&s, 0).unwrap();
    assert!(p.failures > 0);
    assert!(p.failures <= p.block_errors);
}

#[test]
fn rpa_bsc_needs_a_bsc() {
    let s = spec(5, 2, DecoderKind::RpaBsc, ChannelKind::Awgn, vec![1.0], 10);
    assert!(matches!(
        run_point(&s, 0),
        Err(HarnessError::Incompatible { .. })
    ));
    assert_eq!(
        "random".parse::<Transmission>().unwrap(),
        Transmission::RandomCodeword
    );
    assert!("ones".parse::<Transmission>().is_err());
    let s = spec(5, 2, DecoderKind::Rpa, ChannelKind::Bsc, vec![0.1], 10);
    assert!(run_point(&s, 3).is_err());
}

#[test]
fn audit_passes_for_the_rpa_family() {
    for d in [DecoderKind::RpaBsc, DecoderKind::Rpa] {
        for p in [0.05, 0.08, 0.12] {
            let rep =
                invariance_audit(&spec(5, 2, d, ChannelKind::Bsc, vec![p], 1), 0, 100).unwrap();
            assert!(rep.passed(), "{d} bsc {p} {rep:?}");
        }
    }
    for d in [
        DecoderKind::Rpa,
        DecoderKind::RpaList,
        DecoderKind::RpaListConcat,
    ] {
        let rep =
            invariance_audit(&spec(5, 2, d, ChannelKind::Awgn, vec![1.0], 1), 0, 100).unwrap();
        assert!(rep.passed(), "{d} awgn {rep:?}");
        assert!(rep.block_errors > 0, "{d} awgn audit saw no errors");
    }
}

#[test]
fn reed_ties_favour_the_all_zero_codeword() {
    let rep = invariance_audit(
        &spec(5, 1, DecoderKind::Reed, ChannelKind::Bsc, vec![0.2], 1),
        0,
        200,
    )
    .unwrap();
    assert_eq!(rep.trials, 200);
    assert!(rep.block_errors > 0);
    assert!(rep.indicator_mismatches > 0);
    assert!(!rep.passed());

    let setup = spec(5, 2, DecoderKind::Reed, ChannelKind::Bsc, vec![0.06], 2000)
        .build()
        .unwrap();
    let zero = setup.run_point_with(0, Transmission::AllZero).unwrap();
    let rand = setup
        .run_point_with(0, Transmission::RandomCodeword)
        .unwrap();
    assert!(
        zero.block_errors < rand.block_errors,
        "{} vs {}",
        zero.block_errors,
        rand.block_errors
    );
}

fn chi_square_2x2(a: u64, b: u64, n: u64) -> f64 {
    let total = 2.0 * n as f64;
    let errs = (a + b) as f64;
    let mut stat = 0.0;
    for (obs_err, obs_ok) in [(a as f64, (n - a) as f64), (b as f64, (n - b) as f64)] {
        let e_err = n as f64 * errs / total;
        let e_ok = n as f64 - e_err;
        stat += (obs_err - e_err).powi(2) / e_err + (obs_ok - e_ok).powi(2) / e_ok;
    }
    stat
}

#[test]
fn all_zero_transmission_matches_random_codewords() {
    for (d, ch, grid) in [
        (DecoderKind::Rpa, ChannelKind::Awgn, vec![1.5]),
        (DecoderKind::RpaList, ChannelKind::Awgn, vec![2.0]),
        (DecoderKind::RpaBsc, ChannelKind::Bsc, vec![0.1]),
        (DecoderKind::Rpa, ChannelKind::Bsc, vec![0.1]),
    ] {
        let setup: Setup = spec(5, 2, d, ch, grid, 2000).build().unwrap();
        let zero = setup.run_point_with(0, Transmission::AllZero).unwrap();
        let rand = setup
            .run_point_with(0, Transmission::RandomCodeword)
            .unwrap();
        let stat = chi_square_2x2(zero.block_errors, rand.block_errors, 2000);
        assert!(
            stat < 3.841,
            "{d}: {} vs {} (chi2 {stat})",
            zero.block_errors,
            rand.block_errors
        );
        if ch == ChannelKind::Bsc {
            assert_eq!(zero.block_errors, rand.block_errors);
        }
    }
}

#[test]
fn rpa_bsc_curve_has_positive_width() {
    let grid: Vec<f64> = (3..=16).map(|i| i as f64 * 0.02).collect();
    let pts = run_sweep(&spec(
        6,
        2,
        DecoderKind::RpaBsc,
        ChannelKind::Bsc,
        grid,
        300,
    ))
    .unwrap();
    let curve = TransitionCurve::from_summaries(&pts).unwrap();
    let w = transition_width(&curve, 0.1).unwrap();
    assert!(w > 0.0 && w.is_finite(), "w = {w}");
}

#[test]
fn awgn_curves_are_inverted_on_a_negated_axis() {
    let pts: Vec<PointSummary> = [(0.0, 900), (1.0, 500), (2.0, 100)]
        .iter()
        .map(|&(param, e)| PointSummary {
            m: 4,
            r: 2,
            decoder: DecoderKind::Rpa,
            channel: ChannelKind::Awgn,
            param,
            trials: 1000,
            block_errors: e,
            bit_errors: 0,
            failures: 0,
            ml_lb_errors: 0,
            seed: 0,
            wall_ms: 0.0,
        })
        .collect();
    let curve = TransitionCurve::from_summaries(&pts).unwrap();
    assert_eq!(transition_width(&curve, 0.1).unwrap(), 2.0);
}

fn summary() -> impl Strategy<Value = PointSummary> {
    (
        (1u32..20, 0u32..20, 0usize..5, any::<bool>()),
        (-1e3f64..1e3, 1u64..1_000_000),
        (any::<u64>(), any::<u64>(), any::<u64>(), any::<u64>()),
        (any::<u64>(), 0f64..1e7),
    )
        .prop_map(
            |((m, r, d, bsc), (param, trials), (a, b, c, e), (seed, wall))| PointSummary {
                m,
                r,
                decoder: DecoderKind::ALL[d],
                channel: if bsc {
                    ChannelKind::Bsc
                } else {
                    ChannelKind::Awgn
                },
                param: round6(param),
                trials,
                block_errors: a % (trials + 1),
                bit_errors: b,
                failures: c % (trials + 1),
                ml_lb_errors: e % (trials + 1),
                seed,
                wall_ms: round6(wall),
            },
        )
}

proptest! {
    #[test]
    fn csv_round_trips(points in prop::collection::vec(summary(), 0..6)) {
        let text = emit_csv(&points);
        prop_assert_eq!(text.lines().count(), points.len() + 1);
        prop_assert_eq!(parse_csv(&text).unwrap(), points);
    }

    #[test]
    fn isotonic_fit_is_monotone_and_mean_preserving(v in prop::collection::vec(0.0f64..1.0, 1..30)) {
        let fit = isotonic(&v);
        prop_assert!(fit.windows(2).all(|w| w[0] <= w[1] + 1e-15));
        let (a, b): (f64, f64) = (v.iter().sum(), fit.iter().sum());
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn widths_are_nonnegative(v in prop::collection::vec(0.0f64..1.0, 2..30)) {
        let mut pts: Vec<(f64, f64)> = v.iter().enumerate().map(|(i, &p)| (i as f64, p)).collect();
        pts.push((v.len() as f64, 1.0));
        pts.insert(0, (-1.0, 0.0));
        let curve = TransitionCurve::new(&pts).unwrap();
        prop_assert!(transition_width(&curve, 0.1).unwrap() >= 0.0);
    }
}
