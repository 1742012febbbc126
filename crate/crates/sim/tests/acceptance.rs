//! Acceptance suite. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion does.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rpa_core::channel::{llr, transmit};
use rpa_core::fht::affine_codeword;
use rpa_core::list::ListDecoder;
use rpa_core::rm::project;
use rpa_core::{
    build_code, ml_decode_order1, ml_score, rpa_decode_bsc, BitWord, ChannelModel, DecoderConfig,
    ListConfig, LlrWord, OuterCode, Received, RmCode, RpaDecoder, Subspace,
};
use rpa_sim::report::emit_csv;
use rpa_sim::{
    monotone_within_bands, run_sweep, transition_width, ChannelKind, DecoderKind, SweepSpec,
    TransitionCurve,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_codeword(code: &RmCode, rng: &mut ChaCha8Rng) -> BitWord {
    code.encode(&BitWord::from_fn(code.k(), |_| rng.random()))
        .unwrap()
}

fn noisy_llr(code: &RmCode, ebn0_db: f64, seed: u64) -> LlrWord {
    let ch = ChannelModel::awgn_ebn0_db(ebn0_db, code.rate()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_codeword(code, &mut rng);
    llr(&ch, &transmit(&ch, &c, seed)).unwrap()
}

fn fht_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = 0;
    for m in 3..=5u32 {
        let n = 1usize << m;
        let codebook: Vec<BitWord> = (0..n as u32)
            .flat_map(|u| [affine_codeword(m, u, false), affine_codeword(m, u, true)])
            .collect();
        for _ in 0..1000 {
            let l: Vec<f64> = (0..n).map(|_| rng.random_range(-4.0..4.0)).collect();
            let got = ml_score(&ml_decode_order1(&l, m).unwrap(), &l);
            let best = codebook
                .iter()
                .map(|c| ml_score(c, &l))
                .fold(f64::NEG_INFINITY, f64::max);
            if (got - best).abs() > 1e-9 * best.abs().max(1e-300) {
                failures += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures == 0 && secs < 10.0,
        format!("3000 words, {failures} mismatches, {secs:.2} s"),
    )
}

fn lemma1_projection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut codes: Vec<Vec<Option<RmCode>>> = (0..=7)
        .map(|m| (0..=m).map(|r| build_code(m, r).ok()).collect())
        .collect();
    let mut failures = 0;
    let pairs = 10_000;
    for _ in 0..pairs {
        let s = rng.random_range(1..=2u32);
        let m = rng.random_range(s + 1..=7);
        let r = rng.random_range(s..=m);
        let sub = loop {
            let basis: Vec<u32> = (0..s).map(|_| rng.random_range(1..1u32 << m)).collect();
            if let Ok(sub) = Subspace::new(m, &basis) {
                break sub;
            }
        };
        let code = codes[m as usize][r as usize].as_ref().unwrap();
        let c = random_codeword(code, &mut rng);
        let p = project(&c, &sub).unwrap();
        let quotient = codes[(m - s) as usize][(r - s) as usize]
            .get_or_insert_with(|| build_code((m - s) as i64, (r - s) as i64).unwrap());
        if !quotient.is_codeword(&p).unwrap() {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("{pairs} pairs, {failures} failures"))
}

fn lemma2_invariance() -> Outcome {
    let cfg = DecoderConfig::default();
    let mut failures = 0;
    let mut checked = 0;
    for (m, r) in [(6u32, 2u32), (5, 3)] {
        let code = build_code(m as i64, r as i64).unwrap();
        let dec = RpaDecoder::new(m, r, &cfg).unwrap();
        let list = ListDecoder::new(&code, &cfg, ListConfig::new(3)).unwrap();
        let outer = OuterCode::random(code.k(), 1, 17).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..100 {
            let l = noisy_llr(&code, 2.0, 10_000 + i);
            let c0 = {
                let data = BitWord::from_fn(outer.data_len(), |_| rng.random());
                code.encode(&outer.encode(&data).unwrap()).unwrap()
            };
            let moved = l.with_signs(&c0);

            let a = dec.decode(&l).unwrap();
            let b = dec.decode(&moved).unwrap();
            failures += (&a ^ &b != c0) as usize;

            let a = list.decode(&l).unwrap();
            let b = list.decode(&moved).unwrap();
            failures += (&a ^ &b != c0) as usize;

            let a = list.decode_concat(&l, &outer).unwrap();
            let b = list.decode_concat(&moved, &outer).unwrap();
            let same =
                a.is_failure() == b.is_failure() && (a.is_failure() || a.word() ^ b.word() == c0);
            failures += !same as usize;
            checked += 3;
        }
    }
    outcome(
        failures == 0,
        format!("RM(6,2) and RM(5,3), {checked} decoder pairs (rpa, rpa-list, rpa-list-concat), {failures} failures"),
    )
}

fn prop2_bsc_invariance() -> Outcome {
    let code = build_code(5, 2).unwrap();
    let cfg = DecoderConfig::default();
    let ch = ChannelModel::bsc(0.05).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut failures, mut erring) = (0, 0);
    for e_idx in 0..100 {
        let Received::Hard(e) = transmit(&ch, &BitWord::zeros(code.n()), 40_000 + e_idx) else {
            unreachable!()
        };
        let indicators: Vec<bool> = (0..20)
            .map(|_| {
                let c = random_codeword(&code, &mut rng);
                rpa_decode_bsc(&(&c ^ &e), 5, 2, &cfg).unwrap() != c
            })
            .collect();
        erring += indicators[0] as usize;
        failures += indicators.iter().any(|&x| x != indicators[0]) as usize;
    }
    outcome(
        failures == 0,
        format!(
            "100 error vectors x 20 codewords, {erring} erring vectors, {failures} inconsistent"
        ),
    )
}

fn ml_proximity() -> Outcome {
    let start = Instant::now();
    let code = build_code(4, 2).unwrap();
    let codebook: Vec<BitWord> = (0..1u32 << code.k())
        .map(|msg| {
            code.encode(&BitWord::from_fn(code.k(), |i| msg >> i & 1 == 1))
                .unwrap()
        })
        .collect();
    let ebn0_db = 2.0;
    let ch = ChannelModel::awgn_ebn0_db(ebn0_db, code.rate()).unwrap();
    let list = ListDecoder::new(&code, &DecoderConfig::default(), ListConfig::new(4)).unwrap();
    let trials = 10_000u64;
    let (mut ml_errors, mut list_errors) = (0u64, 0u64);
    for t in 0..trials {
        let l = llr(&ch, &transmit(&ch, &BitWord::zeros(16), 50_000 + t)).unwrap();
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, c) in codebook.iter().enumerate() {
            let s = ml_score(c, &l);
            if s > best.0 {
                best = (s, i);
            }
        }
        ml_errors += !codebook[best.1].is_zero() as u64;
        list_errors += !list.decode(&l).unwrap().is_zero() as u64;
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = (list_errors as f64) <= 1.5 * ml_errors as f64 && ml_errors > 0 && secs < 300.0;
    outcome(
        pass,
        format!(
            "RM(4,2) AWGN Eb/N0 {ebn0_db} dB, {trials} trials: list-RPA t=4 {list_errors} errors, ML {ml_errors} errors, ratio {:.3}, {secs:.1} s",
            list_errors as f64 / ml_errors as f64
        ),
    )
}

fn median_decode_ms(m: u32, r: u32, cfg: &DecoderConfig, reps: u64) -> f64 {
    let code = build_code(m as i64, r as i64).unwrap();
    let dec = RpaDecoder::new(m, r, cfg).unwrap();
    let mut times: Vec<f64> = (0..reps)
        .map(|s| {
            let l = noisy_llr(&code, 0.0, 60_000 + s);
            let t = Instant::now();
            std::hint::black_box(dec.decode(&l).unwrap());
            t.elapsed().as_secs_f64() * 1e3
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[times.len() / 2]
}

fn ratios(r: u32, ms: &[u32], cfg: &DecoderConfig, reps: u64) -> Vec<f64> {
    let t: Vec<f64> = ms
        .iter()
        .map(|&m| median_decode_ms(m, r, cfg, reps))
        .collect();
    t.windows(2).map(|w| w[1] / w[0]).collect()
}

fn complexity_scaling() -> Outcome {
    let fixed = DecoderConfig {
        n_max: Some(1),
        ..DecoderConfig::default()
    };
    let r2 = ratios(2, &[6, 7, 8, 9], &fixed, 21);
    let r3 = ratios(3, &[6, 7], &fixed, 11);
    let pass =
        r2.iter().all(|x| (3.0..=6.0).contains(x)) && r3.iter().all(|x| (6.0..=12.0).contains(x));
    let d2 = ratios(2, &[6, 7, 8, 9], &DecoderConfig::default(), 21);
    let d3 = ratios(3, &[6, 7], &DecoderConfig::default(), 11);
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:.2}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    outcome(
        pass,
        format!(
            "per-iteration ratios RM(m,2) m=6..9 [{}], RM(m,3) m=6..7 [{}]; default n_max (info) [{}] / [{}]",
            fmt(&r2),
            fmt(&r3),
            fmt(&d2),
            fmt(&d3)
        ),
    )
}

fn small_radius_correction() -> Outcome {
    let cfg = DecoderConfig::default();
    let rm42 = build_code(4, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rpa_fail = 0;
    let mut rpa_checked = 0;
    for trial in 0..10 {
        let c = if trial == 0 {
            BitWord::zeros(16)
        } else {
            random_codeword(&rm42, &mut rng)
        };
        for z in 0..16 {
            let mut y = c.clone();
            y.flip(z);
            rpa_fail += (rpa_decode_bsc(&y, 4, 2, &cfg).unwrap() != c) as usize;
            rpa_checked += 1;
        }
    }
    let rm41 = build_code(4, 1).unwrap();
    let c = random_codeword(&rm41, &mut rng);
    let (mut reed_fail, mut reed_checked) = (0, 0);
    for pattern in 0u32..1 << 16 {
        if pattern.count_ones() > 3 {
            continue;
        }
        let y = &c ^ &BitWord::from_fn(16, |i| pattern >> i & 1 == 1);
        reed_fail += (rm41.reed_decode(&y).unwrap().1 != c) as usize;
        reed_checked += 1;
    }
    outcome(
        rpa_fail == 0 && reed_fail == 0,
        format!(
            "RM(4,2) rpa-bsc {rpa_checked} weight-1 patterns, {rpa_fail} failures; RM(4,1) reed {reed_checked} weight<=3 patterns, {reed_fail} failures"
        ),
    )
}

fn harness_determinism() -> Outcome {
    let mut notes = Vec::new();

    let mut spec = SweepSpec::new(
        5,
        2,
        DecoderKind::RpaList,
        ChannelKind::Awgn,
        vec![1.0, 2.0, 3.0],
    );
    spec.trials = 300;
    spec.seed = 99;
    spec.no_timing = true;
    spec.threads = 1;
    let one = emit_csv(&run_sweep(&spec).unwrap());
    spec.threads = 8;
    let eight = emit_csv(&run_sweep(&spec).unwrap());
    let identical = one == eight;
    notes.push(format!("threads 1 vs 8 identical: {identical}"));

    let sweeps = [
        (
            6,
            2,
            DecoderKind::RpaBsc,
            ChannelKind::Bsc,
            vec![0.04, 0.06, 0.08, 0.1, 0.12, 0.14],
        ),
        (
            6,
            2,
            DecoderKind::Rpa,
            ChannelKind::Bsc,
            vec![0.04, 0.06, 0.08, 0.1, 0.12, 0.14],
        ),
        (
            5,
            2,
            DecoderKind::Reed,
            ChannelKind::Bsc,
            vec![0.02, 0.05, 0.08, 0.11],
        ),
        (
            5,
            2,
            DecoderKind::Rpa,
            ChannelKind::Awgn,
            vec![0.0, 1.0, 2.0, 3.0, 4.0],
        ),
        (
            5,
            2,
            DecoderKind::RpaListConcat,
            ChannelKind::Awgn,
            vec![0.0, 1.0, 2.0, 3.0],
        ),
    ];
    let mut monotone = true;
    for (m, r, d, ch, grid) in sweeps {
        let mut spec = SweepSpec::new(m, r, d, ch, grid);
        spec.trials = 1000;
        spec.seed = 5;
        let pts = run_sweep(&spec).unwrap();
        let ok = monotone_within_bands(&pts);
        monotone &= ok;
        let rates: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.3}", p.block_error_rate()))
            .collect();
        notes.push(format!(
            "RM({m},{r}) {d} {ch} monotone={ok} [{}]",
            rates.join(" ")
        ));
    }

    let linear = TransitionCurve::new(&[(0.0, 0.0), (1.0, 1.0)]).unwrap();
    let w = transition_width(&linear, 0.1).unwrap();
    notes.push(format!("linear-curve w(0.1) = {w}"));

    outcome(identical && monotone && w == 0.8, notes.join("; "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 FHT ML oracle equivalence", fht_oracle),
        ("2 projection lands in RM(m-s, r-s)", lemma1_projection),
        (
            "3 codeword-translation invariance (soft, list)",
            lemma2_invariance,
        ),
        (
            "4 BSC error indicator depends only on the error",
            prop2_bsc_invariance,
        ),
        ("5 RM(4,2) list-RPA within 1.5x of ML", ml_proximity),
        ("6 complexity scaling", complexity_scaling),
        (
            "7 exhaustive small-radius correction",
            small_radius_correction,
        ),
        (
            "8 harness determinism and monotonicity",
            harness_determinism,
        ),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let o = run();
        println!(
            "[{}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
