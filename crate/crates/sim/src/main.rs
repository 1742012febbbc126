use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rpa_core::channel::llr;
use rpa_core::{BitWord, DecoderConfig, ListConfig, Received, RmCode, VotingSet};
use rpa_sim::harness::{monotonicity_violations, Setup};
use rpa_sim::io::{llr_from_text, word_from_hex, word_to_hex};
use rpa_sim::report::{emit_csv_with_comment, parse_csv};
use rpa_sim::transition::{transition_width, TransitionCurve};
use rpa_sim::{ChannelKind, DecoderKind, PointSummary, SweepSpec, Transmission};

#[derive(Parser)]
#[command(
    name = "rpa",
    version,
    about = "Reed-Muller codes and recursive projection-aggregation decoding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a message of k bits into an RM(m, r) codeword.
    Encode(EncodeArgs),
    /// Decode one received word.
    Decode(DecodeArgs),
    /// Estimate error rates at a single channel parameter.
    Simulate(SimArgs),
    /// Estimate error rates over a grid of channel parameters.
    Sweep(SimArgs),
    /// Transition width of a sweep stored as CSV.
    Width(WidthArgs),
    /// Check that decoding errors do not depend on the transmitted codeword.
    InvarianceAudit(AuditArgs),
}

#[derive(Args, Clone)]
struct CodeArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    r: u32,
}

#[derive(Args, Clone)]
struct DecoderArgs {
    #[arg(long, default_value = "rpa")]
    decoder: DecoderKind,
    /// RPA iteration cap (default ceil(m/2)).
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long, default_value_t = rpa_core::rpa::DEFAULT_THETA)]
    theta: f64,
    /// List size exponent: 2^t candidates.
    #[arg(long, default_value_t = 3)]
    list_t: u32,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    lmax_mult: u8,
    /// Parity checks of the outer code for rpa-list-concat.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    parities: u8,
    /// Use this many randomly chosen lines instead of all 2^m - 1.
    #[arg(long)]
    voting_set_size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl DecoderArgs {
    fn dcfg(&self) -> DecoderConfig {
        DecoderConfig {
            n_max: self.nmax,
            theta: self.theta,
            voting_set: match self.voting_set_size {
                Some(size) => VotingSet::Random {
                    size,
                    seed: self.seed,
                },
                None => VotingSet::All,
            },
            parallel_projections: false,
        }
    }

    fn lcfg(&self) -> ListConfig {
        ListConfig {
            t: self.list_t,
            l_max_mult: self.lmax_mult as f64,
        }
    }
}

#[derive(Args, Clone)]
struct ChannelArgs {
    #[arg(long, default_value = "bsc")]
    channel: ChannelKind,
    /// BSC crossover probabilities, comma-separated.
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    /// AWGN Eb/N0 values in dB, comma-separated.
    #[arg(long = "ebn0-db", value_delimiter = ',', allow_negative_numbers = true)]
    ebn0_db: Vec<f64>,
}

impl ChannelArgs {
    fn grid(&self) -> Result<Vec<f64>> {
        let (grid, other, flag) = match self.channel {
            ChannelKind::Bsc => (&self.p, &self.ebn0_db, "--p"),
            ChannelKind::Awgn => (&self.ebn0_db, &self.p, "--ebn0-db"),
        };
        if !other.is_empty() {
            bail!("only {flag} applies to a {} channel", self.channel);
        }
        if grid.is_empty() {
            bail!("{flag} is required for a {} channel", self.channel);
        }
        Ok(grid.clone())
    }
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Message as LSB-first hex.
    #[arg(long, conflicts_with_all = ["input", "random"])]
    message: Option<String>,
    /// File holding the hex message (stdin when absent).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Draw a uniformly random message from --seed.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Hex word for BSC, one LLR per line for AWGN (stdin when absent).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Write wall_ms = 0 so that runs are byte-comparable.
    #[arg(long)]
    no_timing: bool,
    /// Transmit the all-zero codeword or a fresh random codeword per trial.
    #[arg(long, default_value = "zero")]
    transmit: Transmission,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WidthArgs {
    /// CSV written by `sweep`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn spec(code: &CodeArgs, dec: &DecoderArgs, ch: &ChannelArgs) -> Result<SweepSpec> {
    let mut spec = SweepSpec::new(code.m, code.r, dec.decoder, ch.channel, ch.grid()?);
    spec.seed = dec.seed;
    spec.dcfg = dec.dcfg();
    spec.lcfg = dec.lcfg();
    spec.parities = dec.parities as usize;
    Ok(spec)
}

fn read_input(path: Option<&PathBuf>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn encode(args: EncodeArgs) -> Result<ExitCode> {
    let code = RmCode::new(args.code.m as i64, args.code.r as i64)?;
    let msg = if args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        BitWord::from_fn(code.k(), |_| rng.random())
    } else {
        let text = match &args.message {
            Some(m) => m.clone(),
            None => read_input(args.input.as_ref())?,
        };
        word_from_hex(&text, code.k())?
    };
    write_output(
        args.out.as_ref(),
        &format!("{}\n", word_to_hex(&code.encode(&msg)?)),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn decode(args: DecodeArgs) -> Result<ExitCode> {
    let mut spec = spec(&args.code, &args.decoder, &args.channel)?;
    if spec.grid.len() != 1 {
        bail!("decode takes a single channel parameter");
    }
    spec.trials = 1;
    let setup = spec.build()?;
    let n = setup.code().n();
    let text = read_input(args.input.as_ref())?;
    let received = match spec.channel {
        ChannelKind::Bsc => Received::Hard(word_from_hex(&text, n)?),
        ChannelKind::Awgn => {
            let l = llr_from_text(&text)?;
            if l.len() != n {
                bail!("expected {n} LLR values, found {}", l.len());
            }
            Received::Soft(l)
        }
    };
    let l = match &received {
        Received::Hard(_) => llr(&setup.channel(0)?, &received)?,
        Received::Soft(v) => v.clone().into(),
    };
    let out = setup.decode(&received, &l)?;
    write_output(args.out.as_ref(), &format!("{}\n", word_to_hex(&out.word)))?;
    if out.failure {
        eprintln!("FAILURE: no list candidate satisfies the outer code");
    }
    Ok(ExitCode::SUCCESS)
}

fn describe(p: &PointSummary) -> String {
    let (lo, hi) = p.wilson95();
    format!(
        "{} {}={:<8} P_e={:.4e} [{:.3e}, {:.3e}] errors={} ml_lb={} failures={} {:.0} ms",
        p.decoder,
        match p.channel {
            ChannelKind::Bsc => "p",
            ChannelKind::Awgn => "EbN0",
        },
        p.param,
        p.block_error_rate(),
        lo,
        hi,
        p.block_errors,
        p.ml_lb_errors,
        p.failures,
        p.wall_ms,
    )
}

fn simulate(args: SimArgs, single: bool) -> Result<ExitCode> {
    let mut spec = spec(&args.code, &args.decoder, &args.channel)?;
    if single && spec.grid.len() != 1 {
        bail!("simulate takes a single channel parameter; use sweep for a grid");
    }
    spec.trials = args.trials;
    spec.threads = args.threads;
    spec.no_timing = args.no_timing;
    let setup: Setup = spec.build()?;
    let mut points = Vec::with_capacity(spec.grid.len());
    for g in 0..spec.grid.len() {
        let p = setup.run_point_with(g, args.transmit)?;
        eprintln!("{}", describe(&p));
        points.push(p);
    }
    let mut text = emit_csv_with_comment(&points);
    if args.transmit == Transmission::RandomCodeword {
        text.insert_str(0, "# transmission: a random codeword per trial\n");
    }
    write_output(args.out.as_ref(), &text)?;
    if !single {
        for (i, j) in monotonicity_violations(&points) {
            eprintln!(
                "warning: P_e at {} and {} breaks monotonicity by more than 3 standard errors",
                points[i].param, points[j].param
            );
        }
        match TransitionCurve::from_summaries(&points).and_then(|c| transition_width(&c, 0.1)) {
            Ok(w) => eprintln!("w(0.1) = {w}"),
            Err(e) => eprintln!("w(0.1) unavailable: {e}"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn width(args: WidthArgs) -> Result<ExitCode> {
    let points = parse_csv(&fs::read_to_string(&args.input)?)?;
    let curve = TransitionCurve::from_summaries(&points)?;
    println!("{}", transition_width(&curve, args.delta)?);
    Ok(ExitCode::SUCCESS)
}

fn audit(args: AuditArgs) -> Result<ExitCode> {
    let mut spec = spec(&args.code, &args.decoder, &args.channel)?;
    spec.threads = args.threads;
    let setup = spec.build()?;
    let mut ok = true;
    for (g, param) in spec.grid.iter().enumerate() {
        let rep = setup.invariance_audit(g, args.trials)?;
        println!(
            "{} {} {param}: trials={} block_errors={} indicator_mismatches={} word_mismatches={}",
            spec.decoder,
            spec.channel,
            rep.trials,
            rep.block_errors,
            rep.indicator_mismatches,
            rep.word_mismatches
        );
        ok &= rep.passed();
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a),
        Command::Simulate(a) => simulate(a, true),
        Command::Sweep(a) => simulate(a, false),
        Command::Width(a) => width(a),
        Command::InvarianceAudit(a) => audit(a),
    }
}
