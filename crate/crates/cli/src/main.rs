//! Command-line front end for the reconstruction toolkit: exact
//! channel-count bounds, error-ball enumeration, seeded channel
//! simulation, the decoders, code constructions, the verification
//! suites, and probability experiments.
//!
//! Exit codes: 0 on success, 1 on bad input or unusable parameters,
//! 2 when an internal cross-check trips or a verification suite
//! reports failures. Runs with the same flags and seed print the
//! same bytes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use reconlab_core::balls::{
    enumerate_ball, intersection_size, reconstruction_list, within_ball, BallSpec, CodeRef,
};
use reconlab_core::bounds::{
    ball_volume, binary_list_caps, channels_unique, constant_list_bounds, era_sub_channels,
    erasure_list_size, list_thresholds, majority_thresholds, ReconParams, SpaceKind,
};
use reconlab_core::channels::{transmit, ErrorModel, OutputBatch};
use reconlab_core::codebook::{adversarial_code, code_to_string, constant_weight_code, parse_code};
use reconlab_core::decoders::{
    algorithm1_decode, algorithm2_list_decode, erasure_resolve, insertion_pair_decode,
    DecodeOutcome, DecodeStatus, MajorityDecodeRun,
};
use reconlab_core::exec::ExecMode;
use reconlab_core::probelab::{
    deletion_q_invariance, insertion_qsweep, substitution_pin_prob, unique_recovery_prob,
    worked_example_p_prime, EstimateMode, ProbEstimate,
};
use reconlab_core::verify::{run_all, run_suite, SuiteOpts, SuiteReport};
use reconlab_core::word::Word;
use reconlab_core::{Caps, Error, Result};

#[derive(Parser)]
#[command(
    name = "reconlab",
    version,
    about = "Bounds, error balls, channel simulation, decoders and verification for q-ary sequence reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Base seed for anything randomized.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for the parallel paths; 1 forces sequential.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,

    /// Override every enumeration cap (RECONLAB_CAP does the same).
    #[arg(long, global = true)]
    cap: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form channel counts and decoding thresholds.
    Bounds(BoundsArgs),
    /// Enumerate the error ball around a word.
    Ball(BallArgs),
    /// Exact size and contents of an intersection of error balls.
    Intersect(IntersectArgs),
    /// Draw seeded channel outputs for a word.
    Simulate(SimulateArgs),
    /// Run a decoder over a saved output batch.
    Decode(DecodeArgs),
    /// Inspect or construct codes.
    Code {
        #[command(subcommand)]
        cmd: CodeCmd,
    },
    /// Run the self-checking verification suites.
    Verify(VerifyArgs),
    /// Probability experiments with seeded sampling.
    Experiment {
        #[command(subcommand)]
        cmd: ExperimentCmd,
    },
}

#[derive(Args)]
struct BoundsArgs {
    /// Word length.
    #[arg(long)]
    n: u64,
    /// Alphabet size.
    #[arg(long)]
    q: u32,
    /// Errors the code corrects.
    #[arg(long, default_value_t = 0)]
    e: u64,
    /// Total errors per channel; t - e of them exceed the code radius.
    #[arg(long)]
    t: u64,
    /// List offset for the binary list bounds.
    #[arg(long)]
    a: Option<u64>,
    /// Slack for the binary list channel count, a rational like 1 or 1/2.
    #[arg(long)]
    eps: Option<String>,
    /// Cap on codewords per radius e+a ball in the binary list bounds.
    #[arg(long)]
    m: Option<u64>,
    /// Erasure budget for the erasure-substitution channel count.
    #[arg(long)]
    te: Option<u64>,
    /// Substitution budget for the erasure-substitution channel count.
    #[arg(long)]
    ts: Option<u64>,
    /// Code distance for the erasure-substitution channel count.
    #[arg(long)]
    d: Option<u64>,
    /// Channel count to bracket for the erasure list-size bound.
    #[arg(long)]
    erasure_outputs: Option<u64>,
    /// Measure the erasure list bound over codes of this minimum distance.
    #[arg(long)]
    erasure_min_dist: Option<u64>,
}

#[derive(Args)]
struct BallArgs {
    /// Alphabet size.
    #[arg(long)]
    q: u32,
    /// Center word.
    #[arg(long)]
    center: String,
    /// substitution, erasure, erasure-substitution, deletion or insertion.
    #[arg(long)]
    model: String,
    /// Model budgets, comma separated; erasure-substitution takes two.
    #[arg(long, value_delimiter = ',', required = true)]
    budgets: Vec<u64>,
}

#[derive(Args)]
struct IntersectArgs {
    /// Alphabet size.
    #[arg(long)]
    q: u32,
    /// Ball centers; repeat the flag once per center.
    #[arg(long = "center", required = true)]
    centers: Vec<String>,
    /// substitution, erasure, erasure-substitution, deletion or insertion.
    #[arg(long)]
    model: String,
    /// Model budgets, comma separated; erasure-substitution takes two.
    #[arg(long, value_delimiter = ',', required = true)]
    budgets: Vec<u64>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Alphabet size.
    #[arg(long)]
    q: u32,
    /// Transmitted word.
    #[arg(long)]
    x: String,
    /// substitution, erasure, erasure-substitution, deletion or insertion.
    #[arg(long)]
    model: String,
    /// Model budgets, comma separated; erasure-substitution takes two.
    #[arg(long, value_delimiter = ',', required = true)]
    budgets: Vec<u64>,
    /// How many channel outputs to draw.
    #[arg(long)]
    n_outputs: u64,
    /// Sample with repetition instead of distinct outputs.
    #[arg(long)]
    multiset: bool,
    /// Also write the batch as JSON to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Alg {
    Majority,
    List,
    Erasure,
    InsertionPair,
    Brute,
}

#[derive(Args)]
struct DecodeArgs {
    /// Decoder to run.
    #[arg(long, value_enum)]
    alg: Alg,
    /// Output batch JSON file, as written by simulate.
    #[arg(long)]
    batch: PathBuf,
    /// Code file; majority and list decoding require one.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Errors the code corrects (majority and list decoding).
    #[arg(long)]
    e: Option<u64>,
    /// Total errors per channel (majority and list decoding).
    #[arg(long)]
    t: Option<u64>,
    /// List offset (list decoding).
    #[arg(long, default_value_t = 0)]
    a: u64,
    /// Channel-count slack, a rational (list decoding).
    #[arg(long, default_value = "1")]
    eps: String,
    /// Cap on codewords per radius e+a ball (list decoding).
    #[arg(long)]
    m: Option<u64>,
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Validate a code file and report its parameters.
    Check(CodeCheckArgs),
    /// Build the blockwise constant-weight code.
    MakeCw(MakeCwArgs),
    /// Build the code whose outputs keep the decoder list maximal.
    MakeAdversarial(MakeAdversarialArgs),
}

#[derive(Args)]
struct CodeCheckArgs {
    /// Code file: a "q n" header line, then one word per line.
    #[arg(long)]
    file: PathBuf,
}

#[derive(Args)]
struct MakeCwArgs {
    /// Word length.
    #[arg(long)]
    n: u64,
    /// Errors the code must correct.
    #[arg(long)]
    e: u64,
    /// Alphabet size.
    #[arg(long)]
    q: u32,
    /// Write the code file here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MakeAdversarialArgs {
    /// Errors the code corrects.
    #[arg(long)]
    e: u64,
    /// Errors per channel beyond the correction radius.
    #[arg(long)]
    ell: u64,
    /// Alphabet size.
    #[arg(long)]
    q: u32,
    /// Write the code file here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the confusing output batch as JSON here.
    #[arg(long)]
    batch_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run; omit to run all of them.
    #[arg(long)]
    suite: Option<String>,
    /// Largest word length the suite grids sweep.
    #[arg(long, default_value_t = 4)]
    max_n: u64,
    /// Largest alphabet size the suite grids sweep.
    #[arg(long, default_value_t = 3)]
    max_q: u32,
    /// Monte Carlo trials per randomized check.
    #[arg(long, default_value_t = 200)]
    trials: u64,
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Exact two-length recovery probability against its closed form.
    Pprime(PprimeArgs),
    /// Insertion recovery rates as the alphabet grows.
    InsertionSweep(InsertionSweepArgs),
    /// Probability that every read hides the same coordinates.
    PinProb(PinProbArgs),
    /// The same seeded trials at two alphabet sizes.
    QInvariance(QInvarianceArgs),
    /// Unique-recovery probability for one channel setting.
    Recovery(RecoveryArgs),
}

#[derive(Args)]
struct PprimeArgs {
    /// Alphabet sizes to evaluate.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2u32, 3, 4, 8, 16])]
    q_list: Vec<u32>,
    /// Monte Carlo trials per point on top of the exact sweep; 0 skips.
    #[arg(long, default_value_t = 0)]
    trials: u64,
}

#[derive(Args)]
struct InsertionSweepArgs {
    /// Word length; the transmitted word is 0 1 ... n-1.
    #[arg(long, default_value_t = 4)]
    n: u64,
    /// Insertions per channel.
    #[arg(long, default_value_t = 2)]
    t: u64,
    /// Channel outputs per trial.
    #[arg(long, default_value_t = 2)]
    n_outputs: u64,
    /// Alphabet sizes to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![8u32, 16, 32, 64, 128, 256])]
    q_list: Vec<u32>,
    /// Trials per alphabet size.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
}

#[derive(Args)]
struct PinProbArgs {
    /// Word length.
    #[arg(long)]
    n: u64,
    /// Substitutions per channel.
    #[arg(long)]
    t: u64,
    /// Channel outputs.
    #[arg(long)]
    n_outputs: u64,
}

#[derive(Args)]
struct QInvarianceArgs {
    /// Alphabet size of the transmitted word.
    #[arg(long)]
    q: u32,
    /// Transmitted word.
    #[arg(long)]
    x: String,
    /// Larger alphabet to repeat the trials over.
    #[arg(long)]
    q_prime: u32,
    /// deletion or erasure.
    #[arg(long, default_value = "deletion")]
    model: String,
    /// Model budgets, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    budgets: Vec<u64>,
    /// Channel outputs per trial.
    #[arg(long, default_value_t = 2)]
    n_outputs: u64,
    /// Seeded trials.
    #[arg(long, default_value_t = 200)]
    trials: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    MonteCarlo,
}

#[derive(Args)]
struct RecoveryArgs {
    /// Alphabet size.
    #[arg(long)]
    q: u32,
    /// Transmitted word.
    #[arg(long)]
    x: String,
    /// substitution, erasure, erasure-substitution, deletion or insertion.
    #[arg(long)]
    model: String,
    /// Model budgets, comma separated; erasure-substitution takes two.
    #[arg(long, value_delimiter = ',', required = true)]
    budgets: Vec<u64>,
    /// Channel outputs per trial.
    #[arg(long)]
    n_outputs: u64,
    /// Trials for the Monte Carlo mode.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Exact sweeps every output set; monte-carlo samples.
    #[arg(long, value_enum, default_value_t = Mode::MonteCarlo)]
    mode: Mode,
    /// Restrict transmitted words to this code file.
    #[arg(long)]
    code: Option<PathBuf>,
}

struct Ctx {
    seed: u64,
    caps: Caps,
    exec: ExecMode,
}

struct Rendered {
    json: Value,
    text: String,
    csv: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let internal = matches!(err, Error::Internal { .. });
            ExitCode::from(if internal { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut caps = Caps::from_env();
    if let Some(c) = cli.cap {
        caps = Caps {
            ball: c,
            batches: c,
            completions: c,
            code_candidates: c,
        };
    }
    let ctx = Ctx {
        seed: cli.seed,
        caps,
        exec: exec_mode(cli.jobs),
    };
    let (rendered, code) = match &cli.command {
        Command::Bounds(a) => (bounds_cmd(a, &ctx)?, ExitCode::SUCCESS),
        Command::Ball(a) => (ball_cmd(a, &ctx)?, ExitCode::SUCCESS),
        Command::Intersect(a) => (intersect_cmd(a, &ctx)?, ExitCode::SUCCESS),
        Command::Simulate(a) => (simulate_cmd(a, &ctx)?, ExitCode::SUCCESS),
        Command::Decode(a) => (decode_cmd(a, &ctx)?, ExitCode::SUCCESS),
        Command::Code { cmd } => (code_cmd(cmd, &ctx)?, ExitCode::SUCCESS),
        Command::Verify(a) => {
            let (rendered, passed) = verify_cmd(a, &ctx)?;
            let code = if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            };
            (rendered, code)
        }
        Command::Experiment { cmd } => (experiment_cmd(cmd, &ctx)?, ExitCode::SUCCESS),
    };
    emit(cli.format, &rendered);
    Ok(code)
}

fn exec_mode(jobs: Option<u64>) -> ExecMode {
    match jobs {
        Some(1) => ExecMode::Sequential,
        Some(k) => {
            // The global pool is built once; a second build keeps the first size.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k as usize)
                .build_global();
            ExecMode::Parallel
        }
        None => ExecMode::Parallel,
    }
}

fn emit(format: Format, rendered: &Rendered) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&rendered.json).expect("report serializes")
        ),
        Format::Text => writeln!(out, "{}", rendered.text.trim_end()),
        Format::Csv => write!(out, "{}", rendered.csv),
    };
    // A pipe closed downstream is the reader's choice, not a failure.
    if let Err(err) = result {
        if err.kind() != std::io::ErrorKind::BrokenPipe {
            panic!("stdout write failed: {err}");
        }
    }
}

fn csv_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    let mut row = fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",");
    row.push('\n');
    row
}

/// Key-value output for commands whose result is a flat report.
fn kv_rendered(json: Value, pairs: &[(String, String)]) -> Rendered {
    let text = pairs
        .iter()
        .map(|(k, v)| format!("{k} = {v}"))
        .collect::<Vec<_>>()
        .join("\n");
    let mut csv = String::from("key,value\n");
    for (k, v) in pairs {
        csv.push_str(&csv_row(&[k.clone(), v.clone()]));
    }
    Rendered { json, text, csv }
}

fn words_rendered(json: Value, header: Vec<String>, words: &[Word], column: &str) -> Rendered {
    let mut lines = header;
    lines.extend(words.iter().map(Word::to_string));
    let mut csv = format!("{column}\n");
    for w in words {
        csv.push_str(&csv_row(&[w.to_string()]));
    }
    Rendered {
        json,
        text: lines.join("\n"),
        csv,
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|err| Error::ParseInput {
        reason: format!("{}: {err}", path.display()),
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|err| Error::ParseInput {
        reason: format!("{}: {err}", path.display()),
    })
}

fn parse_rational(text: &str) -> Result<BigRational> {
    text.trim()
        .parse::<BigRational>()
        .map_err(|err| Error::ParseInput {
            reason: format!("rational {text:?}: {err}"),
        })
}

fn model_label(model: &ErrorModel) -> String {
    let budgets = model
        .budgets()
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    format!("{}({budgets})", model.kind_name())
}

fn rational_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn estimate_json(est: &ProbEstimate) -> Value {
    json!({
        "p_hat": est.p_hat,
        "trials": est.trials,
        "ci95_halfwidth": est.ci95_halfwidth,
        "exact": est.exact.as_ref().map(BigRational::to_string),
    })
}

fn bounds_cmd(a: &BoundsArgs, ctx: &Ctx) -> Result<Rendered> {
    if a.t <= a.e {
        return Err(Error::InvalidParameter {
            reason: format!("total budget t={} must exceed e={}", a.t, a.e),
        });
    }
    let p = ReconParams::new(a.n, a.q, a.e, a.t - a.e)?;
    let n_te = channels_unique(&p)?;
    let volume = ball_volume(a.n, a.q, a.t);
    let th = majority_thresholds(&p)?;

    let mut obj = Map::new();
    let mut pairs: Vec<(String, String)> = Vec::new();
    let put = |obj: &mut Map<String, Value>,
               pairs: &mut Vec<(String, String)>,
               key: &str,
               value: Value,
               shown: String| {
        obj.insert(key.to_string(), value);
        pairs.push((key.to_string(), shown));
    };
    put(&mut obj, &mut pairs, "n", json!(a.n), a.n.to_string());
    put(&mut obj, &mut pairs, "q", json!(a.q), a.q.to_string());
    put(&mut obj, &mut pairs, "e", json!(a.e), a.e.to_string());
    put(&mut obj, &mut pairs, "ell", json!(p.ell), p.ell.to_string());
    put(&mut obj, &mut pairs, "t", json!(a.t), a.t.to_string());
    put(
        &mut obj,
        &mut pairs,
        "ball_volume",
        json!(volume.to_string()),
        volume.to_string(),
    );
    put(
        &mut obj,
        &mut pairs,
        "N_te",
        json!(n_te.to_string()),
        n_te.to_string(),
    );
    put(
        &mut obj,
        &mut pairs,
        "tau_prime",
        json!(th.tau_prime.to_string()),
        th.tau_prime.to_string(),
    );
    put(
        &mut obj,
        &mut pairs,
        "tau",
        json!(th.tau.to_string()),
        th.tau.to_string(),
    );

    if a.q >= 3 {
        let cl = constant_list_bounds(&p)?;
        obj.insert(
            "constant_list".to_string(),
            json!({
                "threshold": cl.threshold.to_string(),
                "list_cap": cl.list_cap.to_string(),
                "code_lower_bound": cl.lower_bound.to_string(),
            }),
        );
        pairs.push((
            "constant_list.threshold".to_string(),
            cl.threshold.to_string(),
        ));
        pairs.push((
            "constant_list.list_cap".to_string(),
            cl.list_cap.to_string(),
        ));
        pairs.push((
            "constant_list.code_lower_bound".to_string(),
            cl.lower_bound.to_string(),
        ));
    }

    if a.a.is_some() || a.eps.is_some() || a.m.is_some() {
        let mut pl = p.clone().with_list_offset(a.a.unwrap_or(0))?;
        if let Some(eps) = &a.eps {
            pl = pl.with_eps(parse_rational(eps)?)?;
        }
        if let Some(m) = a.m {
            pl = pl.with_list_ball_cap(m)?;
        }
        let lth = list_thresholds(&pl)?;
        let lcaps = binary_list_caps(&pl)?;
        obj.insert(
            "binary_list".to_string(),
            json!({
                "a": pl.a,
                "eps": pl.eps.to_string(),
                "m": pl.list_ball_cap,
                "N_tea": lth.channels.to_string(),
                "tau_prime": lth.tau_prime.to_string(),
                "tau": lth.tau.to_string(),
                "cap_simple": lcaps.cap_simple.to_string(),
                "cap_refined": lcaps.cap_refined.as_ref().map(BigUint::to_string),
                "b": lcaps.b.to_string(),
            }),
        );
        pairs.push(("binary_list.N_tea".to_string(), lth.channels.to_string()));
        pairs.push((
            "binary_list.tau_prime".to_string(),
            lth.tau_prime.to_string(),
        ));
        pairs.push(("binary_list.tau".to_string(), lth.tau.to_string()));
        pairs.push((
            "binary_list.cap_simple".to_string(),
            lcaps.cap_simple.to_string(),
        ));
        pairs.push((
            "binary_list.cap_refined".to_string(),
            lcaps
                .cap_refined
                .as_ref()
                .map_or("inapplicable".to_string(), BigUint::to_string),
        ));
    }

    match (a.te, a.ts, a.d) {
        (Some(te), Some(ts), Some(d)) => {
            let count = era_sub_channels(a.n, a.q, te, ts, d)?;
            obj.insert(
                "era_sub".to_string(),
                json!({
                    "t_e": te,
                    "t_s": ts,
                    "d": d,
                    "N": count.to_string(),
                }),
            );
            pairs.push(("era_sub.N".to_string(), count.to_string()));
        }
        (None, None, None) => {}
        _ => {
            return Err(Error::InvalidParameter {
                reason: "--te, --ts and --d go together".to_string(),
            })
        }
    }

    if let Some(n_outputs) = a.erasure_outputs {
        let kind = match a.erasure_min_dist {
            Some(d) => SpaceKind::MinDist(d),
            None => SpaceKind::FullSpace,
        };
        let bound = erasure_list_size(a.n, a.q, a.t, &BigUint::from(n_outputs), kind, &ctx.caps)?;
        obj.insert(
            "erasure_list".to_string(),
            json!({
                "n_outputs": n_outputs,
                "space": match kind {
                    SpaceKind::FullSpace => "full".to_string(),
                    SpaceKind::MinDist(d) => format!("min-dist {d}"),
                },
                "a": bound.a,
                "list_size": bound.list_size.to_string(),
            }),
        );
        pairs.push(("erasure_list.a".to_string(), bound.a.to_string()));
        pairs.push((
            "erasure_list.list_size".to_string(),
            bound.list_size.to_string(),
        ));
    }

    Ok(kv_rendered(Value::Object(obj), &pairs))
}

fn ball_cmd(a: &BallArgs, ctx: &Ctx) -> Result<Rendered> {
    let center = Word::parse(a.q, &a.center)?;
    let model = ErrorModel::from_parts(&a.model, &a.budgets)?;
    let spec = BallSpec::new(center.clone(), model)?;
    let words = enumerate_ball(&spec, &ctx.caps)?;
    let json = json!({
        "q": a.q,
        "center": center.to_string(),
        "model": model.to_json(),
        "size": words.len(),
        "words": words.iter().map(Word::to_string).collect::<Vec<_>>(),
    });
    let header = vec![
        format!("center = {center}"),
        format!("model = {}", model_label(&model)),
        format!("size = {}", words.len()),
    ];
    Ok(words_rendered(json, header, &words, "word"))
}

fn intersect_cmd(a: &IntersectArgs, ctx: &Ctx) -> Result<Rendered> {
    let model = ErrorModel::from_parts(&a.model, &a.budgets)?;
    let mut specs = Vec::with_capacity(a.centers.len());
    for text in &a.centers {
        specs.push(BallSpec::new(Word::parse(a.q, text)?, model)?);
    }
    let size = intersection_size(&specs, &ctx.caps)?;
    let mut words = enumerate_ball(&specs[0], &ctx.caps)?;
    for spec in &specs[1..] {
        let mut kept = Vec::with_capacity(words.len());
        for w in words {
            if within_ball(spec.center(), &w, spec.model())? {
                kept.push(w);
            }
        }
        words = kept;
    }
    if BigUint::from(words.len() as u64) != size {
        return Err(Error::Internal {
            check: "intersection count",
            detail: format!("enumerated {} words but counted {size}", words.len()),
        });
    }
    let json = json!({
        "q": a.q,
        "model": model.to_json(),
        "centers": specs.iter().map(|s| s.center().to_string()).collect::<Vec<_>>(),
        "size": size.to_string(),
        "words": words.iter().map(Word::to_string).collect::<Vec<_>>(),
    });
    let header = vec![
        format!("model = {}", model_label(&model)),
        format!("centers = {}", a.centers.join(" ")),
        format!("size = {size}"),
    ];
    Ok(words_rendered(json, header, &words, "word"))
}

fn simulate_cmd(a: &SimulateArgs, ctx: &Ctx) -> Result<Rendered> {
    let x = Word::parse(a.q, &a.x)?;
    let model = ErrorModel::from_parts(&a.model, &a.budgets)?;
    let batch = transmit(&x, &model, a.n_outputs, a.multiset, ctx.seed, &ctx.caps)?;
    if let Some(path) = &a.out {
        let mut text = batch.to_json_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        write_file(path, &text)?;
    }
    let header = vec![
        format!("x = {x}"),
        format!("model = {}", model_label(&model)),
        format!("regime = {}", batch.regime.name()),
        format!("outputs = {}", batch.outputs.len()),
    ];
    let json = batch.to_json();
    Ok(words_rendered(json, header, &batch.outputs, "output"))
}

fn status_label(outcome: &DecodeOutcome) -> String {
    match &outcome.status {
        DecodeStatus::Unique => "unique".to_string(),
        DecodeStatus::List => "list".to_string(),
        DecodeStatus::Failure(reason) => format!("failure: {reason}"),
    }
}

fn outcome_rendered(alg: &str, outcome: DecodeOutcome, extra: Option<Value>) -> Rendered {
    let mut obj = Map::new();
    obj.insert("alg".to_string(), json!(alg));
    obj.insert("outcome".to_string(), outcome.to_json());
    let mut header = vec![
        format!("alg = {alg}"),
        format!("status = {}", status_label(&outcome)),
        format!("candidates = {}", outcome.candidates.len()),
    ];
    if let Some(extra) = extra {
        if let Value::Object(map) = &extra {
            for (k, v) in map {
                let shown = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                header.push(format!("{k} = {shown}"));
            }
        }
        obj.insert("majority".to_string(), extra);
    }
    words_rendered(Value::Object(obj), header, &outcome.candidates, "candidate")
}

fn run_rendered(alg: &str, run: MajorityDecodeRun) -> Rendered {
    let unknown: Vec<u64> = run.majority.unknown.iter().map(|&i| i as u64).collect();
    let extra = json!({
        "word": run.majority.word.to_string(),
        "unknown_coordinates": unknown,
        "tau_prime": run.thresholds.tau_prime.to_string(),
        "tau": run.thresholds.tau.to_string(),
        "channels_assumed": run.thresholds.channels.to_string(),
    });
    outcome_rendered(alg, run.outcome, Some(extra))
}

fn decode_cmd(a: &DecodeArgs, ctx: &Ctx) -> Result<Rendered> {
    let batch = OutputBatch::from_json_str(&read_file(&a.batch)?)?;
    let code = match &a.code {
        Some(path) => Some(parse_code(&read_file(path)?)?),
        None => None,
    };
    let code_ref = match &code {
        Some(c) => CodeRef::Explicit(c),
        None => CodeRef::FullSpace,
    };
    let majority_params = |a: &DecodeArgs| -> Result<ReconParams> {
        let e = a.e.ok_or_else(|| Error::InvalidParameter {
            reason: "this decoder needs --e".to_string(),
        })?;
        let t = a.t.ok_or_else(|| Error::InvalidParameter {
            reason: "this decoder needs --t".to_string(),
        })?;
        if t <= e {
            return Err(Error::InvalidParameter {
                reason: format!("total budget t={t} must exceed e={e}"),
            });
        }
        ReconParams::new(batch.n as u64, batch.q, e, t - e)
    };
    match a.alg {
        Alg::Brute => Ok(outcome_rendered(
            "brute",
            reconstruction_list(&batch, code_ref, &ctx.caps)?,
            None,
        )),
        Alg::Erasure => Ok(outcome_rendered(
            "erasure",
            erasure_resolve(&batch, code_ref, &ctx.caps)?,
            None,
        )),
        Alg::InsertionPair => {
            if batch.outputs.len() < 2 {
                return Err(Error::InvalidParameter {
                    reason: "the pair decoder needs at least two outputs".to_string(),
                });
            }
            Ok(outcome_rendered(
                "insertion-pair",
                insertion_pair_decode(&batch.outputs[0], &batch.outputs[1], batch.n)?,
                None,
            ))
        }
        Alg::Majority => {
            let code = code.as_ref().ok_or_else(|| Error::InvalidParameter {
                reason: "majority decoding needs --code".to_string(),
            })?;
            let p = majority_params(a)?;
            Ok(run_rendered(
                "majority",
                algorithm1_decode(&batch, code, &p, &ctx.caps)?,
            ))
        }
        Alg::List => {
            let code = code.as_ref().ok_or_else(|| Error::InvalidParameter {
                reason: "list decoding needs --code".to_string(),
            })?;
            let mut p = majority_params(a)?.with_list_offset(a.a)?;
            p = p.with_eps(parse_rational(&a.eps)?)?;
            if let Some(m) = a.m {
                p = p.with_list_ball_cap(m)?;
            }
            Ok(run_rendered(
                "list",
                algorithm2_list_decode(&batch, code, &p, &ctx.caps)?,
            ))
        }
    }
}

fn code_cmd(cmd: &CodeCmd, ctx: &Ctx) -> Result<Rendered> {
    match cmd {
        CodeCmd::Check(a) => {
            let code = parse_code(&read_file(&a.file)?)?;
            let dist = code.min_distance();
            let radius = code.correction_radius();
            let json = json!({
                "q": code.q(),
                "n": code.n(),
                "size": code.len(),
                "min_distance": dist,
                "correction_radius": radius,
            });
            let show = |v: Option<u64>| v.map_or("undefined".to_string(), |d| d.to_string());
            let pairs = vec![
                ("q".to_string(), code.q().to_string()),
                ("n".to_string(), code.n().to_string()),
                ("size".to_string(), code.len().to_string()),
                ("min_distance".to_string(), show(dist)),
                ("correction_radius".to_string(), show(radius)),
            ];
            Ok(kv_rendered(json, &pairs))
        }
        CodeCmd::MakeCw(a) => {
            let code = constant_weight_code(a.n, a.e, a.q)?;
            let file_text = code_to_string(&code);
            if let Some(path) = &a.out {
                write_file(path, &file_text)?;
            }
            let json = json!({
                "q": code.q(),
                "n": code.n(),
                "e": a.e,
                "size": code.len(),
                "min_distance": code.min_distance(),
                "words": code.words().iter().map(Word::to_string).collect::<Vec<_>>(),
            });
            let mut csv = String::from("word\n");
            for w in code.words() {
                csv.push_str(&csv_row(&[w.to_string()]));
            }
            Ok(Rendered {
                json,
                text: file_text,
                csv,
            })
        }
        CodeCmd::MakeAdversarial(a) => {
            let (code, batch) = adversarial_code(a.e, a.ell, a.q, &ctx.caps)?;
            let file_text = code_to_string(&code);
            if let Some(path) = &a.out {
                write_file(path, &file_text)?;
            }
            if let Some(path) = &a.batch_out {
                let mut text = batch.to_json_string();
                if !text.ends_with('\n') {
                    text.push('\n');
                }
                write_file(path, &text)?;
            }
            let json = json!({
                "q": code.q(),
                "n": code.n(),
                "e": a.e,
                "ell": a.ell,
                "size": code.len(),
                "min_distance": code.min_distance(),
                "words": code.words().iter().map(Word::to_string).collect::<Vec<_>>(),
                "batch": batch.to_json(),
            });
            let mut text = file_text;
            text.push_str("confusing outputs:\n");
            for y in &batch.outputs {
                text.push_str(&y.to_string());
                text.push('\n');
            }
            let mut csv = String::from("word\n");
            for w in code.words() {
                csv.push_str(&csv_row(&[w.to_string()]));
            }
            Ok(Rendered { json, text, csv })
        }
    }
}

fn verify_cmd(a: &VerifyArgs, ctx: &Ctx) -> Result<(Rendered, bool)> {
    let opts = SuiteOpts {
        max_n: a.max_n,
        max_q: a.max_q,
        trials: a.trials,
        seed: ctx.seed,
        exec: ctx.exec,
        caps: ctx.caps,
    };
    let reports: Vec<SuiteReport> = match &a.suite {
        Some(name) => vec![run_suite(name, &opts)?],
        None => run_all(&opts)?,
    };
    let passed = reports.iter().all(SuiteReport::passed);
    let json = json!({
        "passed": passed,
        "suites": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
    });
    let mut lines = Vec::new();
    let mut csv = String::from("suite,check,pass,detail\n");
    let mut failures = 0u64;
    for report in &reports {
        lines.push(format!(
            "{}: {}",
            report.suite,
            if report.passed() { "ok" } else { "FAIL" }
        ));
        for check in &report.checks {
            if !check.pass {
                failures += 1;
                lines.push(format!("  FAIL {}: {}", check.label, check.detail));
            }
            csv.push_str(&csv_row(&[
                report.suite.clone(),
                check.label.clone(),
                check.pass.to_string(),
                check.detail.clone(),
            ]));
        }
    }
    lines.push(if passed {
        "result: all checks passed".to_string()
    } else {
        format!("result: {failures} checks failed")
    });
    Ok((
        Rendered {
            json,
            text: lines.join("\n"),
            csv,
        },
        passed,
    ))
}

fn experiment_cmd(cmd: &ExperimentCmd, ctx: &Ctx) -> Result<Rendered> {
    match cmd {
        ExperimentCmd::Pprime(a) => pprime_cmd(a, ctx),
        ExperimentCmd::InsertionSweep(a) => insertion_sweep_cmd(a, ctx),
        ExperimentCmd::PinProb(a) => pin_prob_cmd(a),
        ExperimentCmd::QInvariance(a) => q_invariance_cmd(a, ctx),
        ExperimentCmd::Recovery(a) => recovery_cmd(a, ctx),
    }
}

fn pprime_cmd(a: &PprimeArgs, ctx: &Ctx) -> Result<Rendered> {
    let model = ErrorModel::Substitution { t: 1 };
    let mut points = Vec::new();
    let mut lines = Vec::new();
    let mut csv = String::from("q,closed,closed_float,exact,matches_closed,mc_p_hat,mc_ci95\n");
    for &q in &a.q_list {
        let closed = worked_example_p_prime(q)?;
        let x = Word::zero(q, 2);
        // The exact sweep walks (2q-1)^3 weighted output sets.
        let feasible = ball_volume(2, q, 1).pow(3) <= BigUint::from(ctx.caps.batches);
        let exact = if feasible {
            let est = unique_recovery_prob(
                &x,
                &model,
                3,
                0,
                ctx.seed,
                EstimateMode::Exact,
                CodeRef::FullSpace,
                &ctx.caps,
                ctx.exec,
            )?;
            Some(est.exact.expect("exact mode carries the rational"))
        } else {
            None
        };
        let matches_closed = exact.as_ref().map(|r| r == &closed);
        let mc = if a.trials > 0 {
            Some(unique_recovery_prob(
                &x,
                &model,
                3,
                a.trials,
                ctx.seed,
                EstimateMode::MonteCarlo,
                CodeRef::FullSpace,
                &ctx.caps,
                ctx.exec,
            )?)
        } else {
            None
        };
        points.push(json!({
            "q": q,
            "closed": closed.to_string(),
            "closed_float": rational_f64(&closed),
            "exact": exact.as_ref().map(BigRational::to_string),
            "matches_closed": matches_closed,
            "mc_p_hat": mc.as_ref().map(|e| e.p_hat),
            "mc_ci95": mc.as_ref().map(|e| e.ci95_halfwidth),
        }));
        let mut line = format!("q={q} closed={closed} ({})", rational_f64(&closed));
        if let Some(m) = matches_closed {
            line.push_str(if m { " exact=match" } else { " exact=MISMATCH" });
        }
        if let Some(est) = &mc {
            line.push_str(&format!(" mc={} ci95={}", est.p_hat, est.ci95_halfwidth));
        }
        lines.push(line);
        csv.push_str(&csv_row(&[
            q.to_string(),
            closed.to_string(),
            rational_f64(&closed).to_string(),
            exact.as_ref().map_or(String::new(), BigRational::to_string),
            matches_closed.map_or(String::new(), |m| m.to_string()),
            mc.as_ref().map_or(String::new(), |e| e.p_hat.to_string()),
            mc.as_ref()
                .map_or(String::new(), |e| e.ci95_halfwidth.to_string()),
        ]));
    }
    let json = json!({
        "experiment": "pprime",
        "n": 2,
        "t": 1,
        "n_outputs": 3,
        "points": points,
    });
    Ok(Rendered {
        json,
        text: lines.join("\n"),
        csv,
    })
}

fn insertion_sweep_cmd(a: &InsertionSweepArgs, ctx: &Ctx) -> Result<Rendered> {
    let points = insertion_qsweep(
        a.n,
        a.t,
        a.n_outputs,
        &a.q_list,
        a.trials,
        ctx.seed,
        &ctx.caps,
        ctx.exec,
    )?;
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    let mut csv =
        String::from("q,unique_p_hat,unique_ci95,pair_p_hat,pair_ci95,pair_wrong,lower_bound\n");
    for point in &points {
        rows.push(json!({
            "q": point.q,
            "unique": estimate_json(&point.unique),
            "pair": estimate_json(&point.pair),
            "pair_wrong": point.pair_wrong,
            "lower_bound": point.lower_bound.to_string(),
            "lower_bound_float": rational_f64(&point.lower_bound),
        }));
        lines.push(format!(
            "q={} unique={} pair={} pair_wrong={} bound={}",
            point.q,
            point.unique.p_hat,
            point.pair.p_hat,
            point.pair_wrong,
            rational_f64(&point.lower_bound),
        ));
        csv.push_str(&csv_row(&[
            point.q.to_string(),
            point.unique.p_hat.to_string(),
            point.unique.ci95_halfwidth.to_string(),
            point.pair.p_hat.to_string(),
            point.pair.ci95_halfwidth.to_string(),
            point.pair_wrong.to_string(),
            rational_f64(&point.lower_bound).to_string(),
        ]));
    }
    let json = json!({
        "experiment": "insertion-sweep",
        "n": a.n,
        "t": a.t,
        "n_outputs": a.n_outputs,
        "trials": a.trials,
        "points": rows,
    });
    Ok(Rendered {
        json,
        text: lines.join("\n"),
        csv,
    })
}

fn pin_prob_cmd(a: &PinProbArgs) -> Result<Rendered> {
    let prob = substitution_pin_prob(a.n, a.t, a.n_outputs)?;
    let json = json!({
        "experiment": "pin-prob",
        "n": a.n,
        "t": a.t,
        "n_outputs": a.n_outputs,
        "probability": prob.to_string(),
        "probability_float": rational_f64(&prob),
    });
    let pairs = vec![
        ("n".to_string(), a.n.to_string()),
        ("t".to_string(), a.t.to_string()),
        ("n_outputs".to_string(), a.n_outputs.to_string()),
        ("probability".to_string(), prob.to_string()),
        (
            "probability_float".to_string(),
            rational_f64(&prob).to_string(),
        ),
    ];
    Ok(kv_rendered(json, &pairs))
}

fn q_invariance_cmd(a: &QInvarianceArgs, ctx: &Ctx) -> Result<Rendered> {
    let x = Word::parse(a.q, &a.x)?;
    let model = ErrorModel::from_parts(&a.model, &a.budgets)?;
    let report = deletion_q_invariance(
        &x,
        a.q_prime,
        &model,
        a.n_outputs,
        a.trials,
        ctx.seed,
        &ctx.caps,
        ctx.exec,
    )?;
    let json = json!({
        "experiment": "q-invariance",
        "q": a.q,
        "q_prime": a.q_prime,
        "x": x.to_string(),
        "model": model.to_json(),
        "n_outputs": a.n_outputs,
        "trials": a.trials,
        "balls_identical": report.balls_identical,
        "agreement": report.agreement,
        "base": estimate_json(&report.base),
        "lifted": estimate_json(&report.lifted),
    });
    let pairs = vec![
        ("q".to_string(), a.q.to_string()),
        ("q_prime".to_string(), a.q_prime.to_string()),
        (
            "balls_identical".to_string(),
            report.balls_identical.to_string(),
        ),
        ("agreement".to_string(), report.agreement.to_string()),
        ("base.p_hat".to_string(), report.base.p_hat.to_string()),
        ("lifted.p_hat".to_string(), report.lifted.p_hat.to_string()),
    ];
    Ok(kv_rendered(json, &pairs))
}

fn recovery_cmd(a: &RecoveryArgs, ctx: &Ctx) -> Result<Rendered> {
    let x = Word::parse(a.q, &a.x)?;
    let model = ErrorModel::from_parts(&a.model, &a.budgets)?;
    let code = match &a.code {
        Some(path) => Some(parse_code(&read_file(path)?)?),
        None => None,
    };
    let code_ref = match &code {
        Some(c) => CodeRef::Explicit(c),
        None => CodeRef::FullSpace,
    };
    let mode = match a.mode {
        Mode::Exact => EstimateMode::Exact,
        Mode::MonteCarlo => EstimateMode::MonteCarlo,
    };
    let est = unique_recovery_prob(
        &x,
        &model,
        a.n_outputs,
        a.trials,
        ctx.seed,
        mode,
        code_ref,
        &ctx.caps,
        ctx.exec,
    )?;
    let json = json!({
        "experiment": "recovery",
        "q": a.q,
        "x": x.to_string(),
        "model": model.to_json(),
        "n_outputs": a.n_outputs,
        "estimate": estimate_json(&est),
    });
    let pairs = vec![
        ("x".to_string(), x.to_string()),
        ("model".to_string(), model_label(&model)),
        ("n_outputs".to_string(), a.n_outputs.to_string()),
        ("p_hat".to_string(), est.p_hat.to_string()),
        ("trials".to_string(), est.trials.to_string()),
        ("ci95_halfwidth".to_string(), est.ci95_halfwidth.to_string()),
        (
            "exact".to_string(),
            est.exact
                .as_ref()
                .map_or("none".to_string(), BigRational::to_string),
        ),
    ];
    Ok(kv_rendered(json, &pairs))
}
