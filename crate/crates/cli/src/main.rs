//! `dicke`: prepare, simulate and verify symmetric states from the shell.
//!
//! Exit codes: 0 success, 1 input error, 2 numeric or tolerance failure,
//! 3 failure of a sampled protocol run.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use dicke::format::{
    self, FixedPointsDoc, OutcomeDoc, Real, ReportDoc, RunLogDoc, ScheduleDoc, SingleRunDoc,
    StateDoc,
};
use dicke::protocols::{self, Mode, ProtocolOutcome};
use dicke::verify::{self, Suite, Tolerances};
use dicke::{preparation, spectral, Error, GateParams, ProtocolOrder, ProtocolRng, SymmetricState};

/// Environment variable naming a JSON file of default tolerances.
const TOLERANCE_ENV: &str = "DICKE_TOLERANCES";
const PREPARE_FIDELITY: &str = "prepare_fidelity";
const DEFAULT_VERIFY_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(
    name = "dicke",
    version,
    about = "Symmetric-state protocols on Dicke states"
)]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a Protocol 2 schedule for a target state and run it.
    Prepare(PrepareArgs),
    /// Run one protocol, or alternate both, for a number of rounds.
    Simulate(SimulateArgs),
    /// Fixed-point basis of the composed protocols on n qubits.
    FixedPoints(FixedPointsArgs),
    /// Apply H^{⊗n} to a state.
    Transform(TransformArgs),
    /// Run an invariant suite and report every residual.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SamplingArgs {
    /// Sample measurement outcomes instead of postselecting on success.
    #[arg(long)]
    sample: bool,
    /// Seed for sampling. Without it the run is nondeterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ToleranceArgs {
    /// `VALUE` for every check, or `NAME=VALUE` for one. Repeatable;
    /// overrides the file named by DICKE_TOLERANCES.
    #[arg(long = "tol", value_name = "[NAME=]VALUE")]
    tol: Vec<String>,
}

#[derive(Args)]
struct PrepareArgs {
    /// Target state JSON, `-` for stdin.
    #[arg(long)]
    target: PathBuf,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[command(flatten)]
    tolerances: ToleranceArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolChoice {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderChoice {
    /// Protocol 2, then Protocol 1 (the operator P1 P2).
    Protocol2First,
    /// Protocol 1, then Protocol 2 (the operator P2 P1).
    Protocol1First,
}

/// `a,b` with real entries, `are,aim,bre,bim`, or `hadamard`. Rescaled to
/// unit norm.
#[derive(Args)]
struct GateArgs {
    /// Protocol 1 gate `(α, β)`.
    #[arg(long, default_value = "hadamard")]
    p1: String,
    /// Protocol 2 gate `(γ, δ)`.
    #[arg(long, default_value = "hadamard")]
    p2: String,
}

#[derive(Args)]
struct SimulateArgs {
    /// Input state JSON, `-` for stdin.
    state: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    protocol: ProtocolChoice,
    #[arg(long, default_value_t = 1)]
    rounds: usize,
    #[arg(long, value_enum, default_value = "protocol2-first")]
    order: OrderChoice,
    #[command(flatten)]
    gates: GateArgs,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Args)]
struct FixedPointsArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    gates: GateArgs,
}

#[derive(Args)]
struct TransformArgs {
    /// Input state JSON, `-` for stdin.
    state: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long, default_value_t = DEFAULT_VERIFY_SEED)]
    seed: u64,
    #[command(flatten)]
    tolerances: ToleranceArgs,
}

/// A failure with its exit code. A document, when present, is still written.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn input(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 1,
            error: error.into(),
        }
    }

    fn numeric(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 2,
            error: error.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::AmplitudeCount { .. }
            | Error::DegenerateState(_)
            | Error::NotNormalized { .. }
            | Error::Annihilated
            | Error::NotPhysical { .. }
            | Error::NoQubit
            | Error::TooManyQubits { .. }
            | Error::InvalidParameter(_)
            | Error::Format(_) => 1,
            _ => 2,
        };
        Self {
            code,
            error: e.into(),
        }
    }
}

/// Result of a command: the document to write and the exit status.
struct Output {
    json: String,
    code: u8,
    message: Option<String>,
}

impl Output {
    fn ok<T: Serialize>(doc: &T) -> Self {
        Self {
            json: format::to_json(doc),
            code: 0,
            message: None,
        }
    }

    fn with(mut self, code: u8, message: String) -> Self {
        self.code = code;
        self.message = Some(message);
        self
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Prepare(a) => prepare(a),
        Command::Simulate(a) => simulate(a),
        Command::FixedPoints(a) => fixed_points(a),
        Command::Transform(a) => transform(a),
        Command::Verify(a) => verify_cmd(a),
    };
    match result {
        Ok(out) => {
            if let Err(e) = write_output(cli.output.as_deref(), &out.json) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            if let Some(m) = out.message {
                eprintln!("{m}");
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn write_output(path: Option<&Path>, json: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            fs::write(p, format!("{json}\n")).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{json}")?;
            Ok(())
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(Failure::input)?;
        return Ok(s);
    }
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::input)
}

/// Parse a state file and rescale it to unit norm.
fn read_state(path: &Path) -> Result<SymmetricState, Failure> {
    let text = read_text(path)?;
    let state = format::parse_state(&text)
        .map_err(|e| Failure::input(anyhow!("{}: {e}", path.display())))?;
    if state.is_normalized() {
        return Ok(state);
    }
    let (unit, norm) = state.normalized()?;
    eprintln!("note: input norm {norm:.17e} rescaled to 1");
    Ok(unit)
}

fn parse_gate(text: &str) -> Result<GateParams, Failure> {
    if text.eq_ignore_ascii_case("hadamard") {
        return Ok(GateParams::hadamard());
    }
    let values = text
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::input(anyhow!("gate `{text}`: {e}")))?;
    let (a, b) = match values[..] {
        [a, b] => (Complex64::new(a, 0.0), Complex64::new(b, 0.0)),
        [ar, ai, br, bi] => (Complex64::new(ar, ai), Complex64::new(br, bi)),
        _ => {
            return Err(Failure::input(anyhow!(
                "gate `{text}`: expected 2 or 4 numbers"
            )))
        }
    };
    if !values.iter().all(|v| v.is_finite()) {
        return Err(Failure::input(anyhow!("gate `{text}`: non-finite entry")));
    }
    Ok(GateParams::new(a, b).normalized()?)
}

fn parse_tolerances(args: &ToleranceArgs) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    if let Some(path) = std::env::var_os(TOLERANCE_ENV) {
        let text = read_text(Path::new(&path))?;
        let map: BTreeMap<String, f64> = serde_json::from_str(&text).map_err(|e| {
            Failure::input(anyhow!(
                "{TOLERANCE_ENV}={}: {e}",
                Path::new(&path).display()
            ))
        })?;
        for (name, value) in map {
            if name == "default" {
                tol.global = Some(value);
            } else {
                tol.by_name.insert(name, value);
            }
        }
    }
    for item in &args.tol {
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| *x >= 0.0)
                .ok_or_else(|| {
                    Failure::input(anyhow!(
                        "tolerance `{item}`: expected a non-negative number"
                    ))
                })
        };
        match item.split_once('=') {
            Some((name, value)) => {
                tol.by_name.insert(name.trim().to_owned(), parse(value)?);
            }
            None => tol.global = Some(parse(item)?),
        }
    }
    Ok(tol)
}

/// The generator for a sampled run and the seed to record.
fn sampling_rng(args: &SamplingArgs) -> Option<(ProtocolRng, Option<u64>)> {
    if !args.sample {
        if args.seed.is_some() {
            eprintln!("note: --seed has no effect without --sample");
        }
        return None;
    }
    Some(match args.seed {
        Some(s) => (ProtocolRng::seed_from_u64(s), Some(s)),
        None => {
            use std::hash::BuildHasher;
            eprintln!("note: no --seed given, sampling is nondeterministic");
            let s = std::collections::hash_map::RandomState::new()
                .hash_one(std::time::SystemTime::now());
            (ProtocolRng::seed_from_u64(s), None)
        }
    })
}

fn prepare(args: &PrepareArgs) -> Result<Output, Failure> {
    let target = read_state(&args.target)?;
    let tolerances = parse_tolerances(&args.tolerances)?;
    let threshold = tolerances.resolve(PREPARE_FIDELITY, preparation::RECONSTRUCTION_TOLERANCE);
    let schedule = preparation::compile_schedule(&target)?;
    let mut sampling = sampling_rng(&args.sampling);
    let (run, seed, algorithm) = match &mut sampling {
        Some((rng, seed)) => (
            preparation::run_schedule(&schedule, Mode::Sampled(rng))?,
            *seed,
            Some(ProtocolRng::ALGORITHM),
        ),
        None => (
            preparation::run_schedule(&schedule, Mode::ExactPostselect)?,
            None,
            None,
        ),
    };
    let fidelity = match run.failed_step {
        Some(_) => f64::NAN,
        None => run.state.fidelity(&target)?,
    };
    let out = Output::ok(&ScheduleDoc::new(
        &schedule, &run, fidelity, seed, algorithm,
    ));
    if let Some(k) = run.failed_step {
        return Ok(out.with(3, format!("sampled preparation failed at step {k}")));
    }
    if 1.0 - fidelity > threshold {
        return Ok(out.with(
            2,
            format!("infidelity {:.3e} exceeds {threshold:.3e}", 1.0 - fidelity),
        ));
    }
    Ok(out)
}

fn simulate(args: &SimulateArgs) -> Result<Output, Failure> {
    let state = read_state(&args.state)?;
    let p1 = parse_gate(&args.gates.p1)?;
    let p2 = parse_gate(&args.gates.p2)?;
    let mut sampling = sampling_rng(&args.sampling);
    let seed = sampling.as_ref().and_then(|(_, s)| *s);
    match args.protocol {
        ProtocolChoice::Both => {
            let order = match args.order {
                OrderChoice::Protocol2First => ProtocolOrder::P2ThenP1,
                OrderChoice::Protocol1First => ProtocolOrder::P1ThenP2,
            };
            let mode = match &mut sampling {
                Some((rng, _)) => Mode::Sampled(rng),
                None => Mode::ExactPostselect,
            };
            let log = protocols::iterate_composed(&state, &p1, &p2, args.rounds, order, mode)?;
            let out = Output::ok(&RunLogDoc::new(&log, seed));
            Ok(match log.failed_round {
                Some(r) => out.with(3, format!("sampled run failed in round {r}")),
                None => out,
            })
        }
        ProtocolChoice::One => single_protocol(1, &state, &p1, args.rounds, sampling, seed),
        ProtocolChoice::Two => single_protocol(2, &state, &p2, args.rounds, sampling, seed),
    }
}

fn single_protocol(
    protocol: u8,
    state: &SymmetricState,
    g: &GateParams,
    rounds: usize,
    mut sampling: Option<(ProtocolRng, Option<u64>)>,
    seed: Option<u64>,
) -> Result<Output, Failure> {
    let mut current = state.clone();
    let mut outcomes = Vec::with_capacity(rounds);
    let mut cumulative = 1.0;
    let mut failed_round = None;
    for round in 0..rounds {
        let outcome = match (&mut sampling, protocol) {
            (Some((rng, _)), 1) => protocols::protocol1_sample(&current, g, rng)?,
            (Some((rng, _)), _) => protocols::protocol2_sample(&current, g, rng)?,
            (None, 1) => {
                let r = protocols::protocol1_exact(&current, g)?;
                ProtocolOutcome {
                    success: true,
                    probability: r.success_probability,
                    state: r.success_state,
                }
            }
            (None, _) => {
                let r = protocols::protocol2_exact(&current, g)?;
                ProtocolOutcome {
                    success: true,
                    probability: r.success_probability,
                    state: r.success_state,
                }
            }
        };
        outcomes.push(OutcomeDoc::from(&outcome));
        if !outcome.success {
            failed_round = Some(round);
            break;
        }
        cumulative *= outcome.probability;
        current = outcome
            .state
            .ok_or_else(|| Failure::numeric(Error::DegenerateRun { round }))?;
    }
    let doc = SingleRunDoc {
        format_version: format::FORMAT_VERSION,
        protocol,
        rounds_requested: rounds,
        rounds_completed: outcomes.len() - usize::from(failed_round.is_some()),
        outcomes,
        cumulative_probability: Real(cumulative),
        failed_round,
        seed,
        rng_algorithm: sampling.as_ref().map(|_| ProtocolRng::ALGORITHM),
        final_state: StateDoc::from(&current),
    };
    let out = Output::ok(&doc);
    Ok(match failed_round {
        Some(r) => out.with(3, format!("sampled run failed in round {r}")),
        None => out,
    })
}

fn fixed_points(args: &FixedPointsArgs) -> Result<Output, Failure> {
    let p1 = parse_gate(&args.gates.p1)?;
    let p2 = parse_gate(&args.gates.p2)?;
    let basis = spectral::build_fixed_point_basis(args.n, &p1, &p2)?;
    let gate = spectral::unitary_case_gate(&p1, &p2)?;
    let out = Output::ok(&FixedPointsDoc::new(&basis, gate.as_ref()));
    Ok(match basis.warning() {
        Some(w) => Output {
            message: Some(format!("warning: {w}")),
            ..out
        },
        None => out,
    })
}

fn transform(args: &TransformArgs) -> Result<Output, Failure> {
    let state = read_state(&args.state)?;
    Ok(Output::ok(&StateDoc::from(&spectral::hadamard_transform(
        &state,
    ))))
}

fn verify_cmd(args: &VerifyArgs) -> Result<Output, Failure> {
    let suite: Suite = args.suite.parse().map_err(Failure::input)?;
    let tolerances = parse_tolerances(&args.tolerances)?;
    if args.max_n == 0 {
        return Err(Failure::input(anyhow!("--max-n must be at least 1")));
    }
    let report = verify::run(suite, args.max_n, &tolerances, args.seed)?;
    let out = Output::ok(&ReportDoc::from(&report));
    if report.passed() {
        return Ok(out);
    }
    let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    Ok(out.with(
        2,
        format!("{} check(s) failed: {}", names.len(), names.join(", ")),
    ))
}
