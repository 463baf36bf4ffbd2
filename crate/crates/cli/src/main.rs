use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qsat_core::baselines::{classical_reference, grover_expected_total, ClassicalModel};
use qsat_core::inference::{detect_ambiguous, infer_assignment, MeasurementTally};
use qsat_core::rebit::{NoiseMode, RotationNoise};
use qsat_core::sat::{clause_count_for, emit_dimacs, generate_instance, parse_dimacs, GenConfig, SatInstance};
use qsat_core::solver::{
    default_n_full, solve_adiabatic, solve_hybrid, solve_sculpt, HybridParams, Schedule, SculptParams, SolveResult,
    SolverError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

mod config;
mod meta;
mod sweep;

use config::SweepConfig;
use meta::Meta;

/// Simulator for a measurement-driven rebit solver of random 3-SAT.
#[derive(Parser, Debug)]
#[command(name = "qsat", version, propagate_version = true)]
struct Cli {
    /// Worker threads for sweeps and kernels (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate random 3-SAT instances as DIMACS files.
    Gen(GenArgs),
    /// Solve one DIMACS instance and print the result as JSON.
    Solve(SolveArgs),
    /// Run a parameter sweep described by a TOML config.
    Sweep(SweepArgs),
    /// Print the Grover baseline for n variables.
    Grover(GroverArgs),
    /// Majority-vote inference from a measurement tally CSV.
    Infer(InferArgs),
}

#[derive(Args, Debug, Serialize)]
struct GenArgs {
    /// Number of variables.
    #[arg(short, long)]
    n: usize,
    /// Seed of the first instance; later ones use seed+1, seed+2, ...
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    /// Keep only instances with exactly this many solutions.
    #[arg(long)]
    ns: Option<u64>,
    #[arg(short, long, default_value_t = 1)]
    count: u64,
    #[arg(short, long, default_value = ".")]
    out: PathBuf,
    #[arg(long, default_value_t = qsat_core::sat::DEFAULT_EXHAUSTIVE_LIMIT)]
    exhaustive_limit: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Strategy {
    AdiabaticLinear,
    AdiabaticSqrt,
    Sculpt,
    Hybrid,
}

#[derive(Args, Debug, Serialize)]
struct SolveArgs {
    /// DIMACS file.
    instance: PathBuf,
    #[arg(long, value_enum)]
    strategy: Strategy,
    /// Ramp length in cycles (adiabatic strategies).
    #[arg(long, default_value_t = 100)]
    cycles: u64,
    /// Fixed angle as a fraction of π/2 (sculpt, hybrid).
    #[arg(long, default_value_t = 0.5)]
    theta0_frac: f64,
    /// Passed checks per successful sculpting run (default: pilot estimate).
    #[arg(long)]
    n_full: Option<u64>,
    /// Pilot instances for the default N_full.
    #[arg(long, default_value_t = 20)]
    pilot: usize,
    #[arg(long, default_value_t = 1001)]
    max_runs: u64,
    /// Hybrid hold cycles.
    #[arg(long, default_value_t = 10)]
    hold: u64,
    /// Hybrid ramp cycles.
    #[arg(long, default_value_t = 10)]
    ramp: u64,
    #[arg(long, default_value_t = 1_000_000)]
    try_cap: u64,
    /// Rotation noise cap (0 disables noise).
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, value_enum, default_value_t = NoiseArg::Multiplicative)]
    noise_mode: NoiseArg,
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock time in the output.
    #[arg(long)]
    #[serde(skip)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum NoiseArg {
    Multiplicative,
    Additive,
}

impl From<NoiseArg> for NoiseMode {
    fn from(a: NoiseArg) -> Self {
        match a {
            NoiseArg::Multiplicative => NoiseMode::Multiplicative,
            NoiseArg::Additive => NoiseMode::Additive,
        }
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    config: PathBuf,
    /// Output directory.
    #[arg(short, long, default_value = "sweep-out")]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct GroverArgs {
    #[arg(short, long)]
    n: u32,
    /// Clause count (default round(4.267 n)).
    #[arg(long)]
    clauses: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
struct InferArgs {
    /// CSV with columns qubit_index, ones, runs.
    tally: PathBuf,
    /// Angle in radians.
    #[arg(long)]
    theta: f64,
    /// Expected qubit count; checked against the file.
    #[arg(short, long)]
    n: Option<usize>,
    /// Threshold for flagging ambiguous qubits, in standard errors.
    #[arg(long, default_value_t = 3.0)]
    z: f64,
}

/// Exit status for a run that stopped at its caps without a solution.
const EXIT_UNSOLVED: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = init_pool(cli.jobs) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(feature = "parallel")]
fn init_pool(jobs: Option<usize>) -> Result<()> {
    if let Some(j) = jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn init_pool(_jobs: Option<usize>) -> Result<()> {
    Ok(())
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Gen(a) => cmd_gen(&a).map(|_| ExitCode::SUCCESS),
        Command::Solve(a) => cmd_solve(&a),
        Command::Sweep(a) => cmd_sweep(&a).map(|_| ExitCode::SUCCESS),
        Command::Grover(a) => cmd_grover(&a).map(|_| ExitCode::SUCCESS),
        Command::Infer(a) => cmd_infer(&a).map(|_| ExitCode::SUCCESS),
    }
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn cmd_gen(a: &GenArgs) -> Result<()> {
    std::fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let gen = GenConfig {
        exhaustive_limit: a.exhaustive_limit,
        ..GenConfig::default()
    };
    for i in 0..a.count {
        let seed = a.seed + i;
        let inst = generate_instance(a.n, seed, a.ns, &gen)?;
        let path = a.out.join(format!("n{}_s{}.cnf", a.n, seed));
        std::fs::write(&path, emit_dimacs(&inst)).with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn load_instance(path: &Path) -> Result<SatInstance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_solve(a: &SolveArgs) -> Result<ExitCode> {
    let inst = load_instance(&a.instance)?;
    if !(a.theta0_frac > 0.0 && a.theta0_frac <= 1.0) {
        bail!("--theta0-frac must lie in (0, 1]");
    }
    let theta0 = a.theta0_frac * FRAC_PI_2;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut noise = (a.noise > 0.0).then(|| RotationNoise::with_stream(a.noise, a.noise_mode.into(), a.seed, 1));
    let mut resolved = json!({ "strategy": a.strategy });
    let outcome = match a.strategy {
        Strategy::AdiabaticLinear | Strategy::AdiabaticSqrt => {
            let schedule = if a.strategy == Strategy::AdiabaticLinear {
                Schedule::Linear { cycles: a.cycles }
            } else {
                Schedule::Sqrt { cycles: a.cycles }
            };
            resolved["schedule"] = serde_json::to_value(schedule)?;
            solve_adiabatic(&inst, &schedule, noise.as_mut(), &mut rng, a.try_cap)
        }
        Strategy::Sculpt => {
            let n_full = match a.n_full {
                Some(k) => k,
                None => default_n_full(inst.n(), theta0, a.pilot, a.seed, &GenConfig::default())
                    .context("estimating N_full from pilot instances")?,
            };
            let params = SculptParams {
                theta0,
                n_full,
                max_runs: a.max_runs,
                try_cap: a.try_cap,
            };
            resolved["params"] = serde_json::to_value(params)?;
            solve_sculpt(&inst, &params, noise.as_mut(), &mut rng)
        }
        Strategy::Hybrid => {
            let params = HybridParams {
                theta0,
                hold: a.hold,
                ramp: a.ramp,
                try_cap: a.try_cap,
            };
            resolved["params"] = serde_json::to_value(params)?;
            solve_hybrid(&inst, &params, noise.as_mut(), &mut rng)
        }
    };
    resolved["noise"] = json!({ "cap": a.noise, "mode": a.noise_mode });
    let meta = Meta::new(&(a, &resolved), a.seed)?.with_instance(&inst);
    let (solved, result) = match outcome {
        Ok(SolveResult { assignment, stats }) => (Some(assignment.to_string()), stats),
        Err(SolverError::Unsolved(stats)) => (None, *stats),
        Err(e) => return Err(e.into()),
    };
    let mut report = json!({
        "meta": meta,
        "config": resolved,
        "solved": solved.is_some(),
        "assignment": solved,
        "stats": result,
    });
    if a.timing {
        report["wall_time_s"] = json!(result.wall_time.as_secs_f64());
    }
    print_json(&report)?;
    Ok(if solved.is_some() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_UNSOLVED)
    })
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let cfg = SweepConfig::load(&a.config)?;
    let meta = Meta::new(&cfg, cfg.seed)?;
    let out = sweep::run_sweep(&cfg)?;
    sweep::write_outputs(&a.out, &cfg, &meta, &out)?;
    println!("{}", a.out.display());
    Ok(())
}

fn cmd_grover(a: &GroverArgs) -> Result<()> {
    if !(1..=60).contains(&a.n) {
        bail!("n must be in 1..=60");
    }
    let clauses = a.clauses.unwrap_or(clause_count_for(a.n as usize) as u64);
    let plan = grover_expected_total(a.n, clauses);
    let classical: serde_json::Map<String, serde_json::Value> = [
        ("brute", ClassicalModel::Brute),
        ("paturi", ClassicalModel::Paturi),
        ("sqrt2", ClassicalModel::GroverBase),
    ]
    .into_iter()
    .map(|(k, m)| (k.to_string(), json!(classical_reference(a.n, clauses, m))))
    .collect();
    print_json(&json!({
        "meta": Meta::new(a, 0)?,
        "grover": plan,
        "classical": classical,
    }))
}

#[derive(serde::Deserialize)]
struct TallyRow {
    qubit_index: usize,
    ones: u64,
    runs: u64,
}

fn read_tally(path: &Path) -> Result<MeasurementTally> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut rows: Vec<TallyRow> = Vec::new();
    for (i, r) in reader.deserialize().enumerate() {
        let row: TallyRow = r.with_context(|| format!("{}: record {}", path.display(), i + 1))?;
        rows.push(row);
    }
    rows.sort_by_key(|r| r.qubit_index);
    let Some(runs) = rows.first().map(|r| r.runs) else {
        bail!("{}: empty tally", path.display());
    };
    for (i, r) in rows.iter().enumerate() {
        if r.qubit_index != i {
            bail!(
                "{}: qubit indices must be 0..n without gaps (missing {i})",
                path.display()
            );
        }
        if r.runs != runs {
            bail!(
                "{}: qubit {i} has runs={} but qubit 0 has runs={runs}",
                path.display(),
                r.runs
            );
        }
    }
    Ok(MeasurementTally::from_counts(
        runs,
        rows.into_iter().map(|r| r.ones).collect(),
    )?)
}

fn cmd_infer(a: &InferArgs) -> Result<()> {
    let tally = read_tally(&a.tally)?;
    if let Some(n) = a.n {
        if n != tally.n() {
            bail!("tally has {} qubits, expected {n}", tally.n());
        }
    }
    let inference = infer_assignment(&tally, a.theta)?;
    let ambiguous = if tally.runs() >= 3 {
        detect_ambiguous(&tally, a.theta, a.z)?
    } else {
        Vec::new()
    };
    print_json(&json!({
        "meta": Meta::new(a, 0)?,
        "runs": tally.runs(),
        "assignment": inference.assignment.to_string(),
        "confidence": inference.confidence,
        "ambiguous": ambiguous,
    }))
}
