//! Benchmark CLI: seeded experiment scenarios emitting CSV.
//!
//! SNR flags are decibels of the per-stream SNR, `gamma = 10^(db/10)` with
//! `gamma = P/(N sigma^2)`. This differs from a total-power `P/sigma^2` axis
//! by `10 log10(N)`.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fluid_mimo::bench::{
    load_config, run_scenario, write_result_csv, write_trace_csv, ExperimentSpec, Scenario, Scheme,
};
use fluid_mimo::SolverKind;

#[derive(Parser)]
#[command(
    name = "fluid-mimo-bench",
    about = "Fluid-MIMO antenna position optimization benchmarks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one optimization and print the resulting positions
    Optimize(CommonArgs),
    /// Capacity versus uniform antenna spacing
    SpacingCurve(SpacingArgs),
    /// Capacity versus SNR for the selected schemes
    SweepSnr(CommonArgs),
    /// Capacity versus aperture size
    SweepAperture(ApertureArgs),
    /// Capacity versus antenna count
    SweepN(CountArgs),
    /// Per-iteration convergence traces for the optimizing schemes
    Convergence(CommonArgs),
    /// Statistical self-checks (channel law, Wishart identity, gradient)
    Validate(CommonArgs),
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Transmit antenna count
    #[arg(long)]
    n: Option<usize>,
    /// Receive antenna count
    #[arg(long)]
    m: Option<usize>,
    /// Aperture length in wavelengths (both sides)
    #[arg(long)]
    aperture: Option<f64>,
    /// Minimum spacing in wavelengths
    #[arg(long)]
    dmin: Option<f64>,
    /// Comma-separated SNR grid in dB (per-stream gamma)
    #[arg(long, value_name = "DB[,DB...]")]
    snr_db: Option<String>,
    /// Subproblem solver: pso or sca
    #[arg(long)]
    solver: Option<String>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluation sample count per grid point
    #[arg(long)]
    samples: Option<usize>,
    /// Optimization sample count (swarm fitness batches)
    #[arg(long)]
    opt_samples: Option<usize>,
    /// Comma-separated scheme list (iid,ao_pso,ao_sca,tx_only,random_best,fpa)
    #[arg(long)]
    schemes: Option<String>,
    /// Random-placement trial count
    #[arg(long)]
    trials: Option<usize>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Key-value config file; command-line flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Default)]
struct SpacingArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// First spacing of the grid (wavelengths)
    #[arg(long)]
    grid_start: Option<f64>,
    /// Last spacing of the grid (wavelengths)
    #[arg(long)]
    grid_stop: Option<f64>,
    /// Grid step (wavelengths)
    #[arg(long)]
    grid_step: Option<f64>,
}

#[derive(Args, Default)]
struct ApertureArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated aperture grid in wavelengths
    #[arg(long)]
    apertures: Option<String>,
}

#[derive(Args, Default)]
struct CountArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated antenna-count grid
    #[arg(long)]
    n_list: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> fluid_mimo::Result<ExitCode> {
    let (scenario, common) = match &cli.command {
        Command::Optimize(a) => (Scenario::Optimize, a),
        Command::SpacingCurve(a) => (Scenario::SpacingCurve, &a.common),
        Command::SweepSnr(a) => (Scenario::SweepSnr, a),
        Command::SweepAperture(a) => (Scenario::SweepAperture, &a.common),
        Command::SweepN(a) => (Scenario::SweepN, &a.common),
        Command::Convergence(a) => (Scenario::Convergence, a),
        Command::Validate(a) => (Scenario::Validate, a),
    };

    let config = match &common.config {
        Some(path) => load_config(path)?,
        None => HashMap::new(),
    };
    let mut spec = build_spec(scenario, common, &config)?;
    match &cli.command {
        Command::SpacingCurve(a) => {
            spec.spacing_start = resolve(a.grid_start, &config, "grid-start", spec.spacing_start)?;
            spec.spacing_stop = resolve(a.grid_stop, &config, "grid-stop", spec.spacing_stop)?;
            spec.spacing_step = resolve(a.grid_step, &config, "grid-step", spec.spacing_step)?;
        }
        Command::SweepAperture(a) => {
            if let Some(list) = a.apertures.clone().or_else(|| config.get("apertures").cloned()) {
                spec.apertures = parse_f64_list(&list)?;
            }
        }
        Command::SweepN(a) => {
            if let Some(list) = a.n_list.clone().or_else(|| config.get("n-list").cloned()) {
                spec.n_list = parse_usize_list(&list)?;
            }
        }
        _ => {}
    }

    let out = run_scenario(&spec)?;
    for line in &out.messages {
        println!("{line}");
    }

    let out_path = common.out.clone().or_else(|| config.get("out").map(PathBuf::from));
    if let Some(path) = out_path {
        if !matches!(scenario, Scenario::Validate) {
            write_result_csv(&out.rows, &path)?;
            println!("wrote {} rows to {}", out.rows.len(), path.display());
        }
        if !out.trace_rows.is_empty() {
            let trace_path = trace_path_for(&path);
            write_trace_csv(&out.trace_rows, &trace_path)?;
            println!("wrote {} trace rows to {}", out.trace_rows.len(), trace_path.display());
        }
    }

    if out.failed_checks > 0 {
        eprintln!("{} validation check(s) failed", out.failed_checks);
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

/// `results.csv` -> `results_trace.csv`
fn trace_path_for(path: &std::path::Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}_trace.{ext}"))
}

fn build_spec(
    scenario: Scenario,
    args: &CommonArgs,
    config: &HashMap<String, String>,
) -> fluid_mimo::Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::new(scenario);
    spec.n = resolve(args.n, config, "n", spec.n)?;
    spec.m = resolve(args.m, config, "m", spec.m)?;
    spec.aperture = resolve(args.aperture, config, "aperture", spec.aperture)?;
    spec.d_min = resolve(args.dmin, config, "dmin", spec.d_min)?;
    spec.seed = resolve(args.seed, config, "seed", spec.seed)?;
    spec.eval_samples = resolve(args.samples, config, "samples", spec.eval_samples)?;
    spec.opt_samples = resolve(args.opt_samples, config, "opt-samples", spec.opt_samples)?;
    spec.trials = resolve(args.trials, config, "trials", spec.trials)?;
    if let Some(list) = args.snr_db.clone().or_else(|| config.get("snr-db").cloned()) {
        spec.snrs_db = parse_f64_list(&list)?;
    }
    if let Some(solver) = args.solver.clone().or_else(|| config.get("solver").cloned()) {
        spec.solver = match solver.as_str() {
            "pso" => SolverKind::Pso,
            "sca" => SolverKind::Sca,
            other => {
                return Err(fluid_mimo::Error::InvalidArgument(format!(
                    "solver must be `pso` or `sca`, got `{other}`"
                )))
            }
        };
    }
    if let Some(list) = args.schemes.clone().or_else(|| config.get("schemes").cloned()) {
        spec.schemes = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Scheme::parse)
            .collect::<fluid_mimo::Result<Vec<_>>>()?;
    }
    Ok(spec)
}

fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    config: &HashMap<String, String>,
    key: &str,
    default: T,
) -> fluid_mimo::Result<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match config.get(key) {
        Some(raw) => raw.parse::<T>().map_err(|_| {
            fluid_mimo::Error::InvalidArgument(format!("config key `{key}` has invalid value `{raw}`"))
        }),
        None => Ok(default),
    }
}

fn parse_f64_list(list: &str) -> fluid_mimo::Result<Vec<f64>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>().map_err(|_| {
                fluid_mimo::Error::InvalidArgument(format!("invalid number `{s}` in list"))
            })
        })
        .collect()
}

fn parse_usize_list(list: &str) -> fluid_mimo::Result<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>().map_err(|_| {
                fluid_mimo::Error::InvalidArgument(format!("invalid count `{s}` in list"))
            })
        })
        .collect()
}
