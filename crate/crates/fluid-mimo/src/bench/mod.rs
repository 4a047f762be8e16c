//! Benchmark scenarios behind the CLI: seeded experiment sweeps that emit CSV
//! rows, plus the baseline placement schemes.
//!
//! Every scenario is deterministic in `(spec, seed)`; rerunning one produces a
//! byte-identical CSV. Within a grid point all schemes are scored on one
//! shared evaluation sample set so scheme differences are paired comparisons,
//! not independent estimates. Plotting is out of scope: the binary emits data
//! files only.

mod baselines;
mod config;
mod scenarios;

pub use baselines::{baseline_fpa, baseline_random_best, baseline_tx_only};
pub use config::load_config;
pub use scenarios::run_scenario;

use std::io::Write;
use std::path::Path;

use crate::ao::SolverKind;
use crate::error::{Error, Result};

/// Placement schemes comparable within a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Iid,
    AoPso,
    AoSca,
    TxOnly,
    RandomBest,
    Fpa,
}

impl Scheme {
    pub const ALL: [Scheme; 6] =
        [Scheme::Iid, Scheme::AoPso, Scheme::AoSca, Scheme::TxOnly, Scheme::RandomBest, Scheme::Fpa];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Iid => "iid",
            Scheme::AoPso => "ao_pso",
            Scheme::AoSca => "ao_sca",
            Scheme::TxOnly => "tx_only",
            Scheme::RandomBest => "random_best",
            Scheme::Fpa => "fpa",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Scheme::ALL
            .iter()
            .find(|s| s.name() == name)
            .copied()
            .ok_or_else(|| Error::invalid(format!("unknown scheme `{name}`")))
    }
}

/// Scenario identifiers exposed as CLI subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Optimize,
    SpacingCurve,
    SweepSnr,
    SweepAperture,
    SweepN,
    Convergence,
    Validate,
}

impl Scenario {
    pub fn id(&self) -> &'static str {
        match self {
            Scenario::Optimize => "optimize",
            Scenario::SpacingCurve => "spacing-curve",
            Scenario::SweepSnr => "sweep-snr",
            Scenario::SweepAperture => "sweep-aperture",
            Scenario::SweepN => "sweep-n",
            Scenario::Convergence => "convergence",
            Scenario::Validate => "validate",
        }
    }

    pub fn parse(id: &str) -> Result<Self> {
        [
            Scenario::Optimize,
            Scenario::SpacingCurve,
            Scenario::SweepSnr,
            Scenario::SweepAperture,
            Scenario::SweepN,
            Scenario::Convergence,
            Scenario::Validate,
        ]
        .iter()
        .find(|s| s.id() == id)
        .copied()
        .ok_or_else(|| Error::UnknownScenario(id.to_string()))
    }
}

/// One seeded experiment: scenario id, parameter grid, schemes, and sampling
/// budgets.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub scenario: Scenario,
    pub n: usize,
    pub m: usize,
    pub aperture: f64,
    pub d_min: f64,
    pub snrs_db: Vec<f64>,
    pub apertures: Vec<f64>,
    pub n_list: Vec<usize>,
    pub spacing_start: f64,
    pub spacing_stop: f64,
    pub spacing_step: f64,
    pub schemes: Vec<Scheme>,
    pub solver: SolverKind,
    pub seed: u64,
    pub opt_samples: usize,
    pub eval_samples: usize,
    pub trials: usize,
}

impl ExperimentSpec {
    /// Benchmark defaults for a scenario (6x6 link, 2-wavelength apertures,
    /// 0.3 minimum spacing, 200/1500 optimization/evaluation samples).
    pub fn new(scenario: Scenario) -> Self {
        let snrs_db = match scenario {
            Scenario::SweepSnr => vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            Scenario::SpacingCurve => vec![10.0, 20.0, 30.0],
            Scenario::Optimize | Scenario::Convergence => vec![20.0],
            _ => vec![20.0],
        };
        // the spacing curve studies the two-antenna closed form by default
        let (n, m) = match scenario {
            Scenario::SpacingCurve => (2, 2),
            _ => (6, 6),
        };
        Self {
            scenario,
            n,
            m,
            aperture: 2.0,
            d_min: 0.3,
            snrs_db,
            apertures: vec![1.5, 2.0, 2.5, 3.0, 3.5],
            n_list: vec![2, 3, 4, 5, 6],
            spacing_start: 0.1,
            spacing_stop: 1.0,
            spacing_step: 0.005,
            schemes: Scheme::ALL.to_vec(),
            solver: SolverKind::Sca,
            seed: 1,
            opt_samples: 200,
            eval_samples: 1500,
            trials: 50,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::invalid("scheme list must not be empty"));
        }
        if self.snrs_db.is_empty() {
            return Err(Error::invalid("SNR grid must not be empty"));
        }
        match self.scenario {
            Scenario::SweepAperture if self.apertures.is_empty() => {
                Err(Error::invalid("aperture grid must not be empty"))
            }
            Scenario::SweepN if self.n_list.is_empty() => {
                Err(Error::invalid("antenna-count grid must not be empty"))
            }
            Scenario::SpacingCurve
                if self.spacing_step <= 0.0 || self.spacing_stop < self.spacing_start =>
            {
                Err(Error::invalid("spacing grid is empty or inverted"))
            }
            _ => Ok(()),
        }
    }
}

/// One CSV data row. Column order is part of the output contract.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario: String,
    pub scheme: String,
    pub n: usize,
    pub m: usize,
    pub aperture: f64,
    pub gamma_db: f64,
    pub capacity_mean: f64,
    pub capacity_stderr: f64,
    pub det_rt: f64,
    pub det_rr: f64,
    pub seed: u64,
}

pub const RESULT_CSV_HEADER: &str =
    "scenario,scheme,n,m,aperture,gamma_db,capacity_mean,capacity_stderr,det_rt,det_rr,seed";

impl ResultRow {
    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.scenario,
            self.scheme,
            self.n,
            self.m,
            self.aperture,
            self.gamma_db,
            self.capacity_mean,
            self.capacity_stderr,
            self.det_rt,
            self.det_rr,
            self.seed
        )
    }
}

/// Per-iteration convergence record emitted by the `convergence` scenario as a
/// companion file (the result schema has no iteration column).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub scenario: String,
    pub scheme: String,
    pub seed: u64,
    pub iteration: usize,
    pub objective: f64,
    pub eval_capacity: f64,
    pub det_rt: f64,
    pub det_rr: f64,
}

pub const TRACE_CSV_HEADER: &str =
    "scenario,scheme,seed,iteration,objective,eval_capacity,det_rt,det_rr";

impl TraceRow {
    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.scenario,
            self.scheme,
            self.seed,
            self.iteration,
            self.objective,
            self.eval_capacity,
            self.det_rt,
            self.det_rr
        )
    }
}

/// Everything a scenario run produces.
#[derive(Debug, Default)]
pub struct ScenarioOutput {
    pub rows: Vec<ResultRow>,
    pub trace_rows: Vec<TraceRow>,
    /// Human-readable lines for the terminal (positions, check outcomes, ...).
    pub messages: Vec<String>,
    /// Failed validation checks; nonzero exits the CLI with an error.
    pub failed_checks: usize,
}

/// Serializes result rows: header, `\n` endings, `.` decimal separator, full
/// shortest-roundtrip float precision.
pub fn result_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(RESULT_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

pub fn trace_csv(rows: &[TraceRow]) -> String {
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

pub fn write_result_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(result_csv(rows).as_bytes())?;
    Ok(())
}

pub fn write_trace_csv(rows: &[TraceRow], path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(trace_csv(rows).as_bytes())?;
    Ok(())
}
