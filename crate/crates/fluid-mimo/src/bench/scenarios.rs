//! Scenario implementations: grid enumeration, per-point shared evaluation
//! sets, scheme evaluation, and the self-check suite behind `validate`.

use crate::ao::{
    ao_optimize, evaluation_samples, AoConfig, OptimizationTrace, SolverBackend, SolverKind,
};
use crate::bench::{
    baseline_fpa, baseline_random_best, baseline_tx_only, ExperimentSpec, ResultRow, Scenario,
    ScenarioOutput, Scheme, TraceRow,
};
use crate::capacity::{ergodic_capacity, high_snr_capacity, iid_capacity, CapacityEstimate, SnrSpec};
use crate::channel::{
    empirical_correlation, physical_channel, sample_gaussian_set, ChannelSampleSet, PathParameters,
    Side,
};
use crate::correlation::{build_correlation, PositionVector};
use crate::error::Result;
use crate::feasibility::{sorted_uniform_random_init, ApertureSpec};
use crate::pso::SwarmConfig;
use crate::rng::derive_seed;
use crate::sca::{logdet_gradient, ScaConfig};
use crate::special::{digamma_int, j0};

const POINT_TAG: u64 = 0x504f_494e; // "POIN"
const SCHEME_TAG: u64 = 0x5343_4845; // "SCHE"
const RUN_TAG: u64 = 0x5255_4e00; // "RUN"

/// Runs a scenario and collects rows, trace rows, and terminal messages.
/// Deterministic in the spec (including its seed).
pub fn run_scenario(spec: &ExperimentSpec) -> Result<ScenarioOutput> {
    spec.validate()?;
    match spec.scenario {
        Scenario::SpacingCurve => spacing_curve(spec),
        Scenario::SweepSnr | Scenario::SweepAperture | Scenario::SweepN => sweep(spec),
        Scenario::Convergence => convergence(spec),
        Scenario::Optimize => optimize(spec),
        Scenario::Validate => validate(spec),
    }
}

fn solver_backend(kind: SolverKind) -> SolverBackend {
    match kind {
        SolverKind::Pso => SolverBackend::Pso(SwarmConfig::default()),
        SolverKind::Sca => SolverBackend::Sca(ScaConfig::default()),
    }
}

fn scheme_solver(scheme: Scheme, fallback: SolverKind) -> SolverBackend {
    match scheme {
        Scheme::AoPso => solver_backend(SolverKind::Pso),
        Scheme::AoSca => solver_backend(SolverKind::Sca),
        _ => solver_backend(fallback),
    }
}

struct SchemeOutcome {
    capacity: CapacityEstimate,
    det_rt: f64,
    det_rr: f64,
}

/// Scores one scheme at one grid point on the point's shared evaluation set.
fn evaluate_scheme(
    scheme: Scheme,
    n: usize,
    m: usize,
    aperture: f64,
    spec: &ExperimentSpec,
    snr: SnrSpec,
    eval_set: &ChannelSampleSet,
    scheme_seed: u64,
) -> Result<SchemeOutcome> {
    let tx_spec = ApertureSpec::new(aperture, spec.d_min, n)?;
    let rx_spec = ApertureSpec::new(aperture, spec.d_min, m)?;
    let pair = |t: &PositionVector, r: &PositionVector| -> Result<SchemeOutcome> {
        Ok(SchemeOutcome {
            capacity: ergodic_capacity(t, r, snr, eval_set)?,
            det_rt: build_correlation(t).log_det2().value.exp2(),
            det_rr: build_correlation(r).log_det2().value.exp2(),
        })
    };
    match scheme {
        Scheme::Iid => Ok(SchemeOutcome {
            capacity: iid_capacity(n, m, snr, eval_set)?,
            det_rt: 1.0,
            det_rr: 1.0,
        }),
        Scheme::Fpa => {
            let t = baseline_fpa(&tx_spec)?;
            let r = baseline_fpa(&rx_spec)?;
            pair(&t, &r)
        }
        Scheme::RandomBest => {
            let opt_set = sample_gaussian_set(
                m,
                n,
                spec.opt_samples,
                derive_seed(scheme_seed, &[RUN_TAG]),
                1.0,
            )?;
            let (t, r) =
                baseline_random_best(&tx_spec, &rx_spec, snr, &opt_set, spec.trials, scheme_seed)?;
            pair(&t, &r)
        }
        Scheme::TxOnly => {
            let mut cfg = AoConfig::new(scheme_solver(scheme, spec.solver), snr);
            cfg.opt_samples = spec.opt_samples;
            cfg.eval_samples = spec.eval_samples;
            cfg.master_seed = scheme_seed;
            let trace = baseline_tx_only(&tx_spec, &rx_spec, &cfg)?;
            pair(&trace.final_tx, &trace.final_rx)
        }
        Scheme::AoPso | Scheme::AoSca => {
            let mut cfg = AoConfig::new(scheme_solver(scheme, spec.solver), snr);
            cfg.opt_samples = spec.opt_samples;
            cfg.eval_samples = spec.eval_samples;
            cfg.master_seed = scheme_seed;
            let trace = ao_optimize(&tx_spec, &rx_spec, &cfg)?;
            pair(&trace.final_tx, &trace.final_rx)
        }
    }
}

/// Grid sweep over SNR, aperture, or antenna count.
fn sweep(spec: &ExperimentSpec) -> Result<ScenarioOutput> {
    let mut output = ScenarioOutput::default();
    let points: Vec<(usize, usize, f64, f64)> = match spec.scenario {
        Scenario::SweepSnr => {
            spec.snrs_db.iter().map(|&db| (spec.n, spec.m, spec.aperture, db)).collect()
        }
        Scenario::SweepAperture => spec
            .apertures
            .iter()
            .flat_map(|&a| spec.snrs_db.iter().map(move |&db| (spec.n, spec.m, a, db)))
            .collect(),
        Scenario::SweepN => spec
            .n_list
            .iter()
            .flat_map(|&k| spec.snrs_db.iter().map(move |&db| (k, k, spec.aperture, db)))
            .collect(),
        _ => unreachable!("sweep() only handles sweep scenarios"),
    };

    for (index, &(n, m, aperture, snr_db)) in points.iter().enumerate() {
        let snr = SnrSpec::from_db(snr_db)?;
        let eval_set = sample_gaussian_set(
            m,
            n,
            spec.eval_samples,
            derive_seed(spec.seed, &[POINT_TAG, index as u64]),
            1.0,
        )?;
        for (scheme_index, &scheme) in spec.schemes.iter().enumerate() {
            let scheme_seed =
                derive_seed(spec.seed, &[SCHEME_TAG, index as u64, scheme_index as u64]);
            let outcome =
                evaluate_scheme(scheme, n, m, aperture, spec, snr, &eval_set, scheme_seed)?;
            output.rows.push(ResultRow {
                scenario: spec.scenario.id().to_string(),
                scheme: scheme.name().to_string(),
                n,
                m,
                aperture,
                gamma_db: snr_db,
                capacity_mean: outcome.capacity.mean_bps_hz,
                capacity_stderr: outcome.capacity.mc_std_error,
                det_rt: outcome.det_rt,
                det_rr: outcome.det_rr,
                seed: spec.seed,
            });
        }
    }
    Ok(output)
}

/// Capacity versus uniform inter-element spacing. Emits three series per SNR:
/// the Monte-Carlo curve (`mc`), the deterministic high-SNR approximation
/// (`high_snr`, square systems only), and the shared-sample `iid` reference
/// (one row, aperture column 0). The aperture column carries the spacing `d`
/// since the array spans exactly `(count-1) d`.
fn spacing_curve(spec: &ExperimentSpec) -> Result<ScenarioOutput> {
    let mut output = ScenarioOutput::default();
    let mut grid = Vec::new();
    for i in 0.. {
        let d = spec.spacing_start + i as f64 * spec.spacing_step;
        if d > spec.spacing_stop + 1e-9 {
            break;
        }
        grid.push(d);
    }

    for (si, &snr_db) in spec.snrs_db.iter().enumerate() {
        let snr = SnrSpec::from_db(snr_db)?;
        let eval_set = sample_gaussian_set(
            spec.m,
            spec.n,
            spec.eval_samples,
            derive_seed(spec.seed, &[POINT_TAG, si as u64]),
            1.0,
        )?;

        let iid = iid_capacity(spec.n, spec.m, snr, &eval_set)?;
        output.rows.push(ResultRow {
            scenario: spec.scenario.id().to_string(),
            scheme: "iid".to_string(),
            n: spec.n,
            m: spec.m,
            aperture: 0.0,
            gamma_db: snr_db,
            capacity_mean: iid.mean_bps_hz,
            capacity_stderr: iid.mc_std_error,
            det_rt: 1.0,
            det_rr: 1.0,
            seed: spec.seed,
        });

        for &spacing in &grid {
            let tx = uniform_spacing_positions(spec.n, spacing);
            let rx = uniform_spacing_positions(spec.m, spacing);
            let mc = ergodic_capacity(&tx, &rx, snr, &eval_set)?;
            let det_rt = build_correlation(&tx).log_det2().value.exp2();
            let det_rr = build_correlation(&rx).log_det2().value.exp2();
            output.rows.push(ResultRow {
                scenario: spec.scenario.id().to_string(),
                scheme: "mc".to_string(),
                n: spec.n,
                m: spec.m,
                aperture: spacing,
                gamma_db: snr_db,
                capacity_mean: mc.mean_bps_hz,
                capacity_stderr: mc.mc_std_error,
                det_rt,
                det_rr,
                seed: spec.seed,
            });
            if spec.n == spec.m {
                let approx = high_snr_capacity(&tx, &rx, snr)?;
                output.rows.push(ResultRow {
                    scenario: spec.scenario.id().to_string(),
                    scheme: "high_snr".to_string(),
                    n: spec.n,
                    m: spec.m,
                    aperture: spacing,
                    gamma_db: snr_db,
                    capacity_mean: approx,
                    capacity_stderr: 0.0,
                    det_rt,
                    det_rr,
                    seed: spec.seed,
                });
            }
        }
    }
    Ok(output)
}

/// Uniformly spaced positions `[0, d, 2d, ...]` viewed in an aperture of
/// exactly `(count-1) d`.
fn uniform_spacing_positions(count: usize, spacing: f64) -> PositionVector {
    let coords: Vec<f64> = (0..count).map(|i| i as f64 * spacing).collect();
    let aperture = spacing * (count.max(2) as f64 - 1.0);
    PositionVector::new(coords, aperture, 0.0).expect("uniform grid positions are valid")
}

/// Per-iteration convergence traces for the optimizing schemes, plus one final
/// row per scheme.
fn convergence(spec: &ExperimentSpec) -> Result<ScenarioOutput> {
    let mut output = ScenarioOutput::default();
    let tx_spec = ApertureSpec::new(spec.aperture, spec.d_min, spec.n)?;
    let rx_spec = ApertureSpec::new(spec.aperture, spec.d_min, spec.m)?;
    let snr = SnrSpec::from_db(spec.snrs_db[0])?;

    let schemes: Vec<Scheme> = spec
        .schemes
        .iter()
        .copied()
        .filter(|s| matches!(s, Scheme::AoPso | Scheme::AoSca))
        .collect();
    for (si, &scheme) in schemes.iter().enumerate() {
        let mut cfg = AoConfig::new(scheme_solver(scheme, spec.solver), snr);
        cfg.opt_samples = spec.opt_samples;
        cfg.eval_samples = spec.eval_samples;
        cfg.master_seed = derive_seed(spec.seed, &[RUN_TAG, si as u64]);
        let trace = ao_optimize(&tx_spec, &rx_spec, &cfg)?;
        push_trace(&mut output, spec, scheme.name(), &trace);
        let final_row = final_row_from_trace(spec, scheme.name(), snr, &cfg, &trace)?;
        output.rows.push(final_row);
        output.messages.push(format!(
            "{}: {} outer iterations, {} capacity-kernel evaluations",
            scheme.name(),
            trace.entries.len(),
            trace.kernel_evals
        ));
    }
    Ok(output)
}

fn push_trace(
    output: &mut ScenarioOutput,
    spec: &ExperimentSpec,
    scheme: &str,
    trace: &OptimizationTrace,
) {
    for entry in &trace.entries {
        output.trace_rows.push(TraceRow {
            scenario: spec.scenario.id().to_string(),
            scheme: scheme.to_string(),
            seed: spec.seed,
            iteration: entry.iteration,
            objective: entry.objective,
            eval_capacity: entry.eval_objective,
            det_rt: entry.det_rt,
            det_rr: entry.det_rr,
        });
    }
}

fn final_row_from_trace(
    spec: &ExperimentSpec,
    scheme: &str,
    snr: SnrSpec,
    cfg: &AoConfig,
    trace: &OptimizationTrace,
) -> Result<ResultRow> {
    let eval_set =
        evaluation_samples(cfg.master_seed, trace.final_rx.len(), trace.final_tx.len(), cfg.eval_samples);
    let capacity = ergodic_capacity(&trace.final_tx, &trace.final_rx, snr, &eval_set)?;
    let last = trace.entries.last();
    Ok(ResultRow {
        scenario: spec.scenario.id().to_string(),
        scheme: scheme.to_string(),
        n: trace.final_tx.len(),
        m: trace.final_rx.len(),
        aperture: spec.aperture,
        gamma_db: snr.db(),
        capacity_mean: capacity.mean_bps_hz,
        capacity_stderr: capacity.mc_std_error,
        det_rt: last.map(|e| e.det_rt).unwrap_or(f64::NAN),
        det_rr: last.map(|e| e.det_rr).unwrap_or(f64::NAN),
        seed: spec.seed,
    })
}

/// Single optimization run with the configured backend; prints positions and
/// work counters and emits one row.
fn optimize(spec: &ExperimentSpec) -> Result<ScenarioOutput> {
    let mut output = ScenarioOutput::default();
    let tx_spec = ApertureSpec::new(spec.aperture, spec.d_min, spec.n)?;
    let rx_spec = ApertureSpec::new(spec.aperture, spec.d_min, spec.m)?;
    let snr = SnrSpec::from_db(spec.snrs_db[0])?;
    let scheme = match spec.solver {
        SolverKind::Pso => Scheme::AoPso,
        SolverKind::Sca => Scheme::AoSca,
    };
    let mut cfg = AoConfig::new(solver_backend(spec.solver), snr);
    cfg.opt_samples = spec.opt_samples;
    cfg.eval_samples = spec.eval_samples;
    cfg.master_seed = derive_seed(spec.seed, &[RUN_TAG]);
    let trace = ao_optimize(&tx_spec, &rx_spec, &cfg)?;
    let row = final_row_from_trace(spec, scheme.name(), snr, &cfg, &trace)?;

    output.messages.push(format!("solver: {}", spec.solver));
    output.messages.push(format!("tx positions: {:?}", trace.final_tx.coords()));
    output.messages.push(format!("rx positions: {:?}", trace.final_rx.coords()));
    output.messages.push(format!(
        "det(R_T) = {:.4}, det(R_R) = {:.4}",
        row.det_rt, row.det_rr
    ));
    output.messages.push(format!(
        "capacity at {} dB: {:.4} +- {:.4} bps/Hz",
        snr.db(),
        row.capacity_mean,
        row.capacity_stderr
    ));
    output.messages.push(format!(
        "outer iterations: {}, capacity-kernel evaluations: {}",
        trace.entries.len(),
        trace.kernel_evals
    ));
    push_trace(&mut output, spec, scheme.name(), &trace);
    output.rows.push(row);
    Ok(output)
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

/// Statistical self-checks: the multipath channel against the closed-form
/// correlation law, the Wishart log-determinant identity, the analytic
/// gradient against central differences, and empirical recovery of a known
/// correlation from Kronecker samples.
fn validate(spec: &ExperimentSpec) -> Result<ScenarioOutput> {
    let mut output = ScenarioOutput::default();
    let checks = vec![
        check_channel_bessel_law(spec.seed)?,
        check_wishart_identity(spec.seed)?,
        check_gradient_oracle(spec.seed)?,
        check_kronecker_roundtrip(spec.seed)?,
    ];
    for check in checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        output.messages.push(format!("{status} {} ({})", check.name, check.detail));
        if !check.passed {
            output.failed_checks += 1;
        }
    }
    Ok(output)
}

fn check_channel_bessel_law(seed: u64) -> Result<Check> {
    let spacing = 0.25;
    let t = PositionVector::new(vec![0.0, spacing], 1.0, 0.0).unwrap();
    let draws = 800;
    let paths_per_draw = 500;
    let mut cross = Vec::with_capacity(draws);
    for d in 0..draws {
        let paths = PathParameters::sample(paths_per_draw, derive_seed(seed, &[1, d as u64]))?;
        let h = physical_channel(&t, &t, &paths, 1.0)?;
        let mut v = 0.0;
        for j in 0..2 {
            v += (h[(j, 0)] * h[(j, 1)].conj()).re / 2.0;
        }
        cross.push(v);
    }
    let mean: f64 = cross.iter().sum::<f64>() / draws as f64;
    let var: f64 = cross.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
    let se = (var / draws as f64).sqrt();
    let expected = j0(2.0 * std::f64::consts::PI * spacing);
    let err = (mean - expected).abs();
    Ok(Check {
        name: "channel-bessel-law",
        passed: err <= 3.0 * se,
        detail: format!("empirical {mean:.4} vs J0 {expected:.4}, |err| {err:.4} <= 3se {:.4}", 3.0 * se),
    })
}

fn check_wishart_identity(seed: u64) -> Result<Check> {
    let n = 4;
    let set = sample_gaussian_set(n, n, 5000, derive_seed(seed, &[2]), 1.0)?;
    let mut vals = Vec::with_capacity(set.len());
    for g in set.samples() {
        let w = g * g.adjoint();
        let chol = nalgebra::Cholesky::new(w).expect("wishart sample is PD");
        vals.push(chol.l().diagonal().iter().map(|d| 2.0 * d.re.ln()).sum::<f64>());
    }
    let mean: f64 = vals.iter().sum::<f64>() / vals.len() as f64;
    let var: f64 = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (vals.len() - 1) as f64;
    let se = (var / vals.len() as f64).sqrt();
    let expected: f64 = (1..=n as u32).map(|m| digamma_int(m).unwrap()).sum();
    let err = (mean - expected).abs();
    Ok(Check {
        name: "wishart-logdet",
        passed: err <= 3.0 * se,
        detail: format!("mean {mean:.4} vs {expected:.4}, |err| {err:.4} <= 3se {:.4}", 3.0 * se),
    })
}

fn check_gradient_oracle(seed: u64) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for n in 2..=6usize {
        let spec = ApertureSpec::new(2.0, 0.3, n)?;
        for i in 0..2u64 {
            let p = sorted_uniform_random_init(&spec, derive_seed(seed, &[3, n as u64, i]));
            let Ok(grad) = logdet_gradient(&p) else { continue };
            let h = 1e-6;
            let mut err = 0.0f64;
            let mut scale = 1e-9f64;
            for d in 0..n {
                let mut up = p.coords().to_vec();
                let mut down = up.clone();
                up[d] += h;
                down[d] -= h;
                let shift = 2.0 * h;
                let up: Vec<f64> = up.iter().map(|c| c + shift).collect();
                let down: Vec<f64> = down.iter().map(|c| c + shift).collect();
                let fu = build_correlation(&PositionVector::new(up, 100.0, 0.0).unwrap())
                    .log_det2()
                    .value;
                let fd = build_correlation(&PositionVector::new(down, 100.0, 0.0).unwrap())
                    .log_det2()
                    .value;
                let fdiff = (fu - fd) / (2.0 * h);
                err = err.max((grad[d] - fdiff).abs());
                scale = scale.max(grad[d].abs());
            }
            worst = worst.max(err / scale);
            checked += 1;
        }
    }
    Ok(Check {
        name: "gradient-oracle",
        passed: worst <= 1e-5 && checked >= 8,
        detail: format!("{checked} configurations, worst rel err {worst:.2e}"),
    })
}

fn check_kronecker_roundtrip(seed: u64) -> Result<Check> {
    let p = PositionVector::new(vec![0.0, 0.25, 0.6], 1.0, 0.0).unwrap();
    let rt = build_correlation(&p);
    let sqrt_rt = rt.sqrt();
    let id = nalgebra::DMatrix::identity(3, 3);
    let set = sample_gaussian_set(3, 3, 20_000, derive_seed(seed, &[4]), 1.0)?;
    let hs: Vec<_> = set
        .samples()
        .iter()
        .map(|g| crate::channel::kronecker_channel(&id, &sqrt_rt, g).unwrap())
        .collect();
    let est = empirical_correlation(&hs, Side::Tx)?;
    let mut max_err = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            max_err = max_err.max((est.matrix[(i, j)] - rt.entries()[(i, j)]).abs());
        }
    }
    Ok(Check {
        name: "kronecker-roundtrip",
        passed: max_err <= 0.02,
        detail: format!("max abs entry error {max_err:.4} <= 0.02"),
    })
}
