//! Gradient-based solver for one side's subproblem: the closed-form gradient
//! of `log2 det R(t)` through `J1`, and projected gradient ascent with
//! backtracking.
//!
//! The objective is SNR-independent: maximizing the log-determinant of the
//! side's correlation matrix is the high-SNR surrogate for the capacity
//! subproblem, so no channel samples are involved anywhere here.

use nalgebra::DMatrix;

use crate::correlation::{build_correlation, PositionVector, SINGULARITY_FLOOR};
use crate::error::{Error, Result};
use crate::feasibility::{project, ApertureSpec};
use crate::special::j1;

const LN_2: f64 = std::f64::consts::LN_2;

/// Inner-loop configuration. Defaults: 50 ascent steps per subproblem solve,
/// initial step 0.02 wavelengths, halving backtracks capped at 20.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaConfig {
    pub inner_iterations: usize,
    pub initial_step: f64,
    pub shrink: f64,
    pub max_backtracks: usize,
}

impl Default for ScaConfig {
    fn default() -> Self {
        Self { inner_iterations: 50, initial_step: 0.02, shrink: 0.5, max_backtracks: 20 }
    }
}

/// Result of one projected-gradient-ascent solve.
#[derive(Debug, Clone)]
pub struct PgaResult {
    pub positions: PositionVector,
    /// Accepted objective values, starting with the initial point; strictly
    /// increasing after the first entry.
    pub trace: Vec<f64>,
    /// Objective/gradient evaluations spent (one per log-det or gradient).
    pub kernel_evals: u64,
}

/// Gradient of `f(t) = log2 det R(t)` in wavelength units:
/// `df/dt_n = -(4 pi / ln 2) sum_{j != n} [R^{-1}]_{nj} J1(2 pi |t_n - t_j|) sgn(t_n - t_j)`.
///
/// The inverse comes from the same symmetric eigendecomposition used for the
/// log-determinant; an eigenvalue below the singularity floor aborts with the
/// offending value.
pub fn logdet_gradient(positions: &PositionVector) -> Result<Vec<f64>> {
    let r = build_correlation(positions);
    let eig = nalgebra::SymmetricEigen::new(r.entries().clone());
    let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig < SINGULARITY_FLOOR {
        return Err(Error::Singular { min_eigenvalue: min_eig, floor: SINGULARITY_FLOOR });
    }
    let inv_diag = eig.eigenvalues.map(|l| 1.0 / l);
    let r_inv = &eig.eigenvectors * DMatrix::from_diagonal(&inv_diag) * eig.eigenvectors.transpose();

    let coords = positions.coords();
    let n = coords.len();
    let scale = -(4.0 * std::f64::consts::PI) / LN_2;
    let mut grad = vec![0.0; n];
    for a in 0..n {
        let mut acc = 0.0;
        for b in 0..n {
            if a == b {
                continue;
            }
            let delta = coords[a] - coords[b];
            let sign = if delta > 0.0 {
                1.0
            } else if delta < 0.0 {
                -1.0
            } else {
                0.0
            };
            acc += r_inv[(a, b)] * j1(2.0 * std::f64::consts::PI * delta.abs()) * sign;
        }
        grad[a] = scale * acc;
    }
    Ok(grad)
}

/// Clamped log-det objective used for line-search comparisons.
fn objective(positions: &PositionVector) -> f64 {
    build_correlation(positions).log_det2().value
}

/// Projected gradient ascent on `log2 det R(t)` with backtracking.
///
/// Each inner iteration restarts the step size at `initial_step` and halves it
/// until the projected step strictly increases the objective; if no step
/// within `max_backtracks` improves, the solve stops early. The returned trace
/// holds exactly the accepted objective values (the initial one first) and is
/// non-decreasing.
pub fn pga_solve(start: &PositionVector, spec: &ApertureSpec, cfg: &ScaConfig) -> PgaResult {
    let mut current = start.clone();
    let mut current_f = objective(&current);
    let mut trace = vec![current_f];
    let mut kernel_evals: u64 = 1;

    for _ in 0..cfg.inner_iterations {
        let grad = match logdet_gradient(&current) {
            Ok(g) => g,
            // no usable ascent direction at a singular iterate; stop here
            Err(_) => break,
        };
        kernel_evals += 1;

        let mut eta = cfg.initial_step;
        let mut accepted = false;
        for _ in 0..cfg.max_backtracks {
            let raw: Vec<f64> =
                current.coords().iter().zip(grad.iter()).map(|(x, g)| x + eta * g).collect();
            let candidate = project(&raw, spec);
            let f = objective(&candidate);
            kernel_evals += 1;
            if f > current_f {
                current = candidate;
                current_f = f;
                trace.push(f);
                accepted = true;
                break;
            }
            eta *= cfg.shrink;
        }
        if !accepted {
            break;
        }
    }

    PgaResult { positions: current, trace, kernel_evals }
}
