//! Position-dependent spatial correlation matrices and their factorizations.
//!
//! All distances are stored in wavelength units, so the physical `2 pi / lambda`
//! factor reduces to `2 pi * spacing`. A [`CorrelationMatrix`] is built from a
//! validated [`PositionVector`] (entries `J0(2 pi |t_i - t_j|)`) or from raw
//! entries checked against the type invariants, and exposes the base-2
//! log-determinant, the symmetric PSD square root, and the spectrum.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::special::j0;

/// Eigenvalues below this floor are clamped inside [`CorrelationMatrix::log_det2`]
/// and the result is flagged; keeps swarm fitness finite and ordered when
/// candidates collapse onto each other.
pub const SINGULARITY_FLOOR: f64 = 1e-12;

/// Numerical slack allowed on the minimum-spacing invariant.
pub const SPACING_SLACK: f64 = 1e-12;

/// Ordered antenna coordinates within one linear aperture, in wavelengths.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionVector {
    coords: Vec<f64>,
    aperture: f64,
    d_min: f64,
}

impl PositionVector {
    /// Validates and wraps a coordinate vector.
    ///
    /// Requirements: all coordinates finite, strictly ascending, inside
    /// `[0, aperture]`, with consecutive gaps at least `d_min` (up to
    /// [`SPACING_SLACK`]).
    pub fn new(coords: Vec<f64>, aperture: f64, d_min: f64) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("position vector must hold at least one antenna"));
        }
        if !aperture.is_finite() || aperture <= 0.0 {
            return Err(Error::invalid(format!("aperture must be positive, got {aperture}")));
        }
        if !d_min.is_finite() || d_min < 0.0 {
            return Err(Error::invalid(format!("d_min must be nonnegative, got {d_min}")));
        }
        for (i, &c) in coords.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::invariant(format!("coordinate {i} is not finite")));
            }
            if !(0.0..=aperture).contains(&c) {
                return Err(Error::invariant(format!(
                    "coordinate {c} outside aperture [0, {aperture}]"
                )));
            }
        }
        for w in coords.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::invariant(format!(
                    "coordinates must be strictly ascending, got {} then {}",
                    w[0], w[1]
                )));
            }
            if w[1] - w[0] < d_min - SPACING_SLACK {
                return Err(Error::invariant(format!(
                    "gap {} below minimum spacing {d_min}",
                    w[1] - w[0]
                )));
            }
        }
        Ok(Self { coords, aperture, d_min })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    pub fn d_min(&self) -> f64 {
        self.d_min
    }
}

/// Flagged result of a log-determinant evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    /// Base-2 log determinant with eigenvalues clamped at [`SINGULARITY_FLOOR`].
    pub value: f64,
    /// True when at least one eigenvalue was clamped; the unclamped
    /// determinant is then effectively zero (log -> -inf sentinel regime).
    pub clamped: bool,
}

/// Eigenvalues (descending) and condition number of a correlation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// `mu_1 / max(mu_N, floor)`; capped for rank-deficient matrices.
    pub condition_number: f64,
}

/// Real symmetric positive semi-definite correlation matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    entries: DMatrix<f64>,
}

/// Builds the spatial correlation matrix of a position vector:
/// `[R]_{ij} = J0(2 pi |t_i - t_j|)`.
pub fn build_correlation(positions: &PositionVector) -> CorrelationMatrix {
    CorrelationMatrix::from_positions(positions)
}

impl CorrelationMatrix {
    /// Correlation matrix of a validated position vector.
    pub fn from_positions(positions: &PositionVector) -> Self {
        let n = positions.len();
        let c = positions.coords();
        let mut entries = DMatrix::identity(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = j0(2.0 * std::f64::consts::PI * (c[i] - c[j]).abs());
                entries[(i, j)] = v;
                entries[(j, i)] = v;
            }
        }
        Self { entries }
    }

    /// Exact identity correlation of size `n` (fully decorrelated antennas).
    pub fn identity(n: usize) -> Self {
        Self { entries: DMatrix::identity(n, n) }
    }

    /// Wraps raw entries after checking the type invariants: symmetry and unit
    /// diagonal to `1e-14`, and minimum eigenvalue at least `-1e-10`.
    pub fn from_entries(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::invariant("correlation matrix must be square"));
        }
        let n = entries.nrows();
        for i in 0..n {
            if (entries[(i, i)] - 1.0).abs() > 1e-14 {
                return Err(Error::invariant(format!(
                    "diagonal entry ({i},{i}) = {} is not 1",
                    entries[(i, i)]
                )));
            }
            for j in (i + 1)..n {
                if (entries[(i, j)] - entries[(j, i)]).abs() > 1e-14 {
                    return Err(Error::invariant(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        let min_eig = nalgebra::SymmetricEigen::new(entries.clone())
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::invariant(format!(
                "matrix is not positive semi-definite (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// True when the matrix is exactly the identity. Identity correlations are
    /// common (the fully decorrelated reference) and let capacity evaluation
    /// skip the square-root multiplications without changing any value.
    pub fn is_identity(&self) -> bool {
        self.entries == DMatrix::identity(self.dim(), self.dim())
    }

    /// Base-2 log determinant through the symmetric eigendecomposition, with
    /// eigenvalues clamped at [`SINGULARITY_FLOOR`].
    pub fn log_det2(&self) -> LogDet {
        let eig = nalgebra::SymmetricEigen::new(self.entries.clone());
        let mut value = 0.0;
        let mut clamped = false;
        for &lambda in eig.eigenvalues.iter() {
            if lambda < SINGULARITY_FLOOR {
                clamped = true;
                value += SINGULARITY_FLOOR.log2();
            } else {
                value += lambda.log2();
            }
        }
        LogDet { value, clamped }
    }

    /// Determinant (product of clamped eigenvalues).
    pub fn det(&self) -> f64 {
        self.log_det2().value.exp2()
    }

    /// Unique symmetric PSD square root, by eigendecomposition with negative
    /// eigenvalues clamped to zero. Exact for the identity.
    pub fn sqrt(&self) -> DMatrix<f64> {
        if self.is_identity() {
            return self.entries.clone();
        }
        let eig = nalgebra::SymmetricEigen::new(self.entries.clone());
        let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose()
    }

    /// Eigenvalues in descending order plus the condition number
    /// `mu_1 / max(mu_N, floor)`.
    pub fn spectrum(&self) -> Spectrum {
        let mut eigenvalues: Vec<f64> =
            nalgebra::SymmetricEigen::new(self.entries.clone()).eigenvalues.iter().cloned().collect();
        eigenvalues.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let top = eigenvalues[0];
        let bottom = eigenvalues[eigenvalues.len() - 1].max(SINGULARITY_FLOOR);
        Spectrum { eigenvalues, condition_number: top / bottom }
    }
}

/// Convenience wrapper mirroring [`CorrelationMatrix::log_det2`].
pub fn log_det2(matrix: &CorrelationMatrix) -> LogDet {
    matrix.log_det2()
}

/// Convenience wrapper mirroring [`CorrelationMatrix::sqrt`].
pub fn matrix_sqrt(matrix: &CorrelationMatrix) -> DMatrix<f64> {
    matrix.sqrt()
}
