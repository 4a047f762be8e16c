//! Monte-Carlo ergodic capacity and the closed-form benchmarks (high-SNR,
//! low-SNR, i.i.d. bound, correlation capacity loss).
//!
//! SNR convention: every function takes the per-stream SNR `gamma = P/(N sigma^2)`
//! directly. The CLI layer additionally accepts decibels interpreted as
//! `10 log10(gamma)`; note this reading shifts curves by `10 log10(N)` relative
//! to a total-power `P/sigma^2` axis.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::channel::{apply_kronecker, ChannelSampleSet};
use crate::correlation::{build_correlation, CorrelationMatrix, PositionVector};
use crate::error::{Error, Result};
use crate::special::digamma_int;

type CMatrix = DMatrix<Complex<f64>>;

const LN_2: f64 = std::f64::consts::LN_2;

/// Per-stream SNR `gamma = P / (N sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSpec {
    gamma: f64,
}

impl SnrSpec {
    pub fn from_gamma(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::invalid(format!("gamma must be positive, got {gamma}")));
        }
        Ok(Self { gamma })
    }

    /// Decibel constructor, `gamma = 10^(db/10)`.
    pub fn from_db(db: f64) -> Result<Self> {
        if !db.is_finite() {
            return Err(Error::invalid(format!("snr-db must be finite, got {db}")));
        }
        Self::from_gamma(10f64.powf(db / 10.0))
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn db(&self) -> f64 {
        10.0 * self.gamma.log10()
    }
}

/// Monte-Carlo capacity estimate in bps/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityEstimate {
    pub mean_bps_hz: f64,
    pub mc_std_error: f64,
    pub sample_count: usize,
}

/// Instantaneous mutual information `log2 det(I + gamma H H^H)`, computed by a
/// Cholesky factorization of the Gram matrix on the smaller dimension side
/// (same value by the Weinstein-Aronszajn determinant identity).
pub fn instantaneous_mi(h: &CMatrix, gamma: f64) -> f64 {
    let (m, n) = (h.nrows(), h.ncols());
    let gram = if m <= n { h * h.adjoint() } else { h.adjoint() * h };
    let dim = gram.nrows();
    let mut k = gram * Complex::new(gamma, 0.0);
    for i in 0..dim {
        k[(i, i)] += Complex::new(1.0, 0.0);
    }
    let chol = nalgebra::Cholesky::new(k)
        .expect("I + gamma * Gram is positive definite for finite inputs");
    chol.l().diagonal().iter().map(|d| 2.0 * d.re.log2()).sum()
}

/// Shared-sample capacity for explicit square-root factors: the mean over the
/// batch of `instantaneous_mi(sqrtRR G sqrtRT)`. This is the evaluation kernel
/// both optimizers and all baselines share, so values are comparable
/// bit-for-bit across schemes on the same sample set.
pub(crate) fn mean_mi_for_sqrts(
    sqrt_rr: &DMatrix<f64>,
    sqrt_rt: &DMatrix<f64>,
    gamma: f64,
    samples: &ChannelSampleSet,
) -> (f64, f64) {
    let mut acc = 0.0;
    let mut acc_sq = 0.0;
    for g in samples.samples() {
        let h = apply_kronecker(sqrt_rr, sqrt_rt, g);
        let mi = instantaneous_mi(&h, gamma);
        acc += mi;
        acc_sq += mi * mi;
    }
    let count = samples.len() as f64;
    let mean = acc / count;
    let var = ((acc_sq - count * mean * mean) / (count - 1.0)).max(0.0);
    (mean, (var / count).sqrt())
}

/// Per-sample mutual information values for explicit correlation matrices on
/// a shared sample set. Useful for paired comparisons between schemes, where
/// the variance of the per-sample difference is what matters.
pub fn instantaneous_mi_batch(
    rt: &CorrelationMatrix,
    rr: &CorrelationMatrix,
    snr: SnrSpec,
    samples: &ChannelSampleSet,
) -> Result<Vec<f64>> {
    let (rows, cols) = samples.dims();
    if rr.dim() != rows || rt.dim() != cols {
        return Err(Error::invalid(format!(
            "sample dims {rows}x{cols} do not match correlations {}x{}",
            rr.dim(),
            rt.dim()
        )));
    }
    let sqrt_rr = rr.sqrt();
    let sqrt_rt = rt.sqrt();
    Ok(samples
        .samples()
        .iter()
        .map(|g| instantaneous_mi(&apply_kronecker(&sqrt_rr, &sqrt_rt, g), snr.gamma()))
        .collect())
}

/// Monte-Carlo ergodic capacity for explicit correlation matrices on a shared
/// sample set.
pub fn ergodic_capacity_with(
    rt: &CorrelationMatrix,
    rr: &CorrelationMatrix,
    snr: SnrSpec,
    samples: &ChannelSampleSet,
) -> Result<CapacityEstimate> {
    let (rows, cols) = samples.dims();
    if rr.dim() != rows || rt.dim() != cols {
        return Err(Error::invalid(format!(
            "sample dims {rows}x{cols} do not match correlations {}x{}",
            rr.dim(),
            rt.dim()
        )));
    }
    let (mean, se) = mean_mi_for_sqrts(&rr.sqrt(), &rt.sqrt(), snr.gamma(), samples);
    Ok(CapacityEstimate { mean_bps_hz: mean, mc_std_error: se, sample_count: samples.len() })
}

/// Monte-Carlo ergodic capacity of a position pair on a shared sample set.
pub fn ergodic_capacity(
    tx: &PositionVector,
    rx: &PositionVector,
    snr: SnrSpec,
    samples: &ChannelSampleSet,
) -> Result<CapacityEstimate> {
    ergodic_capacity_with(&build_correlation(tx), &build_correlation(rx), snr, samples)
}

/// The i.i.d. MIMO bound: ergodic capacity with identity correlations on both
/// sides. Bit-identical to [`ergodic_capacity_with`] at identity correlations
/// on the same sample set.
pub fn iid_capacity(
    n: usize,
    m: usize,
    snr: SnrSpec,
    samples: &ChannelSampleSet,
) -> Result<CapacityEstimate> {
    ergodic_capacity_with(&CorrelationMatrix::identity(n), &CorrelationMatrix::identity(m), snr, samples)
}

/// Deterministic high-SNR approximation
/// `N log2 gamma + log2 det R_T + log2 det R_R + kappa_N`, with
/// `kappa_N = (1/ln 2) sum_{m=1..N} psi(m)`. Defined for square systems.
pub fn high_snr_capacity(tx: &PositionVector, rx: &PositionVector, snr: SnrSpec) -> Result<f64> {
    if tx.len() != rx.len() {
        return Err(Error::UnsupportedConfiguration(format!(
            "high-SNR approximation requires N = M, got N = {}, M = {}",
            tx.len(),
            rx.len()
        )));
    }
    let n = tx.len();
    let ld_t = build_correlation(tx).log_det2().value;
    let ld_r = build_correlation(rx).log_det2().value;
    Ok(n as f64 * snr.gamma().log2() + ld_t + ld_r + wishart_constant(n))
}

/// `kappa_N = (1/ln 2) sum_{m=1}^{N} psi(m)`.
pub fn wishart_constant(n: usize) -> f64 {
    (1..=n as u32).map(|m| digamma_int(m).expect("m >= 1")).sum::<f64>() / LN_2
}

/// Low-SNR approximation `N M gamma / ln 2`, independent of positions.
pub fn low_snr_capacity(n: usize, m: usize, snr: SnrSpec) -> f64 {
    (n * m) as f64 * snr.gamma() / LN_2
}

/// High-SNR capacity loss relative to the i.i.d. bound:
/// `-log2 det R_T - log2 det R_R`, clamped at zero (Hadamard bound).
pub fn capacity_loss(tx: &PositionVector, rx: &PositionVector) -> f64 {
    let ld_t = build_correlation(tx).log_det2().value;
    let ld_r = build_correlation(rx).log_det2().value;
    (-(ld_t + ld_r)).max(0.0)
}
