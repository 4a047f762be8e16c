//! Channel sample generation.
//!
//! Three pieces: seeded i.i.d. circularly-symmetric Gaussian batches shared
//! across candidate evaluations, the Kronecker assembly
//! `H = R_R^{1/2} G R_T^{1/2}`, and the geometric multipath channel built from
//! unit-modulus field response vectors. The multipath model is kept as an
//! independent statistical route to the `J0` correlation law: averaging its
//! samples over random path angles must reproduce the same correlation
//! matrices the closed form predicts.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand_distr::{Distribution, Normal, Uniform};

use crate::correlation::PositionVector;
use crate::error::{Error, Result};
use crate::rng::keyed_rng;

type CMatrix = DMatrix<Complex<f64>>;

const SAMPLE_STREAM_TAG: u64 = 0x4753; // "GS"
const PATH_STREAM_TAG: u64 = 0x5048; // "PH"

/// A seeded, reusable batch of i.i.d. complex-Gaussian matrices.
#[derive(Debug, Clone)]
pub struct ChannelSampleSet {
    samples: Vec<CMatrix>,
    seed: u64,
    gain: f64,
    rows: usize,
    cols: usize,
}

impl ChannelSampleSet {
    pub fn samples(&self) -> &[CMatrix] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// (rows, cols) = (M, N) of every sample.
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

/// Draws `count` matrices of shape `rows x cols` with i.i.d. `CN(0, gain)`
/// entries. Each sample comes from its own stream keyed by `(seed, index)`,
/// so the batch is reproducible regardless of evaluation order.
pub fn sample_gaussian_set(
    rows: usize,
    cols: usize,
    count: usize,
    seed: u64,
    gain: f64,
) -> Result<ChannelSampleSet> {
    if rows == 0 || cols == 0 || count == 0 {
        return Err(Error::invalid(format!(
            "sample set dimensions must be positive, got {rows}x{cols}, count {count}"
        )));
    }
    if !gain.is_finite() || gain <= 0.0 {
        return Err(Error::invalid(format!("gain must be positive, got {gain}")));
    }
    let normal = Normal::new(0.0, (gain / 2.0).sqrt()).expect("valid std dev");
    let samples = (0..count)
        .map(|s| {
            let mut rng = keyed_rng(seed, &[SAMPLE_STREAM_TAG, s as u64]);
            DMatrix::from_fn(rows, cols, |_, _| {
                Complex::new(normal.sample(&mut rng), normal.sample(&mut rng))
            })
        })
        .collect();
    Ok(ChannelSampleSet { samples, seed, gain, rows, cols })
}

/// Kronecker assembly `H = sqrtRR * G * sqrtRT` with real square-root factors.
pub fn kronecker_channel(
    sqrt_rr: &DMatrix<f64>,
    sqrt_rt: &DMatrix<f64>,
    g: &CMatrix,
) -> Result<CMatrix> {
    if sqrt_rr.ncols() != g.nrows() || g.ncols() != sqrt_rt.nrows() {
        return Err(Error::invalid(format!(
            "dimension mismatch: ({}x{}) * ({}x{}) * ({}x{})",
            sqrt_rr.nrows(),
            sqrt_rr.ncols(),
            g.nrows(),
            g.ncols(),
            sqrt_rt.nrows(),
            sqrt_rt.ncols()
        )));
    }
    Ok(apply_kronecker(sqrt_rr, sqrt_rt, g))
}

/// Unchecked triple product used on hot paths; multiplication by an exact
/// identity factor is skipped so identity correlations leave `G` bit-identical.
pub(crate) fn apply_kronecker(
    sqrt_rr: &DMatrix<f64>,
    sqrt_rt: &DMatrix<f64>,
    g: &CMatrix,
) -> CMatrix {
    let left_identity = is_identity(sqrt_rr);
    let right_identity = is_identity(sqrt_rt);
    match (left_identity, right_identity) {
        (true, true) => g.clone(),
        (true, false) => g * &to_complex(sqrt_rt),
        (false, true) => &to_complex(sqrt_rr) * g,
        (false, false) => &to_complex(sqrt_rr) * g * to_complex(sqrt_rt),
    }
}

fn is_identity(m: &DMatrix<f64>) -> bool {
    m.is_square() && *m == DMatrix::identity(m.nrows(), m.ncols())
}

fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|v| Complex::new(v, 0.0))
}

/// Multipath geometry: departure/arrival angles and complex gains for `L`
/// scattering paths.
#[derive(Debug, Clone)]
pub struct PathParameters {
    aod: Vec<f64>,
    aoa: Vec<f64>,
    gains: Vec<Complex<f64>>,
}

impl PathParameters {
    /// Draws `count` paths with angles uniform on `[0, pi]` and `CN(0,1)`
    /// gains, deterministically in `seed`.
    pub fn sample(count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::invalid("path count must be at least 1"));
        }
        let mut rng = keyed_rng(seed, &[PATH_STREAM_TAG]);
        let angle = Uniform::new_inclusive(0.0, std::f64::consts::PI);
        let normal = Normal::new(0.0, (0.5f64).sqrt()).expect("valid std dev");
        let aod = (0..count).map(|_| angle.sample(&mut rng)).collect();
        let aoa = (0..count).map(|_| angle.sample(&mut rng)).collect();
        let gains =
            (0..count).map(|_| Complex::new(normal.sample(&mut rng), normal.sample(&mut rng))).collect();
        Ok(Self { aod, aoa, gains })
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }
}

/// Geometric multipath channel: sum over paths of
/// `g_l * b(aoa_l, r) a^H(aod_l, t)` scaled by `sqrt(gain / L)`, where the
/// field response vectors have entries `exp(j 2 pi x cos(angle))` for
/// wavelength-normalized positions `x`.
pub fn physical_channel(
    tx: &PositionVector,
    rx: &PositionVector,
    paths: &PathParameters,
    gain: f64,
) -> Result<CMatrix> {
    if paths.is_empty() {
        return Err(Error::invalid("physical channel needs at least one path"));
    }
    if !gain.is_finite() || gain <= 0.0 {
        return Err(Error::invalid(format!("gain must be positive, got {gain}")));
    }
    let n = tx.len();
    let m = rx.len();
    let scale = (gain / paths.len() as f64).sqrt();
    let mut h = CMatrix::zeros(m, n);
    for l in 0..paths.len() {
        let a = frv(tx.coords(), paths.aod[l]);
        let b = frv(rx.coords(), paths.aoa[l]);
        let g = paths.gains[l] * scale;
        for j in 0..m {
            for i in 0..n {
                h[(j, i)] += g * b[j] * a[i].conj();
            }
        }
    }
    Ok(h)
}

/// Field response vector entries `exp(j 2 pi x cos(angle))`.
fn frv(coords: &[f64], angle: f64) -> Vec<Complex<f64>> {
    let c = angle.cos();
    coords
        .iter()
        .map(|&x| Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * x * c))
        .collect()
}

/// Which side of the link an empirical correlation estimate describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Tx,
    Rx,
}

/// Normalized empirical correlation with a degeneracy flag.
#[derive(Debug, Clone)]
pub struct EmpiricalCorrelation {
    /// Unit-diagonal sample correlation matrix.
    pub matrix: DMatrix<f64>,
    /// Set when some antenna had (near-)zero sample power; its off-diagonal
    /// correlations are reported as zero.
    pub degenerate: bool,
}

/// Sample correlation across one side's antenna index, averaged over the other
/// side and all samples, normalized to unit diagonal.
pub fn empirical_correlation(samples: &[CMatrix], side: Side) -> Result<EmpiricalCorrelation> {
    if samples.len() < 2 {
        return Err(Error::invalid(format!(
            "empirical correlation needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    let (rows, cols) = (samples[0].nrows(), samples[0].ncols());
    let dim = match side {
        Side::Tx => cols,
        Side::Rx => rows,
    };
    let mut raw = DMatrix::<Complex<f64>>::zeros(dim, dim);
    for h in samples {
        if h.nrows() != rows || h.ncols() != cols {
            return Err(Error::invalid("samples must share dimensions"));
        }
        match side {
            Side::Tx => {
                // average H^H H over the receive index
                raw += h.adjoint() * h;
            }
            Side::Rx => {
                raw += h * h.adjoint();
            }
        }
    }
    let mut matrix = DMatrix::zeros(dim, dim);
    let mut degenerate = false;
    const POWER_FLOOR: f64 = 1e-30;
    for i in 0..dim {
        matrix[(i, i)] = 1.0;
        let pi = raw[(i, i)].re;
        if pi <= POWER_FLOOR {
            degenerate = true;
        }
        for j in (i + 1)..dim {
            let pj = raw[(j, j)].re;
            let value = if pi <= POWER_FLOOR || pj <= POWER_FLOOR {
                degenerate = true;
                0.0
            } else {
                raw[(i, j)].re / (pi * pj).sqrt()
            };
            matrix[(i, j)] = value;
            matrix[(j, i)] = value;
        }
    }
    Ok(EmpiricalCorrelation { matrix, degenerate })
}
