//! C ABI for the fluid-mimo library.
//!
//! Conventions:
//! - Every function returns an [`FmStatus`] code; output values go through
//!   caller-provided pointers. `FM_STATUS_OK` is zero.
//! - Antenna positions travel as plain `double` buffers of length `count`,
//!   in wavelengths, together with their aperture length and minimum spacing.
//! - Long-lived objects (channel sample sets, optimization traces) are opaque
//!   handles created by `*_new`/`fm_ao_optimize` and released by `*_free`.
//!   Handles are not thread-safe; share them across threads only behind a
//!   caller-side lock.
//!
//! The header `include/fluid_mimo.h` is generated by cbindgen at build time.

use std::ffi::{c_char, c_int};

use fluid_mimo::ao::{self, AoConfig, OptimizationTrace, SolverBackend};
use fluid_mimo::capacity::{capacity_loss, ergodic_capacity, high_snr_capacity, low_snr_capacity};
use fluid_mimo::channel::{sample_gaussian_set, ChannelSampleSet};
use fluid_mimo::correlation::build_correlation;
use fluid_mimo::feasibility::{project, uniform_init};
use fluid_mimo::pso::SwarmConfig;
use fluid_mimo::sca::ScaConfig;
use fluid_mimo::special;
use fluid_mimo::{ApertureSpec, Error, PositionVector, SnrSpec};

/// Status codes returned by every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmStatus {
    FmStatusOk = 0,
    FmStatusInvalidArgument = 1,
    FmStatusInvariantViolation = 2,
    FmStatusSingular = 3,
    FmStatusUnsupported = 4,
    FmStatusIo = 5,
    FmStatusNullPointer = 6,
}

fn status_of(err: &Error) -> FmStatus {
    match err {
        Error::InvalidArgument(_) | Error::UnknownScenario(_) => FmStatus::FmStatusInvalidArgument,
        Error::InvariantViolation(_) => FmStatus::FmStatusInvariantViolation,
        Error::Singular { .. } => FmStatus::FmStatusSingular,
        Error::UnsupportedConfiguration(_) => FmStatus::FmStatusUnsupported,
        Error::Io(_) => FmStatus::FmStatusIo,
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn fm_status_name(status: FmStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        FmStatus::FmStatusOk => b"ok\0",
        FmStatus::FmStatusInvalidArgument => b"invalid argument\0",
        FmStatus::FmStatusInvariantViolation => b"invariant violation\0",
        FmStatus::FmStatusSingular => b"singular correlation matrix\0",
        FmStatus::FmStatusUnsupported => b"unsupported configuration\0",
        FmStatus::FmStatusIo => b"i/o error\0",
        FmStatus::FmStatusNullPointer => b"null pointer\0",
    };
    name.as_ptr() as *const c_char
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

unsafe fn write_out<T>(ptr: *mut T, value: T) -> FmStatus {
    if ptr.is_null() {
        return FmStatus::FmStatusNullPointer;
    }
    unsafe { *ptr = value };
    FmStatus::FmStatusOk
}

unsafe fn positions_from_raw(
    coords: *const f64,
    count: usize,
    aperture: f64,
    d_min: f64,
) -> Result<PositionVector, FmStatus> {
    if coords.is_null() {
        return Err(FmStatus::FmStatusNullPointer);
    }
    let slice = unsafe { std::slice::from_raw_parts(coords, count) };
    PositionVector::new(slice.to_vec(), aperture, d_min).map_err(|e| status_of(&e))
}

/// `J0(x)`.
#[no_mangle]
pub extern "C" fn fm_bessel_j0(x: f64, out: *mut f64) -> FmStatus {
    match special::bessel_j0(x) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => status_of(&e),
    }
}

/// `J1(x)`.
#[no_mangle]
pub extern "C" fn fm_bessel_j1(x: f64, out: *mut f64) -> FmStatus {
    match special::bessel_j1(x) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => status_of(&e),
    }
}

/// `k`-th positive zero of `J0`, `k` in 1..=20.
#[no_mangle]
pub extern "C" fn fm_j0_zero(k: u32, out: *mut f64) -> FmStatus {
    match special::j0_zero(k) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => status_of(&e),
    }
}

/// Digamma at a positive integer.
#[no_mangle]
pub extern "C" fn fm_digamma_int(m: u32, out: *mut f64) -> FmStatus {
    match special::digamma_int(m) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => status_of(&e),
    }
}

/// Uniformly spread positions spanning the aperture; writes `count` values.
#[no_mangle]
pub extern "C" fn fm_uniform_init(
    count: usize,
    aperture: f64,
    d_min: f64,
    out: *mut f64,
) -> FmStatus {
    if out.is_null() {
        return FmStatus::FmStatusNullPointer;
    }
    let spec = match ApertureSpec::new(aperture, d_min, count) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    let p = uniform_init(&spec);
    unsafe { std::slice::from_raw_parts_mut(out, count).copy_from_slice(p.coords()) };
    FmStatus::FmStatusOk
}

/// Projects an arbitrary coordinate vector onto the feasible set (clip, sort,
/// spacing passes). Reads and writes `count` values; `raw` and `out` may
/// alias.
#[no_mangle]
pub extern "C" fn fm_project(
    raw: *const f64,
    count: usize,
    aperture: f64,
    d_min: f64,
    out: *mut f64,
) -> FmStatus {
    if raw.is_null() || out.is_null() {
        return FmStatus::FmStatusNullPointer;
    }
    let spec = match ApertureSpec::new(aperture, d_min, count) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    let input = unsafe { std::slice::from_raw_parts(raw, count) }.to_vec();
    let projected = project(&input, &spec);
    unsafe { std::slice::from_raw_parts_mut(out, count).copy_from_slice(projected.coords()) };
    FmStatus::FmStatusOk
}

/// Base-2 log-determinant of the spatial correlation matrix of `coords`.
/// `clamped` (may be NULL) reports whether the eigenvalue floor engaged.
#[no_mangle]
pub extern "C" fn fm_log_det2(
    coords: *const f64,
    count: usize,
    aperture: f64,
    d_min: f64,
    value: *mut f64,
    clamped: *mut c_int,
) -> FmStatus {
    let p = match unsafe { positions_from_raw(coords, count, aperture, d_min) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    let ld = build_correlation(&p).log_det2();
    if !clamped.is_null() {
        unsafe { *clamped = ld.clamped as c_int };
    }
    unsafe { write_out(value, ld.value) }
}

/// High-SNR capacity loss `-log2 det R_T - log2 det R_R` of a position pair.
#[no_mangle]
pub extern "C" fn fm_capacity_loss(
    tx: *const f64,
    tx_count: usize,
    tx_aperture: f64,
    tx_d_min: f64,
    rx: *const f64,
    rx_count: usize,
    rx_aperture: f64,
    rx_d_min: f64,
    out: *mut f64,
) -> FmStatus {
    let t = match unsafe { positions_from_raw(tx, tx_count, tx_aperture, tx_d_min) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    let r = match unsafe { positions_from_raw(rx, rx_count, rx_aperture, rx_d_min) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    unsafe { write_out(out, capacity_loss(&t, &r)) }
}

/// Deterministic high-SNR capacity approximation (square systems).
#[no_mangle]
pub extern "C" fn fm_high_snr_capacity(
    tx: *const f64,
    tx_count: usize,
    tx_aperture: f64,
    tx_d_min: f64,
    rx: *const f64,
    rx_count: usize,
    rx_aperture: f64,
    rx_d_min: f64,
    gamma: f64,
    out: *mut f64,
) -> FmStatus {
    let t = match unsafe { positions_from_raw(tx, tx_count, tx_aperture, tx_d_min) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    let r = match unsafe { positions_from_raw(rx, rx_count, rx_aperture, rx_d_min) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    let snr = match SnrSpec::from_gamma(gamma) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    match high_snr_capacity(&t, &r, snr) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => status_of(&e),
    }
}

/// Low-SNR approximation `N M gamma / ln 2`.
#[no_mangle]
pub extern "C" fn fm_low_snr_capacity(
    tx_count: usize,
    rx_count: usize,
    gamma: f64,
    out: *mut f64,
) -> FmStatus {
    let snr = match SnrSpec::from_gamma(gamma) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    unsafe { write_out(out, low_snr_capacity(tx_count, rx_count, snr)) }
}

/// Opaque seeded batch of i.i.d. complex-Gaussian channel samples.
pub struct FmSampleSet {
    inner: ChannelSampleSet,
}

/// Creates a sample set of `count` matrices with `rx_count` rows, `tx_count`
/// columns, and per-entry variance `gain`.
#[no_mangle]
pub extern "C" fn fm_sample_set_new(
    rx_count: usize,
    tx_count: usize,
    count: usize,
    seed: u64,
    gain: f64,
    out: *mut *mut FmSampleSet,
) -> FmStatus {
    if out.is_null() {
        return FmStatus::FmStatusNullPointer;
    }
    match sample_gaussian_set(rx_count, tx_count, count, seed, gain) {
        Ok(set) => {
            let handle = Box::into_raw(Box::new(FmSampleSet { inner: set }));
            unsafe { *out = handle };
            FmStatus::FmStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// Number of samples held by the set.
#[no_mangle]
pub extern "C" fn fm_sample_set_len(set: *const FmSampleSet, out: *mut usize) -> FmStatus {
    if set.is_null() {
        return FmStatus::FmStatusNullPointer;
    }
    let len = unsafe { (*set).inner.len() };
    unsafe { write_out(out, len) }
}

/// Releases a sample set. NULL is ignored.
#[no_mangle]
pub extern "C" fn fm_sample_set_free(set: *mut FmSampleSet) {
    if !set.is_null() {
        drop(unsafe { Box::from_raw(set) });
    }
}

/// Monte-Carlo ergodic capacity of a position pair on a sample set.
#[no_mangle]
pub extern "C" fn fm_ergodic_capacity(
    tx: *const f64,
    tx_count: usize,
    tx_aperture: f64,
    tx_d_min: f64,
    rx: *const f64,
    rx_count: usize,
    rx_aperture: f64,
    rx_d_min: f64,
    gamma: f64,
    samples: *const FmSampleSet,
    mean: *mut f64,
    std_error: *mut f64,
) -> FmStatus {
    if samples.is_null() {
        return FmStatus::FmStatusNullPointer;
    }
    let t = match unsafe { positions_from_raw(tx, tx_count, tx_aperture, tx_d_min) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    let r = match unsafe { positions_from_raw(rx, rx_count, rx_aperture, rx_d_min) } {
        Ok(p) => p,
        Err(s) => return s,
    };
    let snr = match SnrSpec::from_gamma(gamma) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    match ergodic_capacity(&t, &r, snr, unsafe { &(*samples).inner }) {
        Ok(est) => {
            if !std_error.is_null() {
                unsafe { *std_error = est.mc_std_error };
            }
            unsafe { write_out(mean, est.mean_bps_hz) }
        }
        Err(e) => status_of(&e),
    }
}

/// Solver selector for [`fm_ao_optimize`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmSolver {
    FmSolverPso = 0,
    FmSolverSca = 1,
}

/// Alternating-optimization parameters. Zero-valued iteration/sample fields
/// fall back to the benchmark defaults (12 outer iterations, 200/1500
/// optimization/evaluation samples, tolerance 1e-3).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FmAoParams {
    pub tx_count: usize,
    pub tx_aperture: f64,
    pub tx_d_min: f64,
    pub rx_count: usize,
    pub rx_aperture: f64,
    pub rx_d_min: f64,
    pub gamma: f64,
    pub solver: FmSolver,
    pub max_outer: usize,
    pub tolerance: f64,
    pub opt_samples: usize,
    pub eval_samples: usize,
    pub master_seed: u64,
}

/// One trace entry exposed to C.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FmTraceEntry {
    pub iteration: usize,
    pub objective: f64,
    pub eval_objective: f64,
    pub det_rt: f64,
    pub det_rr: f64,
}

/// Opaque optimization trace.
pub struct FmTrace {
    inner: OptimizationTrace,
}

/// Runs alternating optimization and returns a trace handle.
#[no_mangle]
pub extern "C" fn fm_ao_optimize(params: FmAoParams, out: *mut *mut FmTrace) -> FmStatus {
    if out.is_null() {
        return FmStatus::FmStatusNullPointer;
    }
    let tx_spec = match ApertureSpec::new(params.tx_aperture, params.tx_d_min, params.tx_count) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    let rx_spec = match ApertureSpec::new(params.rx_aperture, params.rx_d_min, params.rx_count) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    let snr = match SnrSpec::from_gamma(params.gamma) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    let backend = match params.solver {
        FmSolver::FmSolverPso => SolverBackend::Pso(SwarmConfig::default()),
        FmSolver::FmSolverSca => SolverBackend::Sca(ScaConfig::default()),
    };
    let mut cfg = AoConfig::new(backend, snr);
    cfg.master_seed = params.master_seed;
    if params.max_outer > 0 {
        cfg.max_outer = params.max_outer;
    }
    if params.tolerance > 0.0 {
        cfg.tolerance = params.tolerance;
    }
    if params.opt_samples > 0 {
        cfg.opt_samples = params.opt_samples;
    }
    if params.eval_samples > 0 {
        cfg.eval_samples = params.eval_samples;
    }
    match ao::ao_optimize(&tx_spec, &rx_spec, &cfg) {
        Ok(trace) => {
            unsafe { *out = Box::into_raw(Box::new(FmTrace { inner: trace })) };
            FmStatus::FmStatusOk
        }
        Err(e) => status_of(&e),
    }
}

/// Number of outer iterations recorded in the trace.
#[no_mangle]
pub extern "C" fn fm_trace_len(trace: *const FmTrace, out: *mut usize) -> FmStatus {
    if trace.is_null() {
        return FmStatus::FmStatusNullPointer;
    }
    let len = unsafe { (*trace).inner.entries.len() };
    unsafe { write_out(out, len) }
}

/// Copies entry `index` of the trace.
#[no_mangle]
pub extern "C" fn fm_trace_entry(
    trace: *const FmTrace,
    index: usize,
    out: *mut FmTraceEntry,
) -> FmStatus {
    if trace.is_null() {
        return FmStatus::FmStatusNullPointer;
    }
    let inner = unsafe { &(*trace).inner };
    let Some(entry) = inner.entries.get(index) else {
        return FmStatus::FmStatusInvalidArgument;
    };
    unsafe {
        write_out(
            out,
            FmTraceEntry {
                iteration: entry.iteration,
                objective: entry.objective,
                eval_objective: entry.eval_objective,
                det_rt: entry.det_rt,
                det_rr: entry.det_rr,
            },
        )
    }
}

/// Copies the final TX and RX positions. Either output may be NULL; buffers
/// must hold the respective antenna counts.
#[no_mangle]
pub extern "C" fn fm_trace_final_positions(
    trace: *const FmTrace,
    tx_out: *mut f64,
    rx_out: *mut f64,
) -> FmStatus {
    if trace.is_null() {
        return FmStatus::FmStatusNullPointer;
    }
    let inner = unsafe { &(*trace).inner };
    if !tx_out.is_null() {
        let tx = inner.final_tx.coords();
        unsafe { std::slice::from_raw_parts_mut(tx_out, tx.len()).copy_from_slice(tx) };
    }
    if !rx_out.is_null() {
        let rx = inner.final_rx.coords();
        unsafe { std::slice::from_raw_parts_mut(rx_out, rx.len()).copy_from_slice(rx) };
    }
    FmStatus::FmStatusOk
}

/// Capacity-kernel invocations the solver spent.
#[no_mangle]
pub extern "C" fn fm_trace_kernel_evals(trace: *const FmTrace, out: *mut u64) -> FmStatus {
    if trace.is_null() {
        return FmStatus::FmStatusNullPointer;
    }
    let evals = unsafe { (*trace).inner.kernel_evals };
    unsafe { write_out(out, evals) }
}

/// Releases a trace. NULL is ignored.
#[no_mangle]
pub extern "C" fn fm_trace_free(trace: *mut FmTrace) {
    if !trace.is_null() {
        drop(unsafe { Box::from_raw(trace) });
    }
}
