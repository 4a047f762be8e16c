#ifndef FLUID_MIMO_H
#define FLUID_MIMO_H

/* Generated by cbindgen from the fluid-mimo-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Solver selector for [`fm_ao_optimize`].
 */
typedef enum FmSolver {
  FM_SOLVER_PSO = 0,
  FM_SOLVER_SCA = 1,
} FmSolver;

/**
 * Status codes returned by every FFI entry point.
 */
typedef enum FmStatus {
  FM_STATUS_OK = 0,
  FM_STATUS_INVALID_ARGUMENT = 1,
  FM_STATUS_INVARIANT_VIOLATION = 2,
  FM_STATUS_SINGULAR = 3,
  FM_STATUS_UNSUPPORTED = 4,
  FM_STATUS_IO = 5,
  FM_STATUS_NULL_POINTER = 6,
} FmStatus;

/**
 * Opaque seeded batch of i.i.d. complex-Gaussian channel samples.
 */
typedef struct FmSampleSet FmSampleSet;

/**
 * Opaque optimization trace.
 */
typedef struct FmTrace FmTrace;

/**
 * Alternating-optimization parameters. Zero-valued iteration/sample fields
 * fall back to the benchmark defaults (12 outer iterations, 200/1500
 * optimization/evaluation samples, tolerance 1e-3).
 */
typedef struct FmAoParams {
  size_t tx_count;
  double tx_aperture;
  double tx_d_min;
  size_t rx_count;
  double rx_aperture;
  double rx_d_min;
  double gamma;
  enum FmSolver solver;
  size_t max_outer;
  double tolerance;
  size_t opt_samples;
  size_t eval_samples;
  uint64_t master_seed;
} FmAoParams;

/**
 * One trace entry exposed to C.
 */
typedef struct FmTraceEntry {
  size_t iteration;
  double objective;
  double eval_objective;
  double det_rt;
  double det_rr;
} FmTraceEntry;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *fm_status_name(enum FmStatus status);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fm_version(void);

/**
 * `J0(x)`.
 */
enum FmStatus fm_bessel_j0(double x, double *out);

/**
 * `J1(x)`.
 */
enum FmStatus fm_bessel_j1(double x, double *out);

/**
 * `k`-th positive zero of `J0`, `k` in 1..=20.
 */
enum FmStatus fm_j0_zero(uint32_t k, double *out);

/**
 * Digamma at a positive integer.
 */
enum FmStatus fm_digamma_int(uint32_t m, double *out);

/**
 * Uniformly spread positions spanning the aperture; writes `count` values.
 */
enum FmStatus fm_uniform_init(size_t count, double aperture, double d_min, double *out);

/**
 * Projects an arbitrary coordinate vector onto the feasible set (clip, sort,
 * spacing passes). Reads and writes `count` values; `raw` and `out` may
 * alias.
 */
enum FmStatus fm_project(const double *raw,
                         size_t count,
                         double aperture,
                         double d_min,
                         double *out);

/**
 * Base-2 log-determinant of the spatial correlation matrix of `coords`.
 * `clamped` (may be NULL) reports whether the eigenvalue floor engaged.
 */
enum FmStatus fm_log_det2(const double *coords,
                          size_t count,
                          double aperture,
                          double d_min,
                          double *value,
                          int *clamped);

/**
 * High-SNR capacity loss `-log2 det R_T - log2 det R_R` of a position pair.
 */
enum FmStatus fm_capacity_loss(const double *tx,
                               size_t tx_count,
                               double tx_aperture,
                               double tx_d_min,
                               const double *rx,
                               size_t rx_count,
                               double rx_aperture,
                               double rx_d_min,
                               double *out);

/**
 * Deterministic high-SNR capacity approximation (square systems).
 */
enum FmStatus fm_high_snr_capacity(const double *tx,
                                   size_t tx_count,
                                   double tx_aperture,
                                   double tx_d_min,
                                   const double *rx,
                                   size_t rx_count,
                                   double rx_aperture,
                                   double rx_d_min,
                                   double gamma,
                                   double *out);

/**
 * Low-SNR approximation `N M gamma / ln 2`.
 */
enum FmStatus fm_low_snr_capacity(size_t tx_count, size_t rx_count, double gamma, double *out);

/**
 * Creates a sample set of `count` matrices with `rx_count` rows, `tx_count`
 * columns, and per-entry variance `gain`.
 */
enum FmStatus fm_sample_set_new(size_t rx_count,
                                size_t tx_count,
                                size_t count,
                                uint64_t seed,
                                double gain,
                                struct FmSampleSet **out);

/**
 * Number of samples held by the set.
 */
enum FmStatus fm_sample_set_len(const struct FmSampleSet *set, size_t *out);

/**
 * Releases a sample set. NULL is ignored.
 */
void fm_sample_set_free(struct FmSampleSet *set);

/**
 * Monte-Carlo ergodic capacity of a position pair on a sample set.
 */
enum FmStatus fm_ergodic_capacity(const double *tx,
                                  size_t tx_count,
                                  double tx_aperture,
                                  double tx_d_min,
                                  const double *rx,
                                  size_t rx_count,
                                  double rx_aperture,
                                  double rx_d_min,
                                  double gamma,
                                  const struct FmSampleSet *samples,
                                  double *mean,
                                  double *std_error);

/**
 * Runs alternating optimization and returns a trace handle.
 */
enum FmStatus fm_ao_optimize(struct FmAoParams params, struct FmTrace **out);

/**
 * Number of outer iterations recorded in the trace.
 */
enum FmStatus fm_trace_len(const struct FmTrace *trace, size_t *out);

/**
 * Copies entry `index` of the trace.
 */
enum FmStatus fm_trace_entry(const struct FmTrace *trace, size_t index, struct FmTraceEntry *out);

/**
 * Copies the final TX and RX positions. Either output may be NULL; buffers
 * must hold the respective antenna counts.
 */
enum FmStatus fm_trace_final_positions(const struct FmTrace *trace, double *tx_out, double *rx_out);

/**
 * Capacity-kernel invocations the solver spent.
 */
enum FmStatus fm_trace_kernel_evals(const struct FmTrace *trace, uint64_t *out);

/**
 * Releases a trace. NULL is ignored.
 */
void fm_trace_free(struct FmTrace *trace);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLUID_MIMO_H */
