//! Scalar special-function kernels: Bessel functions of the first kind of
//! orders zero and one, positive zeros of `J0`, and the digamma function at
//! positive integers.
//!
//! `J0`/`J1` use the ascending power series below a fixed crossover and the
//! Hankel amplitude-phase asymptotic expansion above it. Both branches are
//! accurate to well below `1e-10` absolute error on `[0, 100]`, which is the
//! range exercised by wavelength-normalized antenna separations.

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Argument above which the asymptotic expansion is used.
const ASYMPTOTIC_CROSSOVER: f64 = 12.0;

/// Largest zero index served by [`j0_zero`].
const MAX_ZERO_INDEX: u32 = 20;

/// Bessel function of the first kind, order zero.
///
/// Returns an invalid-argument error for non-finite input.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("bessel_j0 argument must be finite, got {x}")));
    }
    Ok(j0(x))
}

/// Bessel function of the first kind, order one.
///
/// Returns an invalid-argument error for non-finite input.
pub fn bessel_j1(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("bessel_j1 argument must be finite, got {x}")));
    }
    Ok(j1(x))
}

/// `J0` on finite arguments. Even in `x`.
pub(crate) fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x < ASYMPTOTIC_CROSSOVER {
        j0_series(x)
    } else {
        hankel_asymptotic(x, 0.0)
    }
}

/// `J1` on finite arguments. Odd in `x`.
pub(crate) fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let value = if ax < ASYMPTOTIC_CROSSOVER {
        j1_series(ax)
    } else {
        hankel_asymptotic(ax, 1.0)
    };
    if x < 0.0 {
        -value
    } else {
        value
    }
}

/// Ascending series J0(x) = sum_k (-1)^k (x/2)^{2k} / (k!)^2.
fn j0_series(x: f64) -> f64 {
    let q = -(x * x) / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=60u64 {
        term *= q / ((k * k) as f64);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// Ascending series J1(x) = sum_k (-1)^k (x/2)^{2k+1} / (k! (k+1)!).
fn j1_series(x: f64) -> f64 {
    let q = -(x * x) / 4.0;
    let mut term = x / 2.0;
    let mut sum = term;
    for k in 1..=60u64 {
        term *= q / ((k * (k + 1)) as f64);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// Hankel expansion J_nu(x) ~ sqrt(2/(pi x)) (P cos w - Q sin w) with
/// w = x - nu pi/2 - pi/4. Terms follow the recurrence
/// d_m = d_{m-1} (4 nu^2 - (2m-1)^2) / (8 m x); the sum is truncated at the
/// smallest term, which is far below 1e-12 for x >= 12.
fn hankel_asymptotic(x: f64, nu: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let omega = x - nu * std::f64::consts::FRAC_PI_2 - std::f64::consts::FRAC_PI_4;
    let mut p = 1.0; // d_0 term
    let mut q = 0.0;
    let mut d = 1.0;
    let mut prev = f64::INFINITY;
    for m in 1u32..=34 {
        let tm = (2 * m - 1) as f64;
        d *= (mu - tm * tm) / (8.0 * m as f64 * x);
        if d.abs() >= prev {
            break; // asymptotic terms started growing
        }
        prev = d.abs();
        // (-1)^k applied to the term pairs d_{2k}, d_{2k+1}
        let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if m % 2 == 1 {
            q += sign * d;
        } else {
            p += sign * d;
        }
        if d.abs() < 1e-18 {
            break;
        }
    }
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}

/// `k`-th positive zero of `J0`, for `k` in `1..=20`.
///
/// Starts from the McMahon estimate `(k - 1/4) pi + 1/(8 beta)` and refines by
/// Newton steps using `J0' = -J1`.
pub fn j0_zero(k: u32) -> Result<f64> {
    if k == 0 || k > MAX_ZERO_INDEX {
        return Err(Error::invalid(format!(
            "j0_zero index must be in 1..={MAX_ZERO_INDEX}, got {k}"
        )));
    }
    let beta = (k as f64 - 0.25) * std::f64::consts::PI;
    let mut x = beta + 1.0 / (8.0 * beta);
    for _ in 0..12 {
        // Newton: x <- x - J0(x)/J0'(x) = x + J0(x)/J1(x)
        let step = j0(x) / j1(x);
        x += step;
        if step.abs() < 1e-13 {
            break;
        }
    }
    Ok(x)
}

/// Digamma function at a positive integer: `psi(m) = -gamma + sum_{j<m} 1/j`.
pub fn digamma_int(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::invalid("digamma_int requires m >= 1"));
    }
    let mut sum = -EULER_GAMMA;
    for j in 1..m {
        sum += 1.0 / j as f64;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Independent oracle: J_n(x) = (1/2pi) int_0^{2pi} cos(n t - x sin t) dt,
    /// evaluated with the midpoint rule over one full period. The integrand is
    /// smooth and periodic, so the rule converges spectrally; 4096 points give
    /// machine accuracy for x <= 100.
    fn quadrature_jn(n: u32, x: f64) -> f64 {
        let points = 4096;
        let mut sum = 0.0;
        for i in 0..points {
            let t = (i as f64 + 0.5) * 2.0 * std::f64::consts::PI / points as f64;
            sum += (n as f64 * t - x * t.sin()).cos();
        }
        sum / points as f64
    }

    /// Truncated power series oracle with a fixed term count.
    fn j0_series_oracle(x: f64, terms: u64) -> f64 {
        let q = -(x * x) / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..=terms {
            term *= q / ((k * k) as f64);
            sum += term;
        }
        sum
    }

    fn j1_series_oracle(x: f64, terms: u64) -> f64 {
        let q = -(x * x) / 4.0;
        let mut term = x / 2.0;
        let mut sum = term;
        for k in 1..=terms {
            term *= q / ((k * (k + 1)) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn j0_at_zero_is_one() {
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
    }

    #[test]
    fn j0_first_zero_region() {
        assert!(bessel_j0(2.404826).unwrap().abs() <= 1e-5);
    }

    #[test]
    fn j0_at_twice_first_zero() {
        // The lag-2 correlation at uniform first-zero spacing is nonzero; the
        // value is pinned by the quadrature oracle.
        let x = 2.0 * j0_zero(1).unwrap();
        let oracle = quadrature_jn(0, x);
        assert_abs_diff_eq!(oracle, -0.23754, epsilon = 1e-4);
        assert_abs_diff_eq!(bessel_j0(x).unwrap(), oracle, epsilon = 1e-12);
    }

    #[test]
    fn j0_matches_truncated_series_oracle() {
        let x = 1.884956;
        let oracle = j0_series_oracle(x, 12);
        assert_abs_diff_eq!(oracle, 0.2905, epsilon = 1e-4);
        assert_abs_diff_eq!(bessel_j0(x).unwrap(), oracle, epsilon = 1e-12);
    }

    #[test]
    fn j1_at_zero_is_zero() {
        assert_eq!(bessel_j1(0.0).unwrap(), 0.0);
    }

    #[test]
    fn j1_matches_series_oracle_at_one() {
        let oracle = j1_series_oracle(1.0, 20);
        assert_abs_diff_eq!(oracle, 0.4400506, epsilon = 1e-6);
        assert_abs_diff_eq!(bessel_j1(1.0).unwrap(), oracle, epsilon = 1e-12);
    }

    #[test]
    fn j1_is_negative_j0_derivative() {
        let h = 1e-6;
        for &x in &[0.5, 1.0, 3.0, 7.0] {
            let fd = (j0(x + h) - j0(x - h)) / (2.0 * h);
            let rel = (-j1(x) - fd).abs() / j1(x).abs().max(1e-12);
            assert!(rel <= 1e-4, "x={x}: fd={fd} -j1={}", -j1(x));
        }
    }

    #[test]
    fn derivative_identity_on_log_grid() {
        let h = 1e-6;
        let mut x = 0.1_f64;
        while x <= 50.0 {
            let fd = (j0(x + h) - j0(x - h)) / (2.0 * h);
            let rel = (-j1(x) - fd).abs() / j1(x).abs().max(1e-8);
            assert!(rel <= 1e-4, "x={x}: fd={fd} -j1={}", -j1(x));
            x *= 1.15;
        }
    }

    #[test]
    fn j0_j1_accuracy_against_quadrature() {
        // Both branches, including the crossover, against the independent
        // quadrature oracle.
        for i in 0..=1000 {
            let x = i as f64 * 0.1;
            let e0 = (j0(x) - quadrature_jn(0, x)).abs();
            let e1 = (j1(x) - quadrature_jn(1, x)).abs();
            assert!(e0 <= 1e-10, "J0 error {e0} at x={x}");
            assert!(e1 <= 1e-10, "J1 error {e1} at x={x}");
        }
    }

    #[test]
    fn both_branches_agree_with_30_term_series_at_crossover() {
        // Just below and just above the crossover; the 30-term series is fully
        // converged there.
        for &x in &[11.8, 11.99, 12.0, 12.01, 12.3] {
            assert_abs_diff_eq!(j0(x), j0_series_oracle(x, 30), epsilon = 2e-11);
            assert_abs_diff_eq!(j1(x), j1_series_oracle(x, 30), epsilon = 2e-11);
        }
    }

    #[test]
    fn j0_bounded_by_envelope() {
        let mut x = 0.0_f64;
        while x <= 100.0 {
            let v = j0(x).abs();
            assert!(v <= 1.0 + 1e-14, "|J0({x})| = {v} > 1");
            if x >= 1.0 {
                let env = (2.0 / (std::f64::consts::PI * x)).sqrt();
                assert!(v <= env + 1e-12, "|J0({x})| = {v} above envelope {env}");
            }
            x += 0.01;
        }
    }

    #[test]
    fn zeros_match_printed_values() {
        assert_abs_diff_eq!(j0_zero(1).unwrap(), 2.405, epsilon = 5e-4);
        assert_abs_diff_eq!(j0_zero(2).unwrap(), 5.520, epsilon = 5e-4);
        assert_abs_diff_eq!(j0_zero(3).unwrap(), 8.654, epsilon = 5e-4);
    }

    #[test]
    fn zeros_are_roots_to_1e8() {
        for k in 1..=10 {
            let x = j0_zero(k).unwrap();
            assert!(j0(x).abs() <= 1e-8, "J0(zero {k}) = {}", j0(x));
            // Newton residual bounds the distance to the true zero
            assert!((j0(x) / j1(x)).abs() <= 1e-8);
        }
    }

    #[test]
    fn zero_index_bounds() {
        assert!(j0_zero(0).is_err());
        assert!(j0_zero(21).is_err());
    }

    #[test]
    fn non_finite_arguments_rejected() {
        assert!(bessel_j0(f64::NAN).is_err());
        assert!(bessel_j0(f64::INFINITY).is_err());
        assert!(bessel_j1(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn digamma_one_is_negative_euler_gamma() {
        // Oracle: psi(1) = -lim (sum 1/j - ln n); the harmonic tail converges
        // like 1/(2n), so n = 1e7 pins seven digits.
        let n = 10_000_000u32;
        let mut h = 0.0;
        for j in 1..=n {
            h += 1.0 / j as f64;
        }
        let oracle = -(h - (n as f64).ln());
        assert_abs_diff_eq!(oracle, -0.5772157, epsilon = 1e-6);
        assert_abs_diff_eq!(digamma_int(1).unwrap(), oracle, epsilon = 1e-7);
    }

    #[test]
    fn digamma_recurrence_values() {
        let psi1 = digamma_int(1).unwrap();
        assert_abs_diff_eq!(digamma_int(2).unwrap(), psi1 + 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            digamma_int(5).unwrap(),
            psi1 + 1.0 + 0.5 + 1.0 / 3.0 + 0.25,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(digamma_int(2).unwrap(), 0.4227843, epsilon = 1e-7);
    }

    #[test]
    fn digamma_recurrence_identity() {
        for m in 1..=50u32 {
            let lhs = digamma_int(m + 1).unwrap() - digamma_int(m).unwrap();
            assert!((lhs - 1.0 / m as f64).abs() <= 1e-14, "m={m}: {lhs}");
        }
    }

    #[test]
    fn digamma_zero_rejected() {
        assert!(digamma_int(0).is_err());
    }
}
