//! Feasible-set predicates, initializers, and the two-stage projection used by
//! both solvers.
//!
//! The feasible set for one side is the compact polytope of strictly ascending
//! coordinates inside `[0, length]` with consecutive gaps at least `d_min`. It
//! is nonempty iff `length >= (count - 1) * d_min`, which [`ApertureSpec::new`]
//! enforces once so the operations here stay total.

use rand::Rng;

use crate::correlation::{PositionVector, SPACING_SLACK};
use crate::error::{Error, Result};
use crate::rng::keyed_rng;

const INIT_STREAM_TAG: u64 = 0x494e_4954; // "INIT"

/// One side's aperture geometry: length and minimum spacing in wavelengths,
/// and the antenna count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApertureSpec {
    length: f64,
    d_min: f64,
    count: usize,
}

impl ApertureSpec {
    /// Validates the feasibility condition `length >= (count - 1) * d_min`.
    pub fn new(length: f64, d_min: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::invalid("antenna count must be at least 1"));
        }
        if !length.is_finite() || length <= 0.0 {
            return Err(Error::invalid(format!("aperture length must be positive, got {length}")));
        }
        if !d_min.is_finite() || d_min < 0.0 {
            return Err(Error::invalid(format!("d_min must be nonnegative, got {d_min}")));
        }
        if length < (count as f64 - 1.0) * d_min {
            return Err(Error::invalid(format!(
                "infeasible spec: length {length} < (count-1)*d_min = {}",
                (count as f64 - 1.0) * d_min
            )));
        }
        Ok(Self { length, d_min, count })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// True iff the sorted coordinates satisfy the bound and spacing constraints
/// (with [`SPACING_SLACK`] tolerance).
pub fn is_feasible(coords: &[f64], spec: &ApertureSpec) -> bool {
    if coords.len() != spec.count {
        return false;
    }
    let mut sorted: Vec<f64> = coords.to_vec();
    if sorted.iter().any(|c| !c.is_finite()) {
        return false;
    }
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if sorted[0] < -SPACING_SLACK || sorted[sorted.len() - 1] > spec.length + SPACING_SLACK {
        return false;
    }
    sorted.windows(2).all(|w| w[1] - w[0] >= spec.d_min - SPACING_SLACK)
}

/// Two-stage feasibility restoration: clip to `[0, length]`, sort, then a
/// forward pass `x[i] <- max(x[i], x[i-1] + d_min)` and, if the last
/// coordinate overflowed, a backward pass `x[i] <- min(x[i], x[i+1] - d_min)`
/// from the clipped endpoint.
///
/// Idempotent, fixes feasible inputs (up to sorting), and lands in the
/// feasible polytope whenever the spec is feasible. This is a fast restoration
/// operator, not the exact Euclidean projection.
pub fn project(raw: &[f64], spec: &ApertureSpec) -> PositionVector {
    assert_eq!(raw.len(), spec.count, "projection input length must match spec count");
    let mut x: Vec<f64> = raw
        .iter()
        .map(|&c| if c.is_finite() { c.clamp(0.0, spec.length) } else { 0.0 })
        .collect();
    x.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = x.len();
    for i in 1..n {
        if x[i] < x[i - 1] + spec.d_min {
            x[i] = x[i - 1] + spec.d_min;
        }
    }
    if x[n - 1] > spec.length {
        x[n - 1] = spec.length;
        for i in (0..n - 1).rev() {
            if x[i] > x[i + 1] - spec.d_min {
                x[i] = x[i + 1] - spec.d_min;
            }
        }
    }
    // Feasible by construction when length >= (count-1) * d_min; d_min = 0
    // with coincident coordinates is separated by a forward nudge of 0, so
    // enforce strict ascent with the smallest representable bump.
    if spec.d_min == 0.0 {
        for i in 1..n {
            if x[i] <= x[i - 1] {
                x[i] = next_up(x[i - 1]).min(spec.length);
            }
        }
        // if the bump hit the right edge, walk duplicates back down
        for i in (0..n - 1).rev() {
            if x[i] >= x[i + 1] {
                x[i] = next_down(x[i + 1]).max(0.0);
            }
        }
    }
    PositionVector::new(x, spec.length, spec.d_min)
        .expect("projection output must satisfy position invariants for a feasible spec")
}

fn next_up(v: f64) -> f64 {
    f64::from_bits(v.to_bits() + 1)
}

fn next_down(v: f64) -> f64 {
    if v == 0.0 {
        return -f64::MIN_POSITIVE;
    }
    f64::from_bits(v.to_bits() - 1)
}

/// Uniformly spaced positions spanning the aperture: `i * length / (count-1)`.
/// A single antenna sits at the midpoint.
pub fn uniform_init(spec: &ApertureSpec) -> PositionVector {
    let coords = if spec.count == 1 {
        vec![spec.length / 2.0]
    } else {
        (0..spec.count).map(|i| i as f64 * spec.length / (spec.count as f64 - 1.0)).collect()
    };
    PositionVector::new(coords, spec.length, spec.d_min)
        .expect("uniform spacing is feasible whenever the spec is")
}

/// Sorted uniform order statistics over `[0, length]`, projected when the
/// spacing constraint is violated. Deterministic in `seed`.
pub fn sorted_uniform_random_init(spec: &ApertureSpec, seed: u64) -> PositionVector {
    let mut rng = keyed_rng(seed, &[INIT_STREAM_TAG]);
    let mut coords: Vec<f64> = (0..spec.count).map(|_| rng.gen_range(0.0..=spec.length)).collect();
    coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if is_feasible(&coords, spec) {
        if let Ok(p) = PositionVector::new(coords.clone(), spec.length, spec.d_min) {
            return p;
        }
    }
    project(&coords, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(length: f64, d_min: f64, count: usize) -> ApertureSpec {
        ApertureSpec::new(length, d_min, count).unwrap()
    }

    #[test]
    fn spec_feasibility_condition() {
        assert!(ApertureSpec::new(2.0, 0.3, 7).is_ok()); // 6*0.3 = 1.8 <= 2
        assert!(ApertureSpec::new(2.0, 0.3, 8).is_err()); // 7*0.3 = 2.1 > 2
        assert!(ApertureSpec::new(2.0, 0.3, 0).is_err());
    }

    #[test]
    fn feasibility_predicate() {
        let s = spec(2.0, 0.3, 3);
        assert!(is_feasible(&[0.0, 0.4, 0.8], &s));
        assert!(is_feasible(&[0.8, 0.0, 0.4], &s)); // sorted internally
        assert!(!is_feasible(&[0.0, 0.2, 0.8], &s));
        let s2 = spec(2.0, 0.3, 2);
        assert!(!is_feasible(&[0.0, 0.2], &s2));
        assert!(!is_feasible(&[0.0, 2.2], &s2));
    }

    #[test]
    fn project_fixes_feasible_points() {
        let s = spec(2.0, 0.3, 3);
        let p = project(&[0.8, 0.0, 0.4], &s);
        assert_eq!(p.coords(), &[0.0, 0.4, 0.8]);
    }

    #[test]
    fn project_spreads_coincident_points() {
        // forward pass only: [1.0, 1.0, 1.0] -> [1.0, 1.3, 1.6]
        let s = spec(2.0, 0.3, 3);
        let p = project(&[1.0, 1.0, 1.0], &s);
        assert_eq!(p.coords(), &[1.0, 1.3, 1.6]);
    }

    #[test]
    fn project_clips_then_pushes_backward() {
        // clip to 2.0, forward overflow, backward pass -> [1.7, 2.0]
        let s = spec(2.0, 0.3, 2);
        let p = project(&[2.5, 2.6], &s);
        let c = p.coords();
        assert!((c[0] - 1.7).abs() <= 1e-12 && (c[1] - 2.0).abs() <= 1e-12, "{c:?}");
    }

    #[test]
    fn uniform_init_matches_formula() {
        let p = uniform_init(&spec(2.0, 0.3, 6));
        let expect = [0.0, 0.4, 0.8, 1.2, 1.6, 2.0];
        for (a, b) in p.coords().iter().zip(expect.iter()) {
            assert!((a - b).abs() <= 1e-12);
        }
        let p2 = uniform_init(&spec(0.383, 0.1, 2));
        assert_eq!(p2.coords(), &[0.0, 0.383]);
        let p1 = uniform_init(&spec(3.0, 0.0, 1));
        assert_eq!(p1.coords(), &[1.5]);
    }

    #[test]
    fn random_init_is_deterministic() {
        let s = spec(2.0, 0.3, 4);
        let a = sorted_uniform_random_init(&s, 42);
        let b = sorted_uniform_random_init(&s, 42);
        assert_eq!(a.coords(), b.coords());
        let c = sorted_uniform_random_init(&s, 43);
        assert_ne!(a.coords(), c.coords());
    }

    #[test]
    fn random_init_always_feasible() {
        let s = spec(2.0, 0.3, 3);
        for seed in 0..1000 {
            let p = sorted_uniform_random_init(&s, seed);
            assert!(is_feasible(p.coords(), &s), "seed {seed}: {:?}", p.coords());
        }
    }

    #[test]
    fn random_init_measure_zero_feasible_set() {
        // only [0, 0.3] is feasible; projection must force it
        let s = spec(0.3, 0.3, 2);
        for seed in 0..20 {
            let p = sorted_uniform_random_init(&s, seed);
            assert!((p.coords()[0] - 0.0).abs() <= 1e-12);
            assert!((p.coords()[1] - 0.3).abs() <= 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn project_is_idempotent_and_feasible(
            raw in proptest::collection::vec(-1.0f64..3.5, 1..7),
            d_min in 0.0f64..0.35,
        ) {
            let count = raw.len();
            prop_assume!(2.0 >= (count as f64 - 1.0) * d_min);
            let s = spec(2.0, d_min, count);
            let p = project(&raw, &s);
            prop_assert!(is_feasible(p.coords(), &s));
            let p2 = project(p.coords(), &s);
            prop_assert_eq!(p.coords(), p2.coords());
        }

        #[test]
        fn project_fixed_point_on_feasible_inputs(
            seed in 0u64..10_000,
        ) {
            let s = spec(2.0, 0.3, 4);
            let p = sorted_uniform_random_init(&s, seed);
            let again = project(p.coords(), &s);
            prop_assert_eq!(p.coords(), again.coords());
        }
    }
}
