//! Particle swarm solver for one side's position subproblem.
//!
//! Classic inertia-decay PSO with cognitive/social attraction, a feasibility
//! projection after every move, and an optional warm-started particle that
//! carries the incumbent so the returned best can never fall below it. All
//! random draws come from streams keyed by `(seed, iteration, particle)`, so
//! trajectories are reproducible and evaluation order is irrelevant.

use rand::Rng;

use crate::correlation::PositionVector;
use crate::feasibility::{project, sorted_uniform_random_init, ApertureSpec};
use crate::rng::keyed_rng;

const PSO_INIT_TAG: u64 = 0x50_49; // "PI"
const PSO_STEP_TAG: u64 = 0x50_53; // "PS"

/// Swarm hyperparameters. Defaults follow the reference benchmark setting:
/// 20 particles, 60 iterations, inertia 0.9 -> 0.4, both learning factors 1.5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwarmConfig {
    pub swarm_size: usize,
    pub iterations: usize,
    pub w_max: f64,
    pub w_min: f64,
    pub c1: f64,
    pub c2: f64,
    pub seed: u64,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        Self { swarm_size: 20, iterations: 60, w_max: 0.9, w_min: 0.4, c1: 1.5, c2: 1.5, seed: 0 }
    }
}

impl SwarmConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

struct Particle {
    position: PositionVector,
    velocity: Vec<f64>,
    best_position: PositionVector,
    best_fitness: f64,
}

/// Non-finite fitness values order below everything.
fn ordered(f: f64) -> f64 {
    if f.is_finite() {
        f
    } else {
        f64::NEG_INFINITY
    }
}

/// Maximizes `fitness` over the feasible polytope of `spec`.
///
/// Returns the best feasible position found and its fitness. When
/// `warm_start` is given it seeds particle 0, so the result is never worse
/// than the warm point under the same fitness. The global best is updated
/// after each full sweep in particle-index order; ties keep the incumbent.
pub fn pso_solve<F>(
    fitness: F,
    spec: &ApertureSpec,
    cfg: &SwarmConfig,
    warm_start: Option<&PositionVector>,
) -> (PositionVector, f64)
where
    F: Fn(&PositionVector) -> f64,
{
    assert!(cfg.swarm_size >= 1, "swarm must hold at least one particle");
    let n = spec.count();

    let mut particles: Vec<Particle> = (0..cfg.swarm_size)
        .map(|z| {
            let position = match (z, warm_start) {
                (0, Some(w)) => w.clone(),
                _ => {
                    let mut rng = keyed_rng(cfg.seed, &[PSO_INIT_TAG, z as u64]);
                    let draw: u64 = rng.gen();
                    sorted_uniform_random_init(spec, draw)
                }
            };
            let f = ordered(fitness(&position));
            Particle {
                velocity: vec![0.0; n],
                best_position: position.clone(),
                best_fitness: f,
                position,
            }
        })
        .collect();

    let mut best_index = 0;
    for z in 1..particles.len() {
        if particles[z].best_fitness > particles[best_index].best_fitness {
            best_index = z;
        }
    }
    let mut global_best = particles[best_index].best_position.clone();
    let mut global_fitness = particles[best_index].best_fitness;

    for iteration in 0..cfg.iterations {
        let inertia = cfg.w_max - (cfg.w_max - cfg.w_min) * iteration as f64 / cfg.iterations as f64;
        for (z, particle) in particles.iter_mut().enumerate() {
            let mut rng = keyed_rng(cfg.seed, &[PSO_STEP_TAG, iteration as u64, z as u64]);
            let mut raw = Vec::with_capacity(n);
            for d in 0..n {
                let e1: f64 = rng.gen();
                let e2: f64 = rng.gen();
                let x = particle.position.coords()[d];
                let v = inertia * particle.velocity[d]
                    + cfg.c1 * e1 * (particle.best_position.coords()[d] - x)
                    + cfg.c2 * e2 * (global_best.coords()[d] - x);
                particle.velocity[d] = v;
                raw.push(x + v);
            }
            particle.position = project(&raw, spec);
            let f = ordered(fitness(&particle.position));
            if f > particle.best_fitness {
                particle.best_fitness = f;
                particle.best_position = particle.position.clone();
            }
        }
        // deterministic reduction after the sweep; strict > keeps the incumbent
        for particle in &particles {
            if particle.best_fitness > global_fitness {
                global_fitness = particle.best_fitness;
                global_best = particle.best_position.clone();
            }
        }
    }

    (global_best, global_fitness)
}
