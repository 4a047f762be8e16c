//! Antenna-position optimization for fluid MIMO links over the oscillatory
//! Bessel correlation landscape.
//!
//! Positions along each linear aperture induce spatial correlation through
//! `J0(2 pi d)` (distances in wavelengths); ergodic capacity is estimated by
//! seeded Monte-Carlo over a Kronecker channel and maximized by alternating
//! optimization with either a particle swarm or a projected-gradient solver on
//! the log-determinant surrogate. The `bench` module drives the reproducible
//! experiment sweeps behind the `fluid-mimo-bench` binary.

pub mod ao;
pub mod bench;
pub mod capacity;
pub mod channel;
pub mod correlation;
pub mod error;
pub mod feasibility;
pub mod pso;
mod rng;
pub mod sca;
pub mod special;

pub use ao::{ao_optimize, AoConfig, OptimizationTrace, SolverBackend, SolverKind};
pub use capacity::{CapacityEstimate, SnrSpec};
pub use channel::ChannelSampleSet;
pub use correlation::{CorrelationMatrix, PositionVector};
pub use error::{Error, Result};
pub use feasibility::ApertureSpec;
