//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A value failed a type invariant (symmetry, unit diagonal, ordering, ...).
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// A correlation matrix was numerically singular below the eigenvalue floor.
    #[error("correlation matrix is singular: min eigenvalue {min_eigenvalue:.3e} below floor {floor:.1e}")]
    Singular { min_eigenvalue: f64, floor: f64 },

    /// The requested operation is defined only for a restricted configuration.
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    /// An experiment spec referenced a scenario this binary does not know.
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    /// CSV/config file I/O failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }
}
