//! Crate-wide error type.
//!
//! Variants map one-to-one onto the failure classes the pipeline distinguishes:
//! bad dimensions, mismatched shapes, violated numeric preconditions, numerical
//! failures inside a solver, invalid run configuration, missing artifacts, and
//! I/O. `code()` gives the short stable identifier used in failure CSVs.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A dimension argument is out of range (zero, above a cap, too small for
    /// the requested statistic, ...).
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// Two operands have incompatible shapes.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A documented precondition was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numerical routine failed (non-convergence, NaN, lost symmetry, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The run configuration is rejected before any computation starts.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A required on-disk artifact is absent.
    #[error("missing artifact: {0}")]
    MissingArtifact(String),

    /// Filesystem error while reading or writing artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable identifier for CSV/report output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidDimension(_) => "invalid_dimension",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::Precondition(_) => "precondition",
            Error::Numerical(_) => "numerical",
            Error::InvalidConfig(_) => "invalid_config",
            Error::MissingArtifact(_) => "missing_artifact",
            Error::Io(_) => "io",
        }
    }
}
