//! Crate-wide error type. Every fallible operation returns [`Result`].

use thiserror::Error;

/// Unified error for construction, numerical, and I/O failures.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix handed to a symmetric-only routine is not symmetric.
    #[error("matrix not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {delta:e} exceeds 1e-12")]
    NotSymmetric { i: usize, j: usize, delta: f64 },

    /// The eigensolver hit its sweep cap before the off-diagonal mass vanished.
    #[error(
        "eigensolver failed to converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    /// Two operands that must share a dimension do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A scalar or vector argument violates the documented domain.
    #[error("invalid {name}: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    /// A probability vector does not normalize or has negative entries.
    #[error("invalid probability vector {name}: {reason}")]
    InvalidDistribution { name: &'static str, reason: String },

    /// Bayes updating hit an (numerically) impossible observation.
    #[error("degenerate evidence: posterior denominator {denominator:e} below 1e-300")]
    DegenerateEvidence { denominator: f64 },

    /// A config document failed structural validation.
    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    /// JSON (de)serialization failure, with line/column from the parser.
    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),

    /// Filesystem failure while writing experiment outputs.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}
