//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Shape or dimension constraint violated.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A parameter fell outside its admissible range.
    #[error("range error: {0}")]
    Range(String),

    /// A constructor was handed a NaN or infinite entry.
    #[error("non-finite value at row {row}, col {col}")]
    NonFinite { row: usize, col: usize },

    /// An iterative kernel hit its sweep cap with residual above tolerance.
    #[error("no convergence after {sweeps} sweeps")]
    Convergence { sweeps: usize },

    /// Structural validation failed (corrupted pyramid, non-orthonormal transform).
    #[error("validation error: {0}")]
    Validation(String),

    /// A metric is undefined for the given inputs.
    #[error("undefined metric: {0}")]
    UndefinedMetric(&'static str),

    /// Malformed file contents.
    #[error("parse error at byte {offset}: {detail}")]
    Parse { offset: usize, detail: String },

    /// Malformed or inconsistent dataset manifest.
    #[error("manifest error at line {line}: {detail}")]
    Manifest { line: usize, detail: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
