//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by region construction, information measures and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Tensor dimensions, variable counts or alphabet sizes disagree.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A probability vector does not sum to one within tolerance, or has
    /// negative entries.
    #[error("not a probability distribution: {0}")]
    NotNormalized(String),

    /// A variable label was not found (or is duplicated) in a joint pmf.
    #[error("unknown or duplicate variable: {0}")]
    UnknownVariable(String),

    /// A joint distribution does not factorize in the form required by the
    /// coding theorem being evaluated.
    #[error("factorization violated: {0}")]
    Factorization(String),

    /// Underlying I/O failure while writing CSV or JSON artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON on an external interface.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
