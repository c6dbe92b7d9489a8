use thiserror::Error;

/// Errors raised by network construction, synthesis and the estimators.
#[derive(Debug, Error)]
pub enum Error {
    /// An input vector or layer does not have the dimension the operation expects.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A parameter is outside the range the construction is defined for.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A value lies outside the mathematical domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// A user-supplied specification failed validation.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A numerical procedure could not make progress (e.g. rejection sampling starved).
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
