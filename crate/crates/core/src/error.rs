use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A named parameter failed validation.
    #[error("invalid `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// A truncated basis or Fock grid is too small for the requested accuracy.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// A closed form hit a zero denominator.
    #[error("singularity: {0}")]
    Singularity(String),

    /// Two independent constructions disagree.
    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
