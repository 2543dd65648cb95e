use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UspError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = UspError> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> UspError {
    UspError::InvalidArgument(msg.into())
}
