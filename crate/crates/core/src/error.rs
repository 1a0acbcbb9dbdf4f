use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BellError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Raised when a construction needs an entangled state but `c1 * c2 = 0`.
    #[error("separable state (c1*c2 = 0): no violating settings exist")]
    Separable,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, BellError>;

pub(crate) fn invalid(msg: impl Into<String>) -> BellError {
    BellError::InvalidArgument(msg.into())
}
