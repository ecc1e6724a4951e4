use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An evolution pushed amplitude outside the admitted basis.
    #[error("truncation overflow: lost probability {lost:.3e}")]
    TruncationOverflow { lost: f64 },
    #[error("out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, FockError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(FockError::InvalidInput(msg.into()))
}
