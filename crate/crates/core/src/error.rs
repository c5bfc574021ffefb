use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Input is not a valid Hermitian/trace-one operator.
    #[error("representation error: {0}")]
    Representation(String),

    #[error("invalid Stokes tensor: {0}")]
    InvalidTensor(String),

    #[error("state is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn dim<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(msg.into()))
}
