use thiserror::Error;

/// Errors raised by the library. Search failures are outcomes, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("incomplete input: {0}")]
    IncompleteInput(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
