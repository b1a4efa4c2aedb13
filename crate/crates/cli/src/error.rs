use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: unreadable config, invalid field, failed precondition.
    #[error("{0}")]
    Param(String),
    /// Anything that goes wrong after the input was accepted.
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Param(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    pub fn field(name: &str, msg: impl std::fmt::Display) -> Self {
        CliError::Param(format!("field `{name}`: {msg}"))
    }
}

impl From<nilbohr::Error> for CliError {
    fn from(e: nilbohr::Error) -> Self {
        match e {
            nilbohr::Error::Inconsistent(_) => CliError::Internal(e.to_string()),
            other => CliError::Param(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
