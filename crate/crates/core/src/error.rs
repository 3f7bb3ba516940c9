use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid state: {0}")]
    Validation(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A quantity that is non-negative in theory came out negative beyond
    /// floating-point noise.
    #[error("consistency violation: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("property suite failed: {0}")]
    PropertyFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) | Error::Parse(_) | Error::Validation(_) | Error::Io(_) => 2,
            Error::Capacity(_) => 3,
            Error::Numeric(_) | Error::Consistency(_) => 4,
            Error::PropertyFailure(_) => 5,
        }
    }
}

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
