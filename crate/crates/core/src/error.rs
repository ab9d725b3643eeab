use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the command-line exit codes: configuration errors
/// are usage errors, everything else is a data error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Parameters that are individually valid but inconsistent, or a
    /// required parameter is missing.
    #[error("configuration error: {0}")]
    Config(String),
    /// Malformed input data.
    #[error("data error: {0}")]
    Data(String),
    /// A numerical routine failed to meet its own postcondition.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

pub(crate) fn data(msg: impl Into<String>) -> Error {
    Error::Data(msg.into())
}
