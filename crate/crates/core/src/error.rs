//! Error taxonomy shared by the whole crate.
//!
//! The split matters to callers: `Precision` is retryable (raise the working
//! precision and rebuild), `InvalidInput` is a caller mistake, and `Internal`
//! always signals a bug or a mathematically excluded configuration.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The requested answer cannot be certified at the current working
    /// precision. Retry with a larger precision window.
    #[error("insufficient precision: {0}")]
    Precision(String),

    /// Caller-supplied data is malformed or out of contract.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration the theory excludes was reached, or an internal
    /// cross-check failed. Never a user error.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    /// A hard enumeration bound (documented per operation) was exceeded.
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::Precision(_))
    }
}
