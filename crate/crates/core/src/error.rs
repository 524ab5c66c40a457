use thiserror::Error;

/// Errors raised by model construction, problem validation and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller violated an operation precondition (unknown state, bound exceeded, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// A model is ill-formed (name collisions, reserved names, bad alphabets).
    #[error("model error: {0}")]
    Model(String),
    /// A goal or problem falls outside the supported fragment.
    #[error("spec error: {0}")]
    Spec(String),
    /// Concrete-syntax error with a 1-based position.
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn model<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Model(msg.into()))
}

pub(crate) fn spec<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Spec(msg.into()))
}
