use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A field could not be constructed from the given parameters.
    #[error("invalid field: {0}")]
    InvalidField(String),
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Inputs are individually valid but inconsistent with each other
    /// (shape, measure tag, backend or variety mismatch).
    #[error("contract violation: {0}")]
    Contract(String),
    /// Exact integer arithmetic would exceed the supported range.
    #[error("exact arithmetic overflow: {0}")]
    Overflow(String),
    /// A textual value (rational, exponent, modulus) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
