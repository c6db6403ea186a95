use thiserror::Error;

/// Errors raised by the library.
///
/// `InvalidInput` and `Refused` are caller-facing. The remaining variants
/// signal that a structural claim the computation relies on did not hold;
/// they indicate a bug (or a counterexample) rather than bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("configuration too large: {0}")]
    TooLarge(String),

    #[error("classification failure: {0}")]
    Classification(String),

    #[error("equivalence violated: {0}")]
    Equivalence(String),

    #[error("gluing mismatch: {0}")]
    Gluing(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
