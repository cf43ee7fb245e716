use thiserror::Error;

/// Errors raised by the toolkit.
///
/// `InvariantViolation` is reserved for internal consistency failures (a
/// model produced something it should not have); every other variant means
/// the caller supplied bad input or exceeded an enumeration guard.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("enumeration guard exceeded: {what} needs {requested}, limit is {limit}")]
    GuardExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("singular curve: {0}")]
    Singular(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }

    /// True for failures that indicate a bug in a model rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
