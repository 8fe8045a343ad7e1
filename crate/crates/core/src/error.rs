use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A computation would exceed its configured size budget.
    #[error("{what}: size {required} exceeds budget {budget}")]
    SizeLimit {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    /// Too few data points or an undersized truncation for the request.
    #[error("{what}: need at least {needed}, got {got}")]
    Arity {
        what: &'static str,
        needed: u128,
        got: u128,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A theorem-backed consistency check failed, which points at a bug.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("h-vector entry h_{index} = {value} is not an integer")]
    NonIntegral { index: usize, value: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Whether this error is a resource refusal rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::SizeLimit { .. })
    }
}
