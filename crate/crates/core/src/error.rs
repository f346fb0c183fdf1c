use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("number of alternatives must be in 2..=8, got {0}")]
    AlternativeCount(usize),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("function is not conservative at tuple {tuple:?} (value {value})")]
    NotConservative { tuple: Vec<u8>, value: u8 },
    #[error("invalid decisive coalition: {0}")]
    InvalidCoalition(String),
    #[error("rule is not local")]
    NotLocal,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A computation produced a result that contradicts a claim the crate is
    /// built to check. Never expected; carries the offending data.
    #[error("falsified: {0}")]
    Falsified(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
