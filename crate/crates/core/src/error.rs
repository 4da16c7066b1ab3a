use thiserror::Error;

/// Errors raised by the library.
///
/// Budget overruns are kept apart from mathematical failures so that
/// experiment drivers can skip oversize instances instead of aborting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{e} exceeds the supported maximum 2^20")]
    OrderTooLarge { p: u64, e: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different {0}")]
    SpecMismatch(&'static str),
    #[error("{n} is not coprime to {q}")]
    NotCoprime { n: u64, q: u64 },
    #[error("index {index} out of range for a set of size {size}")]
    OutOfRange { index: usize, size: usize },
    #[error("splitting field degree {degree} exceeds the cap of {cap}")]
    SplittingDegree { degree: u32, cap: u32 },
    #[error("enumeration of {needed} words exceeds the budget of {budget}")]
    BudgetExceeded { needed: f64, budget: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
