use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("group too large: more than {cap} elements (enumerated {partial} before stopping)")]
    GroupTooLarge { cap: usize, partial: usize },
    #[error("budget exceeded in {what}: needs {needed}, budget {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u128 },
    #[error("degree {degree} exceeds the supported limit {limit} for {what}")]
    DegreeTooLarge { what: &'static str, degree: usize, limit: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
