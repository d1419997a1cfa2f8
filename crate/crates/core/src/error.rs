use thiserror::Error;

/// Errors shared by every search and algebra operation in this crate.
///
/// `BudgetExceeded` is the normal outcome of asking an exhaustive oracle a
/// question that is too large; everything else signals bad inputs or (for
/// `InternalVerificationFailed`) a bug that must never be silently ignored.
#[derive(Debug, Error)]
pub enum Error {
    #[error("budget exceeded in {stage}: needs {needed} candidate visits, budget is {budget}")]
    BudgetExceeded {
        stage: &'static str,
        needed: u128,
        budget: u64,
    },

    #[error("{0} is not a supported modulus (need a prime in 2..=13)")]
    BadModulus(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("no solution: column {col} of the right-hand side is outside the column space")]
    NoSolution { col: usize },

    #[error("matrix is rank deficient: rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("generator does not cover the target column space")]
    NotACover,

    #[error("black box does not compute the target map on input {input:?}")]
    NotComputingTarget { input: Vec<u8> },

    #[error("unsupported code kind for p = {p}")]
    UnsupportedCodeKind { p: u8 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal verification failed: {0}")]
    InternalVerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
