use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable {var} out of range 1..={n_vars}")]
    OutOfRangeVariable { var: i64, n_vars: usize },
    #[error("clause {clause} repeats a variable")]
    RepeatedVariableInClause { clause: usize },
    #[error("clause {clause} has {len} literals, expected 3")]
    WrongClauseArity { clause: usize, len: usize },
    #[error("assignment has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("clause {clause} is not unsatisfied")]
    ClauseNotUnsat { clause: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("{n_vars} variables exceed the oracle limit of {limit}")]
    OracleLimitExceeded { n_vars: usize, limit: usize },
    #[error("resampling budget exhausted")]
    ResampleBudgetExhausted,
    #[error("{n_vars} variables exceed the enumeration limit of {limit}")]
    LimitExceeded { n_vars: usize, limit: usize },
    #[error("search node budget of {0} exceeded")]
    BudgetExceeded(u64),
}
