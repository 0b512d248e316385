use thiserror::Error;

/// Errors raised by the polynomial core, the map constructors and the lab.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("incompatible coefficient modes")]
    IncompatibleModes,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("undeclared variable {0}")]
    UndeclaredVariable(String),
    #[error("missing assignment for variable {0}")]
    MissingAssignment(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("empty vertex subset")]
    EmptySubset,
    #[error("degenerate chart: {0}")]
    DegenerateChart(String),
    #[error("invalid center family: {0}")]
    InvalidCenters(String),
    #[error("search space of {size} points exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
