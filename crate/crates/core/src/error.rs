use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid shape m={m}, n={n}: need 1 <= m <= n")]
    InvalidShape { m: usize, n: usize },

    #[error("invalid index tuple: {0}")]
    InvalidTuple(String),

    #[error("shape mismatch between index tuples")]
    ShapeMismatch,

    #[error("empty symmetric difference: the pair has no exchange layout")]
    EmptySymmetricDifference,

    #[error("{what} index {index} out of range 1..={bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("invalid minor specification: {0}")]
    InvalidMinor(String),

    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("pre-matching scan failed: {0}")]
    Prematch(String),

    #[error("search budget of {budget} samples exhausted without a witness")]
    BudgetExhausted { budget: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
