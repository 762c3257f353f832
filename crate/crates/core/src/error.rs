use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {column}: {message} (at `{token}`)")]
    Parse {
        line: usize,
        column: usize,
        token: String,
        message: String,
    },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("leaf labels do not form a permutation: {0}")]
    LeafLabels(String),
    #[error("mixed coefficient fields")]
    FieldMismatch,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("index {index} out of range 1..={arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
