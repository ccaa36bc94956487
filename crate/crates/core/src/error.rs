use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("sequence exhausted: index {index} requested from a list of length {len}")]
    SequenceExhausted { index: usize, len: usize },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("sequence not invertible over the integers (leading term {0})")]
    NotInvertibleSequence(String),

    #[error("strict build requires λ_0 = 1 (got {0})")]
    StrictLeadingTerm(String),

    #[error("malformed lower-triangular shape: {0}")]
    Shape(String),

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("no integer inverse: diagonal entry {entry} at index {index}")]
    NoIntegerInverse { index: usize, entry: String },

    #[error("not invertible modulo {p}: {value}")]
    NotInvertibleMod { value: u64, p: u64 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("factorization check failed: {0}")]
    FactorMismatch(String),
}
