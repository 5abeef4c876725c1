use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("word length {0} is outside 1..=64")]
    BadLength(usize),
    #[error("invalid symbol {0:?} in word")]
    BadSymbol(char),
    #[error("{value} does not fit in a word of length {len}")]
    DecimalOutOfRange { value: String, len: usize },
    #[error("word {0} is not a necklace")]
    NotNecklace(String),
    #[error("modulus {p} is not congruent to 1 mod {n}")]
    NotCongruent { p: String, n: usize },
    #[error("stored symbol at position {position} does not match the expected old symbol")]
    SymbolMismatch { position: usize },
    #[error("lifted determinant {value} exceeds the bound {bound}")]
    LiftOutOfRange { value: String, bound: String },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not a prime congruent to 1 mod 4")]
    NotUraOrder(u64),
    #[error("interpolated coefficient {0} is not an integer")]
    NonIntegerCoefficient(String),
    #[error("invalid partition parameters: workers={workers}, sample_size={sample_size}")]
    BadPartition { workers: usize, sample_size: usize },
    #[error("candidate count mismatch: examined {examined}, expected {expected}")]
    CandidateMismatch { examined: String, expected: String },
    #[error("cannot merge results: {0}")]
    IncompatibleResults(String),
    #[error("position {position} out of range for order {n}")]
    BadPosition { position: usize, n: usize },
    #[error("reference table: {0}")]
    Table(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
