use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements belong to different fields (p={left} and p={right})")]
    MixedFields { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime modulus in [2, 2^31]")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("enumeration needs {required} items, budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },
    #[error("the code has rank 0")]
    ZeroCode,
    #[error("the code has no coordinates")]
    EmptyCode,
    #[error("row {0} is identically zero")]
    ZeroCoordinate(usize),
    #[error("vector is not in the column span")]
    NotACodeword,
    #[error("weight {weight} lies outside the band [{low}, {high}]")]
    WeightOutOfBand { weight: String, low: String, high: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hyperedge of size {size} does not fit field size {q}")]
    HyperedgeTooLarge { size: usize, q: u32 },
    #[error("affine constraints use different primes ({0} and {1})")]
    MixedPrimes(u32, u32),
    #[error("constraint {0} is not an affine predicate")]
    NonAffinePredicate(usize),
    #[error("arity {0} exceeds the projection search limit of 8")]
    ArityTooLarge(usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
