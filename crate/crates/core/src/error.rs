use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {p} does not exceed the required floor {floor}")]
    CharacteristicTooSmall { p: u64, floor: u64 },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("degree vector must be non-negative and nonzero")]
    ZeroDegree,
    #[error("operation requires a standard graded ring (one block), got {0} blocks")]
    Multigraded(usize),
    #[error("the unit ideal is not supported")]
    UnitIdeal,
    #[error("an ideal needs at least one generator")]
    EmptyIdeal,
    #[error("at most {max} generators are supported, got {got}")]
    TooManyGenerators { max: usize, got: usize },
    #[error("monomial lives in {got} variables, ring has {expected}")]
    VariableCount { expected: usize, got: usize },
    #[error("index sets overlap")]
    OverlappingIndexSets,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("chains belong to different ideals")]
    IdealMismatch,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("{0} is not a minimal generator of the ideal")]
    NotAGenerator(String),
    #[error("candidate {0} is not a cycle")]
    NotACycle(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degree {0} lies outside the stored window")]
    InsufficientWindow(i64),
    #[error("component of estimated size {estimate} exceeds the ceiling {ceiling}")]
    Infeasible { estimate: u64, ceiling: u64 },
    #[error("scan cap {cap} is below the lowest generator degree {min}")]
    CapTooSmall { cap: i64, min: i64 },
    #[error("coefficient {0} is not defined in this field")]
    NotInField(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}
