use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u64),
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("{value} is not invertible in {ring}")]
    NotInvertible { value: String, ring: String },
    #[error("{value} cannot be mapped into {ring}")]
    NotIntegral { value: String, ring: String },
    #[error("factor polynomial must be non-constant")]
    ConstantFactor,
    #[error("weight {0} is not a multiple of 4")]
    BadWeight(u64),
    #[error("weight {weight} is incompatible with delta parity {parity}")]
    BadParity { weight: u64, parity: u8 },
    #[error("expected {expected} coordinates for weight {weight}, got {got}")]
    CoordinateCount { weight: u64, expected: usize, got: usize },
    #[error("series known through q^{have}, need q^{need}")]
    InsufficientPrecision { have: usize, need: usize },
    #[error("series is not in the span of the weight-{weight} basis")]
    NotInSpan { weight: u64 },
    #[error("form vanishes mod {0}")]
    ZeroModP(u64),
    #[error("delta-bearing polynomial cannot be dehomogenized")]
    DeltaParity,
    #[error("operation requires p = {expected}, got {got}")]
    WrongPrime { expected: u64, got: u64 },
    #[error("weight mismatch: form has weight {form}, expected {expected}")]
    WeightMismatch { form: u64, expected: u64 },
    #[error("index out of range: {0}")]
    IndexRange(String),
    #[error("(p, i, j) = ({p}, {i}, {j}) is not an order-p divided beta family index")]
    InvalidIndex { p: u64, i: u64, j: u64 },
    #[error("linear system for (i, j) = ({i}, {j}) is inconsistent")]
    NoSolution { i: u64, j: u64 },
    #[error("solution for (i, j) = ({i}, {j}) fails the condition checks at stage {stage}")]
    PostconditionFailure { i: u64, j: u64, stage: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cache: {0}")]
    Cache(String),
}
