use alloc::string::String;

/// Errors raised by the solution family and its verification routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TodaError {
    #[error("invalid dimension n = {0}; the system needs n >= 1")]
    InvalidDimension(usize),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("vector length {got} does not match n = {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("coefficient c_({i},{j}) is not below the leading power of P_{i}")]
    CoefficientIndex { i: usize, j: usize },

    #[error("lambda_{index} = {value} is not a positive finite number")]
    NonPositiveLambda { index: usize, value: f64 },

    #[error("det_{k}(f) is not positive at z = ({re}, {im})")]
    Positivity { k: usize, re: f64, im: f64 },

    #[error("invalid parameter direction: {0}")]
    InvalidDirection(String),

    #[error("invalid finite-difference step {0}")]
    InvalidStep(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, TodaError>;
