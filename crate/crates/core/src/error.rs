use thiserror::Error;

/// Errors raised by the simulator and the verification experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mesh specification: {0}")]
    InvalidMeshSpec(String),

    #[error("weight exponent {exponent} is not integrable on the first cell ({context})")]
    DivergentWeight { exponent: f64, context: &'static str },

    #[error("eigenpair {index} failed to converge: {reason}")]
    ConvergenceFailure { index: usize, reason: String },

    #[error("horizon T = {horizon} does not exceed the observation threshold {threshold}")]
    TimeTooShort { horizon: f64, threshold: f64 },

    #[error("beta = {beta} outside the admissible interval (0, {bound})")]
    BetaOutOfRange { beta: f64, bound: f64 },

    #[error("no admissible epsilon found on the certification grid")]
    NoAdmissibleEpsilon,

    #[error("input `{name}` must be positive, got {value}")]
    NonPositiveInput { name: &'static str, value: f64 },

    #[error("parameter `{name}` = {value} out of range: {expected}")]
    OutOfRange { name: &'static str, value: f64, expected: &'static str },

    #[error("requested truncation ({requested}) exceeds available {available}")]
    TruncationTooSmall { requested: usize, available: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("test function does not vanish at r = 0 (u(0) = {value})")]
    BoundaryViolation { value: f64 },

    #[error("delta = {delta} outside (0, 1)")]
    DeltaOutOfRange { delta: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("finite-difference stencil reaches the degenerate side r = 0 (r = {r}, h = {h})")]
    DegenerateCellTouched { r: f64, h: f64 },

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
