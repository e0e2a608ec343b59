use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HardyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("quadrature failed to converge on [{a}, {b}]: estimate {value:e}, error {error_estimate:e} after {evaluations} evaluations")]
    ConvergenceFailure {
        a: f64,
        b: f64,
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("Gamma function pole at {0}")]
    PoleError(f64),

    #[error("argument {0} outside the domain [0, 1)")]
    OutOfDomain(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ground state must be strictly positive (node {node}: {value})")]
    NonpositiveGroundState { node: usize, value: f64 },

    #[error("weighted norm vanishes; Rayleigh quotient undefined")]
    ZeroDenominator,

    #[error("function support is unbounded")]
    UnboundedSupport,

    #[error("energy diverges: {0}")]
    DivergentEnergy(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, HardyError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(HardyError::InvalidParams(msg.into()))
}
