use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rotation matrix is not orthogonal with unit determinant (deviation {0:e})")]
    InvalidRotation(f64),
    #[error("expected a {expected} vector, got a {found} one")]
    VarianceMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("jet of order {available} is insufficient, order {required} required")]
    InsufficientJetOrder { required: u8, available: u8 },
    #[error("polynomial of degree {degree} exceeds the allowed maximum {max}")]
    DegreeTooHigh { degree: u32, max: u32 },
    #[error("field evaluation produced a non-finite value at x = {0:?}")]
    NonFinite([f64; 4]),
    #[error("coupling constant must be non-zero")]
    ZeroCoupling,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("time step {dt} violates the CFL bound {limit}")]
    CflViolation { dt: f64, limit: f64 },
    #[error("linear solver did not converge after {iterations} iterations (residual {residual:e})")]
    SolverNonConvergence { iterations: usize, residual: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
