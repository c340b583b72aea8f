use num_complex::Complex64;
use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// The variants fall into two classes that the CLI maps onto exit codes:
/// contract violations (bad input) and numeric failures, which include
/// stratum boundaries that a computation ran into.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("degree {degree} exceeds the configured maximum {max}")]
    Capacity { degree: usize, max: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("root finder did not converge after {iterations} iterations (backward error {residual:e})")]
    RootNonConvergence {
        iterations: usize,
        residual: f64,
        best: Vec<Complex64>,
    },

    #[error("degenerate critical point: {0}")]
    Degeneracy(String),

    #[error("singular value decomposition did not converge")]
    SvdNonConvergence,

    #[error("stratum boundary reached: {0}")]
    Boundary(String),

    #[error("newton corrector left its basin: residual {residual:e} after {iterations} iterations")]
    Basin { iterations: usize, residual: f64 },

    #[error("path tracking step fell below {min_step:e}")]
    MinStep { min_step: f64 },

    #[error("stratum sampler gave up after {attempts} attempts: {reason}")]
    SamplerExhausted { attempts: usize, reason: String },
}

/// Coarse classification used for exit codes and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Contract,
    Numeric,
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Contract(_) | Error::Capacity { .. } | Error::Parse { .. } => {
                ErrorClass::Contract
            }
            _ => ErrorClass::Numeric,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
