use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("graph generation failed after {attempts} attempts: {reason}")]
    Generation { attempts: usize, reason: String },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("regularity violation: vertex {vertex} has degree {found}, expected {expected}")]
    Regularity { vertex: usize, found: usize, expected: usize },

    #[error("simplicity violation: {0}")]
    Simplicity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("eigensolver did not converge (residual {residual:e})")]
    Numerical { residual: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("enumeration budget exceeded: {needed} membership checks > budget {budget}; use sse_profile_heuristic")]
    Budget { needed: u128, budget: u128 },
}
