use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{context}: argument {value} lies outside the admissible domain")]
    Domain { context: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("size mismatch: expected {expected} values, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("{what} did not converge within {iterations} iterations")]
    Convergence { what: &'static str, iterations: usize },

    #[error("matrix is singular: pivot {pivot:e} at column {column} below threshold {threshold:e}")]
    Singular { column: usize, pivot: f64, threshold: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("gamma function pole at {0}")]
    Pole(f64),

    #[error("unknown builtin problem {0} (expected 1, 2 or 3)")]
    UnknownProblem(u32),

    #[error("problem has no exact solution")]
    NoExactSolution,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
