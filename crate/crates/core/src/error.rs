use thiserror::Error;

/// Errors raised by the exact and simulated computations.
///
/// The variants map onto the CLI exit-code classes: `InvalidInput`,
/// `OutOfRange`, `Resource` and `VariableMismatch` are usage errors;
/// `Domain` and `Pole` are domain errors; `Consistency` signals that an
/// internal cross-check failed.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },

    #[error("indeterminate mismatch: {left} vs {right}")]
    VariableMismatch { left: char, right: char },

    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: denominator {0:e} is numerically zero")]
    Pole(f64),

    #[error("resource guard: {0}")]
    Resource(String),

    #[error("consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
