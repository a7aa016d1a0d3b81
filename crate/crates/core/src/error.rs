use thiserror::Error;

/// Errors surfaced by model construction and the numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation needs the supercritical regime `theta > 1/d`.
    #[error("criticality error: {0}")]
    Criticality(String),

    /// A generation index points past the end of an explicit list.
    #[error("index error: generation {index} outside explicit list of length {len}")]
    Index { index: usize, len: usize },

    /// A perturbation prefix is not non-negative and non-increasing.
    #[error("monotonicity error: {0}")]
    Monotonicity(String),

    /// The fixed-point case does not admit the requested quantity.
    #[error("case error: {0}")]
    Case(String),

    /// The tree is too large for exhaustive enumeration.
    #[error("size error: {0}")]
    Size(String),
}

pub type Result<T> = std::result::Result<T, Error>;
