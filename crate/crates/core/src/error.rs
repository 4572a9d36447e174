use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty point list")]
    EmptyPointList,

    #[error("part count must be at least {min}, got {got}")]
    PartCountTooSmall { min: usize, got: usize },

    #[error("epsilon must lie in {range}, got {got}")]
    EpsilonOutOfRange { range: &'static str, got: f64 },

    #[error("label {label} out of range 1..={r}")]
    LabelOutOfRange { label: usize, r: usize },

    #[error("partition has {got} labels but the configuration has {expected} points")]
    LabelCountMismatch { expected: usize, got: usize },

    #[error("point index {index} out of range for {n_points} points")]
    IndexOutOfRange { index: usize, n_points: usize },

    #[error("at most {max} points supported here, got {got}")]
    TooManyPoints { max: usize, got: usize },

    #[error("retry budget of {budget} exhausted after {attempts} attempts")]
    RetryBudgetExhausted { budget: u64, attempts: u64 },

    #[error("enumeration budget exceeded: needs {needed} combinations, budget {budget}")]
    EnumerationBudget { needed: u128, budget: u128 },

    #[error("parameters admit no robust family: epsilon <= ((r-1)/r)^m = {threshold}")]
    BelowThreshold { threshold: String },

    #[error("wrong number of points: expected {expected}, got {got}")]
    WrongPointCount { expected: usize, got: usize },

    #[error("invalid rational literal {literal:?}")]
    BadRational { literal: String },

    #[error("invalid input: {0}")]
    BadInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
