use thiserror::Error;

/// Errors produced by matrix construction, analysis and IO.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("order {0} is too small (need at least {1})")]
    TooSmall(usize, usize),

    #[error("entry ({row}, {col}) = {value} is not a positive finite number")]
    NonPositive { row: usize, col: usize, value: f64 },

    #[error("diagonal entry ({0}, {0}) = {1} is not 1")]
    Diagonal(usize, f64),

    #[error("reciprocity violated at ({row}, {col}): a_ij * a_ji = {product}")]
    Reciprocity {
        row: usize,
        col: usize,
        product: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("graph of order {order} exceeds the brute-force limit {limit}")]
    TooLargeForSearch { order: usize, limit: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
