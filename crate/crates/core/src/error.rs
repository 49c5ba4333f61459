use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid SBM specification: {0}")]
    InvalidSpec(String),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("row and column vertex sets overlap at vertex {0}")]
    OverlappingSets(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("subspace iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("degenerate partition: a cell stayed empty after {0} attempts")]
    DegeneratePartition(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("a vertex cannot be queried against itself ({0})")]
    SelfQuery(usize),

    #[error("instance too large for exhaustive search: n = {n} exceeds {max}")]
    TooLarge { n: usize, max: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
