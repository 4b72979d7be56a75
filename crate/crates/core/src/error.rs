use thiserror::Error;

/// Errors raised by the aggregation engine and its instances.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: left operand has {left} columns, right operand has {right} rows")]
    DimensionMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is singular (pivot {pivot:e} below threshold {threshold:e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("interval [{lo}, {hi}] is outside the assignment range [{start}, {end}]")]
    OutOfRange {
        lo: i64,
        hi: i64,
        start: i64,
        end: i64,
    },

    #[error("endpoint mismatch at cell {index}")]
    EndpointMismatch { index: usize },

    #[error("boundary mismatch at cell ({i}, {j}): {detail}")]
    BoundaryMismatch { i: usize, j: usize, detail: String },

    #[error("boundary product of face ({i}, {j}) is not in the image of the feedback: {detail}")]
    NotInFeedbackImage { i: usize, j: usize, detail: String },

    #[error("alphabet mismatch between tensor elements")]
    AlphabetMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
