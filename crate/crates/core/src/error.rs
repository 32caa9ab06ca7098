use thiserror::Error;

use crate::semigroup::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input arrays have the wrong shape or contain out-of-range indices.
    #[error("malformed input: {0}")]
    Structural(String),

    #[error("document error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error("axiom violations: {}", .0.summary())]
    Axioms(ValidationReport),

    #[error("size cap exceeded: {requested} elements requested, cap is {cap}")]
    SizeCap { requested: usize, cap: usize },

    #[error("unknown builtin semigroup `{0}`")]
    UnknownBuiltin(String),

    #[error("carrier mismatch: expected {expected}, found {found}")]
    CarrierMismatch { expected: String, found: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("semigroup has no identity element")]
    NotUnital,

    #[error("pi({element}) is not an orthogonal projection (residual {residual:.3e})")]
    NotProjection { element: usize, residual: f64 },

    #[error("function is not positive definite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("function is not extendible (range residual {residual:.3e})")]
    NotExtendible { residual: f64 },

    #[error("block decomposition failed: {0}")]
    Decomposition(String),

    #[error("property falsified: {0}")]
    Falsified(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
