use thiserror::Error;

use crate::complex_structures::Certificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("invalid norm descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("quadrature did not converge with {nodes} nodes (last relative change {last_change:e})")]
    QuadratureNonConvergence { nodes: usize, last_change: f64 },

    #[error("odd dimension {0} admits no i-operator")]
    OddDimension(usize),

    #[error("not an i-operator: {reason}")]
    InvalidIOperator { reason: String, certificate: Box<Certificate> },

    #[error("operator does not respect the i-operators: residual {residual:e} at ({row}, {col})")]
    RespectViolation { residual: f64, row: usize, col: usize },

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("operator is not invertible: {0}")]
    NotInvertible(String),

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("unsupported norm for {functional}: {detail}")]
    UnsupportedNorm { functional: String, detail: String },

    #[error("oracle kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },

    #[error("unknown rewrite rule {0}")]
    UnknownRule(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
