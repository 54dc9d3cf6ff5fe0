use thiserror::Error;

use crate::tensor::Variance;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero at node `{path}`")]
    DivisionByZero { path: String },

    #[error("non-finite or out-of-domain value at node `{path}`: {reason}")]
    Domain { path: String, reason: String },

    #[error("coordinate index {index} out of range for chart dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },

    #[error("jet order {0} not supported (expected 0..=3)")]
    UnsupportedOrder(u8),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("slot {slot} out of range for tensor of rank {rank}")]
    SlotOutOfRange { slot: usize, rank: usize },

    #[error("duplicate slot index {0}")]
    DuplicateSlot(usize),

    #[error("variance mismatch: slots have {first:?} and {second:?}")]
    VarianceMismatch { first: Variance, second: Variance },

    #[error("contracting two {0:?} slots needs a metric of opposite variance")]
    MetricRequired(Variance),

    #[error("metric is singular at the point (condition estimate {condition:e})")]
    SingularMetric { condition: f64 },

    #[error("metric is not positive definite at the point (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("exterior derivative of a {0}-form is not supported")]
    UnsupportedDegree(usize),

    #[error("form is not alternating (asymmetry {0:e})")]
    NotAlternating(f64),

    #[error("wedge product would have degree {0}; only forms up to degree 3 are supported")]
    RankOverflow(usize),

    #[error("degenerate plane: Gram determinant {gram:e}")]
    DegeneratePlane { gram: f64 },

    #[error("vector leaks into the structure directions (max |eta^i(X)| = {leakage:e})")]
    NotHorizontal { leakage: f64 },

    #[error("vector is not unit length (|X|^2 = {norm_sq})")]
    NotUnit { norm_sq: f64 },

    #[error("f-basis construction ran out of coordinate vectors after {found} of {needed}")]
    FrameExhausted { found: usize, needed: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),
}
