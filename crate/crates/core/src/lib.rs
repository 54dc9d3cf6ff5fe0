//! Numerical verification toolkit for almost Kenmotsu f-manifolds on
//! coordinate charts: truncated Taylor jets, Levi-Civita calculus, structure
//! tensors and a registry of identity checks.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod field;
pub mod geometry;
pub mod jet;
pub mod model;
pub mod models;
pub mod oracle;
pub mod rng;
pub mod structure;
pub mod tensor;

pub use error::{Error, Result};
pub use field::{ScalarField, TensorField};
pub use jet::Jet3;
pub use model::{ChartModel, ModelKind};
pub use tensor::{TensorAtPoint, Variance};
