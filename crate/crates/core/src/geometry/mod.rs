//! Levi-Civita calculus on a coordinate chart.

pub mod connection;
pub mod curvature;
pub mod forms;
pub mod frame;
pub mod lie;

pub use connection::{christoffel, covariant_derivative, inverse_metric, LeviCivita};
pub use curvature::{
    curvature_action, derivation_action, nabla_riemann, ricci_and_scalar, ricci_from_riemann, riemann, sectional_curvature,
    CurvatureBundle, DEGENERATE_PLANE,
};
pub use forms::{exterior_derivative, wedge, JetForm};
pub use frame::{gram_matrix, gram_schmidt};
pub use lie::{lie_bracket, lie_derivative, lie_ops, LieTarget};
