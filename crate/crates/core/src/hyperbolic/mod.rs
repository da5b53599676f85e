//! Geometry of hyperbolic 3-space in the hyperboloid model.

mod lorentz;
mod point;
mod sl2;
mod thin;
mod upper_half;

use thiserror::Error;

pub use lorentz::Lorentz;
pub use point::{minkowski_dot, Point, Tangent};
pub use sl2::Sl2;
pub use thin::{distance_to_segment, estimate_thin_constant, triangle_thinness, HyperbolicConstants};
pub use upper_half::UpperHalfPoint;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicError {
    #[error("point is off the hyperboloid (residual {residual:e})")]
    InvalidPoint { residual: f64 },
    #[error("vector is not tangent at the base point (residual {residual:e})")]
    NotTangent { residual: f64 },
    #[error("matrix determinant differs from 1 by {defect:e}")]
    NotUnitDeterminant { defect: f64 },
}
