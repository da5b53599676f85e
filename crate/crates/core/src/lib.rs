//! Equivariant discrete harmonic maps into hyperbolic 3-space, their
//! degeneration to R-trees, and the tree operations used to study the limit
//! actions.
//!
//! The geometric core (`hyperbolic`, `group`, `harmonic`) is generic over the
//! scalar type; the aliases below fix it to `f64`, which is what the
//! degeneration pipeline and the command line use.

pub mod checks;
pub mod cli;
pub mod degeneration;
pub mod group;
pub mod harmonic;
pub mod hyperbolic;
pub mod rtree;
pub mod scalar;

pub use scalar::Real;

pub type HyperbolicPoint = hyperbolic::Point<f64>;
pub type TangentVector = hyperbolic::Tangent<f64>;
pub type UnitDeterminantMatrix = hyperbolic::Sl2<f64>;
pub type LorentzIsometry = hyperbolic::Lorentz<f64>;
pub type Representation = group::Representation<f64>;

pub type EquivariantMap = harmonic::EquivariantMap<f64>;
