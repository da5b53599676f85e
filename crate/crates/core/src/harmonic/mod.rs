//! Equivariant discrete harmonic maps from holonomy-decorated graphs into H^3.

mod energy;
mod graph;
mod pullback;
mod solver;

use thiserror::Error;

pub use energy::{displacement_lower_bound, energy, energy_gradient, lipschitz_ratio, sample_points, EdgeIsometries};
pub use graph::{EquivariantMap, GraphEdge, TwistedGraph};
pub use pullback::{domain_points, pullback_metric, sample_displacement, DomainPoint, PullbackMetric};
pub use solver::{minimize, SolveReport, SolveStatus, SolverOptions};

use crate::group::GroupError;
use crate::hyperbolic::HyperbolicError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarmonicError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Geometry(#[from] HyperbolicError),
}
