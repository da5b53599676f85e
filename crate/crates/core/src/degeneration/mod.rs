//! Degeneration pipeline: run a family of representations, rescale the
//! pull-back metrics by the square root of the energy, watch them become
//! tree-like, rebuild the limiting tree and read off its length function.

mod action;
mod metric;
mod reconstruct;
mod run;

use thiserror::Error;

pub use action::{induced_action, SampledAction};
pub use metric::{
    check_pseudometric, gromov_delta, rescale, DeltaReport, RescaledMetric, DEFAULT_DELTA_SEED, QUADRUPLE_BUDGET,
};
pub use reconstruct::{tree_from_metric, MetricTree};
pub use run::{
    is_abelian, projective_compare, run_degeneration, run_degeneration_with, DegenerationCase, DegenerationRun,
    DegenerationSetup, StepRecord, BOUNDED_ENERGY_FACTOR, DEFAULT_DELTA_THRESHOLD, DEFAULT_EDGE_SUBDIVISIONS, DEFAULT_SAMPLE_LEN,
};

use crate::group::GroupError;
use crate::harmonic::HarmonicError;
use crate::rtree::TreeError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DegenerationError {
    #[error("energy must be positive, got {0}")]
    InvalidEnergy(f64),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("metric is not tree-like: delta {delta} against diameter {diameter} at quadruple {quadruple:?}")]
    NotTreeLike { quadruple: [usize; 4], delta: f64, diameter: f64 },
    #[error("generator {generator} distorts samples {pair:?} by {distortion}")]
    NonIsometricAction { generator: usize, pair: (usize, usize), distortion: f64 },
    #[error("length vector is identically zero")]
    DegenerateLengths,
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}
