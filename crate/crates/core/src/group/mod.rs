//! Words, presentations and representations into SL(2, C).

mod family;
mod presentation;
mod representation;
mod word;

use thiserror::Error;

pub use family::{FamilyKind, RepresentationFamily, DEFAULT_STRETCH_ANGLE};
pub use presentation::Presentation;
pub use representation::{Representation, RELATOR_TOL};
pub use word::{Letter, Word};

use crate::hyperbolic::HyperbolicError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("relator {relator} not mapped to +-I (trace defect {defect:e})")]
    RelatorViolated { relator: String, defect: f64 },
    #[error("parameter {t} outside [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Geometry(#[from] HyperbolicError),
}
