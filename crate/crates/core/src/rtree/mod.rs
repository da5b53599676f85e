//! R-trees with finitely many branch points and ends, realized as finite
//! simplicial trees with infinite leaf edges, and isometric group actions on them.

mod action;
pub mod gen;
mod isometry;
mod json;
mod subtree;
mod tree;

use thiserror::Error;

pub use action::{shift_toward_end, SemisimpleClass, TreeAction, DEFAULT_AXIS_WORD_LEN};
pub use isometry::TreeIsometry;
pub use json::{ActionRecord, EdgeRecord, EndpointRecord, LengthRecord, PointRecord, TreeDocument};
pub use subtree::Subtree;
pub use tree::{Edge, Piece, SimplicialTree, TreePoint};

use crate::group::GroupError;

/// Slack for comparing tree distances and offsets.
pub const TREE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid subtree: {0}")]
    InvalidSubtree(String),
    #[error("invalid isometry: {0}")]
    InvalidIsometry(String),
    #[error("relator {relator} does not act trivially (defect {defect:e})")]
    RelatorViolated { relator: String, defect: f64 },
    #[error("no word of length at most {max_len} acts hyperbolically")]
    EllipticAction { max_len: usize },
    #[error("invariant hull did not stabilise")]
    NotStable,
    #[error("malformed tree document: {0}")]
    Json(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}
