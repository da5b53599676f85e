use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::group::Presentation;

use super::action::TreeAction;
use super::isometry::TreeIsometry;
use super::tree::{Edge, SimplicialTree, TreePoint};
use super::TreeError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Infinity {
    #[serde(rename = "infinity")]
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Inf {
    #[serde(rename = "inf")]
    Inf,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EndpointRecord {
    Vertex(usize),
    Infinity(Infinity),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LengthRecord {
    Finite(f64),
    Inf(Inf),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub a: usize,
    pub b: EndpointRecord,
    pub len: LengthRecord,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRecord {
    Vertex(usize),
    OnEdge { edge: usize, offset: f64 },
}

impl From<TreePoint> for PointRecord {
    fn from(p: TreePoint) -> Self {
        match p {
            TreePoint::Vertex(v) => PointRecord::Vertex(v),
            TreePoint::OnEdge { edge, offset } => PointRecord::OnEdge { edge, offset },
        }
    }
}

/// Images of vertices (possibly a partial map, as produced from samples) and
/// the permutation of infinite edges.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub vertex_map: BTreeMap<usize, PointRecord>,
    pub edge_map: BTreeMap<usize, usize>,
}

/// On-disk tree description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeDocument {
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub actions: BTreeMap<String, ActionRecord>,
    /// Vertex carrying each sample point, for trees rebuilt from a metric.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<usize>,
}

impl TreeDocument {
    pub fn from_tree(tree: &SimplicialTree) -> Self {
        let edges = tree
            .edges()
            .iter()
            .map(|e| match e.b {
                Some(b) => EdgeRecord { a: e.a, b: EndpointRecord::Vertex(b), len: LengthRecord::Finite(e.len) },
                None => EdgeRecord { a: e.a, b: EndpointRecord::Infinity(Infinity::Infinity), len: LengthRecord::Inf(Inf::Inf) },
            })
            .collect();
        Self { vertices: (0..tree.vertex_count()).collect(), edges, actions: BTreeMap::new(), samples: Vec::new() }
    }

    pub fn from_action(action: &TreeAction) -> Self {
        let mut doc = Self::from_tree(action.tree());
        for (name, g) in action.presentation().generators().iter().zip(action.generators()) {
            let record = ActionRecord {
                vertex_map: g.vertex_images().iter().enumerate().map(|(v, &p)| (v, p.into())).collect(),
                edge_map: g.end_map().clone(),
            };
            doc.actions.insert(name.clone(), record);
        }
        doc
    }

    pub fn to_tree(&self) -> Result<SimplicialTree, TreeError> {
        if self.vertices.iter().enumerate().any(|(i, &v)| i != v) {
            return Err(TreeError::InvalidTree("vertex ids must be 0, 1, 2, ... in order".into()));
        }
        let edges = self
            .edges
            .iter()
            .map(|r| match (r.b, r.len) {
                (EndpointRecord::Vertex(b), LengthRecord::Finite(len)) => Ok(Edge::finite(r.a, b, len)),
                (EndpointRecord::Infinity(_), LengthRecord::Inf(_)) => Ok(Edge::infinite(r.a)),
                _ => Err(TreeError::InvalidTree(format!("edge from {} mixes finite and infinite data", r.a))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        SimplicialTree::new(self.vertices.len(), edges)
    }

    /// Builds the action of `presentation`, taking each generator's isometry
    /// from the record of the same name. Vertex maps must be total.
    pub fn to_action(&self, presentation: &Presentation) -> Result<TreeAction, TreeError> {
        let tree = self.to_tree()?;
        let mut gens = Vec::new();
        for name in presentation.generators() {
            let rec = self
                .actions
                .get(name)
                .ok_or_else(|| TreeError::InvalidIsometry(format!("no action given for generator {name}")))?;
            let images = (0..tree.vertex_count())
                .map(|v| match rec.vertex_map.get(&v) {
                    Some(PointRecord::Vertex(w)) => Ok(TreePoint::Vertex(*w)),
                    Some(PointRecord::OnEdge { edge, offset }) => tree.point(*edge, *offset),
                    None => Err(TreeError::InvalidIsometry(format!("generator {name} has no image for vertex {v}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            gens.push(TreeIsometry::new(&tree, images, rec.edge_map.clone())?);
        }
        TreeAction::new(tree, presentation.clone(), gens)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree documents always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, TreeError> {
        serde_json::from_str(s).map_err(|e| TreeError::Json(e.to_string()))
    }
}
