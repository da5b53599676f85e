use std::path::PathBuf;

use serde::Deserialize;

use crate::degeneration::{DegenerationSetup, DEFAULT_DELTA_THRESHOLD, DEFAULT_EDGE_SUBDIVISIONS, DEFAULT_SAMPLE_LEN};
use crate::group::{Presentation, RepresentationFamily, DEFAULT_STRETCH_ANGLE};
use crate::harmonic::{GraphEdge, SolverOptions, TwistedGraph};

/// A config rejected by the schema, with the dotted path of the field at fault.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemaError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "field `{}`: {}", self.field, self.message)
    }
}

fn bad(field: &str, message: impl Into<String>) -> SchemaError {
    SchemaError { field: field.to_string(), message: message.into() }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationConfig {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyConfig {
    DiagonalStretch {
        #[serde(default = "default_angle")]
        angle: f64,
    },
    OctagonTwist,
    /// One `[[re, im]; 4]` matrix `(a, b, c, d)` per generator.
    Constant { images: Vec<[[f64; 2]; 4]> },
}

fn default_angle() -> f64 {
    DEFAULT_STRETCH_ANGLE
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeConfig {
    pub tail: usize,
    pub head: usize,
    #[serde(default = "one")]
    pub weight: f64,
    pub holonomy: String,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphConfig {
    /// One vertex, one loop per generator.
    Rose {
        #[serde(default)]
        weights: Option<Vec<f64>>,
    },
    Custom { vertices: usize, edges: Vec<EdgeConfig> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: default_tol(), max_iter: default_max_iter() }
    }
}

fn default_tol() -> f64 {
    1e-8
}

fn default_max_iter() -> usize {
    5000
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_csv")]
    pub csv: PathBuf,
    #[serde(default = "default_tree")]
    pub tree: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { csv: default_csv(), tree: default_tree() }
    }
}

fn default_csv() -> PathBuf {
    "results.csv".into()
}

fn default_tree() -> PathBuf {
    "tree.json".into()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Required for constant families; must match the built-in one otherwise.
    #[serde(default)]
    pub presentation: Option<PresentationConfig>,
    pub family: FamilyConfig,
    pub graph: GraphConfig,
    #[serde(default = "default_word_len")]
    pub word_len: usize,
    #[serde(default = "default_sample_len")]
    pub sample_len: usize,
    pub schedule: Vec<f64>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_threshold")]
    pub delta_threshold: f64,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: u64,
}

fn default_word_len() -> usize {
    2
}

fn default_sample_len() -> usize {
    DEFAULT_SAMPLE_LEN
}

fn default_threshold() -> f64 {
    DEFAULT_DELTA_THRESHOLD
}

/// Pulls the offending field name out of a serde message such as
/// "missing field `schedule`" or "unknown field `foo`, expected ...".
fn serde_field(msg: &str) -> String {
    msg.split('`').nth(1).unwrap_or("<document>").to_string()
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, SchemaError> {
        serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            SchemaError { field: serde_field(&msg), message: msg }
        })
    }

    fn build_presentation(&self) -> Result<Presentation, SchemaError> {
        let declared = match &self.presentation {
            Some(p) => {
                let names: Vec<&str> = p.generators.iter().map(String::as_str).collect();
                let free = Presentation::free(&names).map_err(|e| bad("presentation.generators", e.to_string()))?;
                let relators = p
                    .relators
                    .iter()
                    .map(|r| free.parse_word(r))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| bad("presentation.relators", e.to_string()))?;
                Some(Presentation::new(p.generators.clone(), relators).map_err(|e| bad("presentation", e.to_string()))?)
            }
            None => None,
        };
        match (&self.family, declared) {
            (FamilyConfig::Constant { .. }, Some(p)) => Ok(p),
            (FamilyConfig::Constant { .. }, None) => Err(bad("presentation", "required for a constant family")),
            (_, declared) => {
                let builtin = self.family_without_check()?.presentation();
                match declared {
                    Some(p) if p != builtin => {
                        Err(bad("presentation", "does not match the built-in family's presentation"))
                    }
                    _ => Ok(builtin),
                }
            }
        }
    }

    fn family_without_check(&self) -> Result<RepresentationFamily, SchemaError> {
        match &self.family {
            FamilyConfig::DiagonalStretch { angle } => {
                RepresentationFamily::diagonal_stretch(*angle).map_err(|e| bad("family.angle", e.to_string()))
            }
            FamilyConfig::OctagonTwist => Ok(RepresentationFamily::octagon_twist()),
            FamilyConfig::Constant { .. } => Err(bad("family", "constant family needs a presentation")),
        }
    }

    /// Validates every field and assembles the run.
    pub fn to_setup(&self) -> Result<DegenerationSetup, SchemaError> {
        let pres = self.build_presentation()?;
        let family = match &self.family {
            FamilyConfig::Constant { images } => {
                if images.len() != pres.rank() {
                    return Err(bad("family.images", format!("{} images for {} generators", images.len(), pres.rank())));
                }
                RepresentationFamily::constant(pres.clone(), images.clone())
                    .map_err(|e| bad("family.images", e.to_string()))?
            }
            _ => self.family_without_check()?,
        };

        let graph = match &self.graph {
            GraphConfig::Rose { weights } => {
                let w = weights.clone().unwrap_or_else(|| vec![1.0; pres.rank()]);
                TwistedGraph::rose(&pres, &w).map_err(|e| bad("graph.weights", e.to_string()))?
            }
            GraphConfig::Custom { vertices, edges } => {
                let edges = edges
                    .iter()
                    .enumerate()
                    .map(|(i, e)| {
                        let holonomy = pres
                            .parse_word(&e.holonomy)
                            .map_err(|err| bad(&format!("graph.edges[{i}].holonomy"), err.to_string()))?;
                        Ok(GraphEdge { tail: e.tail, head: e.head, weight: e.weight, holonomy })
                    })
                    .collect::<Result<Vec<_>, SchemaError>>()?;
                TwistedGraph::new(*vertices, edges).map_err(|e| bad("graph", e.to_string()))?
            }
        };

        if self.schedule.is_empty() {
            return Err(bad("schedule", "must be nonempty"));
        }
        if self.schedule.iter().any(|t| !t.is_finite()) || self.schedule.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(bad("schedule", "must be finite and strictly increasing"));
        }
        if let Some(&t) = self.schedule.iter().find(|&&t| family.at::<f64>(t).is_err()) {
            let (lo, hi) = family.range();
            return Err(bad("schedule", format!("t = {t} outside the family's range [{lo}, {hi}]")));
        }
        if !(self.solver.tol > 0.0 && self.solver.tol.is_finite()) {
            return Err(bad("solver.tol", "must be positive"));
        }
        if self.solver.max_iter == 0 {
            return Err(bad("solver.max_iter", "must be positive"));
        }
        if self.sample_len == 0 || self.sample_len > 6 {
            return Err(bad("sample_len", "must lie in 1..=6"));
        }
        if self.word_len == 0 || self.word_len > self.sample_len {
            return Err(bad("word_len", format!("must lie in 1..={}", self.sample_len)));
        }
        if !(self.delta_threshold > 0.0 && self.delta_threshold < 1.0) {
            return Err(bad("delta_threshold", "must lie in (0, 1)"));
        }

        Ok(DegenerationSetup {
            family,
            graph,
            word_len: self.word_len,
            sample_len: self.sample_len,
            edge_subdivisions: DEFAULT_EDGE_SUBDIVISIONS,
            schedule: self.schedule.clone(),
            solver: SolverOptions::new(self.solver.tol, self.solver.max_iter),
            delta_threshold: self.delta_threshold,
            seed: self.seed,
            initial: None,
        })
    }
}
