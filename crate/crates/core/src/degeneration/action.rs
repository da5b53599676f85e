use std::collections::{BTreeMap, HashMap};

use crate::group::{Presentation, Word};
use crate::rtree::{ActionRecord, PointRecord, TreeDocument};

use super::reconstruct::MetricTree;
use super::DegenerationError;

/// Generator action on a reconstructed tree, known only on sample vertices.
#[derive(Clone, Debug)]
pub struct SampledAction {
    pub tree: MetricTree,
    pub labels: Vec<(usize, Word)>,
    /// Per generator, the image sample of each sample (if it was sampled).
    pub maps: Vec<Vec<Option<usize>>>,
    pub distortion: f64,
    index: HashMap<(usize, Word), usize>,
}

impl SampledAction {
    /// Validates the maps against `tol`: every pair `x, y` in a generator's
    /// domain must satisfy `|d(gx, gy) - d(x, y)| <= tol`.
    pub fn new(
        tree: MetricTree,
        labels: Vec<(usize, Word)>,
        maps: Vec<Vec<Option<usize>>>,
        tol: f64,
    ) -> Result<Self, DegenerationError> {
        let n = labels.len();
        if tree.sample_vertex.len() != n {
            return Err(DegenerationError::InvalidArgument("labels do not match the tree samples".into()));
        }
        let mut distortion = 0.0f64;
        let mut worst = (0, 0, 0);
        for (g, map) in maps.iter().enumerate() {
            if map.len() != n || map.iter().flatten().any(|&j| j >= n) {
                return Err(DegenerationError::InvalidArgument(format!("sample map of generator {g} is malformed")));
            }
            let domain: Vec<(usize, usize)> = map.iter().enumerate().filter_map(|(i, j)| j.map(|j| (i, j))).collect();
            for (a, &(x, gx)) in domain.iter().enumerate() {
                for &(y, gy) in &domain[a + 1..] {
                    let err = (tree.sample_distance(gx, gy) - tree.sample_distance(x, y)).abs();
                    if err > distortion {
                        distortion = err;
                        worst = (g, x, y);
                    }
                }
            }
        }
        if distortion > tol {
            return Err(DegenerationError::NonIsometricAction {
                generator: worst.0,
                pair: (worst.1, worst.2),
                distortion,
            });
        }
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Ok(Self { tree, labels, maps, distortion, index })
    }

    fn image(&self, sample: usize, w: &Word) -> Option<usize> {
        let (v, u) = &self.labels[sample];
        self.index.get(&(*v, w.concat(u))).copied()
    }

    /// Median over samples `x` of `max(0, d(x, w^2 x) - d(x, w x))`, the
    /// translation length formula for tree isometries. `None` when no sample
    /// has both images.
    pub fn length(&self, w: &Word) -> Option<f64> {
        let w2 = w.concat(w);
        let mut values: Vec<f64> = (0..self.labels.len())
            .filter_map(|x| {
                let gx = self.image(x, w)?;
                let ggx = self.image(x, &w2)?;
                Some((self.tree.sample_distance(x, ggx) - self.tree.sample_distance(x, gx)).max(0.0))
            })
            .collect();
        if values.is_empty() {
            return None;
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let m = values.len();
        Some(if m % 2 == 1 { values[m / 2] } else { 0.5 * (values[m / 2 - 1] + values[m / 2]) })
    }

    pub fn length_function(&self, words: &[Word]) -> Vec<Option<f64>> {
        words.iter().map(|w| self.length(w)).collect()
    }

    /// Tree description with one partial vertex map per generator.
    pub fn to_document(&self, pres: &Presentation) -> TreeDocument {
        let mut doc = self.tree.to_document();
        for (g, map) in self.maps.iter().enumerate() {
            let mut vertex_map = BTreeMap::new();
            for (x, gx) in map.iter().enumerate() {
                if let Some(gx) = gx {
                    vertex_map
                        .entry(self.tree.sample_vertex[x])
                        .or_insert(PointRecord::Vertex(self.tree.sample_vertex[*gx]));
                }
            }
            let name = pres.generators().get(g).cloned().unwrap_or_else(|| format!("g{g}"));
            doc.actions.insert(name, ActionRecord { vertex_map, edge_map: BTreeMap::new() });
        }
        doc
    }
}

/// Sends the sample `(v, w)` to `(v, g w)` for each generator `g`; samples
/// whose image was not sampled stay outside the domain.
pub fn induced_action(
    tree: MetricTree,
    labels: Vec<(usize, Word)>,
    rank: usize,
    tol: f64,
) -> Result<SampledAction, DegenerationError> {
    let index: HashMap<&(usize, Word), usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let maps = (0..rank)
        .map(|g| {
            let gen = Word::generator(g);
            labels.iter().map(|(v, w)| index.get(&(*v, gen.concat(w))).copied()).collect()
        })
        .collect();
    SampledAction::new(tree, labels, maps, tol)
}
