use std::collections::VecDeque;

use crate::rtree::{Edge, SimplicialTree, TreeDocument, TreePoint};

use super::metric::{gromov_delta, RescaledMetric};
use super::DegenerationError;

/// A tree realizing a metric, with the vertex carrying each sample point.
#[derive(Clone, Debug)]
pub struct MetricTree {
    pub tree: SimplicialTree,
    pub sample_vertex: Vec<usize>,
}

impl MetricTree {
    pub fn point(&self, sample: usize) -> TreePoint {
        TreePoint::Vertex(self.sample_vertex[sample])
    }

    pub fn sample_distance(&self, i: usize, j: usize) -> f64 {
        self.tree.vertex_distance(self.sample_vertex[i], self.sample_vertex[j])
    }

    pub fn to_document(&self) -> TreeDocument {
        let mut doc = TreeDocument::from_tree(&self.tree);
        doc.samples = self.sample_vertex.clone();
        doc
    }

    /// Largest deviation between tree distances and the metric.
    pub fn max_error(&self, d: &[Vec<f64>]) -> f64 {
        let n = d.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.sample_distance(i, j) - d[i][j]).abs());
            }
        }
        worst
    }
}

struct Growing {
    adj: Vec<Vec<(usize, f64)>>,
}

impl Growing {
    fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    fn link(&mut self, u: usize, v: usize, len: f64) {
        self.adj[u].push((v, len));
        self.adj[v].push((u, len));
    }

    fn unlink(&mut self, u: usize, v: usize) {
        self.adj[u].retain(|&(w, _)| w != v);
        self.adj[v].retain(|&(w, _)| w != u);
    }

    /// Parent pointers and distances from `root`.
    fn search(&self, root: usize) -> (Vec<usize>, Vec<f64>) {
        let mut parent = vec![usize::MAX; self.adj.len()];
        let mut dist = vec![f64::NAN; self.adj.len()];
        dist[root] = 0.0;
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, len) in &self.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    dist[w] = dist[u] + len;
                    queue.push_back(w);
                }
            }
        }
        (parent, dist)
    }

    /// Vertex at distance `s` from `root` on the path to `target`,
    /// subdividing an edge when needed.
    fn locate(&mut self, parent: &[usize], dist: &[f64], target: usize, s: f64, snap: f64) -> usize {
        let mut path = vec![target];
        while *path.last().unwrap() != parent[*path.last().unwrap()] {
            let u = *path.last().unwrap();
            path.push(parent[u]);
        }
        path.reverse();
        for w in path.windows(2) {
            let (u, v) = (w[0], w[1]);
            if (dist[u] - s).abs() <= snap {
                return u;
            }
            if s < dist[v] - snap {
                let len = dist[v] - dist[u];
                let a = s - dist[u];
                self.unlink(u, v);
                let m = self.add_vertex();
                self.link(u, m, a);
                self.link(m, v, len - a);
                return m;
            }
        }
        target
    }
}

/// Builds a tree whose vertex distances reproduce `m` by inserting samples one
/// at a time. With the first sample `x` as base, a new sample `z` lies at
/// distance `h = min_j (x | j)_z` from the current tree and attaches to the
/// geodesic from `x` to the minimizing `j`, at distance `d(x, z) - h` from `x`.
pub fn tree_from_metric(m: &RescaledMetric, tol: f64) -> Result<MetricTree, DegenerationError> {
    let d = &m.distances;
    let n = d.len();
    if n == 0 {
        return Err(DegenerationError::InvalidMetric("no sample points".into()));
    }
    let diameter = m.diameter();
    let report = gromov_delta(d, super::DEFAULT_DELTA_SEED);
    if report.delta > tol * diameter {
        return Err(DegenerationError::NotTreeLike { quadruple: report.quadruple, delta: report.delta, diameter });
    }
    let snap = 1e-12 * (1.0 + diameter);
    let mut g = Growing { adj: vec![Vec::new()] };
    let mut sample_vertex = vec![0usize; n];
    for z in 1..n {
        let mut best = (f64::INFINITY, 0usize);
        for j in 0..z {
            let h = 0.5 * (d[z][0] + d[z][j] - d[0][j]);
            if h < best.0 {
                best = (h, j);
            }
        }
        let (h, j) = (best.0.max(0.0), best.1);
        let (parent, dist) = g.search(sample_vertex[0]);
        let target = sample_vertex[j];
        let s = (d[z][0] - h).clamp(0.0, dist[target]);
        let at = g.locate(&parent, &dist, target, s, snap);
        sample_vertex[z] = if h <= snap {
            at
        } else {
            let v = g.add_vertex();
            g.link(at, v, h);
            v
        };
    }
    let mut edges = Vec::new();
    for (u, nbrs) in g.adj.iter().enumerate() {
        for &(v, len) in nbrs {
            if u < v {
                edges.push(Edge::finite(u, v, len));
            }
        }
    }
    let tree = SimplicialTree::new(g.adj.len(), edges)?;
    Ok(MetricTree { tree, sample_vertex })
}
