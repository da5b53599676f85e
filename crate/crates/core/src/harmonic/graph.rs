use crate::group::{Presentation, Word};
use crate::hyperbolic::Point;
use crate::scalar::Real;

use super::HarmonicError;

/// Directed edge carrying a weight and a holonomy word. The energy term is
/// `w d(u(tail), rho(h) u(head))^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphEdge {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
    pub holonomy: Word,
}

/// Finite graph with holonomy-decorated edges; a fundamental domain of the
/// universal cover together with its gluing data.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedGraph {
    vertex_count: usize,
    edges: Vec<GraphEdge>,
}

impl TwistedGraph {
    pub fn new(vertex_count: usize, edges: Vec<GraphEdge>) -> Result<Self, HarmonicError> {
        if vertex_count == 0 {
            return Err(HarmonicError::InvalidGraph("no vertices".into()));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.tail >= vertex_count || e.head >= vertex_count {
                return Err(HarmonicError::InvalidGraph(format!("edge {i} has an endpoint out of range")));
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(HarmonicError::InvalidGraph(format!("edge {i} has non-positive weight {}", e.weight)));
            }
        }
        // Union-find connectivity.
        let mut parent: Vec<usize> = (0..vertex_count).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &edges {
            let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        if (0..vertex_count).any(|v| find(&mut parent, v) != root) {
            return Err(HarmonicError::InvalidGraph("graph is disconnected".into()));
        }
        Ok(Self { vertex_count, edges })
    }

    /// One vertex with a loop per generator.
    pub fn rose(pres: &Presentation, weights: &[f64]) -> Result<Self, HarmonicError> {
        if weights.len() != pres.rank() {
            return Err(HarmonicError::InvalidGraph("one weight per generator expected".into()));
        }
        let edges = weights
            .iter()
            .enumerate()
            .map(|(g, &w)| GraphEdge { tail: 0, head: 0, weight: w, holonomy: Word::generator(g) })
            .collect();
        Self::new(1, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }
}

/// Vertex positions in H^3.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantMap<T> {
    pub positions: Vec<Point<T>>,
}

impl<T: Real> EquivariantMap<T> {
    pub fn constant(n: usize, p: Point<T>) -> Self {
        Self { positions: vec![p; n] }
    }

    pub fn at_origin(n: usize) -> Self {
        Self::constant(n, Point::origin())
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn diameter(&self) -> T {
        let mut d = T::zero();
        for (i, p) in self.positions.iter().enumerate() {
            for q in &self.positions[i + 1..] {
                d = d.max(p.distance_unchecked(q));
            }
        }
        d
    }
}
