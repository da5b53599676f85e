use std::collections::{BTreeMap, BTreeSet};

use super::isometry::TreeIsometry;
use super::tree::{Piece, SimplicialTree, TreePoint};
use super::{TreeError, TREE_TOL};

/// Closed subset of a tree: a vertex set plus, per edge, the interval of
/// offsets it covers inside that edge. An interval is stored exactly when the
/// subset meets the open edge; endpoints at 0 or `len` imply the vertex.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Subtree {
    vertices: BTreeSet<usize>,
    intervals: BTreeMap<usize, (f64, f64)>,
}

impl Subtree {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn whole(tree: &SimplicialTree) -> Self {
        let mut s = Self::empty();
        s.vertices.extend(0..tree.vertex_count());
        for (k, e) in tree.edges().iter().enumerate() {
            s.intervals.insert(k, (0.0, e.len));
        }
        s
    }

    pub fn point(tree: &SimplicialTree, p: &TreePoint) -> Self {
        let mut s = Self::empty();
        s.mark_point(tree, p);
        s
    }

    pub fn geodesic(tree: &SimplicialTree, p: &TreePoint, q: &TreePoint) -> Self {
        let mut s = Self::point(tree, p);
        s.add_geodesic(tree, p, q);
        s
    }

    /// Convex hull of finitely many points.
    pub fn hull(tree: &SimplicialTree, points: &[TreePoint]) -> Self {
        let mut s = Self::empty();
        if let Some(first) = points.first() {
            s.mark_point(tree, first);
            for q in &points[1..] {
                s.add_geodesic(tree, first, q);
            }
        }
        s
    }

    /// The bi-infinite geodesic joining the ends of two infinite edges.
    pub fn line(tree: &SimplicialTree, e1: usize, e2: usize) -> Self {
        let mut s = Self::empty();
        let a = TreePoint::Vertex(tree.edge(e1).a);
        s.mark_pieces(tree, &tree.ray(&a, e1));
        s.mark_pieces(tree, &tree.ray(&a, e2));
        s
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn intervals(&self) -> &BTreeMap<usize, (f64, f64)> {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.intervals.is_empty()
    }

    pub fn mark_point(&mut self, tree: &SimplicialTree, p: &TreePoint) {
        match *p {
            TreePoint::Vertex(v) => {
                self.vertices.insert(v);
            }
            TreePoint::OnEdge { edge, offset } => self.mark_piece(tree, edge, offset, offset),
        }
    }

    pub fn mark_piece(&mut self, tree: &SimplicialTree, edge: usize, from: f64, to: f64) {
        let e = *tree.edge(edge);
        let (mut lo, mut hi) = if from <= to { (from, to) } else { (to, from) };
        if lo <= TREE_TOL {
            lo = 0.0;
        }
        if hi >= e.len - TREE_TOL {
            hi = e.len;
        }
        lo = lo.min(e.len);
        hi = hi.max(0.0);
        if lo == 0.0 {
            self.vertices.insert(e.a);
        }
        if hi == e.len {
            if let Some(b) = e.b {
                self.vertices.insert(b);
            }
        }
        let degenerate_at_vertex = lo == hi && (lo == 0.0 || hi == e.len);
        if !degenerate_at_vertex {
            let entry = self.intervals.entry(edge).or_insert((lo, hi));
            entry.0 = entry.0.min(lo);
            entry.1 = entry.1.max(hi);
        }
    }

    pub fn mark_pieces(&mut self, tree: &SimplicialTree, pieces: &[Piece]) {
        for pc in pieces {
            self.mark_piece(tree, pc.edge, pc.from, pc.to);
        }
    }

    pub fn add_geodesic(&mut self, tree: &SimplicialTree, p: &TreePoint, q: &TreePoint) {
        self.mark_point(tree, p);
        self.mark_point(tree, q);
        self.mark_pieces(tree, &tree.geodesic(p, q));
    }

    pub fn add_ray(&mut self, tree: &SimplicialTree, p: &TreePoint, end: usize) {
        self.mark_point(tree, p);
        self.mark_pieces(tree, &tree.ray(p, end));
    }

    pub fn contains(&self, p: &TreePoint) -> bool {
        match *p {
            TreePoint::Vertex(v) => self.vertices.contains(&v),
            TreePoint::OnEdge { edge, offset } => self
                .intervals
                .get(&edge)
                .is_some_and(|&(lo, hi)| offset >= lo - TREE_TOL && offset <= hi + TREE_TOL),
        }
    }

    /// Some point of the subset, if any.
    pub fn any_point(&self) -> Option<TreePoint> {
        if let Some(&v) = self.vertices.iter().next() {
            return Some(TreePoint::Vertex(v));
        }
        self.intervals.iter().next().map(|(&edge, &(lo, _))| TreePoint::OnEdge { edge, offset: lo })
    }

    /// Points where the subset may end: its vertices and interval endpoints
    /// interior to edges.
    pub fn boundary_candidates(&self, tree: &SimplicialTree) -> Vec<TreePoint> {
        let mut out: Vec<TreePoint> = self.vertices.iter().map(|&v| TreePoint::Vertex(v)).collect();
        for (&edge, &(lo, hi)) in &self.intervals {
            out.push(tree.snap(edge, lo));
            if hi.is_finite() {
                out.push(tree.snap(edge, hi));
            }
        }
        out
    }

    pub fn is_connected(&self, tree: &SimplicialTree) -> bool {
        if self.is_empty() {
            return false;
        }
        // union-find over vertex nodes followed by interval nodes
        let verts: Vec<usize> = self.vertices.iter().cloned().collect();
        let index = |v: usize| verts.binary_search(&v).ok();
        let n = verts.len() + self.intervals.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, (&edge, &(lo, hi))) in self.intervals.iter().enumerate() {
            let node = verts.len() + i;
            let e = tree.edge(edge);
            let mut link = |v: usize| {
                if let Some(j) = index(v) {
                    let (ra, rb) = (find(&mut parent, node), find(&mut parent, j));
                    parent[ra] = rb;
                }
            };
            if lo == 0.0 {
                link(e.a);
            }
            if let (Some(b), true) = (e.b, hi == e.len) {
                link(b);
            }
        }
        let root = find(&mut parent, 0);
        (1..n).all(|x| find(&mut parent, x) == root)
    }

    fn require_valid(&self, tree: &SimplicialTree) -> Result<(), TreeError> {
        if self.is_empty() {
            return Err(TreeError::InvalidSubtree("empty subset".into()));
        }
        if !self.is_connected(tree) {
            return Err(TreeError::InvalidSubtree("disconnected subset".into()));
        }
        Ok(())
    }

    /// Nearest point of the subtree to `p`.
    pub fn project(&self, tree: &SimplicialTree, p: &TreePoint) -> Result<TreePoint, TreeError> {
        self.require_valid(tree)?;
        Ok(self.project_unchecked(tree, p))
    }

    pub(crate) fn project_unchecked(&self, tree: &SimplicialTree, p: &TreePoint) -> TreePoint {
        if self.contains(p) {
            return *p;
        }
        let mut best = (f64::INFINITY, *p);
        for c in self.boundary_candidates(tree) {
            let d = tree.distance(p, &c);
            if d < best.0 {
                best = (d, c);
            }
        }
        best.1
    }

    pub fn distance_to(&self, tree: &SimplicialTree, p: &TreePoint) -> f64 {
        tree.distance(p, &self.project_unchecked(tree, p))
    }

    pub fn is_subset_of(&self, other: &Subtree) -> bool {
        self.vertices.is_subset(&other.vertices)
            && self.intervals.iter().all(|(edge, &(lo, hi))| {
                other.intervals.get(edge).is_some_and(|&(l2, h2)| lo >= l2 - TREE_TOL && hi <= h2 + TREE_TOL)
            })
    }

    pub fn approx_eq(&self, other: &Subtree) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    pub fn intersection(&self, tree: &SimplicialTree, other: &Subtree) -> Subtree {
        let mut s = Subtree::empty();
        s.vertices = self.vertices.intersection(&other.vertices).cloned().collect();
        for (&edge, &(lo, hi)) in &self.intervals {
            if let Some(&(l2, h2)) = other.intervals.get(&edge) {
                let (a, b) = (lo.max(l2), hi.min(h2));
                if a <= b + TREE_TOL {
                    s.mark_piece(tree, edge, a, a.max(b));
                }
            }
        }
        s
    }

    fn merge(&mut self, tree: &SimplicialTree, other: &Subtree) {
        self.vertices.extend(other.vertices.iter().cloned());
        for (&edge, &(lo, hi)) in &other.intervals {
            self.mark_piece(tree, edge, lo, hi);
        }
    }

    /// Smallest subtree containing both: the union plus the bridge between them.
    pub fn hull_union(&self, tree: &SimplicialTree, other: &Subtree) -> Subtree {
        if self.is_empty() {
            return other.clone();
        }
        let mut out = self.clone();
        if let Some(x) = other.any_point() {
            if self.intersection(tree, other).is_empty() {
                let p = self.project_unchecked(tree, &x);
                let q = other.project_unchecked(tree, &p);
                out.add_geodesic(tree, &p, &q);
            }
            out.merge(tree, other);
        }
        out
    }

    /// Image under an isometry.
    pub fn image(&self, tree: &SimplicialTree, g: &TreeIsometry) -> Subtree {
        let mut s = Subtree::empty();
        for &v in &self.vertices {
            s.mark_point(tree, &g.apply(tree, &TreePoint::Vertex(v)));
        }
        for (&edge, &(lo, hi)) in &self.intervals {
            let p = g.apply(tree, &tree.snap(edge, lo));
            if hi.is_finite() {
                let q = g.apply(tree, &tree.snap(edge, hi));
                s.add_geodesic(tree, &p, &q);
            } else {
                s.add_ray(tree, &p, g.end_image(edge));
            }
        }
        s
    }

    pub fn is_invariant_under(&self, tree: &SimplicialTree, g: &TreeIsometry) -> bool {
        self.image(tree, g).is_subset_of(self)
    }

    /// Number of directions at vertex `v` inside the subtree.
    pub fn degree(&self, tree: &SimplicialTree, v: usize) -> usize {
        tree.incident(v)
            .iter()
            .filter(|&&k| {
                let e = tree.edge(k);
                self.intervals.get(&k).is_some_and(|&(lo, hi)| if v == e.a { lo == 0.0 } else { hi == e.len })
            })
            .count()
    }

    /// A bi-infinite line: two full rays, every vertex of degree two, no
    /// interval ending inside an edge.
    pub fn is_line(&self, tree: &SimplicialTree) -> bool {
        if !self.is_connected(tree) {
            return false;
        }
        let rays = self
            .intervals
            .iter()
            .filter(|(&k, &(lo, hi))| tree.edge(k).is_infinite() && lo == 0.0 && hi.is_infinite())
            .count();
        let closed = self.intervals.iter().all(|(&k, &(lo, hi))| lo == 0.0 && hi == tree.edge(k).len);
        rays == 2 && closed && self.vertices.iter().all(|&v| self.degree(tree, v) == 2)
    }

    /// Copies of the subtree with one terminal stretch shaved off, one per
    /// extremity (leaf vertex or interval end inside an edge).
    pub fn pruned_variants(&self, tree: &SimplicialTree) -> Vec<Subtree> {
        let mut out = Vec::new();
        if self.vertices.len() + self.intervals.len() <= 1 {
            return out;
        }
        for (&edge, &(lo, hi)) in &self.intervals {
            let e = tree.edge(edge);
            let leaf_a = lo > 0.0 || self.degree(tree, e.a) == 1;
            let leaf_b = hi.is_finite() && (hi < e.len || e.b.is_some_and(|b| self.degree(tree, b) == 1));
            if hi - lo <= TREE_TOL {
                continue;
            }
            let mid = 0.5 * (lo + hi.min(lo + 2.0));
            if leaf_a {
                let mut s = self.clone();
                if lo == 0.0 {
                    s.vertices.remove(&e.a);
                }
                s.intervals.insert(edge, (mid, hi));
                out.push(s);
            }
            if leaf_b {
                let mut s = self.clone();
                if let (Some(b), true) = (e.b, hi == e.len) {
                    s.vertices.remove(&b);
                }
                s.intervals.insert(edge, (lo, 0.5 * (lo + hi)));
                out.push(s);
            }
        }
        out
    }
}
