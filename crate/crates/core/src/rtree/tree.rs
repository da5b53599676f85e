use std::collections::VecDeque;

use super::{TreeError, TREE_TOL};

/// Edge of a simplicial tree. An infinite edge has no second endpoint and
/// houses a ray `[0, inf)` starting at `a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: Option<usize>,
    pub len: f64,
}

impl Edge {
    pub fn finite(a: usize, b: usize, len: f64) -> Self {
        Self { a, b: Some(b), len }
    }

    pub fn infinite(a: usize) -> Self {
        Self { a, b: None, len: f64::INFINITY }
    }

    pub fn is_infinite(&self) -> bool {
        self.b.is_none()
    }

    /// Offset of an endpoint along the edge.
    pub fn offset_of(&self, v: usize) -> f64 {
        if v == self.a {
            0.0
        } else {
            self.len
        }
    }

    pub fn other(&self, v: usize) -> Option<usize> {
        if v == self.a {
            self.b
        } else {
            Some(self.a)
        }
    }
}

/// A point of the metric realization. Offsets are measured from endpoint `a`;
/// points at offset 0 or `len` are always stored as vertices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TreePoint {
    Vertex(usize),
    OnEdge { edge: usize, offset: f64 },
}

/// Oriented stretch of a geodesic inside one edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece {
    pub edge: usize,
    pub from: f64,
    pub to: f64,
}

impl Piece {
    pub fn length(&self) -> f64 {
        (self.to - self.from).abs()
    }
}

/// Finite simplicial tree with optional infinite leaf edges.
#[derive(Clone, Debug)]
pub struct SimplicialTree {
    vertex_count: usize,
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
    dist: Vec<f64>,
    // first edge on the path from u to v, usize::MAX when u == v
    hop: Vec<usize>,
}

impl PartialEq for SimplicialTree {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }
}

impl SimplicialTree {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self, TreeError> {
        if vertex_count == 0 {
            return Err(TreeError::InvalidTree("no vertices".into()));
        }
        let mut incident = vec![Vec::new(); vertex_count];
        let mut finite = 0;
        for (k, e) in edges.iter().enumerate() {
            if e.a >= vertex_count {
                return Err(TreeError::InvalidTree(format!("edge {k} references vertex {}", e.a)));
            }
            match e.b {
                Some(b) => {
                    if b >= vertex_count || b == e.a {
                        return Err(TreeError::InvalidTree(format!("edge {k} has bad endpoint {b}")));
                    }
                    if !(e.len > 0.0 && e.len.is_finite()) {
                        return Err(TreeError::InvalidTree(format!("edge {k} has length {}", e.len)));
                    }
                    incident[b].push(k);
                    finite += 1;
                }
                None => {
                    if e.len != f64::INFINITY {
                        return Err(TreeError::InvalidTree(format!("infinite edge {k} has length {}", e.len)));
                    }
                }
            }
            incident[e.a].push(k);
        }
        if finite != vertex_count - 1 {
            return Err(TreeError::InvalidTree(format!(
                "{finite} finite edges on {vertex_count} vertices cannot form a tree"
            )));
        }
        let mut tree = Self {
            vertex_count,
            edges,
            incident,
            dist: vec![f64::NAN; vertex_count * vertex_count],
            hop: vec![usize::MAX; vertex_count * vertex_count],
        };
        for s in 0..vertex_count {
            tree.bfs(s);
        }
        if tree.dist.iter().any(|d| d.is_nan()) {
            return Err(TreeError::InvalidTree("finite skeleton is disconnected".into()));
        }
        // Summation order differs by direction; keep the table exactly symmetric.
        for u in 0..vertex_count {
            for v in u + 1..vertex_count {
                tree.dist[v * vertex_count + u] = tree.dist[u * vertex_count + v];
            }
        }
        Ok(tree)
    }

    fn bfs(&mut self, s: usize) {
        let n = self.vertex_count;
        self.dist[s * n + s] = 0.0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &k in &self.incident[u] {
                let e = self.edges[k];
                let Some(w) = e.other(u) else { continue };
                if self.dist[s * n + w].is_nan() {
                    self.dist[s * n + w] = self.dist[s * n + u] + e.len;
                    self.hop[s * n + w] = if u == s { k } else { self.hop[s * n + u] };
                    queue.push_back(w);
                }
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &Edge {
        &self.edges[k]
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn infinite_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&k| self.edges[k].is_infinite())
    }

    pub fn vertex_distance(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.vertex_count + v]
    }

    /// Largest vertex-to-vertex distance.
    pub fn core_diameter(&self) -> f64 {
        self.dist.iter().cloned().fold(0.0, f64::max)
    }

    /// Canonical point at `offset` along edge `edge`; offsets within
    /// `TREE_TOL` of an endpoint snap to the vertex.
    pub fn point(&self, edge: usize, offset: f64) -> Result<TreePoint, TreeError> {
        let e = self.edges.get(edge).ok_or_else(|| TreeError::InvalidPoint(format!("no edge {edge}")))?;
        if !(offset >= -TREE_TOL && offset <= e.len + TREE_TOL) || offset.is_nan() {
            return Err(TreeError::InvalidPoint(format!("offset {offset} outside edge {edge}")));
        }
        Ok(self.snap(edge, offset))
    }

    /// Like `point` but clamps instead of validating.
    pub fn snap(&self, edge: usize, offset: f64) -> TreePoint {
        let e = &self.edges[edge];
        if offset <= TREE_TOL {
            TreePoint::Vertex(e.a)
        } else if let (Some(b), true) = (e.b, offset >= e.len - TREE_TOL) {
            TreePoint::Vertex(b)
        } else {
            TreePoint::OnEdge { edge, offset }
        }
    }

    /// Point at distance `s` from endpoint `from` along `edge`.
    pub fn point_from(&self, edge: usize, from: usize, s: f64) -> TreePoint {
        let e = &self.edges[edge];
        if from == e.a {
            self.snap(edge, s)
        } else {
            self.snap(edge, e.len - s)
        }
    }

    pub fn validate_point(&self, p: &TreePoint) -> Result<(), TreeError> {
        match *p {
            TreePoint::Vertex(v) if v < self.vertex_count => Ok(()),
            TreePoint::Vertex(v) => Err(TreeError::InvalidPoint(format!("no vertex {v}"))),
            TreePoint::OnEdge { edge, offset } => self.point(edge, offset).map(|_| ()),
        }
    }

    /// Vertices through which every path leaving `p` passes, with distances.
    fn anchors(&self, p: &TreePoint) -> [(usize, f64); 2] {
        match *p {
            TreePoint::Vertex(v) => [(v, 0.0), (v, 0.0)],
            TreePoint::OnEdge { edge, offset } => {
                let e = &self.edges[edge];
                match e.b {
                    Some(b) => [(e.a, offset), (b, e.len - offset)],
                    None => [(e.a, offset), (e.a, offset)],
                }
            }
        }
    }

    fn best_anchors(&self, p: &TreePoint, q: &TreePoint) -> ((usize, f64), (usize, f64), f64) {
        let mut best = ((0, 0.0), (0, 0.0), f64::INFINITY);
        for &(u, du) in &self.anchors(p) {
            for &(v, dv) in &self.anchors(q) {
                let d = du + self.vertex_distance(u, v) + dv;
                if d < best.2 {
                    best = ((u, du), (v, dv), d);
                }
            }
        }
        best
    }

    pub fn distance(&self, p: &TreePoint, q: &TreePoint) -> f64 {
        if let (TreePoint::OnEdge { edge: e1, offset: t1 }, TreePoint::OnEdge { edge: e2, offset: t2 }) = (p, q) {
            if e1 == e2 {
                return (t1 - t2).abs();
            }
        }
        self.best_anchors(p, q).2
    }

    /// Edges traversed from vertex `u` to vertex `v`, in order.
    pub fn vertex_path(&self, u: usize, v: usize) -> Vec<(usize, usize, usize)> {
        let n = self.vertex_count;
        let mut out = Vec::new();
        let mut x = u;
        while x != v {
            let k = self.hop[x * n + v];
            let y = self.edges[k].other(x).expect("finite edge on vertex path");
            out.push((k, x, y));
            x = y;
        }
        out
    }

    /// The geodesic `[p, q]` split into per-edge pieces.
    pub fn geodesic(&self, p: &TreePoint, q: &TreePoint) -> Vec<Piece> {
        if let (TreePoint::OnEdge { edge: e1, offset: t1 }, TreePoint::OnEdge { edge: e2, offset: t2 }) = (p, q) {
            if e1 == e2 {
                return vec![Piece { edge: *e1, from: *t1, to: *t2 }];
            }
        }
        let ((u, _), (v, _), _) = self.best_anchors(p, q);
        let mut out = Vec::new();
        if let TreePoint::OnEdge { edge, offset } = *p {
            out.push(Piece { edge, from: offset, to: self.edges[edge].offset_of(u) });
        }
        for (k, x, y) in self.vertex_path(u, v) {
            let e = &self.edges[k];
            out.push(Piece { edge: k, from: e.offset_of(x), to: e.offset_of(y) });
        }
        if let TreePoint::OnEdge { edge, offset } = *q {
            out.push(Piece { edge, from: self.edges[edge].offset_of(v), to: offset });
        }
        out.retain(|pc| pc.length() > 0.0);
        out
    }

    /// Point of `[p, q]` at distance `s` from `p` (clamped to the segment).
    pub fn point_along(&self, p: &TreePoint, q: &TreePoint, s: f64) -> TreePoint {
        if s <= 0.0 {
            return *p;
        }
        let mut left = s;
        for pc in self.geodesic(p, q) {
            let l = pc.length();
            if left <= l {
                let t = if pc.to >= pc.from { pc.from + left } else { pc.from - left };
                return self.snap(pc.edge, t);
            }
            left -= l;
        }
        *q
    }

    /// Point at distance `s` from `p` on the ray from `p` into the end of the
    /// infinite edge `end`.
    pub fn toward_end(&self, p: &TreePoint, end: usize, s: f64) -> TreePoint {
        let e = self.edges[end];
        debug_assert!(e.is_infinite());
        if let TreePoint::OnEdge { edge, offset } = *p {
            if edge == end {
                return self.snap(end, offset + s);
            }
        }
        let base = TreePoint::Vertex(e.a);
        let d = self.distance(p, &base);
        if s <= d {
            self.point_along(p, &base, s)
        } else {
            self.snap(end, s - d)
        }
    }

    /// Pieces of the ray from `p` into the end of `end`; the last piece runs to infinity.
    pub fn ray(&self, p: &TreePoint, end: usize) -> Vec<Piece> {
        let start = match *p {
            TreePoint::OnEdge { edge, offset } if edge == end => offset,
            _ => 0.0,
        };
        let mut out = if start > 0.0 { Vec::new() } else { self.geodesic(p, &TreePoint::Vertex(self.edges[end].a)) };
        out.push(Piece { edge: end, from: start, to: f64::INFINITY });
        out
    }

    /// Median of three points: the unique point on all three geodesics.
    pub fn median(&self, x: &TreePoint, y: &TreePoint, z: &TreePoint) -> TreePoint {
        let s = 0.5 * (self.distance(x, y) + self.distance(x, z) - self.distance(y, z));
        self.point_along(x, y, s.max(0.0))
    }

    /// Every vertex plus the midpoint of every finite edge and a point on each ray.
    pub fn sample_points(&self) -> Vec<TreePoint> {
        let mut out: Vec<TreePoint> = (0..self.vertex_count).map(TreePoint::Vertex).collect();
        for (k, e) in self.edges.iter().enumerate() {
            let t = if e.is_infinite() { 1.0 } else { 0.5 * e.len };
            out.push(TreePoint::OnEdge { edge: k, offset: t });
        }
        out
    }
}
