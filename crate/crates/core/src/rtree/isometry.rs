use std::collections::BTreeMap;

use super::subtree::Subtree;
use super::tree::{SimplicialTree, TreePoint};
use super::{TreeError, TREE_TOL};

/// Isometry of a simplicial tree, stored as the images of the vertices
/// (possibly inside edges) together with the permutation of infinite edges.
/// A point at offset `t` on a finite edge `[a, b]` goes to the point at
/// distance `t` from `g(a)` on `[g(a), g(b)]`; a point on a ray from `a` goes
/// to the point at distance `t` from `g(a)` toward the image end.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeIsometry {
    vertex_images: Vec<TreePoint>,
    end_map: BTreeMap<usize, usize>,
}

impl TreeIsometry {
    pub fn new(
        tree: &SimplicialTree,
        vertex_images: Vec<TreePoint>,
        end_map: BTreeMap<usize, usize>,
    ) -> Result<Self, TreeError> {
        let g = Self { vertex_images, end_map };
        g.validate(tree)?;
        Ok(g)
    }

    pub fn identity(tree: &SimplicialTree) -> Self {
        Self {
            vertex_images: (0..tree.vertex_count()).map(TreePoint::Vertex).collect(),
            end_map: tree.infinite_edges().map(|k| (k, k)).collect(),
        }
    }

    pub fn vertex_images(&self) -> &[TreePoint] {
        &self.vertex_images
    }

    pub fn end_map(&self) -> &BTreeMap<usize, usize> {
        &self.end_map
    }

    pub fn end_image(&self, edge: usize) -> usize {
        self.end_map[&edge]
    }

    fn validate(&self, tree: &SimplicialTree) -> Result<(), TreeError> {
        let bad = |msg: String| Err(TreeError::InvalidIsometry(msg));
        let n = tree.vertex_count();
        if self.vertex_images.len() != n {
            return bad(format!("{} vertex images for {n} vertices", self.vertex_images.len()));
        }
        for p in &self.vertex_images {
            tree.validate_point(p).map_err(|e| TreeError::InvalidIsometry(e.to_string()))?;
        }
        let ends: Vec<usize> = tree.infinite_edges().collect();
        let mut targets: Vec<usize> = self.end_map.values().cloned().collect();
        targets.sort_unstable();
        if self.end_map.keys().cloned().collect::<Vec<_>>() != ends || targets != ends {
            return bad("end map is not a permutation of the infinite edges".into());
        }
        for u in 0..n {
            for v in u + 1..n {
                let d = tree.distance(&self.vertex_images[u], &self.vertex_images[v]);
                let d0 = tree.vertex_distance(u, v);
                if (d - d0).abs() > TREE_TOL * (1.0 + d0) {
                    return bad(format!("vertices {u}, {v} at distance {d0} map to distance {d}"));
                }
            }
        }
        // Rays must leave the image of their base point away from everything else.
        let far: Vec<(usize, TreePoint)> = ends
            .iter()
            .map(|&k| {
                let a = tree.edge(k).a;
                (k, tree.toward_end(&self.vertex_images[a], self.end_map[&k], 1.0))
            })
            .collect();
        for &(k, x) in &far {
            let a = tree.edge(k).a;
            for v in 0..n {
                let expect = tree.vertex_distance(a, v) + 1.0;
                if (tree.distance(&self.vertex_images[v], &x) - expect).abs() > TREE_TOL * (1.0 + expect) {
                    return bad(format!("ray {k} is folded onto the image of vertex {v}"));
                }
            }
        }
        for (i, &(k1, x1)) in far.iter().enumerate() {
            for &(k2, x2) in &far[i + 1..] {
                let expect = tree.vertex_distance(tree.edge(k1).a, tree.edge(k2).a) + 2.0;
                if (tree.distance(&x1, &x2) - expect).abs() > TREE_TOL * (1.0 + expect) {
                    return bad(format!("rays {k1} and {k2} are folded together"));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, tree: &SimplicialTree, p: &TreePoint) -> TreePoint {
        match *p {
            TreePoint::Vertex(v) => self.vertex_images[v],
            TreePoint::OnEdge { edge, offset } => {
                let e = tree.edge(edge);
                let ga = self.vertex_images[e.a];
                match e.b {
                    Some(b) => tree.point_along(&ga, &self.vertex_images[b], offset),
                    None => tree.toward_end(&ga, self.end_map[&edge], offset),
                }
            }
        }
    }

    /// `self` after `other`.
    pub fn compose(&self, tree: &SimplicialTree, other: &TreeIsometry) -> TreeIsometry {
        TreeIsometry {
            vertex_images: other.vertex_images.iter().map(|p| self.apply(tree, p)).collect(),
            end_map: other.end_map.iter().map(|(&k, v)| (k, self.end_map[v])).collect(),
        }
    }

    /// A point mapped to `w`, found by locating `w` on the image of a vertex,
    /// finite edge or ray.
    fn preimage(&self, tree: &SimplicialTree, w: &TreePoint) -> Option<TreePoint> {
        for (v, p) in self.vertex_images.iter().enumerate() {
            if tree.distance(p, w) <= TREE_TOL {
                return Some(TreePoint::Vertex(v));
            }
        }
        for (k, e) in tree.edges().iter().enumerate() {
            let ga = self.vertex_images[e.a];
            let s = tree.distance(&ga, w);
            match e.b {
                Some(b) => {
                    let gb = self.vertex_images[b];
                    if s < e.len && (s + tree.distance(w, &gb) - e.len).abs() <= TREE_TOL * (1.0 + e.len) {
                        return Some(tree.snap(k, s));
                    }
                }
                None => {
                    let x = tree.toward_end(&ga, self.end_map[&k], s);
                    if tree.distance(&x, w) <= TREE_TOL * (1.0 + s) {
                        return Some(tree.snap(k, s));
                    }
                }
            }
        }
        None
    }

    pub fn inverse(&self, tree: &SimplicialTree) -> Result<TreeIsometry, TreeError> {
        let vertex_images = (0..tree.vertex_count())
            .map(|v| {
                self.preimage(tree, &TreePoint::Vertex(v))
                    .ok_or_else(|| TreeError::InvalidIsometry(format!("vertex {v} is not in the image")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let end_map = self.end_map.iter().map(|(&k, &v)| (v, k)).collect();
        Ok(TreeIsometry { vertex_images, end_map })
    }

    pub fn approx_eq(&self, tree: &SimplicialTree, other: &TreeIsometry, tol: f64) -> bool {
        self.end_map == other.end_map
            && self.vertex_images.iter().zip(&other.vertex_images).all(|(p, q)| tree.distance(p, q) <= tol)
    }

    pub fn displacement(&self, tree: &SimplicialTree, p: &TreePoint) -> f64 {
        tree.distance(p, &self.apply(tree, p))
    }

    /// Minimal displacement, via `d(x, g^2 x) - d(x, g x)` at any point `x`:
    /// it equals the translation length for hyperbolic isometries and is not
    /// positive for elliptic ones.
    pub fn translation_length(&self, tree: &SimplicialTree) -> f64 {
        let x = TreePoint::Vertex(0);
        let gx = self.apply(tree, &x);
        let ggx = self.apply(tree, &gx);
        (tree.distance(&x, &ggx) - tree.distance(&x, &gx)).max(0.0)
    }

    pub fn is_hyperbolic(&self, tree: &SimplicialTree) -> bool {
        self.translation_length(tree) > TREE_TOL
    }

    /// Translation length and the set where it is attained: the axis of a
    /// hyperbolic isometry, the fixed subtree of an elliptic one.
    pub fn characteristic_set(&self, tree: &SimplicialTree) -> (f64, Subtree) {
        let ell = self.translation_length(tree);
        let f: Vec<f64> = (0..tree.vertex_count()).map(|v| self.displacement(tree, &TreePoint::Vertex(v))).collect();
        let inside = |v: usize| f[v] <= ell + TREE_TOL;
        let mut s = Subtree::empty();
        for v in (0..tree.vertex_count()).filter(|&v| inside(v)) {
            s.mark_point(tree, &TreePoint::Vertex(v));
        }
        for (k, e) in tree.edges().iter().enumerate() {
            match e.b {
                Some(b) => match (inside(e.a), inside(b)) {
                    (true, true) => s.mark_piece(tree, k, 0.0, e.len),
                    (true, false) => {
                        let reach = e.len - 0.5 * (f[b] - ell);
                        if reach > 0.0 {
                            s.mark_piece(tree, k, 0.0, reach);
                        }
                    }
                    (false, true) => {
                        let start = 0.5 * (f[e.a] - ell);
                        if start < e.len {
                            s.mark_piece(tree, k, start, e.len);
                        }
                    }
                    (false, false) => {}
                },
                None => {
                    if inside(e.a) && self.end_map[&k] == k {
                        s.mark_piece(tree, k, 0.0, f64::INFINITY);
                    }
                }
            }
        }
        // A characteristic point possibly interior to an edge with neither end inside.
        let x = TreePoint::Vertex(0);
        let c = tree.point_along(&x, &self.apply(tree, &x), 0.5 * (f[0] - ell));
        s.mark_point(tree, &c);
        (ell, s)
    }

    /// Fixed subtree, absent for hyperbolic isometries.
    pub fn fixed_set(&self, tree: &SimplicialTree) -> Option<Subtree> {
        let (ell, s) = self.characteristic_set(tree);
        (ell <= TREE_TOL).then_some(s)
    }
}
