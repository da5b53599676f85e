//! Random trees and actions for property checks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::group::Presentation;

use super::action::TreeAction;
use super::isometry::TreeIsometry;
use super::subtree::Subtree;
use super::tree::{Edge, SimplicialTree, TreePoint};
use super::TREE_TOL;

fn names(rank: usize) -> Presentation {
    let all = ["a", "b", "c", "d", "e", "f"];
    Presentation::free(&all[..rank]).expect("valid generator names")
}

/// Random tree on `n` vertices with edge lengths in `[0.1, 2]` and `rays`
/// infinite edges at random vertices.
pub fn random_tree(rng: &mut impl Rng, n: usize, rays: usize) -> SimplicialTree {
    let mut edges: Vec<Edge> = (1..n).map(|v| Edge::finite(rng.gen_range(0..v), v, rng.gen_range(0.1..2.0))).collect();
    edges.extend((0..rays).map(|_| Edge::infinite(rng.gen_range(0..n))));
    SimplicialTree::new(n, edges).expect("generated tree is valid")
}

/// Random finite tree with exactly `leaves` leaves (at least 2) and edge
/// lengths in `[0.1, 2]`, grown by attaching pendant edges to random vertices.
/// Returns the tree and its leaves in increasing order.
pub fn random_tree_with_leaves(rng: &mut impl Rng, leaves: usize) -> (SimplicialTree, Vec<usize>) {
    let leaves = leaves.max(2);
    let mut edges = vec![Edge::finite(0, 1, rng.gen_range(0.1..2.0))];
    let mut degree = vec![1usize, 1];
    while degree.iter().filter(|&&d| d == 1).count() < leaves {
        let v = rng.gen_range(0..degree.len());
        let w = degree.len();
        edges.push(Edge::finite(v, w, rng.gen_range(0.1..2.0)));
        degree[v] += 1;
        degree.push(1);
    }
    let tree = SimplicialTree::new(degree.len(), edges).expect("generated tree is valid");
    let out = (0..degree.len()).filter(|&v| degree[v] == 1).collect();
    (tree, out)
}

pub fn random_point(rng: &mut impl Rng, tree: &SimplicialTree) -> TreePoint {
    let n = tree.vertex_count();
    let m = tree.edges().len();
    let k = rng.gen_range(0..n + m);
    if k < n {
        return TreePoint::Vertex(k);
    }
    let e = tree.edge(k - n);
    let top = if e.is_infinite() { 3.0 } else { e.len };
    tree.snap(k - n, rng.gen_range(0.0..top))
}

/// Hull of a few random points, sometimes with a ray.
pub fn random_subtree(rng: &mut impl Rng, tree: &SimplicialTree) -> Subtree {
    let count = rng.gen_range(1..=4);
    let pts: Vec<TreePoint> = (0..count).map(|_| random_point(rng, tree)).collect();
    let mut s = Subtree::hull(tree, &pts);
    let ends: Vec<usize> = tree.infinite_edges().collect();
    if !ends.is_empty() && rng.gen_bool(0.3) {
        s.add_ray(tree, &pts[0], *ends.choose(rng).unwrap());
    }
    s
}

/// A line subdivided at `positions` (increasing); edge `i < m - 1` joins
/// vertices `i` and `i + 1`, then come the left and right rays.
#[derive(Clone, Debug)]
pub struct LineTree {
    pub tree: SimplicialTree,
    pub positions: Vec<f64>,
}

impl LineTree {
    pub fn new(positions: Vec<f64>) -> Self {
        let m = positions.len();
        let mut edges: Vec<Edge> = (0..m - 1).map(|i| Edge::finite(i, i + 1, positions[i + 1] - positions[i])).collect();
        edges.push(Edge::infinite(0));
        edges.push(Edge::infinite(m - 1));
        let tree = SimplicialTree::new(m, edges).expect("line tree is valid");
        Self { tree, positions }
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        let m = rng.gen_range(1..=5);
        let mut x = 0.0;
        let positions = (0..m)
            .map(|i| {
                if i > 0 {
                    x += rng.gen_range(0.1..2.0);
                }
                x
            })
            .collect();
        Self::new(positions)
    }

    pub fn left(&self) -> usize {
        self.positions.len() - 1
    }

    pub fn right(&self) -> usize {
        self.positions.len()
    }

    pub fn point_at(&self, x: f64) -> TreePoint {
        let p = &self.positions;
        let last = p.len() - 1;
        if x <= p[0] {
            return self.tree.snap(self.left(), p[0] - x);
        }
        if x >= p[last] {
            return self.tree.snap(self.right(), x - p[last]);
        }
        let i = p.partition_point(|&v| v <= x).saturating_sub(1).min(last - 1);
        self.tree.snap(i, x - p[i])
    }

    pub fn coordinate(&self, q: &TreePoint) -> f64 {
        match *q {
            TreePoint::Vertex(v) => self.positions[v],
            TreePoint::OnEdge { edge, offset } if edge == self.left() => self.positions[0] - offset,
            TreePoint::OnEdge { edge, offset } if edge == self.right() => self.positions[self.positions.len() - 1] + offset,
            TreePoint::OnEdge { edge, offset } => self.positions[edge] + offset,
        }
    }

    /// The isometry `x -> sign * x + shift` with `sign = +-1`.
    pub fn isometry(&self, sign: f64, shift: f64) -> TreeIsometry {
        let images = self.positions.iter().map(|&x| self.point_at(sign * x + shift)).collect();
        let (l, r) = (self.left(), self.right());
        let ends = if sign > 0.0 { BTreeMap::from([(l, l), (r, r)]) } else { BTreeMap::from([(l, r), (r, l)]) };
        TreeIsometry::new(&self.tree, images, ends).expect("affine map of the line is an isometry")
    }
}

/// Random translations and reflections of a random line. With probability
/// one half every generator is a reflection in the same point or a trivial
/// translation, so the action has a global fixed point.
pub fn random_line_action(rng: &mut impl Rng, rank: usize) -> (LineTree, TreeAction) {
    let line = LineTree::random(rng);
    let hi = line.positions[line.positions.len() - 1] + 1.0;
    let fixed = rng.gen_bool(0.5);
    let centre = rng.gen_range(-1.0..hi);
    let gens = (0..rank)
        .map(|_| {
            if fixed {
                if rng.gen_bool(0.7) {
                    line.isometry(-1.0, 2.0 * centre)
                } else {
                    line.isometry(1.0, 0.0)
                }
            } else if rng.gen_bool(0.5) {
                line.isometry(1.0, rng.gen_range(-3.0..3.0))
            } else {
                line.isometry(-1.0, 2.0 * rng.gen_range(-1.0..hi))
            }
        })
        .collect();
    let action = TreeAction::new(line.tree.clone(), names(rank), gens).expect("line action is valid");
    (line, action)
}

/// Reflections of a line in points `r1` and `r2`: elliptic generators whose
/// fixed points are `|r1 - r2|` apart.
pub fn reflection_pair(rng: &mut impl Rng) -> (LineTree, TreeAction, f64) {
    let line = LineTree::random(rng);
    let hi = line.positions[line.positions.len() - 1] + 1.0;
    let (r1, r2) = (rng.gen_range(-1.0..hi), rng.gen_range(-1.0..hi));
    let gens = vec![line.isometry(-1.0, 2.0 * r1), line.isometry(-1.0, 2.0 * r2)];
    let action = TreeAction::new(line.tree.clone(), names(2), gens).expect("reflections are isometries");
    (line, action, (r1 - r2).abs())
}

/// Copies of one random rooted tree hung from a hub, plus arms fixed by
/// everything; each generator permutes the copies. The hub is a global fixed point.
pub fn random_star_action(rng: &mut impl Rng, rank: usize, allow_rays: bool) -> TreeAction {
    let m = rng.gen_range(1..=4);
    let template: Vec<(usize, f64)> = (1..m).map(|v| (rng.gen_range(0..v), rng.gen_range(0.1..2.0))).collect();
    let template_rays: Vec<usize> =
        if allow_rays { (0..rng.gen_range(0..=1)).map(|_| rng.gen_range(0..m)).collect() } else { Vec::new() };
    let copies = rng.gen_range(2..=4);
    let stem = rng.gen_range(0.1..2.0);

    let mut edges = Vec::new();
    let mut copy_edges = Vec::new();
    for i in 0..copies {
        let base = 1 + i * m;
        let start = edges.len();
        edges.push(Edge::finite(0, base, stem));
        for (v, &(parent, len)) in template.iter().enumerate() {
            edges.push(Edge::finite(base + parent, base + v + 1, len));
        }
        for &r in &template_rays {
            edges.push(Edge::infinite(base + r));
        }
        copy_edges.push(start);
    }
    let first_arm = 1 + copies * m;
    let mut n = first_arm;
    for _ in 0..rng.gen_range(0..=2) {
        let len = rng.gen_range(0.1..2.0);
        let attach = if n > first_arm && rng.gen_bool(0.5) { rng.gen_range(first_arm..n) } else { 0 };
        edges.push(Edge::finite(attach, n, len));
        n += 1;
    }
    if allow_rays && rng.gen_bool(0.5) {
        edges.push(Edge::infinite(0));
    }
    let tree = SimplicialTree::new(n, edges).expect("star tree is valid");
    let per_copy = 1 + template.len() + template_rays.len();

    let gens = (0..rank)
        .map(|_| {
            let mut sigma: Vec<usize> = (0..copies).collect();
            sigma.shuffle(rng);
            let mut images: Vec<TreePoint> = (0..n).map(TreePoint::Vertex).collect();
            for i in 0..copies {
                for t in 0..m {
                    images[1 + i * m + t] = TreePoint::Vertex(1 + sigma[i] * m + t);
                }
            }
            let mut ends: BTreeMap<usize, usize> = tree.infinite_edges().map(|k| (k, k)).collect();
            for i in 0..copies {
                for j in 1 + template.len()..per_copy {
                    ends.insert(copy_edges[i] + j, copy_edges[sigma[i]] + j);
                }
            }
            TreeIsometry::new(&tree, images, ends).expect("copy permutation is an isometry")
        })
        .collect();
    TreeAction::new(tree, names(rank), gens).expect("star action is valid")
}

/// Hull of the orbit of `p` when that orbit has at most `cap` points.
pub fn orbit_hull(action: &TreeAction, p: &TreePoint, cap: usize) -> Option<Subtree> {
    let tree = action.tree();
    let mut orbit = vec![*p];
    let mut frontier = vec![*p];
    while let Some(x) = frontier.pop() {
        for g in action.generators().iter().chain(action.inverses()) {
            let y = g.apply(tree, &x);
            if orbit.iter().all(|z| tree.distance(z, &y) > TREE_TOL) {
                if orbit.len() >= cap {
                    return None;
                }
                orbit.push(y);
                frontier.push(y);
            }
        }
    }
    Some(Subtree::hull(tree, &orbit))
}

/// A closed invariant subtree: a finite orbit hull, or the whole tree.
pub fn invariant_subtree(rng: &mut impl Rng, action: &TreeAction) -> Subtree {
    let p = random_point(rng, action.tree());
    orbit_hull(action, &p, 64).unwrap_or_else(|| Subtree::whole(action.tree()))
}

fn tripod() -> SimplicialTree {
    SimplicialTree::new(1, vec![Edge::infinite(0), Edge::infinite(0), Edge::infinite(0)]).expect("tripod")
}

/// Tripod of three rays permuted cyclically: no fixed end.
pub fn tripod_rotation() -> TreeAction {
    let tree = tripod();
    let g = TreeIsometry::new(&tree, vec![TreePoint::Vertex(0)], BTreeMap::from([(0, 1), (1, 2), (2, 0)])).unwrap();
    TreeAction::new(tree, names(1), vec![g]).unwrap()
}

/// Tripod of three rays with the first fixed and the other two swapped.
pub fn tripod_swap() -> TreeAction {
    let tree = tripod();
    let g = TreeIsometry::new(&tree, vec![TreePoint::Vertex(0)], BTreeMap::from([(0, 0), (1, 2), (2, 1)])).unwrap();
    TreeAction::new(tree, names(1), vec![g]).unwrap()
}

/// Two translations of the real line.
pub fn line_translations(c1: f64, c2: f64) -> (LineTree, TreeAction) {
    let line = LineTree::new(vec![0.0, 1.0]);
    let gens = vec![line.isometry(1.0, c1), line.isometry(1.0, c2)];
    let action = TreeAction::new(line.tree.clone(), names(2), gens).unwrap();
    (line, action)
}
