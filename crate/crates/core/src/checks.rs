//! Property suites over generated instances, shared by `treelimit check`
//! and the acceptance tests. Every failure message carries the seed and the
//! case index needed to reproduce it.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{Letter, Presentation, Representation, Word};
use crate::hyperbolic::{Lorentz, Point, Sl2, Tangent, UpperHalfPoint};
use crate::rtree::gen;
use crate::rtree::{shift_toward_end, SemisimpleClass, TreeAction, TreePoint, TREE_TOL};

/// Slack for the identities that hold exactly in a tree.
pub const EXACT_SLACK: f64 = 1e-12;

pub const SUITES: [&str; 4] = ["tree-ops", "hyperbolic", "lengths", "all"];

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn line(&self) -> String {
        match &self.failure {
            None => format!("PASS {} ({} cases)", self.name, self.cases),
            Some(msg) => format!("FAIL {} ({} cases): {msg}", self.name, self.cases),
        }
    }
}

/// Runs one named property: `body` gets a per-case generator and returns an
/// error message on violation.
fn property(
    name: &'static str,
    seed: u64,
    cases: usize,
    mut body: impl FnMut(&mut ChaCha8Rng, usize) -> Result<(), String>,
) -> CheckResult {
    for i in 0..cases {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64));
        if let Err(msg) = body(&mut rng, i) {
            return CheckResult { name, cases, failure: Some(format!("seed {seed} case {i}: {msg}")) };
        }
    }
    CheckResult { name, cases, failure: None }
}

fn any_action(rng: &mut ChaCha8Rng) -> TreeAction {
    match rng.gen_range(0..3) {
        0 => gen::random_line_action(rng, 2).1,
        1 => gen::reflection_pair(rng).1,
        _ => {
            let rank = rng.gen_range(1..=3);
            gen::random_star_action(rng, rank, true)
        }
    }
}

fn close(a: f64, b: f64, slack: f64) -> bool {
    (a - b).abs() <= slack * (1.0 + a.abs().max(b.abs()))
}

pub fn projection_decreases_distance(seed: u64, cases: usize, fault: bool) -> CheckResult {
    property("projection is distance decreasing", seed, cases, |rng, i| {
        let n = rng.gen_range(1..12);
        let rays = rng.gen_range(0..3);
        let tree = gen::random_tree(rng, n, rays);
        let sub = gen::random_subtree(rng, &tree);
        let p = gen::random_point(rng, &tree);
        let q = gen::random_point(rng, &tree);
        let (pp, pq) = (sub.project(&tree, &p).map_err(|e| e.to_string())?, sub.project(&tree, &q).map_err(|e| e.to_string())?);
        let mut d = tree.distance(&pp, &pq);
        if fault && i == cases / 2 {
            d += tree.distance(&p, &q) + 1.0;
        }
        if d > tree.distance(&p, &q) + EXACT_SLACK {
            return Err(format!("d(pi p, pi q) = {d} > d(p, q) = {}", tree.distance(&p, &q)));
        }
        Ok(())
    })
}

pub fn projection_is_equivariant(seed: u64, cases: usize) -> CheckResult {
    property("projection is equivariant", seed, cases, |rng, _| {
        let action = any_action(rng);
        let tree = action.tree();
        let sub = gen::invariant_subtree(rng, &action);
        if !action.is_invariant(&sub) {
            return Err("generated subtree is not invariant".into());
        }
        let p = gen::random_point(rng, tree);
        let pi = sub.project(tree, &p).map_err(|e| e.to_string())?;
        for g in action.generators().iter().chain(action.inverses()) {
            let lhs = sub.project(tree, &g.apply(tree, &p)).map_err(|e| e.to_string())?;
            let rhs = g.apply(tree, &pi);
            let gap = tree.distance(&lhs, &rhs);
            if gap > EXACT_SLACK {
                return Err(format!("pi(g p) and g pi(p) are {gap} apart"));
            }
        }
        Ok(())
    })
}

pub fn minimal_subtree_is_invariant(seed: u64, cases: usize) -> CheckResult {
    property("minimal subtree is invariant", seed, cases, |rng, _| {
        let action = loop {
            let (_, action) = gen::random_line_action(rng, 2);
            if action.global_fixed_point().is_none() {
                break action;
            }
        };
        let m = action.minimal_subtree(4).map_err(|e| e.to_string())?;
        if !action.is_invariant(&m) {
            return Err("a generator moves the minimal subtree off itself".into());
        }
        if !action.passes_pruning_check(&m) {
            return Err("a pruned copy is still invariant".into());
        }
        Ok(())
    })
}

pub fn displacement_identity(seed: u64, cases: usize) -> CheckResult {
    property("displacement = length + 2 dist(char set)", seed, cases, |rng, _| {
        let action = any_action(rng);
        let tree = action.tree();
        let rank = action.presentation().rank();
        let len = rng.gen_range(1..=3);
        let w = Word::new((0..len).map(|_| Letter::new(rng.gen_range(0..rank), if rng.gen() { 1 } else { -1 })));
        let g = action.evaluate(&w);
        let (ell, char_set) = g.characteristic_set(tree);
        for _ in 0..5 {
            let x = gen::random_point(rng, tree);
            let lhs = g.displacement(tree, &x);
            let rhs = ell + 2.0 * char_set.distance_to(tree, &x);
            if !close(lhs, rhs, EXACT_SLACK) {
                return Err(format!("d(x, gx) = {lhs}, l + 2 d(x, C) = {rhs}"));
            }
        }
        Ok(())
    })
}

pub fn shift_is_equivariant(seed: u64, cases: usize) -> CheckResult {
    property("shift toward a fixed end is equivariant", seed, cases, |rng, _| {
        let action = loop {
            let a = if rng.gen_bool(0.5) { gen::random_line_action(rng, 2).1 } else { gen::random_star_action(rng, 2, true) };
            if !a.fixed_ends().is_empty() {
                break a;
            }
        };
        let tree = action.tree();
        let end = *action.fixed_ends().choose(rng).unwrap();
        let eps = rng.gen_range(0.01..3.0);
        let p = gen::random_point(rng, tree);
        let phi = |x: &TreePoint| shift_toward_end(tree, x, end, eps).map_err(|e| e.to_string());
        for g in action.generators() {
            let gap = tree.distance(&phi(&g.apply(tree, &p))?, &g.apply(tree, &phi(&p)?));
            if gap > EXACT_SLACK {
                return Err(format!("phi(g p) and g phi(p) are {gap} apart"));
            }
        }
        Ok(())
    })
}

/// The shift toward an end, checked against the closed form of each case:
/// nested rays (distance kept), both points beyond `eps` from the branch
/// point, both within it, and one on either side.
pub fn shift_decreases_distance(seed: u64, cases: usize) -> CheckResult {
    let mut seen = [0usize; 4];
    let mut result = property("shift toward an end is distance decreasing", seed, cases, |rng, i| {
        let (n, rays) = (rng.gen_range(1..10), rng.gen_range(1..3));
        let tree = gen::random_tree(rng, n, rays);
        let ends: Vec<usize> = tree.infinite_edges().collect();
        let end = *ends.choose(rng).unwrap();
        let x = gen::random_point(rng, &tree);
        let y = if i % 5 == 0 { tree.toward_end(&x, end, rng.gen_range(0.1..2.0)) } else { gen::random_point(rng, &tree) };
        let far = tree.toward_end(&TreePoint::Vertex(tree.edge(end).a), end, 100.0 + tree.core_diameter());
        let p = tree.median(&x, &y, &far);
        let (dx, dy) = (tree.distance(&x, &p), tree.distance(&y, &p));
        let (lo, hi) = (dx.min(dy), dx.max(dy));
        let nested = lo <= TREE_TOL;
        let case = if nested { 0 } else { rng.gen_range(1..=3) };
        let eps = match case {
            0 => rng.gen_range(0.01..3.0),
            1 => lo * rng.gen_range(0.05..0.95),
            2 => hi + rng.gen_range(0.01..1.0),
            _ => lo + (hi - lo) * rng.gen_range(0.0..1.0),
        };
        if eps <= 0.0 {
            return Ok(());
        }
        let fx = shift_toward_end(&tree, &x, end, eps).map_err(|e| e.to_string())?;
        let fy = shift_toward_end(&tree, &y, end, eps).map_err(|e| e.to_string())?;
        let got = tree.distance(&fx, &fy);
        let dxy = tree.distance(&x, &y);
        let expect = match case {
            0 => dxy,
            1 => dx + dy - 2.0 * eps,
            _ => (dy - dx).abs(),
        };
        seen[case] += 1;
        if !close(got, expect, EXACT_SLACK) || got > dxy + EXACT_SLACK {
            return Err(format!("case {case}: got {got}, expected {expect}, d(x, y) = {dxy}"));
        }
        Ok(())
    });
    if result.passed() && seen.contains(&0) {
        result.failure = Some(format!("seed {seed}: case coverage {seen:?} misses a case"));
    }
    result
}

/// Zero length function on words of length at most 4 exactly when the
/// generators share a fixed point; reflection pairs also check l(gh) = 2 d(Fix g, Fix h).
pub fn fixed_point_criterion(seed: u64, cases: usize) -> CheckResult {
    property("zero length function iff global fixed point", seed, cases, |rng, _| {
        let serre = rng.gen_bool(0.3);
        let action = if serre { gen::reflection_pair(rng).1 } else { any_action(rng) };
        let tree = action.tree();
        let words: Vec<Word> = action.presentation().ball(4).into_iter().filter(|w| !w.is_empty()).collect();
        let lengths = action.length_function(&words);
        let zero = lengths.iter().all(|&l| l <= TREE_TOL);
        let fixed = action.global_fixed_point();
        if zero != fixed.is_some() {
            return Err(format!("length function zero: {zero}, fixed point: {}", fixed.is_some()));
        }
        if serre {
            let fg = action.generators()[0].fixed_set(tree).ok_or("reflection without fixed point")?;
            let fh = action.generators()[1].fixed_set(tree).ok_or("reflection without fixed point")?;
            let x = fh.project(tree, &fg.any_point().unwrap()).map_err(|e| e.to_string())?;
            let gap = fg.distance_to(tree, &x);
            let ell = action.length_function(&[Word::from_pairs(&[(0, 1), (1, 1)])])[0];
            if !close(ell, 2.0 * gap, EXACT_SLACK) {
                return Err(format!("l(gh) = {ell}, 2 d(Fix g, Fix h) = {}", 2.0 * gap));
            }
        }
        Ok(())
    })
}

/// The three documented example actions and their branches.
pub fn classification_examples() -> CheckResult {
    let (_, line) = gen::line_translations(0.8, -1.9);
    let cases = [
        ("line translations", line, SemisimpleClass::LineAction),
        ("rotated tripod", gen::tripod_rotation(), SemisimpleClass::NoFixedEnd),
        ("tripod fixing one end", gen::tripod_swap(), SemisimpleClass::FixesEndNotLine),
    ];
    for (label, action, expect) in cases {
        match action.classify_semisimple() {
            Ok(c) if c == expect => {}
            other => {
                return CheckResult {
                    name: "semi-simple classification",
                    cases: 3,
                    failure: Some(format!("{label}: expected {}, got {other:?}", expect.as_str())),
                }
            }
        }
    }
    CheckResult { name: "semi-simple classification", cases: 3, failure: None }
}

pub fn line_lengths_are_abelian(seed: u64, cases: usize) -> CheckResult {
    property("line translation lengths are |sum of shifts|", seed, cases, |rng, _| {
        let (c1, c2) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (_, action) = gen::line_translations(c1, c2);
        for w in action.presentation().ball(3) {
            let s = w.exponent_sums(2);
            let expect = (s[0] as f64 * c1 + s[1] as f64 * c2).abs();
            let got = action.length_function(&[w])[0];
            if !close(got, expect, 1e-9) {
                return Err(format!("length {got}, expected {expect}"));
            }
        }
        Ok(())
    })
}

fn random_point(rng: &mut ChaCha8Rng, r: f64) -> Point<f64> {
    Point::from_spatial(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn random_sl2(rng: &mut ChaCha8Rng) -> Sl2<f64> {
    let mut z = || Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
    loop {
        if let Ok(m) = Sl2::normalized(z(), z(), z(), z()) {
            return m;
        }
    }
}

/// Unit-determinant matrix with a prescribed real trace.
pub fn random_sl2_with_trace(rng: &mut ChaCha8Rng, trace: f64) -> Sl2<f64> {
    let mut z = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    loop {
        let (a, b) = (z(), z());
        if b.norm() < 0.1 {
            continue;
        }
        let d = Complex64::new(trace, 0.0) - a;
        let c = (a * d - 1.0) / b;
        if let Ok(m) = Sl2::new(a, b, c, d) {
            return m;
        }
    }
}

pub fn triangle_inequality(seed: u64, cases: usize) -> CheckResult {
    property("hyperbolic triangle inequality", seed, cases, |rng, _| {
        let (x, y, z) = (random_point(rng, 3.0), random_point(rng, 3.0), random_point(rng, 3.0));
        let d = |p: &Point<f64>, q: &Point<f64>| p.distance(q).map_err(|e| e.to_string());
        if d(&x, &z)? > d(&x, &y)? + d(&y, &z)? + 1e-9 {
            return Err("triangle inequality violated".into());
        }
        Ok(())
    })
}

pub fn distance_matches_upper_half_space(seed: u64, cases: usize) -> CheckResult {
    property("hyperboloid distance matches upper half-space", seed, cases, |rng, _| {
        let (x, y) = (random_point(rng, 3.0), random_point(rng, 3.0));
        let d = x.distance(&y).map_err(|e| e.to_string())?;
        let u = UpperHalfPoint::from_hyperboloid(&x).distance(&UpperHalfPoint::from_hyperboloid(&y));
        if !close(d, u, 1e-9) {
            return Err(format!("{d} vs {u}"));
        }
        Ok(())
    })
}

pub fn exp_log_round_trip(seed: u64, cases: usize) -> CheckResult {
    property("exp inverts log", seed, cases, |rng, _| {
        let (x, y) = (random_point(rng, 3.0), random_point(rng, 3.0));
        let back = x.exp(&x.log(&y)).map_err(|e| e.to_string())?;
        let gap = back.distance(&y).map_err(|e| e.to_string())?;
        if gap > 1e-7 {
            return Err(format!("exp(log) misses by {gap}"));
        }
        let v: Tangent<f64> = x.project_tangent(&[0.0, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 0.3]);
        let d = x.distance(&x.exp(&v).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if !close(d, v.norm(), 1e-9) {
            return Err(format!("|v| = {}, d(x, exp v) = {d}", v.norm()));
        }
        Ok(())
    })
}

pub fn lorentz_is_isometric_homomorphism(seed: u64, cases: usize) -> CheckResult {
    property("matrix action is an isometric homomorphism", seed, cases, |rng, _| {
        let (a, b) = (random_sl2(rng), random_sl2(rng));
        let (la, lb) = (Lorentz::from_sl2(&a), Lorentz::from_sl2(&b));
        let prod = Lorentz::from_sl2(&(a * b));
        let gap = prod.max_abs_diff(&(la * lb));
        let scale = 1.0 + a.max_abs().powi(2) * b.max_abs().powi(2);
        if gap > 1e-10 * scale * scale {
            return Err(format!("L(AB) - L(A)L(B) = {gap}"));
        }
        let (x, y) = (random_point(rng, 2.0), random_point(rng, 2.0));
        let (d0, d1) = (x.distance(&y).unwrap(), la.apply(&x).distance(&la.apply(&y)).unwrap());
        if !close(d0, d1, 1e-7) {
            return Err(format!("distance {d0} becomes {d1}"));
        }
        Ok(())
    })
}

/// `|l - 2 ln tr| <= 2` for real trace at least 1.
pub fn trace_length_inequality(seed: u64, cases: usize) -> CheckResult {
    property("trace-length inequality", seed, cases, |rng, _| {
        let tr = if rng.gen_bool(0.3) { rng.gen_range(1.0..2.0) } else { (rng.gen_range(0.0..8.0f64)).exp() + 1.0 };
        let m = random_sl2_with_trace(rng, tr);
        let ell = m.translation_length();
        let gap = (ell - 2.0 * tr.ln()).abs();
        if gap > 2.0 + 1e-9 {
            return Err(format!("trace {tr}: |l - 2 ln tr| = {gap}"));
        }
        Ok(())
    })
}

pub fn lengths_are_conjugation_invariant(seed: u64, cases: usize) -> CheckResult {
    let pres = Presentation::free(&["a", "b"]).expect("free presentation");
    let words = pres.word_list(3).expect("positive length");
    property("lengths are conjugation invariant", seed, cases, |rng, _| {
        let rep = Representation::free(vec![random_sl2(rng), random_sl2(rng)]);
        let c = random_sl2(rng);
        let l0 = rep.length_function(&words).map_err(|e| e.to_string())?;
        let l1 = rep.conjugated(&c).length_function(&words).map_err(|e| e.to_string())?;
        for (x, y) in l0.iter().zip(&l1) {
            if !close(*x, *y, 1e-6) {
                return Err(format!("{x} vs {y}"));
            }
        }
        Ok(())
    })
}

pub fn tree_ops(seed: u64, fault: bool) -> Vec<CheckResult> {
    vec![
        projection_decreases_distance(seed, 1000, fault),
        projection_is_equivariant(seed, 1000),
        minimal_subtree_is_invariant(seed, 100),
        displacement_identity(seed, 300),
        shift_is_equivariant(seed, 300),
        shift_decreases_distance(seed, 1000),
        fixed_point_criterion(seed, 200),
        classification_examples(),
    ]
}

pub fn hyperbolic(seed: u64) -> Vec<CheckResult> {
    vec![
        triangle_inequality(seed, 1000),
        distance_matches_upper_half_space(seed, 1000),
        exp_log_round_trip(seed, 1000),
        lorentz_is_isometric_homomorphism(seed, 500),
    ]
}

pub fn lengths(seed: u64) -> Vec<CheckResult> {
    vec![
        trace_length_inequality(seed, 1000),
        lengths_are_conjugation_invariant(seed, 200),
        line_lengths_are_abelian(seed, 100),
    ]
}

/// Runs a named suite; `None` for unknown names.
pub fn run_suite(name: &str, seed: u64, fault: bool) -> Option<Vec<CheckResult>> {
    Some(match name {
        "tree-ops" => tree_ops(seed, fault),
        "hyperbolic" => hyperbolic(seed),
        "lengths" => lengths(seed),
        "all" => {
            let mut out = tree_ops(seed, fault);
            out.extend(hyperbolic(seed));
            out.extend(lengths(seed));
            out
        }
        _ => return None,
    })
}
