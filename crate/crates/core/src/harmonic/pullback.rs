use crate::group::{Representation, Word};
use std::collections::HashMap;

use crate::hyperbolic::{Lorentz, Point, Sl2};
use crate::scalar::Real;

use super::energy::sample_points;
use super::graph::{EquivariantMap, TwistedGraph};
use super::HarmonicError;

/// Pull-back pseudometric on orbit samples `(vertex, word)`, realized at the
/// points `rho(word) u(vertex)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PullbackMetric<T> {
    pub labels: Vec<(usize, Word)>,
    pub points: Vec<Point<T>>,
    pub distances: Vec<Vec<T>>,
}

/// Samples every vertex against every word, vertex-major.
///
/// Far-out sample points have huge hyperboloid coordinates, so each distance
/// is evaluated as `d(u(v1), rho(w1^-1 w2) u(v2))` with the first point near
/// the base map instead of between the two far points.
pub fn pullback_metric<T: Real>(
    rep: &Representation<T>,
    u: &EquivariantMap<T>,
    words: &[Word],
) -> Result<PullbackMetric<T>, HarmonicError> {
    let labels: Vec<(usize, Word)> =
        (0..u.positions.len()).flat_map(|v| words.iter().map(move |w| (v, w.clone()))).collect();
    let points = sample_points(rep, u, &labels)?;
    let mut relative: HashMap<Word, Lorentz<T>> = HashMap::new();
    for w1 in words {
        for w2 in words {
            let w = w1.inverse().concat(w2);
            if !relative.contains_key(&w) {
                let l = Lorentz::from_sl2(&rep.evaluate(&w)?);
                relative.insert(w, l);
            }
        }
    }
    let n = points.len();
    let mut distances = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let ((v1, w1), (v2, w2)) = (&labels[i], &labels[j]);
            let l = &relative[&w1.inverse().concat(w2)];
            let d = u.positions[*v1].distance_unchecked(&l.apply(&u.positions[*v2]));
            distances[i][j] = d;
            distances[j][i] = d;
        }
    }
    Ok(PullbackMetric { labels, points, distances })
}

/// A point `rho(shift) point` of the lifted fundamental domain, kept as a
/// nearby point and a word so displacements never see huge coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainPoint<T> {
    pub point: Point<T>,
    pub shift: Word,
}

impl<T: Real> DomainPoint<T> {
    pub fn resolve(&self, rep: &Representation<T>) -> Result<Point<T>, HarmonicError> {
        Ok(Lorentz::from_sl2(&rep.evaluate(&self.shift)?).apply(&self.point))
    }
}

/// Points of the lifted fundamental domain: every vertex image plus, for each
/// edge, `subdivisions - 1` evenly spaced interior points of the geodesic from
/// `u(tail)` to `rho(holonomy) u(head)`. Points on the far half of an edge are
/// stored as `rho(holonomy)` applied to a point near `u(head)`.
pub fn domain_points<T: Real>(
    g: &TwistedGraph,
    rep: &Representation<T>,
    u: &EquivariantMap<T>,
    subdivisions: usize,
) -> Result<Vec<DomainPoint<T>>, HarmonicError> {
    let mut out: Vec<DomainPoint<T>> =
        u.positions.iter().map(|p| DomainPoint { point: *p, shift: Word::empty() }).collect();
    let n = subdivisions.max(1);
    for e in g.edges() {
        let hol = Lorentz::from_sl2(&rep.evaluate(&e.holonomy)?);
        let tail = &u.positions[e.tail];
        let head = &u.positions[e.head];
        let far_head = hol.apply(head);
        let near_tail = hol.inverse().apply(tail);
        for k in 1..n {
            if 2 * k <= n {
                let len = tail.distance_unchecked(&far_head);
                out.push(DomainPoint { point: tail.toward(&far_head, len * T::lit(k as f64 / n as f64)), shift: Word::empty() });
            } else {
                let len = head.distance_unchecked(&near_tail);
                let point = head.toward(&near_tail, len * T::lit((n - k) as f64 / n as f64));
                out.push(DomainPoint { point, shift: e.holonomy.clone() });
            }
        }
    }
    Ok(out)
}

/// `min` over the translates `rho(w) x` of the domain points `x` of the
/// displacement under `rho(g)`, each evaluated in SL(2, C) as the displacement
/// of the stored point under `rho(s^-1 w^-1 g w s)` for the point's shift `s`.
pub fn sample_displacement<T: Real>(
    rep: &Representation<T>,
    points: &[DomainPoint<T>],
    words: &[Word],
    g: &Word,
) -> Result<T, HarmonicError> {
    let mut best = T::infinity();
    let mut conj: HashMap<Word, Sl2<T>> = HashMap::new();
    for w in words {
        for x in points {
            let ws = w.concat(&x.shift);
            let m = match conj.get(&ws) {
                Some(m) => *m,
                None => {
                    let m = rep.evaluate(&ws.inverse().concat(g).concat(&ws))?;
                    conj.insert(ws, m);
                    m
                }
            };
            best = best.min(m.displacement_at(&x.point));
        }
    }
    Ok(best)
}
