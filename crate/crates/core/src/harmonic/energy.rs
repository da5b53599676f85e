use crate::group::Representation;
use crate::hyperbolic::{Lorentz, Point, Tangent};
use crate::scalar::Real;

use super::graph::{EquivariantMap, TwistedGraph};
use super::HarmonicError;

/// Holonomy isometries of every edge, with inverses, computed once per
/// representation.
#[derive(Clone, Debug)]
pub struct EdgeIsometries<T> {
    pub forward: Vec<Lorentz<T>>,
    pub backward: Vec<Lorentz<T>>,
}

impl<T: Real> EdgeIsometries<T> {
    pub fn new(g: &TwistedGraph, rep: &Representation<T>) -> Result<Self, HarmonicError> {
        let mut forward = Vec::with_capacity(g.edges().len());
        for e in g.edges() {
            forward.push(Lorentz::from_sl2(&rep.evaluate(&e.holonomy)?));
        }
        let backward = forward.iter().map(Lorentz::inverse).collect();
        Ok(Self { forward, backward })
    }
}

fn check_sizes<T>(g: &TwistedGraph, u: &EquivariantMap<T>) -> Result<(), HarmonicError> {
    if u.positions.len() != g.vertex_count() {
        return Err(HarmonicError::InvalidArgument(format!(
            "map has {} positions for {} vertices",
            u.positions.len(),
            g.vertex_count()
        )));
    }
    Ok(())
}

/// Distance between each edge's tail image and its transported head image.
pub(crate) fn edge_lengths<T: Real>(g: &TwistedGraph, iso: &EdgeIsometries<T>, u: &EquivariantMap<T>) -> Vec<T> {
    g.edges()
        .iter()
        .zip(&iso.forward)
        .map(|(e, l)| u.positions[e.tail].distance_unchecked(&l.apply(&u.positions[e.head])))
        .collect()
}

pub(crate) fn energy_with<T: Real>(g: &TwistedGraph, iso: &EdgeIsometries<T>, u: &EquivariantMap<T>) -> T {
    edge_lengths(g, iso, u)
        .into_iter()
        .zip(g.edges())
        .fold(T::zero(), |acc, (d, e)| acc + T::lit(e.weight) * d * d)
}

/// Riemannian gradient of the energy at every vertex.
///
/// For an edge term `w d(x, L y)^2` the gradient in `x` is `-2 w log_x(L y)`
/// and in `y` it is `-2 w log_y(L^-1 x)`. A loop (`x = y`) receives both.
pub(crate) fn gradient_with<T: Real>(
    g: &TwistedGraph,
    iso: &EdgeIsometries<T>,
    u: &EquivariantMap<T>,
) -> Vec<Tangent<T>> {
    let mut grad = vec![Tangent::zero(); g.vertex_count()];
    let m2 = T::lit(-2.0);
    for (k, e) in g.edges().iter().enumerate() {
        let w = T::lit(e.weight) * m2;
        let (x, y) = (&u.positions[e.tail], &u.positions[e.head]);
        let tail_pull = x.log(&iso.forward[k].apply(y)).scale(w);
        let head_pull = y.log(&iso.backward[k].apply(x)).scale(w);
        grad[e.tail] = grad[e.tail].add(&tail_pull);
        grad[e.head] = grad[e.head].add(&head_pull);
    }
    // Re-project to absorb rounding in the ambient coordinates.
    grad.iter().zip(&u.positions).map(|(v, p)| p.project_tangent(&v.coords)).collect()
}

/// Discrete equivariant Dirichlet energy `sum_e w_e d(u(tail), rho(h_e) u(head))^2`.
pub fn energy<T: Real>(g: &TwistedGraph, rep: &Representation<T>, u: &EquivariantMap<T>) -> Result<T, HarmonicError> {
    check_sizes(g, u)?;
    let iso = EdgeIsometries::new(g, rep)?;
    Ok(energy_with(g, &iso, u))
}

pub fn energy_gradient<T: Real>(
    g: &TwistedGraph,
    rep: &Representation<T>,
    u: &EquivariantMap<T>,
) -> Result<Vec<Tangent<T>>, HarmonicError> {
    check_sizes(g, u)?;
    let iso = EdgeIsometries::new(g, rep)?;
    Ok(gradient_with(g, &iso, u))
}

/// `sum over loops of w * l(rho(h))^2`; a loop term is at least the squared
/// translation length, so this bounds every map's energy from below.
pub fn displacement_lower_bound<T: Real>(g: &TwistedGraph, rep: &Representation<T>) -> Result<T, HarmonicError> {
    let mut total = T::zero();
    for e in g.edges().iter().filter(|e| e.tail == e.head) {
        let l = rep.evaluate(&e.holonomy)?.translation_length();
        total = total + T::lit(e.weight) * l * l;
    }
    Ok(total)
}

/// Largest per-edge share `(d_e^2 / w_e) / E`; the discrete counterpart of a
/// pointwise energy-density bound. Zero when the energy vanishes.
pub fn lipschitz_ratio<T: Real>(g: &TwistedGraph, rep: &Representation<T>, u: &EquivariantMap<T>) -> Result<T, HarmonicError> {
    check_sizes(g, u)?;
    let iso = EdgeIsometries::new(g, rep)?;
    let total = energy_with(g, &iso, u);
    if total.is_zero() {
        return Ok(T::zero());
    }
    Ok(edge_lengths(g, &iso, u)
        .into_iter()
        .zip(g.edges())
        .fold(T::zero(), |m, (d, e)| m.max(d * d / T::lit(e.weight)))
        / total)
}

/// Points `rho(w) u(v)` for every sample label.
pub fn sample_points<T: Real>(
    rep: &Representation<T>,
    u: &EquivariantMap<T>,
    labels: &[(usize, crate::group::Word)],
) -> Result<Vec<Point<T>>, HarmonicError> {
    labels
        .iter()
        .map(|(v, w)| {
            let p = u
                .positions
                .get(*v)
                .ok_or_else(|| HarmonicError::InvalidArgument(format!("vertex {v} out of range")))?;
            Ok(Lorentz::from_sl2(&rep.evaluate(w)?).apply(p))
        })
        .collect()
}
