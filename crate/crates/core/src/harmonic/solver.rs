use crate::group::Representation;
use crate::hyperbolic::{Point, Tangent};
use crate::scalar::Real;

use super::energy::{energy_with, gradient_with, EdgeIsometries};
use super::graph::{EquivariantMap, TwistedGraph};
use super::HarmonicError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    /// A vertex left the escape radius while the energy kept decreasing: the
    /// infimum is most likely not attained.
    Escaped,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIterations => "max-iterations",
            SolveStatus::Escaped => "escaped",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport<T> {
    pub energy: T,
    pub gradient_norm: T,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Energy after every accepted iterate, starting with the initial map.
    pub energy_history: Vec<T>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub armijo: f64,
    pub shrink: f64,
    pub initial_step: f64,
    /// Inner gradient steps per Karcher-mean update in the fallback sweep.
    pub karcher_steps: usize,
}

impl SolverOptions {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        Self { tol, max_iter, armijo: 1e-4, shrink: 0.5, initial_step: 1.0, karcher_steps: 20 }
    }
}

/// Cap on the escape radius. Beyond roughly this distance the hyperboloid
/// coordinates cancel badly enough that gradients of small energies are noise.
pub const ESCAPE_HORIZON: f64 = 8.0;

/// Largest distance any vertex travels in one descent step.
const MAX_MOVE: f64 = 2.0;

fn norm<T: Real>(grad: &[Tangent<T>]) -> T {
    grad.iter().fold(T::zero(), |acc, v| acc + v.dot(v).max(T::zero())).sqrt()
}

fn step<T: Real>(u: &EquivariantMap<T>, grad: &[Tangent<T>], alpha: T) -> EquivariantMap<T> {
    EquivariantMap {
        positions: u.positions.iter().zip(grad).map(|(p, g)| p.exp_unchecked(&g.scale(-alpha))).collect(),
    }
}

/// Weighted Karcher mean by fixed-point iteration `x <- exp_x(sum w_i log_x(y_i) / sum w_i)`.
fn karcher_mean<T: Real>(start: Point<T>, targets: &[(T, Point<T>)], steps: usize) -> Point<T> {
    let total = targets.iter().fold(T::zero(), |a, (w, _)| a + *w);
    if targets.is_empty() || total.is_zero() {
        return start;
    }
    let mut x = start;
    for _ in 0..steps {
        let mut v = Tangent::zero();
        for (w, y) in targets {
            v = v.add(&x.log(y).scale(*w / total));
        }
        x = x.exp_unchecked(&x.project_tangent(&v.coords));
    }
    x
}

/// Jacobi sweep: every vertex moves to the Karcher mean of its
/// holonomy-transported neighbours, read from the previous iterate.
fn karcher_sweep<T: Real>(g: &TwistedGraph, iso: &EdgeIsometries<T>, u: &EquivariantMap<T>, steps: usize) -> EquivariantMap<T> {
    let mut targets: Vec<Vec<(T, Point<T>)>> = vec![Vec::new(); g.vertex_count()];
    for (k, e) in g.edges().iter().enumerate() {
        let w = T::lit(e.weight);
        targets[e.tail].push((w, iso.forward[k].apply(&u.positions[e.head])));
        targets[e.head].push((w, iso.backward[k].apply(&u.positions[e.tail])));
    }
    EquivariantMap {
        positions: u.positions.iter().zip(&targets).map(|(p, t)| karcher_mean(*p, t, steps)).collect(),
    }
}

/// Gradient descent with Armijo backtracking on the discrete energy, with a
/// Karcher-mean sweep as fallback when the line search stalls.
///
/// The first trial step is `initial_step`; later ones use the Barzilai-Borwein
/// ratio `<s,s>/<s,y>` (gradients compared after projecting the previous one
/// to the current tangent space), falling back to twice the last accepted
/// step when the curvature estimate is not positive. Doubling lets flat
/// directions (unattained infima) be followed at geometric speed.
pub fn minimize<T: Real>(
    g: &TwistedGraph,
    rep: &Representation<T>,
    init: &EquivariantMap<T>,
    opts: &SolverOptions,
) -> Result<(EquivariantMap<T>, SolveReport<T>), HarmonicError> {
    if !(opts.tol > 0.0) {
        return Err(HarmonicError::InvalidArgument("tolerance must be positive".into()));
    }
    if init.positions.len() != g.vertex_count() {
        return Err(HarmonicError::InvalidArgument("initial map has the wrong number of vertices".into()));
    }
    let iso = EdgeIsometries::new(g, rep)?;
    let tol = T::lit(opts.tol);
    let max_len = rep.images().iter().fold(T::zero(), |m, a| m.max(a.translation_length()));
    let escape_radius = (T::lit(10.0) * (T::one() + init.diameter() + max_len)).min(T::lit(ESCAPE_HORIZON));

    let mut u = init.clone();
    let mut e = energy_with(g, &iso, &u);
    let mut grad = gradient_with(g, &iso, &u);
    let mut gn = norm(&grad);
    let mut history = vec![e];
    let mut alpha = T::lit(opts.initial_step);
    let alpha_max = T::lit(1e12);
    let min_alpha = T::lit(1e-30);
    let noise = T::epsilon() * T::lit(64.0);

    let report = |u: EquivariantMap<T>, e, gn, it, status, history| {
        Ok((u, SolveReport { energy: e, gradient_norm: gn, iterations: it, status, energy_history: history }))
    };

    for it in 0..opts.max_iter {
        if gn <= tol {
            return report(u, e, gn, it, SolveStatus::Converged, history);
        }
        // No vertex moves more than MAX_MOVE per iteration.
        let gmax = grad.iter().fold(T::zero(), |m, v| m.max(v.norm()));
        let mut trial = alpha.min(T::lit(MAX_MOVE) / gmax);
        let accepted = loop {
            let cand = step(&u, &grad, trial);
            let ce = energy_with(g, &iso, &cand);
            let finite = ce.is_finite() && cand.positions.iter().all(|p| p.coords().iter().all(|c| c.is_finite()));
            if finite && ce <= e - T::lit(opts.armijo) * trial * gn * gn {
                break Some((cand, ce));
            }
            // Energy differences below rounding: accept if the gradient shrinks.
            if finite && (ce - e).abs() <= noise * (T::one() + e.abs()) && norm(&gradient_with(g, &iso, &cand)) < gn {
                break Some((cand, ce));
            }
            trial = trial * T::lit(opts.shrink);
            if trial < min_alpha {
                break None;
            }
        };
        let (next, ne) = match accepted {
            Some((cand, ce)) => {
                let new_grad = gradient_with(g, &iso, &cand);
                let (mut ss, mut sy) = (T::zero(), T::zero());
                for ((p, old), new) in cand.positions.iter().zip(&grad).zip(&new_grad) {
                    let old_here = p.project_tangent(&old.coords);
                    let s = old_here.scale(-trial);
                    let y = new.add(&old_here.scale(-T::one()));
                    ss = ss + s.dot(&s);
                    sy = sy + s.dot(&y);
                }
                alpha = if sy > T::zero() { ss / sy } else { trial * T::lit(2.0) }.min(alpha_max);
                (cand, ce)
            }
            None => {
                let cand = karcher_sweep(g, &iso, &u, opts.karcher_steps);
                let ce = energy_with(g, &iso, &cand);
                if ce.is_finite() && ce < e {
                    alpha = T::lit(opts.initial_step);
                    (cand, ce)
                } else {
                    // Neither move decreases the energy: numerical floor.
                    return report(u, e, gn, it, SolveStatus::MaxIterations, history);
                }
            }
        };
        u = next;
        e = ne;
        history.push(e);
        grad = gradient_with(g, &iso, &u);
        gn = norm(&grad);
        let moved = u
            .positions
            .iter()
            .zip(&init.positions)
            .fold(T::zero(), |m, (p, q)| m.max(p.distance_unchecked(q)));
        if moved > escape_radius {
            return report(u, e, gn, it + 1, SolveStatus::Escaped, history);
        }
    }
    let status = if gn <= tol { SolveStatus::Converged } else { SolveStatus::MaxIterations };
    report(u, e, gn, opts.max_iter, status, history)
}
