//! Empirical thin-triangle constant of H^3.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::point::Point;

/// Empirical bound on how far a point inside a geodesic triangle can be from
/// its sides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperbolicConstants {
    pub delta_thin: f64,
}

/// Vertices are drawn inside the ball of this radius about the origin, so
/// pairwise distances stay at most 20.
const VERTEX_RADIUS: f64 = 10.0;

/// Distance from `x` to the geodesic segment `[a, b]`.
///
/// With `g(s) = sinh(L - s) a + sinh(s) b` (up to the factor `1 / sinh L`),
/// `-<x, g(s)>` is convex in `s` with its minimum at
/// `tanh s = (A cosh L - B) / (A sinh L)`, `A = -<x, a>`, `B = -<x, b>`;
/// clamping to `[0, L]` keeps the minimum exact.
pub fn distance_to_segment(x: &Point<f64>, a: &Point<f64>, b: &Point<f64>) -> f64 {
    let len = a.distance_unchecked(b);
    if len < 1e-12 {
        return x.distance_unchecked(a);
    }
    let (ca, cb) = (-x.dot(a), -x.dot(b));
    let ratio = (ca * len.cosh() - cb) / (ca * len.sinh());
    let s = if ratio >= 1.0 { len } else { ratio.max(0.0).atanh().min(len) };
    x.distance_unchecked(&a.toward(b, s))
}

fn nearest_side(x: &Point<f64>, tri: &[Point<f64>; 3]) -> f64 {
    (0..3)
        .map(|i| distance_to_segment(x, &tri[i], &tri[(i + 1) % 3]))
        .fold(f64::INFINITY, f64::min)
}

/// Thinness of one triangle: the largest distance to the nearest side over a
/// grid of interior points, each lying on a geodesic between two side points.
pub fn triangle_thinness(tri: &[Point<f64>; 3], grid: usize) -> f64 {
    let grid = grid.max(2);
    let mut worst: f64 = 0.0;
    for side in 0..3 {
        let (a, b, c) = (&tri[side], &tri[(side + 1) % 3], &tri[(side + 2) % 3]);
        for i in 0..=grid {
            let p = a.toward(b, a.distance_unchecked(b) * i as f64 / grid as f64);
            for j in 0..=grid {
                let q = a.toward(c, a.distance_unchecked(c) * j as f64 / grid as f64);
                for k in 0..=grid {
                    let x = p.toward(&q, p.distance_unchecked(&q) * k as f64 / grid as f64);
                    worst = worst.max(nearest_side(&x, tri));
                }
            }
        }
    }
    worst
}

fn random_point(rng: &mut ChaCha8Rng, radius: f64) -> Point<f64> {
    let r = radius * rng.gen::<f64>();
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let rho = (1.0 - z * z).sqrt();
    let s = r.sinh();
    Point::from_spatial(s * rho * phi.cos(), s * rho * phi.sin(), s * z)
}

/// Monte Carlo estimate of the thin-triangle constant: the maximum, over
/// `samples` random triangles with pairwise vertex distance at most 20, of the
/// distance from a random interior point to the nearest side. Deterministic
/// in `seed`.
pub fn estimate_thin_constant(samples: usize, seed: u64) -> HyperbolicConstants {
    assert!(samples >= 100, "at least 100 samples are required");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let tri = [
            random_point(&mut rng, VERTEX_RADIUS),
            random_point(&mut rng, VERTEX_RADIUS),
            random_point(&mut rng, VERTEX_RADIUS),
        ];
        let side = rng.gen_range(0..3);
        let (a, b, c) = (&tri[side], &tri[(side + 1) % 3], &tri[(side + 2) % 3]);
        let p = a.toward(b, a.distance_unchecked(b) * rng.gen::<f64>());
        let q = a.toward(c, a.distance_unchecked(c) * rng.gen::<f64>());
        let x = p.toward(&q, p.distance_unchecked(&q) * rng.gen::<f64>());
        worst = worst.max(nearest_side(&x, &tri));
    }
    HyperbolicConstants { delta_thin: worst }
}
