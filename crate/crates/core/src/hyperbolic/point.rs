//! Points and tangent vectors of the hyperboloid model.

use crate::scalar::Real;

use super::HyperbolicError;

/// Minkowski bilinear form with signature (-, +, +, +).
#[inline]
pub fn minkowski_dot<T: Real>(x: &[T; 4], y: &[T; 4]) -> T {
    -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]
}

/// A point on the upper sheet `<x,x> = -1, x0 > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point<T> {
    coords: [T; 4],
}

/// A 4-vector, tangent to the hyperboloid at some base point.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Tangent<T> {
    pub coords: [T; 4],
}

impl<T: Real> Tangent<T> {
    pub fn zero() -> Self {
        Self { coords: [T::zero(); 4] }
    }

    pub fn new(coords: [T; 4]) -> Self {
        Self { coords }
    }

    /// Riemannian norm; the Minkowski form is positive definite on tangent spaces.
    pub fn norm(&self) -> T {
        minkowski_dot(&self.coords, &self.coords).max(T::zero()).sqrt()
    }

    pub fn dot(&self, other: &Self) -> T {
        minkowski_dot(&self.coords, &other.coords)
    }

    pub fn scale(&self, s: T) -> Self {
        Self { coords: self.coords.map(|c| c * s) }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coords = self.coords;
        for (c, o) in coords.iter_mut().zip(other.coords) {
            *c = *c + o;
        }
        Self { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl<T: Real> Point<T> {
    /// Tolerance on `<x,x> + 1`.
    pub fn invariant_tol() -> T {
        T::lit(1e-10).max(T::epsilon() * T::lit(64.0))
    }

    /// Validates the hyperboloid invariants. The time coordinate is allowed a
    /// relative error because it grows like `cosh` of the distance to the origin.
    pub fn new(coords: [T; 4]) -> Result<Self, HyperbolicError> {
        let q = minkowski_dot(&coords, &coords);
        let scale = T::one().max(coords[0] * coords[0]);
        if !(coords[0] > T::zero()) || ((q + T::one()).abs() > Self::invariant_tol() * scale) {
            return Err(HyperbolicError::InvalidPoint {
                residual: (q + T::one()).to_f64_lossy(),
            });
        }
        Ok(Self { coords })
    }

    /// Lifts spatial coordinates to the hyperboloid.
    pub fn from_spatial(x1: T, x2: T, x3: T) -> Self {
        let x0 = (T::one() + x1 * x1 + x2 * x2 + x3 * x3).sqrt();
        Self { coords: [x0, x1, x2, x3] }
    }

    /// Re-projects an almost-valid 4-vector onto the upper sheet, keeping the
    /// spatial part.
    pub fn renormalized(coords: [T; 4]) -> Self {
        Self::from_spatial(coords[1], coords[2], coords[3])
    }

    pub fn origin() -> Self {
        Self { coords: [T::one(), T::zero(), T::zero(), T::zero()] }
    }

    pub fn coords(&self) -> &[T; 4] {
        &self.coords
    }

    pub fn x0(&self) -> T {
        self.coords[0]
    }

    pub fn dot(&self, other: &Self) -> T {
        minkowski_dot(&self.coords, &other.coords)
    }

    /// Hyperbolic distance `arccosh(-<p,q>)`, evaluated through `2 asinh(|p-q|/2)`
    /// when the points are close.
    pub fn distance(&self, other: &Self) -> Result<T, HyperbolicError> {
        let c = -self.dot(other);
        let slack = T::lit(1e-9).max(self.x0() * other.x0() * T::epsilon() * T::lit(16.0));
        if c < T::one() - slack || c.is_nan() {
            return Err(HyperbolicError::InvalidPoint { residual: (c - T::one()).to_f64_lossy() });
        }
        Ok(self.distance_unchecked(other))
    }

    pub(crate) fn distance_unchecked(&self, other: &Self) -> T {
        let c = -self.dot(other);
        if c > T::lit(2.0) {
            return c.acosh();
        }
        let mut diff = self.coords;
        for (d, o) in diff.iter_mut().zip(other.coords) {
            *d = *d - o;
        }
        let sq = minkowski_dot(&diff, &diff).max(T::zero());
        T::lit(2.0) * (sq.sqrt() / T::lit(2.0)).asinh()
    }

    /// Orthogonal projection of an ambient vector onto the tangent space here.
    pub fn project_tangent(&self, w: &[T; 4]) -> Tangent<T> {
        let s = minkowski_dot(w, &self.coords);
        let mut coords = *w;
        for (c, p) in coords.iter_mut().zip(self.coords) {
            *c = *c + s * p;
        }
        Tangent { coords }
    }

    /// Riemannian logarithm: the tangent vector at `self` pointing at `q` whose
    /// norm is the distance.
    pub fn log(&self, q: &Self) -> Tangent<T> {
        let d = self.distance_unchecked(q);
        if d.is_zero() {
            return Tangent::zero();
        }
        // A second projection removes the normal residual left by cancellation.
        let u = self.project_tangent(&self.project_tangent(&q.coords).coords);
        let un = u.norm();
        if un.is_zero() {
            return Tangent::zero();
        }
        u.scale(d / un)
    }

    /// Riemannian exponential; rejects vectors that are not tangent here.
    pub fn exp(&self, v: &Tangent<T>) -> Result<Self, HyperbolicError> {
        let residual = minkowski_dot(&v.coords, &self.coords);
        let scale = T::one().max(self.x0()) * T::one().max(v.coords.iter().fold(T::zero(), |m, c| m.max(c.abs())));
        if residual.abs() > T::lit(1e-9) * scale {
            return Err(HyperbolicError::NotTangent { residual: residual.to_f64_lossy() });
        }
        Ok(self.exp_unchecked(v))
    }

    pub(crate) fn exp_unchecked(&self, v: &Tangent<T>) -> Self {
        let n = v.norm();
        if n.is_zero() {
            return *self;
        }
        let (ch, sh) = (n.cosh(), n.sinh() / n);
        let mut out = [T::zero(); 4];
        for i in 0..4 {
            out[i] = ch * self.coords[i] + sh * v.coords[i];
        }
        Self::renormalized(out)
    }

    /// Point at arc length `s` from `self` toward `q` (`s` may exceed the distance).
    pub fn toward(&self, q: &Self, s: T) -> Self {
        let d = self.distance_unchecked(q);
        if d > T::lit(1e-6) && d < T::lit(700.0) {
            let (wp, wq) = ((d - s).sinh() / d.sinh(), s.sinh() / d.sinh());
            let mut out = [T::zero(); 4];
            for i in 0..4 {
                out[i] = wp * self.coords[i] + wq * q.coords[i];
            }
            return Self::renormalized(out);
        }
        let v = self.log(q);
        let n = v.norm();
        if n.is_zero() {
            return *self;
        }
        self.exp_unchecked(&v.scale(s / n))
    }
}
