//! Unit-determinant 2x2 complex matrices.

use std::ops::Mul;

use num_complex::Complex;

use crate::scalar::Real;

use super::point::Point;
use super::HyperbolicError;

/// An element of SL(2, C), stored row-major as `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sl2<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> Sl2<T> {
    pub const DET_TOL: f64 = 1e-12;

    /// Checked constructor; the determinant must be 1 within a tolerance that
    /// scales with the entry magnitudes.
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Result<Self, HyperbolicError> {
        let m = Self { a, b, c, d };
        let defect = m.det_defect();
        let tol = T::lit(Self::DET_TOL).max(T::epsilon() * T::lit(8.0)) * T::one().max(m.max_abs() * m.max_abs());
        if !(defect <= tol) {
            return Err(HyperbolicError::NotUnitDeterminant { defect: defect.to_f64_lossy() });
        }
        Ok(m)
    }

    /// Divides by a square root of the determinant.
    pub fn normalized(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Result<Self, HyperbolicError> {
        let det = a * d - b * c;
        if det.norm().is_zero() || !det.norm().is_finite() {
            return Err(HyperbolicError::NotUnitDeterminant { defect: (det.norm() - T::one()).to_f64_lossy() });
        }
        let s = det.sqrt().inv();
        Ok(Self { a: a * s, b: b * s, c: c * s, d: d * s })
    }

    pub fn from_real(a: T, b: T, c: T, d: T) -> Result<Self, HyperbolicError> {
        let z = |x| Complex::new(x, T::zero());
        Self::new(z(a), z(b), z(c), z(d))
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self { a: o, b: z, c: z, d: o }
    }

    /// `diag(lambda, 1/lambda)`.
    pub fn diagonal(lambda: Complex<T>) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { a: lambda, b: z, c: z, d: lambda.inv() }
    }

    /// Rotation matrix `[[cos phi, -sin phi], [sin phi, cos phi]]`.
    pub fn rotation(phi: T) -> Self {
        let (s, c) = phi.sin_cos();
        let z = |x| Complex::new(x, T::zero());
        Self { a: z(c), b: z(-s), c: z(s), d: z(c) }
    }

    pub fn det(&self) -> Complex<T> {
        self.a * self.d - self.b * self.c
    }

    pub fn det_defect(&self) -> T {
        (self.det() - Complex::new(T::one(), T::zero())).norm()
    }

    pub fn trace(&self) -> Complex<T> {
        self.a + self.d
    }

    pub fn max_abs(&self) -> T {
        [self.a, self.b, self.c, self.d].iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self { a: self.a.conj(), b: self.c.conj(), c: self.b.conj(), d: self.d.conj() }
    }

    /// `self * other * self^-1`.
    pub fn conjugate(&self, other: &Self) -> Self {
        *self * *other * self.inverse()
    }

    /// `self * other * self^-1 * other^-1`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other * self.inverse() * other.inverse()
    }

    /// Eigenvalue of larger modulus, the root of `x^2 - tr x + 1` picked by modulus.
    pub fn dominant_eigenvalue(&self) -> Complex<T> {
        let tr = self.trace();
        let two = T::lit(2.0);
        let disc = (tr * tr - Complex::new(T::lit(4.0), T::zero())).sqrt();
        let l1 = (tr + disc) / two;
        let l2 = (tr - disc) / two;
        if l1.norm() >= l2.norm() {
            l1
        } else {
            l2
        }
    }

    /// The positive Hermitian element taking the origin to `p`, i.e. the
    /// square root `(X + I) / sqrt(tr X + 2)` of the Hermitian matrix of `p`.
    pub fn boost_to(p: &Point<T>) -> Self {
        let [x0, x1, x2, x3] = *p.coords();
        // x0 - x3 and x0 + x3 multiply to 1 + x1^2 + x2^2; take the larger directly.
        let rest = T::one() + x1 * x1 + x2 * x2;
        let (plus, minus) = if x3 >= T::zero() { (x0 + x3, rest / (x0 + x3)) } else { (rest / (x0 - x3), x0 - x3) };
        let s = (T::lit(2.0) * x0 + T::lit(2.0)).sqrt();
        let re = |x: T| Complex::new(x / s, T::zero());
        Self { a: re(plus + T::one()), b: Complex::new(x1 / s, x2 / s), c: Complex::new(x1 / s, -x2 / s), d: re(minus + T::one()) }
    }

    /// Displacement of the origin, `2 asinh(sqrt(|a - conj d|^2 + |b + conj c|^2) / 2)`,
    /// accurate both for tiny and for huge displacements.
    pub fn displacement_at_origin(&self) -> T {
        let s = (self.a - self.d.conj()).norm_sqr() + (self.b + self.c.conj()).norm_sqr();
        T::lit(2.0) * (s.sqrt() / T::lit(2.0)).asinh()
    }

    /// `d(p, A p)`, computed at the origin after conjugating by the boost to `p`.
    pub fn displacement_at(&self, p: &Point<T>) -> T {
        let b = Self::boost_to(p);
        (b.inverse() * *self * b).displacement_at_origin()
    }

    /// Minimal displacement `2 |ln |lambda||` of the induced isometry of H^3.
    /// Elliptic and parabolic elements (|lambda| = 1) give exactly zero.
    pub fn translation_length(&self) -> T {
        let lambda = self.dominant_eigenvalue().norm();
        if lambda <= T::one() {
            return T::zero();
        }
        let len = T::lit(2.0) * lambda.ln();
        if len <= T::lit(1e-12) {
            T::zero()
        } else {
            len
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        [(self.a, other.a), (self.b, other.b), (self.c, other.c), (self.d, other.d)]
            .iter()
            .all(|(x, y)| (*x - *y).norm() <= tol)
    }

    /// Equality up to the sign ambiguity of PSL(2, C).
    pub fn approx_eq_projective(&self, other: &Self, tol: T) -> bool {
        let neg = Self { a: -other.a, b: -other.b, c: -other.c, d: -other.d };
        self.approx_eq(other, tol) || self.approx_eq(&neg, tol)
    }
}

impl<T: Real> Mul for Sl2<T> {
    type Output = Sl2<T>;

    /// Plain product. Rescaling by `det^(-1/2)` would inject the rounding
    /// error of `ad - bc`, which grows with the square of the entries.
    fn mul(self, o: Self) -> Self {
        Sl2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}
