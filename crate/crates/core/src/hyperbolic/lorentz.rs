//! Orthochronous Lorentz transformations and the spinor map from SL(2, C).

use std::ops::Mul;

use num_complex::Complex;

use crate::scalar::Real;

use super::point::{Point, Tangent};
use super::sl2::Sl2;

/// A 4x4 real matrix preserving the Minkowski form and the upper sheet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lorentz<T> {
    pub m: [[T; 4]; 4],
}

const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

impl<T: Real> Lorentz<T> {
    pub fn identity() -> Self {
        let mut m = [[T::zero(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = T::one();
        }
        Self { m }
    }

    /// Isometry induced by `X -> A X A*` on Hermitian matrices
    /// `X = [[x0 + x3, x1 + i x2], [x1 - i x2, x0 - x3]]`.
    pub fn from_sl2(a: &Sl2<T>) -> Self {
        let z = |re: f64, im: f64| Complex::new(T::lit(re), T::lit(im));
        // Hermitian basis images of e0..e3.
        let basis: [[Complex<T>; 4]; 4] = [
            [z(1., 0.), z(0., 0.), z(0., 0.), z(1., 0.)],
            [z(0., 0.), z(1., 0.), z(1., 0.), z(0., 0.)],
            [z(0., 0.), z(0., 1.), z(0., -1.), z(0., 0.)],
            [z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)],
        ];
        let adj = a.adjoint();
        let mut m = [[T::zero(); 4]; 4];
        let half = T::lit(0.5);
        for (k, h) in basis.iter().enumerate() {
            let x = Sl2Raw::mul(&Sl2Raw::mul(&Sl2Raw::of(a), h), &Sl2Raw::of(&adj));
            m[0][k] = (x[0].re + x[3].re) * half;
            m[3][k] = (x[0].re - x[3].re) * half;
            m[1][k] = x[1].re;
            m[2][k] = x[1].im;
        }
        Self { m }
    }

    pub fn apply_raw(&self, x: &[T; 4]) -> [T; 4] {
        let mut out = [T::zero(); 4];
        for (i, row) in self.m.iter().enumerate() {
            out[i] = row.iter().zip(x).fold(T::zero(), |acc, (a, b)| acc + *a * *b);
        }
        out
    }

    pub fn apply(&self, p: &Point<T>) -> Point<T> {
        Point::renormalized(self.apply_raw(p.coords()))
    }

    pub fn apply_tangent(&self, v: &Tangent<T>) -> Tangent<T> {
        Tangent::new(self.apply_raw(&v.coords))
    }

    /// `eta L^T eta`.
    pub fn inverse(&self) -> Self {
        let mut m = [[T::zero(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = T::lit(ETA[i] * ETA[j]) * self.m[j][i];
            }
        }
        Self { m }
    }

    /// Largest entry of `L^T eta L - eta`.
    pub fn defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut s = T::zero();
                for k in 0..4 {
                    s = s + self.m[k][i] * T::lit(ETA[k]) * self.m[k][j];
                }
                let target = if i == j { T::lit(ETA[i]) } else { T::zero() };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }
}

impl<T: Real> Mul for Lorentz<T> {
    type Output = Lorentz<T>;

    fn mul(self, o: Self) -> Self {
        let mut m = [[T::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = (0..4).fold(T::zero(), |acc, k| acc + self.m[i][k] * o.m[k][j]);
            }
        }
        Lorentz { m }
    }
}

/// Unnormalized 2x2 complex product used for the Hermitian action.
struct Sl2Raw;

impl Sl2Raw {
    fn of<T: Real>(a: &Sl2<T>) -> [Complex<T>; 4] {
        [a.a, a.b, a.c, a.d]
    }

    fn mul<T: Real>(x: &[Complex<T>; 4], y: &[Complex<T>; 4]) -> [Complex<T>; 4] {
        [
            x[0] * y[0] + x[1] * y[2],
            x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3],
        ]
    }
}
