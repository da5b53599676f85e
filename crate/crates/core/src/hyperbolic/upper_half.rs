//! Upper half-space coordinates, kept as an independent check on the
//! hyperboloid formulas.

use num_complex::Complex;

use crate::scalar::Real;

use super::point::Point;

/// `(z, h)` with `z` complex and height `h > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfPoint<T> {
    pub z: Complex<T>,
    pub h: T,
}

impl<T: Real> UpperHalfPoint<T> {
    /// Through the Hermitian matrix `(1/h) [[|z|^2 + h^2, z], [conj z, 1]]`.
    pub fn from_hyperboloid(p: &Point<T>) -> Self {
        let x = p.coords();
        let h = (x[0] - x[3]).recip();
        Self { z: Complex::new(x[1] * h, x[2] * h), h }
    }

    pub fn to_hyperboloid(&self) -> Point<T> {
        let two = T::lit(2.0);
        let r2 = self.z.norm_sqr() + self.h * self.h;
        let x3 = (r2 - T::one()) / (two * self.h);
        Point::from_spatial(self.z.re / self.h, self.z.im / self.h, x3)
    }

    /// `cosh d = 1 + (|z1 - z2|^2 + (h1 - h2)^2) / (2 h1 h2)`.
    pub fn distance(&self, other: &Self) -> T {
        let num = (self.z - other.z).norm_sqr() + (self.h - other.h) * (self.h - other.h);
        let arg = num / (T::lit(2.0) * self.h * other.h);
        // acosh(1 + a) = 2 asinh(sqrt(a / 2))
        T::lit(2.0) * (arg / T::lit(2.0)).sqrt().asinh()
    }
}
