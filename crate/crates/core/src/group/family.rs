use num_complex::Complex;

use crate::hyperbolic::Sl2;
use crate::scalar::Real;

use super::presentation::Presentation;
use super::representation::Representation;
use super::word::Word;
use super::GroupError;

/// Built-in one-parameter families of representations.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    /// Free group on `a, b`: `a -> diag(e^t, e^-t)`, `b -> R a R^-1` with `R`
    /// the rotation of H^2 about `i` by `angle` (matrix half-angle `angle / 2`).
    /// Traces grow like `e^t`.
    DiagonalStretch { angle: f64 },
    /// Genus-2 surface group from the regular octagon with interior
    /// angles `pi / 4`, deformed by a Fenchel-Nielsen twist of length `t` along
    /// the separating curve `[a1, b1]`. Traces of `a1 a2` grow like `e^(t/2)`.
    OctagonTwist,
    /// Constant family given by explicit matrices; bounded by construction.
    Constant { presentation: Presentation, images: Vec<[[f64; 2]; 4]> },
}

/// A family together with its admissible parameter range.
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationFamily {
    pub kind: FamilyKind,
}

/// Past this twist, sample distances between long words lose all precision in f64.
pub const OCTAGON_MAX_TWIST: f64 = 20.0;

pub const DEFAULT_STRETCH_ANGLE: f64 = std::f64::consts::FRAC_PI_3;

impl RepresentationFamily {
    pub fn diagonal_stretch(angle: f64) -> Result<Self, GroupError> {
        if !(angle > 0.0 && angle < std::f64::consts::PI) {
            return Err(GroupError::InvalidArgument(format!("rotation angle {angle} outside (0, pi)")));
        }
        Ok(Self { kind: FamilyKind::DiagonalStretch { angle } })
    }

    pub fn octagon_twist() -> Self {
        Self { kind: FamilyKind::OctagonTwist }
    }

    pub fn constant(presentation: Presentation, images: Vec<[[f64; 2]; 4]>) -> Result<Self, GroupError> {
        let fam = Self { kind: FamilyKind::Constant { presentation, images } };
        fam.at::<f64>(0.0)?;
        Ok(fam)
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::DiagonalStretch { .. } => "diagonal_stretch",
            FamilyKind::OctagonTwist => "octagon_twist",
            FamilyKind::Constant { .. } => "constant",
        }
    }

    /// Closed parameter range `(lo, hi)`; the stretch family excludes `t = 0`.
    pub fn range(&self) -> (f64, f64) {
        match self.kind {
            FamilyKind::DiagonalStretch { .. } => (0.0, 300.0),
            FamilyKind::OctagonTwist => (0.0, OCTAGON_MAX_TWIST),
            FamilyKind::Constant { .. } => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn presentation(&self) -> Presentation {
        match &self.kind {
            FamilyKind::DiagonalStretch { .. } => Presentation::free(&["a", "b"]).expect("valid names"),
            FamilyKind::OctagonTwist => {
                let names: Vec<String> = ["a1", "b1", "a2", "b2"].iter().map(|s| s.to_string()).collect();
                let relator = Word::from_pairs(&[(0, 1), (1, 1), (0, -1), (1, -1), (2, 1), (3, 1), (2, -1), (3, -1)]);
                Presentation::new(names, vec![relator]).expect("valid surface presentation")
            }
            FamilyKind::Constant { presentation, .. } => presentation.clone(),
        }
    }

    fn check_range(&self, t: f64) -> Result<(), GroupError> {
        let (lo, hi) = self.range();
        let ok = match self.kind {
            FamilyKind::DiagonalStretch { .. } => t > lo && t <= hi,
            _ => t >= lo && t <= hi,
        };
        if ok {
            Ok(())
        } else {
            Err(GroupError::OutOfRange { t, lo, hi })
        }
    }

    /// Representation at parameter `t`; relators are re-verified.
    pub fn at<T: Real>(&self, t: f64) -> Result<Representation<T>, GroupError> {
        self.check_range(t)?;
        let pres = self.presentation();
        let images = match &self.kind {
            FamilyKind::DiagonalStretch { angle } => {
                let a = Sl2::diagonal(Complex::new(T::lit(t.exp()), T::zero()));
                let r = Sl2::rotation(T::lit(angle / 2.0));
                vec![a, r.conjugate(&a)]
            }
            FamilyKind::OctagonTwist => {
                let (frames, cores) = octagon_twist(T::lit(t));
                return Representation::framed(&pres, frames, vec![0, 0, 1, 1], cores);
            }
            FamilyKind::Constant { images, .. } => images
                .iter()
                .map(|m| {
                    let z = |e: [f64; 2]| Complex::new(T::lit(e[0]), T::lit(e[1]));
                    Sl2::new(z(m[0]), z(m[1]), z(m[2]), z(m[3]))
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        Representation::new(&pres, images)
    }
}

/// Side-pairing of the regular octagon carrying side `from` to side `to`;
/// side midpoints sit at angles `2 pi k / 8` around `i` in the upper half-plane.
fn side_pairing<T: Real>(from: usize, to: usize) -> Sl2<T> {
    // cosh r = cot(pi / 8) for the inscribed radius of the octagon with angles pi/4.
    let r = (1.0 + 2f64.sqrt()).acosh();
    let angle = |k: usize| std::f64::consts::TAU * k as f64 / 8.0;
    let rot = |phi: f64| Sl2::<T>::rotation(T::lit(phi / 2.0));
    let shift = Sl2::<T>::diagonal(Complex::new(T::lit(r.exp()), T::zero()));
    rot(angle(to)) * shift * rot(std::f64::consts::PI - angle(from))
}

/// Frames `[E^-1, E]` and cores `[a1, b1, a2, b2]`, with `E^2` the twist along
/// the axis of `[a1, b1]`. Conjugating by `E` gives `a1, b1, E^2 a2 E^-2, E^2 b2 E^-2`.
fn octagon_twist<T: Real>(t: T) -> (Vec<Sl2<T>>, Vec<Sl2<T>>) {
    let a1 = side_pairing::<T>(2, 0);
    let b1 = side_pairing::<T>(1, 3);
    let a2 = side_pairing::<T>(6, 4);
    let b2 = side_pairing::<T>(5, 7);
    // E commutes with C = [a1, b1]: E = cosh(t/4) I + sinh(t/4) X with
    // X = (C - tr(C)/2 I) / sqrt(tr(C)^2/4 - 1), so X^2 = I.
    let c = a1.commutator(&b1);
    let half_tr = c.trace() / T::lit(2.0);
    let s = (half_tr * half_tr - Complex::new(T::one(), T::zero())).sqrt();
    let x = [(c.a - half_tr) / s, c.b / s, c.c / s, (c.d - half_tr) / s];
    // Half of the twist on each side keeps the minimizing map at the origin.
    let (ch, sh) = ((t / T::lit(4.0)).cosh(), (t / T::lit(4.0)).sinh());
    let id = Complex::new(ch, T::zero());
    let e = Sl2::normalized(id + x[0] * sh, x[1] * sh, x[2] * sh, id + x[3] * sh).expect("twist is invertible");
    (vec![e.inverse(), e], vec![a1, b1, a2, b2])
}
