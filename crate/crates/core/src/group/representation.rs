use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hyperbolic::Sl2;
use crate::scalar::Real;

use super::presentation::Presentation;
use super::word::{Letter, Word};
use super::GroupError;

/// Relators must evaluate to plus or minus the identity within this tolerance.
pub const RELATOR_TOL: f64 = 1e-8;

/// Generator images in SL(2, C).
///
/// Images may carry a factorization `frame * core * frame^-1`. Words are then
/// evaluated run by run, so letters sharing a frame never multiply out the
/// large conjugating matrices against each other.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation<T> {
    images: Vec<Sl2<T>>,
    framing: Option<Framing<T>>,
}

#[derive(Clone, Debug, PartialEq)]
struct Framing<T> {
    frames: Vec<Sl2<T>>,
    frame_of: Vec<usize>,
    cores: Vec<Sl2<T>>,
}

impl<T: Real> Representation<T> {
    /// Checks that every relator of `pres` maps to `+-I`. The tolerance is
    /// relative to the size of the partial products.
    pub fn new(pres: &Presentation, images: Vec<Sl2<T>>) -> Result<Self, GroupError> {
        if images.len() != pres.rank() {
            return Err(GroupError::InvalidArgument(format!(
                "{} images for {} generators",
                images.len(),
                pres.rank()
            )));
        }
        Self { images, framing: None }.checked(pres)
    }

    /// Generator `i` maps to `frames[frame_of[i]] * cores[i] * frames[frame_of[i]]^-1`.
    pub fn framed(
        pres: &Presentation,
        frames: Vec<Sl2<T>>,
        frame_of: Vec<usize>,
        cores: Vec<Sl2<T>>,
    ) -> Result<Self, GroupError> {
        if frame_of.len() != cores.len() || frame_of.iter().any(|&k| k >= frames.len()) {
            return Err(GroupError::InvalidArgument("frame assignment does not match the generators".into()));
        }
        let images = cores.iter().zip(&frame_of).map(|(c, &k)| frames[k].conjugate(c)).collect();
        if cores.len() != pres.rank() {
            return Err(GroupError::InvalidArgument(format!("{} images for {} generators", cores.len(), pres.rank())));
        }
        Self { images, framing: Some(Framing { frames, frame_of, cores }) }.checked(pres)
    }

    fn checked(self, pres: &Presentation) -> Result<Self, GroupError> {
        let rep = self;
        for r in pres.relators() {
            let m = rep.evaluate(r)?;
            let scale = r.letters().iter().fold(T::one(), |s, l| s.max(rep.images[l.generator].max_abs()));
            let tol = T::lit(RELATOR_TOL) * scale * scale;
            if !m.approx_eq_projective(&Sl2::identity(), tol) {
                return Err(GroupError::RelatorViolated {
                    relator: pres.format_word(r),
                    defect: (m.trace().norm() - T::lit(2.0)).abs().to_f64_lossy(),
                });
            }
        }
        Ok(rep)
    }

    /// No relator check; for free groups or when the caller has verified it.
    pub fn free(images: Vec<Sl2<T>>) -> Self {
        Self { images, framing: None }
    }

    pub fn trivial(rank: usize) -> Self {
        Self::free(vec![Sl2::identity(); rank])
    }

    pub fn images(&self) -> &[Sl2<T>] {
        &self.images
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn letter(&self, l: Letter) -> Result<Sl2<T>, GroupError> {
        let m = self
            .images
            .get(l.generator)
            .ok_or_else(|| GroupError::MalformedWord(format!("generator index {} out of range", l.generator)))?;
        Ok(if l.inverse { m.inverse() } else { *m })
    }

    /// Ordered product of the letter images.
    pub fn evaluate(&self, w: &Word) -> Result<Sl2<T>, GroupError> {
        let Some(f) = &self.framing else {
            return w.letters().iter().try_fold(Sl2::identity(), |acc, l| Ok(acc * self.letter(*l)?));
        };
        if let Some(l) = w.letters().iter().find(|l| l.generator >= self.images.len()) {
            return Err(GroupError::MalformedWord(format!("generator index {} out of range", l.generator)));
        }
        // F1 run1 (F1^-1 F2) run2 ... Fn^-1: only frame transitions sit between runs.
        let letters = w.letters();
        let mut acc = Sl2::identity();
        let mut current: Option<usize> = None;
        let mut i = 0;
        while i < letters.len() {
            let k = f.frame_of[letters[i].generator];
            acc = match current {
                None => f.frames[k],
                Some(prev) => acc * (f.frames[prev].inverse() * f.frames[k]),
            };
            while i < letters.len() && f.frame_of[letters[i].generator] == k {
                let c = f.cores[letters[i].generator];
                acc = acc * if letters[i].inverse { c.inverse() } else { c };
                i += 1;
            }
            current = Some(k);
        }
        if let Some(k) = current {
            acc = acc * f.frames[k].inverse();
        }
        Ok(acc)
    }

    /// `B rho B^-1`.
    pub fn conjugated(&self, b: &Sl2<T>) -> Self {
        Self {
            images: self.images.iter().map(|m| b.conjugate(m)).collect(),
            framing: self.framing.as_ref().map(|f| Framing {
                frames: f.frames.iter().map(|&m| *b * m).collect(),
                frame_of: f.frame_of.clone(),
                cores: f.cores.clone(),
            }),
        }
    }

    /// Translation length of each word's image.
    pub fn length_function(&self, words: &[Word]) -> Result<Vec<T>, GroupError> {
        words.iter().map(|w| Ok(self.evaluate(w)?.translation_length())).collect()
    }

    /// Whether the images share no common eigenvector. A pair in SL(2, C) has
    /// a common eigenvector iff the trace of its commutator is 2; all generator
    /// pairs and one pseudo-random pair of words are tested.
    pub fn is_irreducible(&self) -> bool {
        let mut pairs: Vec<(Sl2<T>, Sl2<T>)> = Vec::new();
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                pairs.push((self.images[i], self.images[j]));
            }
        }
        if self.rank() >= 2 {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            let random_word = |rng: &mut ChaCha8Rng| {
                Word::new((0..4).map(|_| Letter::new(rng.gen_range(0..self.rank()), if rng.gen() { 1 } else { -1 })))
            };
            let (u, v) = (random_word(&mut rng), random_word(&mut rng));
            if let (Ok(x), Ok(y)) = (self.evaluate(&u), self.evaluate(&v)) {
                pairs.push((x, y));
            }
        }
        pairs.iter().any(|(x, y)| {
            let tr = x.commutator(y).trace();
            let scale = T::one().max(x.max_abs() * y.max_abs()).powi(2);
            (tr - num_complex::Complex::new(T::lit(2.0), T::zero())).norm() > T::lit(1e-9) * scale
        })
    }
}
