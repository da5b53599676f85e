use std::cmp::Ordering;

/// One generator or its inverse. Orders by generator index, positive before
/// inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, exponent: i8) -> Self {
        Self { generator, inverse: exponent < 0 }
    }

    pub fn inv(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word in the generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex: length first, then letters.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a word and freely reduces it.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    /// From `(generator, +-1)` pairs.
    pub fn from_pairs(pairs: &[(usize, i8)]) -> Self {
        Self::new(pairs.iter().map(|&(g, e)| Letter::new(g, e)))
    }

    pub fn generator(g: usize) -> Self {
        Self { letters: vec![Letter::new(g, 1)] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &Self) -> Self {
        Self::new(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = Self::empty();
        for _ in 0..n {
            out = out.concat(self);
        }
        out
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(f), Some(l)) if self.len() > 1 => *f != l.inv(),
            _ => true,
        }
    }

    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        let n = self.len();
        (0..n.max(1)).map(move |k| {
            let mut letters = self.letters.clone();
            letters.rotate_left(if n == 0 { 0 } else { k });
            Word { letters }
        })
    }

    /// Least representative among the rotations of the word and of its inverse.
    pub fn canonical(&self) -> Word {
        let inv = self.inverse();
        self.rotations().chain(inv.rotations()).min().unwrap_or_default()
    }

    /// Exponent sum of each generator; length `rank`.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut sums = vec![0; rank];
        for l in &self.letters {
            if l.generator < rank {
                sums[l.generator] += l.exponent();
            }
        }
        sums
    }
}
