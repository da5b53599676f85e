use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::group::Word;
use crate::harmonic::PullbackMetric;

use super::DegenerationError;

/// Quadruple budget: exhaustive enumeration up to this many, seeded random sampling above.
pub const QUADRUPLE_BUDGET: u64 = 1_000_000;

/// Seed for quadruple sampling when the caller does not pick one.
pub const DEFAULT_DELTA_SEED: u64 = 0x5eed;

/// Pull-back metric divided by the square root of the energy.
#[derive(Clone, Debug, PartialEq)]
pub struct RescaledMetric {
    pub labels: Vec<(usize, Word)>,
    pub distances: Vec<Vec<f64>>,
    pub energy: f64,
}

/// Symmetric, zero diagonal, non-negative, triangle inequality within `1e-9` (relative).
pub fn check_pseudometric(d: &[Vec<f64>]) -> Result<(), DegenerationError> {
    let n = d.len();
    let bad = |msg: String| Err(DegenerationError::InvalidMetric(msg));
    for (i, row) in d.iter().enumerate() {
        if row.len() != n {
            return bad(format!("row {i} has {} entries, expected {n}", row.len()));
        }
        if row[i] != 0.0 {
            return bad(format!("diagonal entry {i} is {}", row[i]));
        }
        for j in 0..n {
            if !(row[j] >= 0.0 && row[j].is_finite()) || row[j] != d[j][i] {
                return bad(format!("entry ({i}, {j}) is {} against {}", row[j], d[j][i]));
            }
        }
    }
    let scale = 1.0 + d.iter().flatten().cloned().fold(0.0, f64::max);
    let violation = (0..n).into_par_iter().find_map_first(|i| {
        for j in 0..n {
            for k in 0..n {
                if d[i][k] > d[i][j] + d[j][k] + 1e-9 * scale {
                    return Some((i, j, k));
                }
            }
        }
        None
    });
    match violation {
        Some((i, j, k)) => bad(format!("triangle inequality fails at ({i}, {j}, {k})")),
        None => Ok(()),
    }
}

impl RescaledMetric {
    pub fn new(labels: Vec<(usize, Word)>, distances: Vec<Vec<f64>>, energy: f64) -> Result<Self, DegenerationError> {
        if labels.len() != distances.len() {
            return Err(DegenerationError::InvalidMetric(format!(
                "{} labels for a {}-point matrix",
                labels.len(),
                distances.len()
            )));
        }
        check_pseudometric(&distances)?;
        Ok(Self { labels, distances, energy })
    }

    /// A bare matrix with placeholder labels and unit energy.
    pub fn from_matrix(distances: Vec<Vec<f64>>) -> Result<Self, DegenerationError> {
        let labels = (0..distances.len()).map(|i| (i, Word::empty())).collect();
        Self::new(labels, distances, 1.0)
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    pub fn diameter(&self) -> f64 {
        self.distances.iter().flatten().cloned().fold(0.0, f64::max)
    }
}

/// Divides every distance by `sqrt(energy)`.
pub fn rescale(m: &PullbackMetric<f64>, energy: f64) -> Result<RescaledMetric, DegenerationError> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(DegenerationError::InvalidEnergy(energy));
    }
    let s = energy.sqrt();
    let distances = m.distances.iter().map(|row| row.iter().map(|d| d / s).collect()).collect();
    RescaledMetric::new(m.labels.clone(), distances, energy)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaReport {
    pub delta: f64,
    pub quadruple: [usize; 4],
    pub exhaustive: bool,
}

fn four_point(d: &[Vec<f64>], q: [usize; 4]) -> f64 {
    let [w, x, y, z] = q;
    let mut s = [d[w][x] + d[y][z], d[w][y] + d[x][z], d[w][z] + d[x][y]];
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    0.5 * (s[0] - s[1])
}

fn better(a: (f64, [usize; 4]), b: (f64, [usize; 4])) -> (f64, [usize; 4]) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn choose4(n: usize) -> u64 {
    if n < 4 {
        return 0;
    }
    let n = n as u64;
    n * (n - 1) / 2 * (n - 2) / 3 * (n - 3) / 4
}

/// Four-point hyperbolicity constant: the largest half-gap between the two
/// biggest pair sums over all quadruples, or over `QUADRUPLE_BUDGET` seeded
/// random quadruples when there are more.
pub fn gromov_delta(d: &[Vec<f64>], seed: u64) -> DeltaReport {
    let n = d.len();
    if n < 4 {
        return DeltaReport { delta: 0.0, quadruple: [0; 4], exhaustive: true };
    }
    let start = (0.0, [0, 1, 2, 3]);
    if choose4(n) <= QUADRUPLE_BUDGET {
        let (delta, quadruple) = (0..n)
            .into_par_iter()
            .map(|w| {
                let mut best = start;
                for x in w + 1..n {
                    for y in x + 1..n {
                        for z in y + 1..n {
                            let q = [w, x, y, z];
                            best = better(best, (four_point(d, q), q));
                        }
                    }
                }
                best
            })
            .reduce(|| start, better);
        return DeltaReport { delta, quadruple, exhaustive: true };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = start;
    for _ in 0..QUADRUPLE_BUDGET {
        let mut q = [0usize; 4];
        loop {
            for slot in q.iter_mut() {
                *slot = rng.gen_range(0..n);
            }
            q.sort_unstable();
            if q.windows(2).all(|p| p[0] < p[1]) {
                break;
            }
        }
        best = better(best, (four_point(d, q), q));
    }
    DeltaReport { delta: best.0, quadruple: best.1, exhaustive: false }
}
