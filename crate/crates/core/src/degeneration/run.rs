use crate::group::{RepresentationFamily, Word};
use crate::harmonic::{
    domain_points, lipschitz_ratio, minimize, pullback_metric, sample_displacement, EquivariantMap, SolveStatus, SolverOptions, TwistedGraph,
};

use super::action::{induced_action, SampledAction};
use super::metric::{gromov_delta, rescale};
use super::reconstruct::tree_from_metric;
use super::DegenerationError;

pub const DEFAULT_DELTA_THRESHOLD: f64 = 0.05;
pub const DEFAULT_SAMPLE_LEN: usize = 3;
pub const DEFAULT_EDGE_SUBDIVISIONS: usize = 8;

/// A run stays in the bounded case while the last energy is within this
/// factor of the first.
pub const BOUNDED_ENERGY_FACTOR: f64 = 4.0;

#[derive(Clone, Debug)]
pub struct DegenerationSetup {
    pub family: RepresentationFamily,
    pub graph: TwistedGraph,
    /// Words up to this length are tracked (canonical conjugacy representatives).
    pub word_len: usize,
    /// Orbit samples use every reduced word up to this length.
    pub sample_len: usize,
    /// Edge pieces per graph edge when sampling displacements.
    pub edge_subdivisions: usize,
    pub schedule: Vec<f64>,
    pub solver: SolverOptions,
    pub delta_threshold: f64,
    pub seed: u64,
    pub initial: Option<EquivariantMap<f64>>,
}

impl DegenerationSetup {
    pub fn new(family: RepresentationFamily, graph: TwistedGraph, schedule: Vec<f64>) -> Self {
        Self {
            family,
            graph,
            word_len: 2,
            sample_len: DEFAULT_SAMPLE_LEN,
            edge_subdivisions: DEFAULT_EDGE_SUBDIVISIONS,
            schedule,
            solver: SolverOptions::new(1e-8, 5000),
            delta_threshold: DEFAULT_DELTA_THRESHOLD,
            seed: 0,
            initial: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StepRecord {
    pub t: f64,
    pub energy: f64,
    /// Four-point constant of the rescaled metric.
    pub delta: f64,
    /// Diameter of the rescaled metric.
    pub diameter: f64,
    pub quadruple: [usize; 4],
    /// Tree lengths when a tree was extracted, otherwise rescaled sample-min displacements.
    pub lengths: Vec<f64>,
    pub tree_extracted: bool,
    /// Translation lengths of the representation.
    pub rho_lengths: Vec<f64>,
    /// Minimum displacement over translates of vertex and edge points, before rescaling.
    pub sample_lengths: Vec<f64>,
    pub lipschitz: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    pub gradient_norm: f64,
}

impl StepRecord {
    pub fn delta_ratio(&self) -> f64 {
        if self.diameter > 0.0 {
            self.delta / self.diameter
        } else {
            0.0
        }
    }

    /// Four-point constant before rescaling.
    pub fn raw_delta(&self) -> f64 {
        self.delta * self.energy.sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegenerationCase {
    /// Energies stay bounded: traces stay bounded and nothing degenerates.
    Bounded,
    /// Energies blow up and the rescaled metrics approach a tree.
    Divergent,
    /// A single step says nothing about growth.
    Undetermined,
}

impl DegenerationCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            DegenerationCase::Bounded => "case (1): bounded",
            DegenerationCase::Divergent => "case (2): divergent",
            DegenerationCase::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DegenerationRun {
    pub schedule: Vec<f64>,
    pub words: Vec<Word>,
    pub steps: Vec<StepRecord>,
    pub final_action: Option<SampledAction>,
    pub case: DegenerationCase,
    /// Whether the final length vector comes from a homomorphism to the reals.
    pub abelian: Option<bool>,
}

/// Max-norm distance after scaling each vector to unit max entry.
pub fn projective_compare(l1: &[f64], l2: &[f64]) -> Result<f64, DegenerationError> {
    if l1.len() != l2.len() {
        return Err(DegenerationError::InvalidArgument(format!(
            "length vectors of sizes {} and {}",
            l1.len(),
            l2.len()
        )));
    }
    let unit = |l: &[f64]| -> Result<Vec<f64>, DegenerationError> {
        let m = l.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if !(m > 0.0 && m.is_finite()) {
            return Err(DegenerationError::DegenerateLengths);
        }
        Ok(l.iter().map(|x| x / m).collect())
    };
    let (a, b) = (unit(l1)?, unit(l2)?);
    Ok(a.iter().zip(&b).fold(0.0, |m, (x, y)| m.max((x - y).abs())))
}

/// True when some `h: generators -> R` gives `l(w) = |sum of exponents * h|`
/// for every word within `tol * max(l)`. Generator values are fixed up to sign
/// by the single-letter words, so all sign patterns are tried.
pub fn is_abelian(words: &[Word], lengths: &[f64], rank: usize, tol: f64) -> bool {
    let scale = lengths.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return true;
    }
    let mut base = vec![None; rank];
    for (w, &l) in words.iter().zip(lengths) {
        if w.len() == 1 {
            base[w.letters()[0].generator] = Some(l);
        }
    }
    let Some(base) = base.into_iter().collect::<Option<Vec<f64>>>() else {
        return false;
    };
    (0u64..1 << rank).any(|signs| {
        let h: Vec<f64> = base.iter().enumerate().map(|(g, &v)| if signs >> g & 1 == 1 { -v } else { v }).collect();
        words.iter().zip(lengths).all(|(w, &l)| {
            let s: f64 = w.exponent_sums(rank).iter().zip(&h).map(|(&e, &x)| e as f64 * x).sum();
            (s.abs() - l).abs() <= tol * scale
        })
    })
}

pub fn run_degeneration(setup: &DegenerationSetup) -> Result<DegenerationRun, DegenerationError> {
    run_degeneration_with(setup, &mut |_| {})
}

/// Runs the schedule, calling `on_step` after every step.
pub fn run_degeneration_with(
    setup: &DegenerationSetup,
    on_step: &mut dyn FnMut(&StepRecord),
) -> Result<DegenerationRun, DegenerationError> {
    if setup.schedule.is_empty() {
        return Err(DegenerationError::InvalidArgument("empty schedule".into()));
    }
    if setup.schedule.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(DegenerationError::InvalidArgument("schedule is not strictly increasing".into()));
    }
    if setup.word_len == 0 || setup.word_len > setup.sample_len {
        return Err(DegenerationError::InvalidArgument(format!(
            "word length {} must lie in 1..={}",
            setup.word_len, setup.sample_len
        )));
    }
    let pres = setup.family.presentation();
    let words = pres.word_list(setup.word_len)?;
    let sample_words = pres.ball(setup.sample_len);
    let start = setup.initial.clone().unwrap_or_else(|| EquivariantMap::at_origin(setup.graph.vertex_count()));
    let mut u = start.clone();
    let mut steps = Vec::with_capacity(setup.schedule.len());
    let mut final_action = None;

    for (k, &t) in setup.schedule.iter().enumerate() {
        let last = k + 1 == setup.schedule.len();
        let rep = setup.family.at::<f64>(t)?;
        let (next, report) = minimize(&setup.graph, &rep, &u, &setup.solver)?;
        let pull = pullback_metric(&rep, &next, &sample_words)?;
        let rho_lengths = rep.length_function(&words)?;
        let domain = domain_points(&setup.graph, &rep, &next, setup.edge_subdivisions)?;
        let sample_lengths: Vec<f64> = words
            .iter()
            .map(|w| sample_displacement(&rep, &domain, &sample_words, w))
            .collect::<Result<_, _>>()?;
        let lipschitz = lipschitz_ratio(&setup.graph, &rep, &next)?;
        let energy = report.energy;

        let mut record = StepRecord {
            t,
            energy,
            delta: 0.0,
            diameter: 0.0,
            quadruple: [0; 4],
            lengths: vec![0.0; words.len()],
            tree_extracted: false,
            rho_lengths,
            sample_lengths,
            lipschitz,
            status: report.status,
            iterations: report.iterations,
            gradient_norm: report.gradient_norm,
        };
        if energy > 0.0 {
            let m = rescale(&pull, energy)?;
            let dr = gromov_delta(&m.distances, setup.seed);
            record.delta = dr.delta;
            record.diameter = m.diameter();
            record.quadruple = dr.quadruple;
            let scale = energy.sqrt();
            record.lengths = record.sample_lengths.iter().map(|l| l / scale).collect();
            if record.delta_ratio() <= setup.delta_threshold {
                let tree = tree_from_metric(&m, setup.delta_threshold)?;
                let tol = 6.0 * setup.delta_threshold * record.diameter + 1e-9;
                let action = induced_action(tree, m.labels.clone(), pres.rank(), tol)?;
                if let Some(ls) = action.length_function(&words).into_iter().collect::<Option<Vec<f64>>>() {
                    record.lengths = ls;
                    record.tree_extracted = true;
                }
                if last {
                    final_action = Some(action);
                }
            }
        }
        on_step(&record);
        steps.push(record);
        u = if report.status == SolveStatus::Escaped { start.clone() } else { next };
    }

    let first = steps[0].energy;
    let last = &steps[steps.len() - 1];
    let case = if steps.len() < 2 {
        DegenerationCase::Undetermined
    } else if last.energy <= BOUNDED_ENERGY_FACTOR * first.max(f64::MIN_POSITIVE) {
        DegenerationCase::Bounded
    } else {
        DegenerationCase::Divergent
    };
    // No limit tree is expected in the bounded case.
    if case != DegenerationCase::Bounded && last.energy > 0.0 && !last.tree_extracted {
        return Err(DegenerationError::NotTreeLike {
            quadruple: last.quadruple,
            delta: last.delta,
            diameter: last.diameter,
        });
    }
    let abelian = Some(last)
        .filter(|s| s.tree_extracted)
        .map(|s| is_abelian(&words, &s.lengths, pres.rank(), 0.05));
    Ok(DegenerationRun { schedule: setup.schedule.clone(), words, steps, final_action, case, abelian })
}
