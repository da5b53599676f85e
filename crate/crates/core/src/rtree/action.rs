use crate::group::{Presentation, Word};

use super::isometry::TreeIsometry;
use super::subtree::Subtree;
use super::tree::{SimplicialTree, TreePoint};
use super::{TreeError, TREE_TOL};

/// Default word length for locating hyperbolic elements.
pub const DEFAULT_AXIS_WORD_LEN: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemisimpleClass {
    LineAction,
    NoFixedEnd,
    FixesEndNotLine,
}

impl SemisimpleClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SemisimpleClass::LineAction => "isometric-to-line-action",
            SemisimpleClass::NoFixedEnd => "no-fixed-end",
            SemisimpleClass::FixesEndNotLine => "fixes-end-not-line",
        }
    }
}

/// Group action on a tree by isometries, one per generator.
#[derive(Clone, Debug)]
pub struct TreeAction {
    tree: SimplicialTree,
    presentation: Presentation,
    generators: Vec<TreeIsometry>,
    inverses: Vec<TreeIsometry>,
}

impl TreeAction {
    pub fn new(tree: SimplicialTree, presentation: Presentation, generators: Vec<TreeIsometry>) -> Result<Self, TreeError> {
        if generators.len() != presentation.rank() {
            return Err(TreeError::InvalidIsometry(format!(
                "{} isometries for {} generators",
                generators.len(),
                presentation.rank()
            )));
        }
        let inverses = generators.iter().map(|g| g.inverse(&tree)).collect::<Result<Vec<_>, _>>()?;
        let action = Self { tree, presentation, generators, inverses };
        let id = TreeIsometry::identity(&action.tree);
        let scale = 1.0 + action.tree.core_diameter();
        for r in action.presentation.relators() {
            let g = action.evaluate(r);
            let defect = g
                .vertex_images()
                .iter()
                .zip(id.vertex_images())
                .map(|(p, q)| action.tree.distance(p, q))
                .fold(0.0, f64::max);
            if g.end_map() != id.end_map() || defect > TREE_TOL * scale {
                return Err(TreeError::RelatorViolated { relator: action.presentation.format_word(r), defect });
            }
        }
        Ok(action)
    }

    pub fn tree(&self) -> &SimplicialTree {
        &self.tree
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn generators(&self) -> &[TreeIsometry] {
        &self.generators
    }

    pub fn inverses(&self) -> &[TreeIsometry] {
        &self.inverses
    }

    pub fn evaluate(&self, w: &Word) -> TreeIsometry {
        let mut g = TreeIsometry::identity(&self.tree);
        for l in w.letters() {
            let h = if l.inverse { &self.inverses[l.generator] } else { &self.generators[l.generator] };
            g = g.compose(&self.tree, h);
        }
        g
    }

    pub fn apply_word(&self, w: &Word, p: &TreePoint) -> TreePoint {
        self.evaluate(w).apply(&self.tree, p)
    }

    pub fn length_function(&self, words: &[Word]) -> Vec<f64> {
        words.iter().map(|w| self.evaluate(w).translation_length(&self.tree)).collect()
    }

    /// Common fixed subtree of all generators; pairwise intersections of
    /// subtrees meeting pairwise meet globally, so sequential intersection suffices.
    pub fn global_fixed_point(&self) -> Option<Subtree> {
        let mut common = Subtree::whole(&self.tree);
        for g in &self.generators {
            let fix = g.fixed_set(&self.tree)?;
            common = common.intersection(&self.tree, &fix);
            if common.is_empty() {
                return None;
            }
        }
        Some(common)
    }

    pub fn is_invariant(&self, sub: &Subtree) -> bool {
        self.generators.iter().chain(&self.inverses).all(|g| sub.is_invariant_under(&self.tree, g))
    }

    /// Union of the axes of hyperbolic words of length at most `max_len`,
    /// joined by bridges and closed under the generators.
    pub fn minimal_subtree(&self, max_len: usize) -> Result<Subtree, TreeError> {
        let mut s = Subtree::empty();
        for w in self.presentation.ball(max_len) {
            let (ell, axis) = self.evaluate(&w).characteristic_set(&self.tree);
            if ell > TREE_TOL {
                s = s.hull_union(&self.tree, &axis);
            }
        }
        if s.is_empty() {
            return Err(TreeError::EllipticAction { max_len });
        }
        for _ in 0..64 {
            let mut next = s.clone();
            for g in self.generators.iter().chain(&self.inverses) {
                next = next.hull_union(&self.tree, &s.image(&self.tree, g));
            }
            if next.approx_eq(&s) {
                return Ok(s);
            }
            s = next;
        }
        Err(TreeError::NotStable)
    }

    /// True when no subtree obtained by shaving one extremity is invariant.
    pub fn passes_pruning_check(&self, sub: &Subtree) -> bool {
        sub.pruned_variants(&self.tree).iter().all(|s| !self.is_invariant(s))
    }

    /// Infinite edges whose end every generator preserves.
    pub fn fixed_ends(&self) -> Vec<usize> {
        self.tree.infinite_edges().filter(|&k| self.generators.iter().all(|g| g.end_image(k) == k)).collect()
    }

    /// Elliptic actions (no hyperbolic word up to the default length) count
    /// as line actions when the tree is a line and are otherwise classified
    /// by their fixed ends.
    pub fn classify_semisimple(&self) -> Result<SemisimpleClass, TreeError> {
        match self.minimal_subtree(DEFAULT_AXIS_WORD_LEN) {
            Ok(m) if m.is_line(&self.tree) => return Ok(SemisimpleClass::LineAction),
            Err(TreeError::EllipticAction { .. }) if Subtree::whole(&self.tree).is_line(&self.tree) => {
                return Ok(SemisimpleClass::LineAction)
            }
            Ok(_) | Err(TreeError::EllipticAction { .. }) => {}
            Err(e) => return Err(e),
        }
        Ok(if self.fixed_ends().is_empty() { SemisimpleClass::NoFixedEnd } else { SemisimpleClass::FixesEndNotLine })
    }
}

/// The point at distance `eps` from `p` on the ray from `p` into `end`.
pub fn shift_toward_end(tree: &SimplicialTree, p: &TreePoint, end: usize, eps: f64) -> Result<TreePoint, TreeError> {
    if !tree.edges().get(end).is_some_and(|e| e.is_infinite()) {
        return Err(TreeError::InvalidPoint(format!("edge {end} is not an end")));
    }
    if !(eps > 0.0) {
        return Err(TreeError::InvalidPoint(format!("shift {eps} must be positive")));
    }
    Ok(tree.toward_end(p, end, eps))
}
