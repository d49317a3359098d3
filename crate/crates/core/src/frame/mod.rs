//! Finite relational frames `(X, ◁)`, the closure operator they induce, and
//! the relation classes that characterize the logics.
//!
//! Throughout, `x ◁ y` is read "x is open to y" and stored as the ordered
//! pair `(x, y)`. The *predecessors* of `y` are the states open to `y`; the
//! *successors* of `x` are the states `x` is open to.

pub(crate) mod enumerate;
mod stateset;

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

pub use enumerate::{enumerate_frames, EnumerationOptions, MAX_ENUMERATION_SIZE};
pub use stateset::StateSet;

/// Default cap on the number of states for subset-scan fixpoint enumeration.
pub const DEFAULT_FIXPOINT_BOUND: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("a frame needs at least one state")]
    Empty,
    #[error("duplicate state label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state index {index} out of range for a frame of {size} states")]
    StateOutOfRange { index: usize, size: usize },
    #[error("set over {got} states used with a frame of {expected} states")]
    UniverseMismatch { expected: usize, got: usize },
    #[error("{what} bound exceeded: {size} > {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },
}

/// A finite nonempty set of labelled states with a binary relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    labels: Vec<String>,
    preds: Vec<StateSet>,
    succs: Vec<StateSet>,
}

impl Frame {
    /// Builds a frame from labels and `(x, y)` index pairs meaning `x ◁ y`.
    pub fn new<I>(labels: Vec<String>, rel: I) -> Result<Frame, FrameError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        if n == 0 {
            return Err(FrameError::Empty);
        }
        let mut seen = HashMap::with_capacity(n);
        for l in &labels {
            if seen.insert(l.as_str(), ()).is_some() {
                return Err(FrameError::DuplicateLabel(l.clone()));
            }
        }
        let mut preds = vec![StateSet::empty(n); n];
        let mut succs = vec![StateSet::empty(n); n];
        for (x, y) in rel {
            for index in [x, y] {
                if index >= n {
                    return Err(FrameError::StateOutOfRange { index, size: n });
                }
            }
            preds[y].insert(x);
            succs[x].insert(y);
        }
        Ok(Frame {
            labels,
            preds,
            succs,
        })
    }

    /// Builds a frame from labelled pairs `(x, y)` meaning `x ◁ y`.
    pub fn from_labelled_pairs<'a, I>(labels: Vec<String>, rel: I) -> Result<Frame, FrameError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let lookup = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| FrameError::UnknownState(l.to_string()))
        };
        let pairs = rel
            .into_iter()
            .map(|(x, y)| Ok((lookup(x)?, lookup(y)?)))
            .collect::<Result<Vec<_>, FrameError>>()?;
        Frame::new(labels, pairs)
    }

    /// Frame on states labelled `0..n` with relation bits `x * n + y`.
    pub fn from_mask(n: usize, mask: u64) -> Frame {
        assert!(n > 0 && n * n <= 64);
        let labels = (0..n).map(|i| i.to_string()).collect();
        let pairs = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| mask & (1 << (x * n + y)) != 0);
        Frame::new(labels, pairs).expect("valid mask frame")
    }

    /// One reflexive state labelled `x`.
    pub fn reflexive_point() -> Frame {
        Frame::new(vec!["x".into()], [(0, 0)]).expect("valid frame")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn state(&self, label: &str) -> Result<usize, FrameError> {
        self.index_of(label)
            .ok_or_else(|| FrameError::UnknownState(label.to_string()))
    }

    fn check_state(&self, x: usize) -> Result<(), FrameError> {
        if x < self.len() {
            Ok(())
        } else {
            Err(FrameError::StateOutOfRange {
                index: x,
                size: self.len(),
            })
        }
    }

    pub(crate) fn check_set(&self, a: &StateSet) -> Result<(), FrameError> {
        if a.universe() == self.len() {
            Ok(())
        } else {
            Err(FrameError::UniverseMismatch {
                expected: self.len(),
                got: a.universe(),
            })
        }
    }

    /// `x ◁ y`.
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.preds[y].contains(x)
    }

    /// `{x : x ◁ y}`.
    pub fn predecessors(&self, y: usize) -> &StateSet {
        &self.preds[y]
    }

    /// `{y : x ◁ y}`.
    pub fn successors(&self, x: usize) -> &StateSet {
        &self.succs[x]
    }

    /// All pairs `(x, y)` with `x ◁ y`, ordered by `x` then `y`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |x| self.succs[x].iter().map(move |y| (x, y)))
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::empty(self.len())
    }

    pub fn full_set(&self) -> StateSet {
        StateSet::full(self.len())
    }

    /// `{x : x does not reject a}`: the states with some successor in `a`.
    pub(crate) fn non_rejecters(&self, a: &StateSet) -> StateSet {
        StateSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| self.succs[x].intersects(a)),
        )
    }

    /// `c(a) = {x : every x' ◁ x has a successor in a}`.
    pub fn closure(&self, a: &StateSet) -> Result<StateSet, FrameError> {
        self.check_set(a)?;
        Ok(self.closure_of(a))
    }

    pub(crate) fn closure_of(&self, a: &StateSet) -> StateSet {
        let open = self.non_rejecters(a);
        StateSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| self.preds[x].is_subset(&open)),
        )
    }

    /// `¬a = {x : no x' ◁ x lies in a}`.
    pub fn negation(&self, a: &StateSet) -> Result<StateSet, FrameError> {
        self.check_set(a)?;
        Ok(self.negation_of(a))
    }

    pub(crate) fn negation_of(&self, a: &StateSet) -> StateSet {
        StateSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| !self.preds[x].intersects(a)),
        )
    }

    pub fn is_fixpoint(&self, a: &StateSet) -> Result<bool, FrameError> {
        Ok(self.closure(a)? == *a)
    }

    /// Every fixpoint of the closure operator, by subset scan, in increasing
    /// bitmask order.
    pub fn fixpoints(&self) -> Result<Vec<StateSet>, FrameError> {
        self.fixpoints_bounded(DEFAULT_FIXPOINT_BOUND)
    }

    pub fn fixpoints_bounded(&self, bound: usize) -> Result<Vec<StateSet>, FrameError> {
        if self.len() > bound {
            return Err(FrameError::BoundExceeded {
                what: "fixpoint scan",
                size: self.len(),
                bound,
            });
        }
        Ok(StateSet::all_subsets(self.len())
            .filter(|a| self.closure_of(a) == *a)
            .collect())
    }

    /// `x` pre-refines `y` when every state open to `x` is open to `y`.
    pub fn pre_refines(&self, x: usize, y: usize) -> Result<bool, FrameError> {
        self.check_state(x)?;
        self.check_state(y)?;
        Ok(self.refines(x, y))
    }

    pub(crate) fn refines(&self, x: usize, y: usize) -> bool {
        self.preds[x].is_subset(&self.preds[y])
    }

    /// Evaluates every relation-class predicate literally.
    pub fn class_check(&self) -> FrameClass {
        let n = self.len();
        let states = 0..n;
        let reflexive = states.clone().all(|x| self.related(x, x));
        let symmetric = self.pairs().all(|(x, y)| self.related(y, x));
        // if y ◁ x, some z ◁ y pre-refines x
        let pseudosymmetric = self
            .pairs()
            .all(|(y, x)| self.preds[y].iter().any(|z| self.refines(z, x)));
        let transitive = self
            .pairs()
            .all(|(x, y)| self.succs[y].is_subset(&self.succs[x]));
        // whenever x ◁ y, some z refines both
        let compossible = self.pairs().all(|(x, y)| {
            let common = self.preds[x].intersection(&self.preds[y]);
            states.clone().any(|z| self.preds[z].is_subset(&common))
        });
        let identity = self.pairs().all(|(x, y)| x == y) && reflexive;
        FrameClass {
            reflexive,
            symmetric,
            pseudosymmetric,
            transitive,
            compossible,
            identity,
        }
    }
}

/// Relation-class flags. Used both for the flags a frame has and for the
/// flags a frame is required to have.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct FrameClass {
    pub reflexive: bool,
    pub symmetric: bool,
    pub pseudosymmetric: bool,
    pub transitive: bool,
    pub compossible: bool,
    pub identity: bool,
}

impl FrameClass {
    pub const ANY: FrameClass = FrameClass {
        reflexive: false,
        symmetric: false,
        pseudosymmetric: false,
        transitive: false,
        compossible: false,
        identity: false,
    };

    pub const fn reflexive() -> FrameClass {
        FrameClass {
            reflexive: true,
            ..FrameClass::ANY
        }
    }

    pub const fn with_symmetric(self) -> FrameClass {
        FrameClass {
            symmetric: true,
            ..self
        }
    }

    pub const fn with_pseudosymmetric(self) -> FrameClass {
        FrameClass {
            pseudosymmetric: true,
            ..self
        }
    }

    pub const fn with_transitive(self) -> FrameClass {
        FrameClass {
            transitive: true,
            ..self
        }
    }

    pub const fn with_compossible(self) -> FrameClass {
        FrameClass {
            compossible: true,
            ..self
        }
    }

    pub const fn with_identity(self) -> FrameClass {
        FrameClass {
            identity: true,
            ..self
        }
    }

    /// Whether every flag set in `required` is also set in `self`.
    pub fn satisfies(&self, required: &FrameClass) -> bool {
        (!required.reflexive || self.reflexive)
            && (!required.symmetric || self.symmetric)
            && (!required.pseudosymmetric || self.pseudosymmetric)
            && (!required.transitive || self.transitive)
            && (!required.compossible || self.compossible)
            && (!required.identity || self.identity)
    }

    /// Names of the set flags, in declaration order.
    pub fn names(&self) -> Vec<&'static str> {
        [
            (self.reflexive, "reflexive"),
            (self.symmetric, "symmetric"),
            (self.pseudosymmetric, "pseudosymmetric"),
            (self.transitive, "transitive"),
            (self.compossible, "compossible"),
            (self.identity, "identity"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_chain() -> Frame {
        // b ◁ a, both reflexive
        Frame::from_labelled_pairs(
            vec!["a".into(), "b".into()],
            [("a", "a"), ("b", "b"), ("b", "a")],
        )
        .unwrap()
    }

    #[test]
    fn closure_on_reflexive_point() {
        let f = Frame::reflexive_point();
        assert_eq!(f.closure(&f.full_set()).unwrap(), f.full_set());
        assert_eq!(f.closure(&f.empty_set()).unwrap(), f.empty_set());
        assert_eq!(f.fixpoints().unwrap(), vec![f.empty_set(), f.full_set()]);
    }

    #[test]
    fn closure_rejects_foreign_sets() {
        let f = Frame::reflexive_point();
        assert_eq!(
            f.closure(&StateSet::empty(3)),
            Err(FrameError::UniverseMismatch {
                expected: 1,
                got: 3
            })
        );
    }

    #[test]
    fn identity_fixpoints_are_all_subsets() {
        let f = Frame::new(vec!["a".into(), "b".into()], [(0, 0), (1, 1)]).unwrap();
        assert_eq!(f.fixpoints().unwrap().len(), 4);
    }

    #[test]
    fn chain_fixpoints() {
        let f = two_chain();
        let got: Vec<Vec<usize>> = f
            .fixpoints()
            .unwrap()
            .iter()
            .map(|s| s.iter().collect())
            .collect();
        // ∅, {b}, {a, b}
        assert_eq!(got, vec![vec![], vec![1], vec![0, 1]]);
    }

    #[test]
    fn full_set_is_always_a_fixpoint() {
        for mask in 0..(1u64 << 9) {
            let f = Frame::from_mask(3, mask);
            assert!(f.fixpoints().unwrap().contains(&f.full_set()));
        }
    }

    #[test]
    fn fixpoint_bound() {
        let labels: Vec<String> = (0..13).map(|i| i.to_string()).collect();
        let f = Frame::new(labels, (0..13).map(|i| (i, i))).unwrap();
        assert!(matches!(
            f.fixpoints(),
            Err(FrameError::BoundExceeded { size: 13, .. })
        ));
    }

    #[test]
    fn pre_refinement() {
        let f = two_chain();
        assert!(f.pre_refines(0, 0).unwrap());
        // preds(a) = {a, b} is not inside preds(b) = {b}
        assert!(!f.pre_refines(0, 1).unwrap());
        assert!(f.pre_refines(1, 0).unwrap());
        assert!(f.pre_refines(5, 0).is_err());

        let g = Frame::from_labelled_pairs(vec!["a".into(), "b".into()], [("b", "a")]).unwrap();
        assert!(!g.pre_refines(0, 1).unwrap());
    }

    #[test]
    fn class_flags() {
        let point = Frame::reflexive_point().class_check();
        assert_eq!(point.names().len(), 6);

        let chain = two_chain().class_check();
        assert!(chain.reflexive && chain.pseudosymmetric && chain.transitive);
        assert!(!chain.symmetric && !chain.identity);

        let edge = Frame::from_mask(2, 0b1111).class_check();
        assert!(edge.symmetric && edge.transitive && edge.compossible && !edge.identity);

        let irreflexive = Frame::from_mask(2, 0b0110).class_check();
        assert!(!irreflexive.reflexive && irreflexive.symmetric);
    }

    #[test]
    fn unknown_labels() {
        assert_eq!(
            Frame::from_labelled_pairs(vec!["a".into()], [("a", "z")]),
            Err(FrameError::UnknownState("z".into()))
        );
        assert_eq!(Frame::new(vec![], []), Err(FrameError::Empty));
        assert_eq!(
            Frame::new(vec!["a".into(), "a".into()], []),
            Err(FrameError::DuplicateLabel("a".into()))
        );
    }
}
