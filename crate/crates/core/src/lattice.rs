//! Finite bounded lattices with a negation, their prime filters, and the
//! representation of a distributive lattice with a weak pseudocomplementation
//! as the sets `{F : a ∈ F}` over a reflexive symmetric frame of prime
//! filters.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{Frame, StateSet};
use crate::io::{read_json, FileError};

/// Prime filters are found by scanning every subset; lattices above this
/// size are refused.
pub const PRIME_FILTER_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("order is not antisymmetric: {0} <= {1} and {1} <= {0}")]
    NotAntisymmetric(String, String),
    #[error("{0} and {1} have no greatest lower bound")]
    NoMeet(String, String),
    #[error("{0} and {1} have no least upper bound")]
    NoJoin(String, String),
    #[error("negation is not defined on `{0}`")]
    NegationMissing(String),
    #[error("lattice has {size} elements, over the cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("lattice is not distributive: {0} & ({1} | {2}) differs from ({0} & {1}) | ({0} & {2})")]
    NotDistributive(String, String, String),
    #[error("negation is not a weak pseudocomplementation: {0}")]
    NotWeakPseudocomplement(String),
}

/// A finite bounded lattice given by its order, with meets and joins
/// tabulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeOrder {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl LatticeOrder {
    /// Builds the order generated by `pairs` (`(a, b)` meaning `a ≤ b`),
    /// closing it reflexively and transitively.
    pub fn new<I>(labels: Vec<String>, pairs: I) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut seen = HashMap::new();
        for l in &labels {
            if seen.insert(l.as_str(), ()).is_some() {
                return Err(LatticeError::DuplicateElement(l.clone()));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            leq[a][b] = true;
        }
        for k in 0..n {
            let through = leq[k].clone();
            for row in leq.iter_mut() {
                if row[k] {
                    for (cell, &t) in row.iter_mut().zip(&through) {
                        *cell |= t;
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq[a][b] && leq[b][a] {
                    return Err(LatticeError::NotAntisymmetric(labels[a].clone(), labels[b].clone()));
                }
            }
        }
        let bound = |a: usize, b: usize, lower: bool| -> Option<usize> {
            let is_bound = |c: usize| if lower { leq[c][a] && leq[c][b] } else { leq[a][c] && leq[b][c] };
            let bounds: Vec<usize> = (0..n).filter(|&c| is_bound(c)).collect();
            bounds
                .iter()
                .copied()
                .find(|&c| bounds.iter().all(|&d| if lower { leq[d][c] } else { leq[c][d] }))
        };
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                meet[a][b] = bound(a, b, true).ok_or_else(|| LatticeError::NoMeet(labels[a].clone(), labels[b].clone()))?;
                join[a][b] = bound(a, b, false).ok_or_else(|| LatticeError::NoJoin(labels[a].clone(), labels[b].clone()))?;
            }
        }
        let bottom = (0..n).fold(0, |acc, x| meet[acc][x]);
        let top = (0..n).fold(0, |acc, x| join[acc][x]);
        Ok(LatticeOrder {
            labels,
            leq,
            meet,
            join,
            bottom,
            top,
        })
    }

    pub fn from_labelled<'a, I>(labels: Vec<String>, pairs: I) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let look = |l: &str| index.get(l).copied().ok_or_else(|| LatticeError::UnknownElement(l.to_string()));
        let pairs = pairs
            .into_iter()
            .map(|(a, b)| Ok((look(a)?, look(b)?)))
            .collect::<Result<Vec<_>, LatticeError>>()?;
        LatticeOrder::new(labels, pairs)
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Result<Self, LatticeError> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        LatticeOrder::new(labels, (1..n).map(|i| (i - 1, i)))
    }

    /// The powerset of `atoms` points, labelled as sets like `{0,2}`.
    pub fn boolean_algebra(atoms: usize) -> Self {
        let subsets: Vec<u32> = (0..1u32 << atoms).collect();
        LatticeOrder::of_sets(&subsets)
    }

    /// Down-closed subsets of the poset on `0..m` generated by `pairs`
    /// (`(a, b)` meaning `a ≤ b`), ordered by inclusion; always distributive.
    pub fn downsets_of_poset(m: usize, pairs: &[(usize, usize)]) -> Self {
        assert!(m < 32);
        let mut below: Vec<u32> = (0..m).map(|i| 1u32 << i).collect();
        for _ in 0..m {
            for &(a, b) in pairs {
                below[b] |= below[a];
            }
        }
        let downsets: Vec<u32> = (0..1u32 << m)
            .filter(|&s| (0..m).all(|x| s & (1 << x) == 0 || below[x] & !s == 0))
            .collect();
        LatticeOrder::of_sets(&downsets)
    }

    fn of_sets(sets: &[u32]) -> Self {
        let label = |s: u32| {
            let members: Vec<String> = (0..32).filter(|i| s & (1 << i) != 0).map(|i: u32| i.to_string()).collect();
            format!("{{{}}}", members.join(","))
        };
        let labels = sets.iter().map(|&s| label(s)).collect();
        let mut pairs = Vec::new();
        for (i, &a) in sets.iter().enumerate() {
            for (j, &b) in sets.iter().enumerate() {
                if a & !b == 0 {
                    pairs.push((i, j));
                }
            }
        }
        LatticeOrder::new(labels, pairs).expect("a family of sets closed under union and intersection")
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

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// A triple `(a, b, c)` with `a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c)`, if any.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.meet(a, self.join(b, c));
                    let rhs = self.join(self.meet(a, b), self.meet(a, c));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    /// Every negation table satisfying the weak pseudocomplementation laws,
    /// in lexicographic order of tables.
    pub fn weak_pseudocomplementations(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut neg = vec![0usize; n];
        self.extend_negation(0, &mut neg, &mut out);
        out
    }

    fn extend_negation(&self, a: usize, neg: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = self.len();
        if a == n {
            if (0..n).all(|x| self.leq(x, neg[neg[x]])) {
                out.push(neg.clone());
            }
            return;
        }
        for v in 0..n {
            if self.meet(a, v) != self.bottom {
                continue;
            }
            // antitone against already assigned elements
            let ok = (0..a).all(|b| (!self.leq(a, b) || self.leq(neg[b], v)) && (!self.leq(b, a) || self.leq(v, neg[b])));
            if ok {
                neg[a] = v;
                self.extend_negation(a + 1, neg, out);
            }
        }
    }
}

/// One failure of a weak pseudocomplementation law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum WpcViolation {
    /// `a ∧ ¬a` is not the bottom.
    MeetNotBottom { a: String, meet: String },
    /// `a` is not below `¬¬a`.
    NotBelowDoubleNegation { a: String, double_negation: String },
    /// `a ≤ b` but not `¬b ≤ ¬a`.
    NotAntitone { a: String, b: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WpcReport {
    pub holds: bool,
    pub violations: Vec<WpcViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistributivityReport {
    pub distributive: bool,
    /// `[a, b, c]` with `a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c)`.
    pub witness: Option<[String; 3]>,
}

/// The lattice file: `{"elements": [...], "leq": [[a, b], ...], "neg": {"a": "b"}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub elements: Vec<String>,
    pub leq: Vec<[String; 2]>,
    pub neg: BTreeMap<String, String>,
}

/// A bounded lattice with a unary negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    order: LatticeOrder,
    neg: Vec<usize>,
}

impl Lattice {
    pub fn new(order: LatticeOrder, neg: Vec<usize>) -> Result<Self, LatticeError> {
        if neg.len() != order.len() {
            let missing = order.label(neg.len().min(order.len() - 1)).to_string();
            return Err(LatticeError::NegationMissing(missing));
        }
        if let Some(&bad) = neg.iter().find(|&&v| v >= order.len()) {
            return Err(LatticeError::UnknownElement(bad.to_string()));
        }
        Ok(Lattice { order, neg })
    }

    pub fn from_file(file: &LatticeFile) -> Result<Self, LatticeError> {
        let order = LatticeOrder::from_labelled(
            file.elements.clone(),
            file.leq.iter().map(|[a, b]| (a.as_str(), b.as_str())),
        )?;
        let look = |l: &str| order.index_of(l).ok_or_else(|| LatticeError::UnknownElement(l.to_string()));
        for k in file.neg.keys() {
            look(k)?;
        }
        let neg = file
            .elements
            .iter()
            .map(|a| match file.neg.get(a) {
                Some(v) => look(v),
                None => Err(LatticeError::NegationMissing(a.clone())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Lattice::new(order, neg)
    }

    pub fn to_file(&self) -> LatticeFile {
        let o = &self.order;
        let n = o.len();
        let mut leq = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && o.leq(a, b) {
                    leq.push([o.label(a).to_string(), o.label(b).to_string()]);
                }
            }
        }
        LatticeFile {
            elements: o.labels().to_vec(),
            leq,
            neg: (0..n).map(|a| (o.label(a).to_string(), o.label(self.neg[a]).to_string())).collect(),
        }
    }

    pub fn order(&self) -> &LatticeOrder {
        &self.order
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn check_weak_pseudocomplementation(&self) -> WpcReport {
        let o = &self.order;
        let n = o.len();
        let l = |a: usize| o.label(a).to_string();
        let mut violations = Vec::new();
        for a in 0..n {
            let m = o.meet(a, self.neg[a]);
            if m != o.bottom() {
                violations.push(WpcViolation::MeetNotBottom { a: l(a), meet: l(m) });
            }
        }
        for a in 0..n {
            let dd = self.neg[self.neg[a]];
            if !o.leq(a, dd) {
                violations.push(WpcViolation::NotBelowDoubleNegation {
                    a: l(a),
                    double_negation: l(dd),
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if o.leq(a, b) && !o.leq(self.neg[b], self.neg[a]) {
                    violations.push(WpcViolation::NotAntitone { a: l(a), b: l(b) });
                }
            }
        }
        WpcReport {
            holds: violations.is_empty(),
            violations,
        }
    }

    pub fn check_distributive(&self) -> DistributivityReport {
        let w = self.order.distributivity_witness();
        DistributivityReport {
            distributive: w.is_none(),
            witness: w.map(|(a, b, c)| [a, b, c].map(|x| self.order.label(x).to_string())),
        }
    }

    /// Every prime filter as a set of elements, in increasing bitmask order.
    pub fn prime_filters(&self) -> Result<Vec<StateSet>, LatticeError> {
        let o = &self.order;
        let n = o.len();
        if n > PRIME_FILTER_CAP {
            return Err(LatticeError::TooLarge {
                size: n,
                cap: PRIME_FILTER_CAP,
            });
        }
        if let Some((a, b, c)) = o.distributivity_witness() {
            return Err(LatticeError::NotDistributive(
                o.label(a).into(),
                o.label(b).into(),
                o.label(c).into(),
            ));
        }
        let is_prime_filter = |s: u64| {
            let has = |a: usize| s & (1 << a) != 0;
            if s == 0 || has(o.bottom()) {
                return false;
            }
            for a in (0..n).filter(|&a| has(a)) {
                for b in 0..n {
                    if o.leq(a, b) && !has(b) {
                        return false;
                    }
                    if has(b) && !has(o.meet(a, b)) {
                        return false;
                    }
                }
            }
            (0..n).all(|a| (0..n).all(|b| !has(o.join(a, b)) || has(a) || has(b)))
        };
        Ok((1u64..(1 << n))
            .filter(|&s| is_prime_filter(s))
            .map(|s| StateSet::from_mask(n, s))
            .collect())
    }

    /// Builds the prime-filter frame and the map `a ↦ {F : a ∈ F}`, and
    /// checks that the map is an embedding.
    pub fn represent(&self) -> Result<Representation, LatticeError> {
        let wpc = self.check_weak_pseudocomplementation();
        if let Some(v) = wpc.violations.first() {
            return Err(LatticeError::NotWeakPseudocomplement(format!("{v:?}")));
        }
        let filters = self.prime_filters()?;
        let o = &self.order;
        let n = o.len();
        let k = filters.len();
        let filter_labels: Vec<String> = filters
            .iter()
            .map(|f| {
                let members: Vec<&str> = f.iter().map(|a| o.label(a)).collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        let compatible = |f: &StateSet, g: &StateSet| !f.iter().any(|a| g.contains(self.neg[a]));
        let mut rel = Vec::new();
        for (i, f) in filters.iter().enumerate() {
            for (j, g) in filters.iter().enumerate() {
                if compatible(f, g) {
                    rel.push((i, j));
                }
            }
        }
        let frame = Frame::new(filter_labels, rel).expect("distinct prime filters");
        let embedding: Vec<StateSet> = (0..n)
            .map(|a| StateSet::from_indices(k, (0..k).filter(|&i| filters[i].contains(a))))
            .collect();

        let flags = frame.class_check();
        let mut failures = Vec::new();
        let mut note = |ok: bool, what: String| {
            if !ok {
                failures.push(what);
            }
            ok
        };
        let l = |a: usize| o.label(a);
        let mut injective = true;
        let mut meets = true;
        let mut joins = true;
        let mut negation = true;
        for a in 0..n {
            for b in 0..n {
                if a < b {
                    injective &= note(embedding[a] != embedding[b], format!("e({}) = e({})", l(a), l(b)));
                }
                meets &= note(
                    embedding[o.meet(a, b)] == embedding[a].intersection(&embedding[b]),
                    format!("e({0} & {1}) differs from e({0}) & e({1})", l(a), l(b)),
                );
                joins &= note(
                    embedding[o.join(a, b)] == embedding[a].union(&embedding[b]),
                    format!("e({0} | {1}) differs from e({0}) | e({1})", l(a), l(b)),
                );
            }
            negation &= note(
                embedding[self.neg[a]] == frame.negation_of(&embedding[a]),
                format!("e(~{0}) differs from the frame negation of e({0})", l(a)),
            );
        }
        let bottom = note(embedding[o.bottom()].is_empty(), "e(0) is not empty".into());
        let top = note(embedding[o.top()].is_full(), "e(1) is not every filter".into());
        let reflexive = note(flags.reflexive, "compatibility is not reflexive".into());
        let symmetric = note(flags.symmetric, "compatibility is not symmetric".into());
        let report = EmbeddingReport {
            reflexive,
            symmetric,
            injective,
            preserves_meets: meets,
            preserves_joins: joins,
            preserves_bottom: bottom,
            preserves_top: top,
            preserves_negation: negation,
            failures,
        };
        Ok(Representation {
            frame,
            embedding,
            report,
        })
    }
}

/// Which properties of the representation held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub reflexive: bool,
    pub symmetric: bool,
    pub injective: bool,
    pub preserves_meets: bool,
    pub preserves_joins: bool,
    pub preserves_bottom: bool,
    pub preserves_top: bool,
    pub preserves_negation: bool,
    pub failures: Vec<String>,
}

impl EmbeddingReport {
    pub fn all_green(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    /// States are the prime filters, labelled by their members.
    pub frame: Frame,
    /// `embedding[a]` is the set of filters containing `a`.
    pub embedding: Vec<StateSet>,
    pub report: EmbeddingReport,
}

pub fn read_lattice(path: &Path) -> Result<Lattice, LatticeReadError> {
    let file: LatticeFile = read_json(path)?;
    Ok(Lattice::from_file(&file)?)
}

#[derive(Debug, Error)]
pub enum LatticeReadError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
