//! Propositional formulas over `~`, `&` and `|`, together with the structural
//! utilities the rest of the workbench relies on.

mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse, parse_sequent, ParseError};

/// Variable reserved for the canonical contradiction `_bot & ~_bot`.
pub const BOTTOM_VAR: &str = "_bot";

/// A formula of the language generated by variables, negation, conjunction
/// and disjunction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Var(String),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Self {
        Formula::Neg(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    /// `f` wrapped in `times` negations.
    pub fn negated(self, times: usize) -> Self {
        (0..times).fold(self, |acc, _| Formula::neg(acc))
    }

    /// The canonical contradiction `_bot & ~_bot`.
    pub fn bottom() -> Self {
        Formula::contradiction(Formula::var(BOTTOM_VAR))
    }

    /// `f & ~f`.
    pub fn contradiction(f: Formula) -> Self {
        Formula::and(f.clone(), Formula::neg(f))
    }

    /// Returns `f` when `self` has the shape `f & ~f`.
    pub fn contradiction_base(&self) -> Option<&Formula> {
        match self {
            Formula::And(l, r) => match r.as_ref() {
                Formula::Neg(inner) if inner == l => Some(l),
                _ => None,
            },
            _ => None,
        }
    }

    /// Left-nested conjunction of the given formulas; `None` when empty.
    pub fn conjoin<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction of the given formulas; `None` when empty.
    pub fn disjoin<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    /// Variable names occurring in the formula, sorted.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Neg(f) => f.collect_vars(out),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Every subtree of the formula, including the formula itself.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.contains(self) {
            return;
        }
        match self {
            Formula::Var(_) => {}
            Formula::Neg(f) => f.collect_subformulas(out),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
        }
        out.insert(self.clone());
    }

    pub fn contains_or(&self) -> bool {
        match self {
            Formula::Var(_) => false,
            Formula::Neg(f) => f.contains_or(),
            Formula::And(l, r) => l.contains_or() || r.contains_or(),
            Formula::Or(..) => true,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::Neg(f) => 1 + f.size(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Neg(f) => 1 + f.depth(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// The conjuncts along the left spine of a left-nested conjunction.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Formula::And(l, r) = cur {
            out.push(r.as_ref());
            cur = l;
        }
        out.push(cur);
        out.reverse();
        out
    }

    /// Double-negation translation: atoms become `~~p`, negation and
    /// conjunction are translated homomorphically and `a | b` becomes
    /// `~(~g(a) & ~g(b))`.
    pub fn godel_gentzen(&self) -> Formula {
        match self {
            Formula::Var(_) => self.clone().negated(2),
            Formula::Neg(f) => Formula::neg(f.godel_gentzen()),
            Formula::And(l, r) => Formula::and(l.godel_gentzen(), r.godel_gentzen()),
            Formula::Or(l, r) => Formula::neg(Formula::and(
                Formula::neg(l.godel_gentzen()),
                Formula::neg(r.godel_gentzen()),
            )),
        }
    }
}

pub fn godel_gentzen(f: &Formula) -> Formula {
    f.godel_gentzen()
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        parse::write_formula(f, self, 0)
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// A turnstile statement `lhs |- rhs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Sequent {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Sequent {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Sequent { lhs, rhs }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    pub fn godel_gentzen(&self) -> Sequent {
        Sequent::new(self.lhs.godel_gentzen(), self.rhs.godel_gentzen())
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.lhs, self.rhs)
    }
}

impl FromStr for Sequent {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sequent(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("sorites parameters require 1 <= delta < n - 1 (got n = {n}, delta = {delta})")]
pub struct SoritesParamError {
    pub n: usize,
    pub delta: usize,
}

/// Length `n` of a sorites series and the slack `delta` of its cutoffs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SoritesParams {
    n: usize,
    delta: usize,
}

impl SoritesParams {
    pub fn new(n: usize, delta: usize) -> Result<Self, SoritesParamError> {
        if delta >= 1 && delta + 1 < n {
            Ok(SoritesParams { n, delta })
        } else {
            Err(SoritesParamError { n, delta })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Pairs `(k, l)` with `0 <= k <= n-2`, `1 <= l <= delta`, `k + l <= n-1`,
    /// in ascending order.
    pub fn cutoff_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n - 1).flat_map(move |k| {
            (1..=self.delta)
                .filter(move |l| k + l < self.n)
                .map(move |l| (k, l))
        })
    }
}

/// `p{k}`, the variable for the `k`-th member of a sorites series.
pub fn series_var(k: usize) -> Formula {
    Formula::var(format!("p{k}"))
}

/// `~(p{k} & ~p{k+l})`: no sharp cutoff between positions `k` and `k + l`.
pub fn no_cutoff(k: usize, l: usize) -> Formula {
    Formula::neg(Formula::and(series_var(k), Formula::neg(series_var(k + l))))
}

/// `p0 & ~p{n-1} & (no cutoff between k and k+l for every admissible pair)`,
/// left-nested in ascending `(k, l)` order.
pub fn sorites_formula(params: SoritesParams) -> Formula {
    let extremes = [series_var(0), Formula::neg(series_var(params.n() - 1))];
    let cutoffs = params.cutoff_pairs().map(|(k, l)| no_cutoff(k, l));
    Formula::conjoin(extremes.into_iter().chain(cutoffs)).expect("nonempty conjunction")
}
