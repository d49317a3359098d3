//! The Sorites models: the symmetric model `S(n, δ)` over pairs `(i, j)` with
//! `i + δ < j`, and the pseudosymmetric model that adds one rejector state
//! per index, together with mechanical checks of their extension identities.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::formula::{series_var, sorites_formula, Formula, SoritesParams};
use crate::frame::{Frame, StateSet};
use crate::semantics::{Evaluator, Model, SemanticsId};

/// An index extended with both infinities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    NegInf,
    Fin(usize),
    PosInf,
}

impl Ext {
    /// Adds a finite amount; infinities absorb.
    pub fn plus(self, d: usize) -> Ext {
        match self {
            Ext::Fin(i) => Ext::Fin(i + d),
            other => other,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Ext::Fin(_))
    }

    fn cmp_index(self, k: usize) -> Ordering {
        self.cmp(&Ext::Fin(k))
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => f.write_str("-inf"),
            Ext::Fin(i) => write!(f, "{i}"),
            Ext::PosInf => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SoritesState {
    Pair(Ext, Ext),
    Rejector(usize),
}

impl SoritesState {
    pub fn pair(i: Ext, j: Ext) -> Self {
        SoritesState::Pair(i, j)
    }
}

impl fmt::Display for SoritesState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SoritesState::Pair(i, j) => write!(f, "({i},{j})"),
            SoritesState::Rejector(k) => write!(f, "r{k}"),
        }
    }
}

/// A built Sorites model that remembers the structure of its states.
#[derive(Clone, Debug)]
pub struct SoritesModel {
    params: SoritesParams,
    pseudo: bool,
    states: Vec<SoritesState>,
    model: Model,
}

impl SoritesModel {
    pub fn params(&self) -> SoritesParams {
        self.params
    }

    pub fn is_pseudosymmetric(&self) -> bool {
        self.pseudo
    }

    pub fn states(&self) -> &[SoritesState] {
        &self.states
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn into_model(self) -> Model {
        self.model
    }

    pub fn frame(&self) -> &Frame {
        self.model.frame()
    }

    pub fn index_of(&self, state: SoritesState) -> Option<usize> {
        self.states.iter().position(|s| *s == state)
    }

    /// The set of states satisfying `pred`.
    pub fn states_where(&self, pred: impl Fn(&SoritesState) -> bool) -> StateSet {
        StateSet::from_indices(
            self.states.len(),
            self.states
                .iter()
                .enumerate()
                .filter(|(_, s)| pred(s))
                .map(|(x, _)| x),
        )
    }

    /// Pair states `(i, j)` satisfying `pred`.
    pub fn pairs_where(&self, pred: impl Fn(Ext, Ext) -> bool) -> StateSet {
        self.states_where(|s| match *s {
            SoritesState::Pair(i, j) => pred(i, j),
            SoritesState::Rejector(_) => false,
        })
    }
}

/// The pair states in model order: `i` from `-inf` upwards, then `j`
/// ascending.
fn pair_states(params: SoritesParams) -> Vec<SoritesState> {
    let n = params.n();
    let indices: Vec<Ext> = std::iter::once(Ext::NegInf)
        .chain((0..n).map(Ext::Fin))
        .chain(std::iter::once(Ext::PosInf))
        .collect();
    let mut out = Vec::new();
    for &i in &indices {
        for &j in &indices {
            if i.plus(params.delta()) < j {
                out.push(SoritesState::Pair(i, j));
            }
        }
    }
    out
}

fn compatible(a: (Ext, Ext), b: (Ext, Ext)) -> bool {
    a.0.max(b.0) < a.1.min(b.1)
}

fn sorites_valuation(n: usize, states: &[SoritesState]) -> BTreeMap<String, StateSet> {
    (0..n)
        .map(|k| {
            let set = StateSet::from_indices(
                states.len(),
                states.iter().enumerate().filter_map(|(x, s)| match *s {
                    SoritesState::Pair(i, _) if i.cmp_index(k) != Ordering::Less => Some(x),
                    _ => None,
                }),
            );
            (format!("p{k}"), set)
        })
        .collect()
}

fn assemble(params: SoritesParams, pseudo: bool, states: Vec<SoritesState>, rel: Vec<(usize, usize)>) -> SoritesModel {
    let labels = states.iter().map(|s| s.to_string()).collect();
    let frame = Frame::new(labels, rel).expect("sorites states are distinct");
    let valuation = sorites_valuation(params.n(), &states);
    let model = Model::new(frame, valuation).expect("valuation over the model's states");
    SoritesModel {
        params,
        pseudo,
        states,
        model,
    }
}

/// `S(n, δ)`: pairs related when `max(i, i') < min(j, j')`, and
/// `V(p_k) = {(i, j) : k ≤ i}`.
pub fn build_symmetric(params: SoritesParams) -> SoritesModel {
    let states = pair_states(params);
    let mut rel = Vec::new();
    for (x, a) in states.iter().enumerate() {
        for (y, b) in states.iter().enumerate() {
            if let (SoritesState::Pair(i, j), SoritesState::Pair(i2, j2)) = (a, b) {
                if compatible((*i, *j), (*i2, *j2)) {
                    rel.push((x, y));
                }
            }
        }
    }
    assemble(params, false, states, rel)
}

/// `S(n, δ)` plus rejector states `r0 .. r(n-1)`: `r_k ◁ (i, j)` iff
/// `i < k < j`, and every state is open to every rejector.
pub fn build_pseudosymmetric(params: SoritesParams) -> SoritesModel {
    let mut states = pair_states(params);
    states.extend((0..params.n()).map(SoritesState::Rejector));
    let mut rel = Vec::new();
    for (x, a) in states.iter().enumerate() {
        for (y, b) in states.iter().enumerate() {
            let related = match (*a, *b) {
                (SoritesState::Pair(i, j), SoritesState::Pair(i2, j2)) => compatible((i, j), (i2, j2)),
                (SoritesState::Rejector(k), SoritesState::Pair(i, j)) => {
                    i.cmp_index(k) == Ordering::Less && j.cmp_index(k) == Ordering::Greater
                }
                (_, SoritesState::Rejector(_)) => true,
            };
            if related {
                rel.push((x, y));
            }
        }
    }
    assemble(params, true, states, rel)
}

/// One extension identity, checked by evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactCheck {
    pub fact: &'static str,
    pub claim: String,
    pub passed: bool,
    /// States the claim expects but the extension lacks.
    pub missing: Vec<String>,
    /// States in the extension the claim does not expect.
    pub extra: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactReport {
    pub n: usize,
    pub delta: usize,
    pub pseudosymmetric: bool,
    pub checks: Vec<FactCheck>,
}

impl FactReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Per fact name, whether all its checks passed, in first-seen order.
    pub fn summary(&self) -> Vec<(&'static str, bool)> {
        let mut out: Vec<(&'static str, bool)> = Vec::new();
        for c in &self.checks {
            match out.iter_mut().find(|(f, _)| *f == c.fact) {
                Some(entry) => entry.1 &= c.passed,
                None => out.push((c.fact, c.passed)),
            }
        }
        out
    }

    pub fn failures(&self) -> impl Iterator<Item = &FactCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Checker<'a> {
    model: &'a SoritesModel,
    eval: Evaluator<'a>,
    checks: Vec<FactCheck>,
}

impl Checker<'_> {
    fn ext(&self, f: &Formula) -> StateSet {
        self.eval.eval(f).expect("sorites formulas use only p0..p(n-1)")
    }

    fn identity(&mut self, fact: &'static str, claim: String, got: &StateSet, expected: &StateSet) {
        let m = self.model.model();
        self.checks.push(FactCheck {
            fact,
            claim,
            passed: got == expected,
            missing: m.labels_of(&expected.difference(got)),
            extra: m.labels_of(&got.difference(expected)),
        });
    }

    fn equation(&mut self, fact: &'static str, f: &Formula, expected: &StateSet, described: &str) {
        let got = self.ext(f);
        self.identity(fact, format!("[[{f}]] = {described}"), &got, expected);
    }

    fn label_set(&self, set: &StateSet) -> String {
        format!("{{{}}}", self.model.model().labels_of(set).join(", "))
    }
}

fn lem(k: usize) -> Formula {
    Formula::or(series_var(k), Formula::neg(series_var(k)))
}

fn wlem(k: usize) -> Formula {
    Formula::or(Formula::neg(series_var(k)), series_var(k).negated(2))
}

/// `(p0 | ~p0) & ... & (p(n-1) | ~p(n-1))`.
pub fn excluded_middle_conjunction(n: usize) -> Formula {
    Formula::conjoin((0..n).map(lem)).expect("n > 0")
}

/// `(~p0 | ~~p0) & ... & (~p(n-1) | ~~p(n-1))`.
pub fn weak_excluded_middle_conjunction(n: usize) -> Formula {
    Formula::conjoin((0..n).map(wlem)).expect("n > 0")
}

/// Checks each applicable extension identity for the chosen model. The
/// identities are the claimed closed forms, compared as exact sets.
pub fn verify_facts(params: SoritesParams, pseudo: bool) -> FactReport {
    let built = if pseudo {
        build_pseudosymmetric(params)
    } else {
        build_symmetric(params)
    };
    let eval = Evaluator::new(built.model(), SemanticsId::Fixpoint).expect("sorites valuations are fixpoints");
    let mut c = Checker {
        model: &built,
        eval,
        checks: Vec::new(),
    };
    let n = params.n();
    let names = if pseudo {
        ["Atom2", "NegAtom2", "NoSharpCutoffs2", "JointSat2"]
    } else {
        ["Atom", "NegAtom", "NoSharpCutoffs", "JointSat"]
    };
    let universe = built.frame().full_set();
    let empty = built.frame().empty_set();

    for k in 0..n {
        let expected = built.pairs_where(|i, _| i.cmp_index(k) != Ordering::Less);
        c.equation(names[0], &series_var(k), &expected, &format!("{{(i,j) : {k} <= i}}"));
    }
    for k in 0..n {
        let expected = built.pairs_where(|_, j| j.cmp_index(k) != Ordering::Greater);
        c.equation(names[1], &Formula::neg(series_var(k)), &expected, &format!("{{(i,j) : j <= {k}}}"));
        if pseudo {
            let atom = c.ext(&series_var(k));
            let got = c.ext(&series_var(k).negated(2));
            c.identity(names[1], format!("[[~~p{k}]] = [[p{k}]]"), &got, &atom);
        }
    }
    for (k, l) in params.cutoff_pairs() {
        let cutoff = Formula::and(series_var(k), Formula::neg(series_var(k + l)));
        c.equation(names[2], &cutoff, &empty, "{}");
        c.equation(names[2], &Formula::neg(cutoff), &universe, "all states");
    }
    let focus = built
        .index_of(SoritesState::Pair(Ext::Fin(0), Ext::Fin(n - 1)))
        .expect("(0,n-1) is a state");
    let whole = sorites_formula(params);
    let sat = c.ext(&whole);
    let focus_set = StateSet::singleton(universe.universe(), focus);
    let got = sat.intersection(&focus_set);
    c.identity(
        names[3],
        format!("(0,{}) is in [[{whole}]]", n - 1),
        &got,
        &focus_set,
    );

    if pseudo {
        for k in 0..n {
            let expected = built.pairs_where(|i, j| {
                i.cmp_index(k) != Ordering::Less || j.cmp_index(k) != Ordering::Greater
            });
            c.equation("EMExt", &lem(k), &expected, &format!("{{(i,j) : {k} <= i or j <= {k}}}"));
        }

        let lems = excluded_middle_conjunction(n);
        let wlems = weak_excluded_middle_conjunction(n);
        let lem_ext = c.ext(&lems);
        let wlem_ext = c.ext(&wlems);
        c.identity("DenyLEMs", format!("[[{wlems}]] = [[{lems}]]"), &wlem_ext, &lem_ext);
        let claimed = built.states_where(|s| {
            *s == SoritesState::Pair(Ext::Fin(n - 1), Ext::PosInf)
                || *s == SoritesState::Pair(Ext::NegInf, Ext::Fin(n - 1))
        });
        let described = c.label_set(&claimed);
        c.equation("DenyLEMs", &lems, &claimed, &described);

        let neg_lems = Formula::neg(lems);
        let neg_wlems = Formula::neg(wlems);
        let neg_lem_ext = c.ext(&neg_lems);
        let neg_wlem_ext = c.ext(&neg_wlems);
        c.identity("DenyLEMs", format!("[[{neg_wlems}]] = [[{neg_lems}]]"), &neg_wlem_ext, &neg_lem_ext);
        let finite = built.pairs_where(|i, j| i.is_finite() && j.is_finite());
        c.equation("DenyLEMs", &neg_lems, &finite, "{(i,j) : i, j finite}");
    }

    FactReport {
        n,
        delta: params.delta(),
        pseudosymmetric: pseudo,
        checks: c.checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::semantics::eval;

    fn p(n: usize, d: usize) -> SoritesParams {
        SoritesParams::new(n, d).unwrap()
    }

    fn labels(m: &SoritesModel, set: &StateSet) -> Vec<String> {
        m.model().labels_of(set)
    }

    fn ext(m: &SoritesModel, f: &str) -> Vec<String> {
        labels(m, &eval(m.model(), &parse(f).unwrap(), SemanticsId::Fixpoint).unwrap())
    }

    fn idx(m: &SoritesModel, label: &str) -> usize {
        m.frame().state(label).unwrap()
    }

    #[test]
    fn state_counts_and_order() {
        let s = build_symmetric(p(4, 1));
        assert_eq!(s.states().len(), 12);
        assert_eq!(
            s.frame().labels()[..6],
            ["(-inf,0)", "(-inf,1)", "(-inf,2)", "(-inf,3)", "(-inf,inf)", "(0,2)"]
        );
        assert_eq!(build_pseudosymmetric(p(4, 1)).states().len(), 16);
        assert_eq!(build_symmetric(p(8, 1)).states().len(), 38);
    }

    #[test]
    fn symmetric_relation_examples() {
        let s = build_symmetric(p(4, 1));
        let f = s.frame();
        assert!(f.related(idx(&s, "(1,3)"), idx(&s, "(0,2)")));
        assert!(!f.related(idx(&s, "(0,2)"), idx(&s, "(2,inf)")));
        let flags = f.class_check();
        assert!(flags.reflexive && flags.symmetric);
    }

    #[test]
    fn pseudosymmetric_relation_examples() {
        let s = build_pseudosymmetric(p(4, 1));
        let f = s.frame();
        assert!(f.related(idx(&s, "r1"), idx(&s, "(0,3)")));
        assert!(f.related(idx(&s, "(0,3)"), idx(&s, "r1")));
        assert!(!f.related(idx(&s, "r2"), idx(&s, "(0,2)")));
        assert!(f.pre_refines(idx(&s, "(0,3)"), idx(&s, "r1")).unwrap());
        let flags = f.class_check();
        assert!(flags.reflexive && flags.pseudosymmetric && !flags.symmetric);
    }

    #[test]
    fn both_models_are_fixpoint_models() {
        for (n, d) in [(3, 1), (4, 1), (5, 2), (6, 3)] {
            assert!(build_symmetric(p(n, d)).model().validate_fixpoint_model().is_empty());
            assert!(build_pseudosymmetric(p(n, d)).model().validate_fixpoint_model().is_empty());
        }
    }

    #[test]
    fn atom_extensions() {
        let s = build_symmetric(p(4, 1));
        assert_eq!(ext(&s, "p1"), ["(1,3)", "(1,inf)", "(2,inf)", "(3,inf)"]);
        assert_eq!(ext(&s, "~p1"), ["(-inf,0)", "(-inf,1)"]);
        assert!(ext(&build_symmetric(p(5, 2)), "p0 & ~p2").is_empty());
    }

    #[test]
    fn excluded_middle_conjunction_in_pseudosymmetric_model() {
        // State r0 is open to (-inf,3) and its successors are the pairs
        // (-inf,j) with j >= 1 and the rejectors, none of which accepts
        // p0 or ~p0, so r0 rejects p0 | ~p0 and (-inf,3) falls outside.
        let s = build_pseudosymmetric(p(4, 1));
        let r0 = idx(&s, "r0");
        let lem0 = eval(s.model(), &parse("p0 | ~p0").unwrap(), SemanticsId::Fixpoint).unwrap();
        assert!(!s.frame().successors(r0).intersects(&lem0));
        assert!(s.frame().related(r0, idx(&s, "(-inf,3)")));

        let all = excluded_middle_conjunction(4).to_string();
        assert_eq!(ext(&s, &all), ["(-inf,0)", "(3,inf)"]);
        assert_eq!(ext(&s, &format!("~({all})")), ["(0,2)", "(0,3)", "(1,3)"]);
    }

    #[test]
    fn excluded_middle_conjunction_oracle() {
        // A state survives every conjunct iff it is a pair with no index
        // strictly between i and j.
        for (n, d) in [(3, 1), (4, 1), (5, 2), (6, 1)] {
            let s = build_pseudosymmetric(p(n, d));
            let got = eval(s.model(), &excluded_middle_conjunction(n), SemanticsId::Fixpoint).unwrap();
            let expected = s.pairs_where(|i, j| (0..n).all(|k| !(i < Ext::Fin(k) && Ext::Fin(k) < j)));
            assert_eq!(got, expected);
            assert_eq!(
                labels(&s, &expected),
                ["(-inf,0)".to_string(), format!("({},inf)", n - 1)]
            );
        }
    }

    #[test]
    fn fact_reports() {
        let r = verify_facts(p(4, 1), false);
        assert!(r.all_passed());
        assert_eq!(
            r.summary(),
            [("Atom", true), ("NegAtom", true), ("NoSharpCutoffs", true), ("JointSat", true)]
        );
        assert!(verify_facts(p(5, 2), false).all_passed());

        let r = verify_facts(p(4, 1), true);
        let failed: Vec<&FactCheck> = r.failures().collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].fact, "DenyLEMs");
        assert_eq!(failed[0].missing, ["(-inf,3)"]);
        assert_eq!(failed[0].extra, ["(-inf,0)"]);
        for (fact, ok) in r.summary() {
            assert_eq!(ok, fact != "DenyLEMs", "{fact}");
        }
    }

    #[test]
    fn negated_instances_in_pseudosymmetric_model() {
        let s = build_pseudosymmetric(p(4, 1));
        let x = idx(&s, "(0,3)");
        let or_form = eval(s.model(), &parse("~p0 | p1").unwrap(), SemanticsId::Fixpoint).unwrap();
        assert!(!or_form.contains(x));
        let cutoff = eval(s.model(), &parse("~(p0 & ~p1)").unwrap(), SemanticsId::Fixpoint).unwrap();
        assert!(cutoff.is_full());
    }
}
