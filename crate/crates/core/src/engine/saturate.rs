//! Forward saturation of the rules over a finite universe of formulas.
//!
//! Every sequent derived here is derivable in the logic, but a sequent
//! missing from the saturation may still be derivable through formulas
//! outside the universe.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use super::rules::{Derivation, Rule, Step};
use super::LogicId;
use crate::formula::{Formula, Sequent};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationOptions {
    /// Negation stacks up to this depth are added over every subformula.
    pub universe_depth: usize,
    /// Refuse universes larger than this.
    pub universe_cap: usize,
    /// Stop as soon as the goal is derived.
    pub stop_at_goal: bool,
}

impl Default for SaturationOptions {
    fn default() -> Self {
        SaturationOptions {
            universe_depth: 2,
            universe_cap: 2000,
            stop_at_goal: true,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SaturationError {
    #[error("saturation universe has {size} formulas, over the cap of {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
}

/// The formulas saturation ranges over for `goal` in `logic`.
///
/// Besides subformulas, negation stacks and the canonical contradiction, the
/// universe holds `f & ~f` whenever `f` and `~f` are present, the side-case
/// conjunctions `a & b` and `a & c` for every `a & (b | c)` when the logic
/// has cases with side assumptions, and literal contexts `l & lhs` and
/// `l' & (l & lhs)` when it has pseudocomplementation.
pub fn build_universe(goal: &Sequent, logic: LogicId, depth: usize) -> Vec<Formula> {
    let ext = logic.extensions();
    let mut base: BTreeSet<Formula> = goal.lhs.subformulas();
    base.extend(goal.rhs.subformulas());
    base.extend(Formula::bottom().subformulas());

    let mut u = base.clone();
    for f in &base {
        for k in 1..=depth {
            u.insert(f.clone().negated(k));
        }
    }

    if ext.cases_with_side {
        let extra: Vec<Formula> = u
            .iter()
            .filter_map(|f| match f {
                Formula::And(a, cases) => match &**cases {
                    Formula::Or(b, c) => Some([
                        Formula::and((**a).clone(), (**b).clone()),
                        Formula::and((**a).clone(), (**c).clone()),
                    ]),
                    _ => None,
                },
                _ => None,
            })
            .flatten()
            .collect();
        u.extend(extra);
    }

    if ext.pseudocomplement {
        let literals: Vec<Formula> = goal
            .vars()
            .into_iter()
            .flat_map(|v| [Formula::var(v.clone()), Formula::neg(Formula::var(v))])
            .collect();
        let level1: Vec<Formula> = literals
            .iter()
            .map(|l| Formula::and(l.clone(), goal.lhs.clone()))
            .collect();
        for l in &literals {
            u.insert(Formula::neg(l.clone()));
            for c in &level1 {
                u.insert(Formula::and(l.clone(), c.clone()));
            }
        }
        u.extend(level1);
    }

    let witnesses: Vec<Formula> = u
        .iter()
        .filter(|f| u.contains(&Formula::neg((*f).clone())))
        .map(|f| Formula::contradiction(f.clone()))
        .collect();
    u.extend(witnesses);

    let mut out: Vec<Formula> = u.into_iter().collect();
    out.sort_by_key(|f| f.size());
    out
}

#[derive(Clone, Copy, Debug)]
enum Node {
    Var,
    Neg(u32),
    And(u32, u32),
    Or(u32, u32),
}

#[derive(Clone, Copy, Debug)]
struct Justification {
    rule: Rule,
    premises: [Option<u32>; 2],
}

/// The outcome of saturating one goal.
#[derive(Debug)]
pub struct Saturation {
    logic: LogicId,
    universe: Vec<Formula>,
    index: HashMap<Formula, u32>,
    facts: Vec<(u32, u32)>,
    justifications: Vec<Justification>,
    fact_ids: HashMap<(u32, u32), u32>,
    complete: bool,
}

impl Saturation {
    pub fn logic(&self) -> LogicId {
        self.logic
    }

    pub fn universe(&self) -> &[Formula] {
        &self.universe
    }

    /// Number of derived sequents.
    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Whether saturation ran to a fixed point rather than stopping at the goal.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    fn fact_of(&self, s: &Sequent) -> Option<u32> {
        let a = *self.index.get(&s.lhs)?;
        let b = *self.index.get(&s.rhs)?;
        self.fact_ids.get(&(a, b)).copied()
    }

    pub fn derives(&self, s: &Sequent) -> bool {
        self.fact_of(s).is_some()
    }

    pub fn derived(&self) -> impl Iterator<Item = Sequent> + '_ {
        self.facts.iter().map(|&(a, b)| {
            Sequent::new(self.universe[a as usize].clone(), self.universe[b as usize].clone())
        })
    }

    /// The derivation of `s` recorded during saturation, with steps in the
    /// order they were derived.
    pub fn derivation(&self, s: &Sequent) -> Option<Derivation> {
        let root = self.fact_of(s)?;
        let mut needed = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if needed.insert(id) {
                stack.extend(self.justifications[id as usize].premises.iter().flatten());
            }
        }
        let position: HashMap<u32, usize> = needed.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let steps = needed
            .iter()
            .map(|&id| {
                let (a, b) = self.facts[id as usize];
                let j = self.justifications[id as usize];
                Step {
                    sequent: Sequent::new(self.universe[a as usize].clone(), self.universe[b as usize].clone()),
                    rule: j.rule,
                    premises: j.premises.iter().flatten().map(|p| position[p]).collect(),
                }
            })
            .collect();
        Some(Derivation { steps })
    }
}

struct Engine {
    words: usize,
    out_rows: Vec<Vec<u64>>,
    in_rows: Vec<Vec<u64>>,
    facts: Vec<(u32, u32)>,
    justifications: Vec<Justification>,
    fact_ids: HashMap<(u32, u32), u32>,
    queue: VecDeque<u32>,
}

impl Engine {
    fn has(&self, a: u32, b: u32) -> bool {
        self.out_rows[a as usize][b as usize / 64] & (1 << (b % 64)) != 0
    }

    fn add(&mut self, a: u32, b: u32, rule: Rule, premises: [Option<u32>; 2]) {
        if self.has(a, b) {
            return;
        }
        self.out_rows[a as usize][b as usize / 64] |= 1 << (b % 64);
        self.in_rows[b as usize][a as usize / 64] |= 1 << (a % 64);
        let id = self.facts.len() as u32;
        self.facts.push((a, b));
        self.justifications.push(Justification { rule, premises });
        self.fact_ids.insert((a, b), id);
        self.queue.push_back(id);
    }

    fn id(&self, a: u32, b: u32) -> Option<u32> {
        self.fact_ids.get(&(a, b)).copied()
    }

    /// Members of `row & !mask_row`.
    fn fresh(&self, row: &[u64], mask_row: &[u64]) -> Vec<u32> {
        let mut out = Vec::new();
        for w in 0..self.words {
            let mut bits = row[w] & !mask_row[w];
            while bits != 0 {
                out.push((w * 64) as u32 + bits.trailing_zeros());
                bits &= bits - 1;
            }
        }
        out
    }
}

pub fn saturate(goal: &Sequent, logic: LogicId, options: &SaturationOptions) -> Result<Saturation, SaturationError> {
    let universe = build_universe(goal, logic, options.universe_depth);
    if universe.len() > options.universe_cap {
        return Err(SaturationError::UniverseTooLarge {
            size: universe.len(),
            cap: options.universe_cap,
        });
    }
    let ext = logic.extensions();
    let n = universe.len();
    let index: HashMap<Formula, u32> = universe.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();
    let idx = |f: &Formula| index.get(f).copied();

    let nodes: Vec<Node> = universe
        .iter()
        .map(|f| match f {
            Formula::Var(_) => Node::Var,
            Formula::Neg(a) => Node::Neg(index[&**a]),
            Formula::And(a, b) => Node::And(index[&**a], index[&**b]),
            Formula::Or(a, b) => Node::Or(index[&**a], index[&**b]),
        })
        .collect();
    let neg: Vec<Option<u32>> = universe.iter().map(|f| idx(&Formula::neg(f.clone()))).collect();
    let contradiction: Vec<bool> = universe.iter().map(|f| f.contradiction_base().is_some()).collect();

    let mut and_left: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    let mut and_right: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    let mut or_left: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    let mut or_right: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    // cases-with-side triples keyed by either premise's antecedent
    let mut cases_first: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    let mut cases_second: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for (i, node) in nodes.iter().enumerate() {
        let i = i as u32;
        match *node {
            Node::And(a, b) => {
                and_left[a as usize].push((b, i));
                and_right[b as usize].push((a, i));
                if ext.cases_with_side {
                    if let Node::Or(phi, psi) = nodes[b as usize] {
                        let side = |x: u32| idx(&Formula::and(universe[a as usize].clone(), universe[x as usize].clone()));
                        if let (Some(i1), Some(i2)) = (side(phi), side(psi)) {
                            cases_first[i1 as usize].push((i2, i));
                            cases_second[i2 as usize].push((i1, i));
                        }
                    }
                }
            }
            Node::Or(a, b) => {
                or_left[a as usize].push((b, i));
                or_right[b as usize].push((a, i));
            }
            Node::Var | Node::Neg(_) => {}
        }
    }

    let words = n.div_ceil(64);
    let mut e = Engine {
        words,
        out_rows: vec![vec![0; words]; n],
        in_rows: vec![vec![0; words]; n],
        facts: Vec::new(),
        justifications: Vec::new(),
        fact_ids: HashMap::new(),
        queue: VecDeque::new(),
    };
    let axiom = [None, None];

    for (i, node) in nodes.iter().enumerate() {
        let i = i as u32;
        e.add(i, i, Rule::Identity, axiom);
        match *node {
            Node::And(a, b) => {
                e.add(i, a, Rule::AndElimLeft, axiom);
                e.add(i, b, Rule::AndElimRight, axiom);
            }
            Node::Or(a, b) => {
                e.add(a, i, Rule::OrIntroLeft, axiom);
                e.add(b, i, Rule::OrIntroRight, axiom);
            }
            Node::Neg(a) => {
                if let Node::Neg(inner) = nodes[a as usize] {
                    e.add(inner, i, Rule::DoubleNegIntro, axiom);
                    if ext.double_negation_elim {
                        e.add(i, inner, Rule::DoubleNegElim, axiom);
                    }
                }
            }
            Node::Var => {}
        }
        if contradiction[i as usize] {
            for b in 0..n as u32 {
                e.add(i, b, Rule::Explosion, axiom);
            }
        }
    }

    let goal_pair = match (idx(&goal.lhs), idx(&goal.rhs)) {
        (Some(a), Some(b)) => (a, b),
        _ => unreachable!("goal sides are in the universe"),
    };
    let mut complete = true;

    while let Some(id) = e.queue.pop_front() {
        if options.stop_at_goal && e.has(goal_pair.0, goal_pair.1) {
            complete = false;
            break;
        }
        let (a, b) = e.facts[id as usize];
        let this = Some(id);

        for c in e.fresh(&e.out_rows[b as usize], &e.out_rows[a as usize]) {
            let p = e.id(b, c);
            e.add(a, c, Rule::Transitivity, [this, p]);
        }
        for z in e.fresh(&e.in_rows[a as usize], &e.in_rows[b as usize]) {
            let p = e.id(z, a);
            e.add(z, b, Rule::Transitivity, [p, this]);
        }

        for &(c, bc) in &and_left[b as usize] {
            if e.has(a, c) {
                let p = e.id(a, c);
                e.add(a, bc, Rule::AndIntro, [this, p]);
            }
        }
        for &(c, cb) in &and_right[b as usize] {
            if e.has(a, c) {
                let p = e.id(a, c);
                e.add(a, cb, Rule::AndIntro, [p, this]);
            }
        }

        for &(d, ad) in &or_left[a as usize] {
            if e.has(d, b) {
                let p = e.id(d, b);
                e.add(ad, b, Rule::OrElim, [this, p]);
            }
        }
        for &(d, da) in &or_right[a as usize] {
            if e.has(d, b) {
                let p = e.id(d, b);
                e.add(da, b, Rule::OrElim, [p, this]);
            }
        }

        if let (Some(na), Some(nb)) = (neg[a as usize], neg[b as usize]) {
            e.add(nb, na, Rule::Contraposition, [this, None]);
        }

        for &(i2, t) in &cases_first[a as usize] {
            if e.has(i2, b) {
                let p = e.id(i2, b);
                e.add(t, b, Rule::CasesWithSide, [this, p]);
            }
        }
        for &(i1, t) in &cases_second[a as usize] {
            if e.has(i1, b) {
                let p = e.id(i1, b);
                e.add(t, b, Rule::CasesWithSide, [p, this]);
            }
        }

        if ext.pseudocomplement && contradiction[b as usize] {
            if let Node::And(phi, psi) = nodes[a as usize] {
                if let Some(nphi) = neg[phi as usize] {
                    e.add(psi, nphi, Rule::Pseudocomplement, [this, None]);
                }
            }
        }
    }
    Ok(Saturation {
        logic,
        universe,
        index,
        facts: e.facts,
        justifications: e.justifications,
        fact_ids: e.fact_ids,
        complete,
    })
}
