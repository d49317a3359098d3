//! Bitmask evaluation for frames of at most 64 states, used in the inner
//! loops of countermodel search.

use std::collections::HashMap;

use super::SemanticsId;
use crate::formula::Formula;
use crate::frame::Frame;

#[derive(Clone, Debug)]
pub(crate) struct MaskFrame {
    pub n: usize,
    pub preds: Vec<u64>,
    pub succs: Vec<u64>,
}

impl MaskFrame {
    pub fn new(frame: &Frame) -> Self {
        assert!(frame.len() <= 64);
        MaskFrame {
            n: frame.len(),
            preds: (0..frame.len()).map(|x| frame.predecessors(x).mask()).collect(),
            succs: (0..frame.len()).map(|x| frame.successors(x).mask()).collect(),
        }
    }

    pub fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1 << self.n) - 1
        }
    }

    pub fn closure(&self, a: u64) -> u64 {
        let mut open = 0u64;
        for (x, s) in self.succs.iter().enumerate() {
            if s & a != 0 {
                open |= 1 << x;
            }
        }
        let mut out = 0u64;
        for (x, p) in self.preds.iter().enumerate() {
            if p & !open == 0 {
                out |= 1 << x;
            }
        }
        out
    }

    pub fn negation(&self, a: u64) -> u64 {
        let mut out = 0u64;
        for (x, p) in self.preds.iter().enumerate() {
            if p & a == 0 {
                out |= 1 << x;
            }
        }
        out
    }

    pub fn fixpoints(&self) -> Vec<u64> {
        assert!(self.n < 32);
        (0..(1u64 << self.n)).filter(|&a| self.closure(a) == a).collect()
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Var(usize),
    Neg(usize),
    And(usize, usize),
    Or(usize, usize),
}

/// A set of formulas flattened into one postorder instruction list with
/// shared subformulas evaluated once.
#[derive(Clone, Debug)]
pub(crate) struct Program {
    ops: Vec<Op>,
    roots: Vec<usize>,
    vars: Vec<String>,
}

impl Program {
    pub fn new(formulas: &[&Formula]) -> Self {
        let mut p = Program {
            ops: Vec::new(),
            roots: Vec::new(),
            vars: Vec::new(),
        };
        let mut nodes: HashMap<Formula, usize> = HashMap::new();
        for f in formulas {
            let r = p.compile(f, &mut nodes);
            p.roots.push(r);
        }
        p
    }

    fn compile(&mut self, f: &Formula, nodes: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = nodes.get(f) {
            return i;
        }
        let op = match f {
            Formula::Var(name) => {
                let slot = match self.vars.iter().position(|v| v == name) {
                    Some(s) => s,
                    None => {
                        self.vars.push(name.clone());
                        self.vars.len() - 1
                    }
                };
                Op::Var(slot)
            }
            Formula::Neg(a) => Op::Neg(self.compile(a, nodes)),
            Formula::And(a, b) => {
                let a = self.compile(a, nodes);
                Op::And(a, self.compile(b, nodes))
            }
            Formula::Or(a, b) => {
                let a = self.compile(a, nodes);
                Op::Or(a, self.compile(b, nodes))
            }
        };
        self.ops.push(op);
        nodes.insert(f.clone(), self.ops.len() - 1);
        self.ops.len() - 1
    }

    /// Variable names in slot order.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Evaluates every node; `values[slot]` is the value of variable `slot`.
    /// Returns the root extensions.
    pub fn run(
        &self,
        frame: &MaskFrame,
        values: &[u64],
        semantics: SemanticsId,
        scratch: &mut Vec<u64>,
    ) -> smallvec::SmallVec<[u64; 4]> {
        scratch.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Var(s) => values[s],
                Op::Neg(a) => frame.negation(scratch[a]),
                Op::And(a, b) => scratch[a] & scratch[b],
                Op::Or(a, b) => {
                    let u = scratch[a] | scratch[b];
                    match semantics {
                        SemanticsId::Fixpoint => frame.closure(u),
                        SemanticsId::Fine => u,
                    }
                }
            };
            scratch.push(v);
        }
        self.roots.iter().map(|&r| scratch[r]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::semantics::{eval, Model};

    #[test]
    fn agrees_with_set_evaluation() {
        let formulas = ["p | ~p", "~(p & ~q) | q", "~~p & (q | ~~q)", "~(p | q) | ~p & ~q"]
            .map(|s| parse(s).unwrap());
        for mask in 0..(1u64 << 9) {
            let frame = Frame::from_mask(3, mask);
            let mf = MaskFrame::new(&frame);
            let fix = mf.fixpoints();
            let refs: Vec<&Formula> = formulas.iter().collect();
            let prog = Program::new(&refs);
            let mut scratch = Vec::new();
            for &p in &fix {
                for &q in &fix {
                    let model = Model::new(
                        frame.clone(),
                        [("p", p), ("q", q)]
                            .into_iter()
                            .map(|(v, m)| (v.to_string(), crate::frame::StateSet::from_mask(3, m)))
                            .collect(),
                    )
                    .unwrap();
                    let values: Vec<u64> = prog
                        .vars()
                        .iter()
                        .map(|v| if v == "p" { p } else { q })
                        .collect();
                    for sem in [SemanticsId::Fixpoint, SemanticsId::Fine] {
                        let got = prog.run(&mf, &values, sem, &mut scratch);
                        for (f, g) in formulas.iter().zip(got) {
                            assert_eq!(eval(&model, f, sem).unwrap().mask(), g);
                        }
                    }
                }
            }
        }
    }
}
