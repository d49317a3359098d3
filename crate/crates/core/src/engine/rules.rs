//! The intro-elim rules, their per-logic extensions, and derivation traces
//! with an independent replay checker.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use super::LogicId;
use crate::formula::{Formula, Sequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// `φ ⊢ φ`
    Identity,
    /// `φ ∧ ψ ⊢ φ`
    AndElimLeft,
    /// `φ ∧ ψ ⊢ ψ`
    AndElimRight,
    /// `φ ⊢ φ ∨ ψ`
    OrIntroLeft,
    /// `φ ⊢ ψ ∨ φ`
    OrIntroRight,
    /// `φ ⊢ ¬¬φ`
    DoubleNegIntro,
    /// `φ ∧ ¬φ ⊢ ψ`
    Explosion,
    /// `φ ⊢ ψ`, `ψ ⊢ χ` give `φ ⊢ χ`
    Transitivity,
    /// `φ ⊢ ψ`, `φ ⊢ χ` give `φ ⊢ ψ ∧ χ`
    AndIntro,
    /// `φ ⊢ χ`, `ψ ⊢ χ` give `φ ∨ ψ ⊢ χ`
    OrElim,
    /// `φ ⊢ ψ` gives `¬ψ ⊢ ¬φ`
    Contraposition,
    /// `¬¬φ ⊢ φ`
    DoubleNegElim,
    /// `α ∧ φ ⊢ χ`, `α ∧ ψ ⊢ χ` give `α ∧ (φ ∨ ψ) ⊢ χ`
    CasesWithSide,
    /// `φ ∧ ψ ⊢ β ∧ ¬β` gives `ψ ⊢ ¬φ`
    Pseudocomplement,
}

impl Rule {
    pub const BASE: [Rule; 11] = [
        Rule::Identity,
        Rule::AndElimLeft,
        Rule::AndElimRight,
        Rule::OrIntroLeft,
        Rule::OrIntroRight,
        Rule::DoubleNegIntro,
        Rule::Explosion,
        Rule::Transitivity,
        Rule::AndIntro,
        Rule::OrElim,
        Rule::Contraposition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Identity => "identity",
            Rule::AndElimLeft => "and-elim-left",
            Rule::AndElimRight => "and-elim-right",
            Rule::OrIntroLeft => "or-intro-left",
            Rule::OrIntroRight => "or-intro-right",
            Rule::DoubleNegIntro => "double-negation-intro",
            Rule::Explosion => "explosion",
            Rule::Transitivity => "transitivity",
            Rule::AndIntro => "and-intro",
            Rule::OrElim => "or-elim",
            Rule::Contraposition => "contraposition",
            Rule::DoubleNegElim => "double-negation-elim",
            Rule::CasesWithSide => "cases-with-side-assumption",
            Rule::Pseudocomplement => "pseudocomplement",
        }
    }

    pub fn premise_count(self) -> usize {
        match self {
            Rule::Transitivity | Rule::AndIntro | Rule::OrElim | Rule::CasesWithSide => 2,
            Rule::Contraposition | Rule::Pseudocomplement => 1,
            _ => 0,
        }
    }

    /// Number of schematic letters in [`Rule::instance`].
    pub fn letters(self) -> usize {
        match self {
            Rule::Identity | Rule::DoubleNegIntro | Rule::DoubleNegElim => 1,
            Rule::AndElimLeft
            | Rule::AndElimRight
            | Rule::OrIntroLeft
            | Rule::OrIntroRight
            | Rule::Explosion
            | Rule::Contraposition => 2,
            Rule::Transitivity | Rule::AndIntro | Rule::OrElim | Rule::Pseudocomplement => 3,
            Rule::CasesWithSide => 4,
        }
    }

    /// Premises and conclusion of the rule with its letters replaced by `f`,
    /// in the order `φ, ψ, χ` (with `α` first for cases-with-side and `β`
    /// last for pseudocomplement).
    pub fn instance(self, f: &[Formula]) -> (Vec<Sequent>, Sequent) {
        assert_eq!(f.len(), self.letters(), "letters for {}", self.name());
        let s = |l: &Formula, r: &Formula| Sequent::new(l.clone(), r.clone());
        let and = |l: &Formula, r: &Formula| Formula::and(l.clone(), r.clone());
        let or = |l: &Formula, r: &Formula| Formula::or(l.clone(), r.clone());
        let neg = |l: &Formula| Formula::neg(l.clone());
        match self {
            Rule::Identity => (vec![], s(&f[0], &f[0])),
            Rule::AndElimLeft => (vec![], s(&and(&f[0], &f[1]), &f[0])),
            Rule::AndElimRight => (vec![], s(&and(&f[0], &f[1]), &f[1])),
            Rule::OrIntroLeft => (vec![], s(&f[0], &or(&f[0], &f[1]))),
            Rule::OrIntroRight => (vec![], s(&f[0], &or(&f[1], &f[0]))),
            Rule::DoubleNegIntro => (vec![], s(&f[0], &neg(&neg(&f[0])))),
            Rule::DoubleNegElim => (vec![], s(&neg(&neg(&f[0])), &f[0])),
            Rule::Explosion => (vec![], s(&and(&f[0], &neg(&f[0])), &f[1])),
            Rule::Transitivity => (vec![s(&f[0], &f[1]), s(&f[1], &f[2])], s(&f[0], &f[2])),
            Rule::AndIntro => (vec![s(&f[0], &f[1]), s(&f[0], &f[2])], s(&f[0], &and(&f[1], &f[2]))),
            Rule::OrElim => (vec![s(&f[0], &f[2]), s(&f[1], &f[2])], s(&or(&f[0], &f[1]), &f[2])),
            Rule::Contraposition => (vec![s(&f[0], &f[1])], s(&neg(&f[1]), &neg(&f[0]))),
            Rule::CasesWithSide => (
                vec![s(&and(&f[0], &f[1]), &f[3]), s(&and(&f[0], &f[2]), &f[3])],
                s(&and(&f[0], &or(&f[1], &f[2])), &f[3]),
            ),
            Rule::Pseudocomplement => (
                vec![s(&and(&f[0], &f[1]), &Formula::contradiction(f[2].clone()))],
                s(&f[1], &neg(&f[0])),
            ),
        }
    }

    /// Whether `conclusion` follows from `premises` by one application.
    pub fn is_instance(self, premises: &[&Sequent], c: &Sequent) -> bool {
        use Formula::{And, Neg, Or};
        if premises.len() != self.premise_count() {
            return false;
        }
        match self {
            Rule::Identity => c.lhs == c.rhs,
            Rule::AndElimLeft => matches!(&c.lhs, And(l, _) if **l == c.rhs),
            Rule::AndElimRight => matches!(&c.lhs, And(_, r) if **r == c.rhs),
            Rule::OrIntroLeft => matches!(&c.rhs, Or(l, _) if **l == c.lhs),
            Rule::OrIntroRight => matches!(&c.rhs, Or(_, r) if **r == c.lhs),
            Rule::DoubleNegIntro => matches!(&c.rhs, Neg(a) if matches!(&**a, Neg(b) if **b == c.lhs)),
            Rule::DoubleNegElim => matches!(&c.lhs, Neg(a) if matches!(&**a, Neg(b) if **b == c.rhs)),
            Rule::Explosion => c.lhs.contradiction_base().is_some(),
            Rule::Transitivity => {
                let (a, b) = (premises[0], premises[1]);
                a.lhs == c.lhs && a.rhs == b.lhs && b.rhs == c.rhs
            }
            Rule::AndIntro => {
                let (a, b) = (premises[0], premises[1]);
                a.lhs == c.lhs
                    && b.lhs == c.lhs
                    && matches!(&c.rhs, And(l, r) if **l == a.rhs && **r == b.rhs)
            }
            Rule::OrElim => {
                let (a, b) = (premises[0], premises[1]);
                a.rhs == c.rhs
                    && b.rhs == c.rhs
                    && matches!(&c.lhs, Or(l, r) if **l == a.lhs && **r == b.lhs)
            }
            Rule::Contraposition => {
                let a = premises[0];
                c.lhs == Formula::neg(a.rhs.clone()) && c.rhs == Formula::neg(a.lhs.clone())
            }
            Rule::CasesWithSide => {
                let (a, b) = (premises[0], premises[1]);
                let And(alpha, cases) = &c.lhs else {
                    return false;
                };
                let Or(phi, psi) = &**cases else {
                    return false;
                };
                a.rhs == c.rhs
                    && b.rhs == c.rhs
                    && a.lhs == Formula::and((**alpha).clone(), (**phi).clone())
                    && b.lhs == Formula::and((**alpha).clone(), (**psi).clone())
            }
            Rule::Pseudocomplement => {
                let a = premises[0];
                let And(phi, psi) = &a.lhs else {
                    return false;
                };
                a.rhs.contradiction_base().is_some()
                    && c.lhs == **psi
                    && c.rhs == Formula::neg((**phi).clone())
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// One derived sequent with the rule and earlier steps that justify it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub sequent: Sequent,
    pub rule: Rule,
    pub premises: Vec<usize>,
}

/// A derivation whose last step is the derived sequent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn conclusion(&self) -> Option<&Sequent> {
        self.steps.last().map(|s| &s.sequent)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            write!(f, "{:>3}. {}    [{}", i + 1, step.sequent, step.rule)?;
            if !step.premises.is_empty() {
                let refs: Vec<String> = step.premises.iter().map(|p| (p + 1).to_string()).collect();
                write!(f, " from {}", refs.join(", "))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("empty derivation")]
    Empty,
    #[error("step {step}: rule {rule} is not admitted in {logic}")]
    RuleNotAdmitted { step: usize, rule: Rule, logic: LogicId },
    #[error("step {step}: premise {premise} does not precede it")]
    ForwardReference { step: usize, premise: usize },
    #[error("step {step}: not an instance of {rule}")]
    NotAnInstance { step: usize, rule: Rule },
    #[error("derivation ends in {found}, expected {expected}")]
    WrongConclusion { found: Sequent, expected: Sequent },
}

/// Replays a derivation: every step must be an instance of an admitted rule
/// applied to earlier steps, and the last step must be `goal`.
pub fn check_derivation(d: &Derivation, logic: LogicId, goal: &Sequent) -> Result<(), TraceError> {
    let rules = logic.rules();
    for (i, step) in d.steps.iter().enumerate() {
        if !rules.contains(&step.rule) {
            return Err(TraceError::RuleNotAdmitted {
                step: i,
                rule: step.rule,
                logic,
            });
        }
        if let Some(&p) = step.premises.iter().find(|&&p| p >= i) {
            return Err(TraceError::ForwardReference { step: i, premise: p });
        }
        let premises: Vec<&Sequent> = step.premises.iter().map(|&p| &d.steps[p].sequent).collect();
        if !step.rule.is_instance(&premises, &step.sequent) {
            return Err(TraceError::NotAnInstance {
                step: i,
                rule: step.rule,
            });
        }
    }
    let last = d.conclusion().ok_or(TraceError::Empty)?;
    if last != goal {
        return Err(TraceError::WrongConclusion {
            found: last.clone(),
            expected: goal.clone(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn seq(s: &str) -> Sequent {
        s.parse().unwrap()
    }

    fn step(s: &str, rule: Rule, premises: &[usize]) -> Step {
        Step {
            sequent: seq(s),
            rule,
            premises: premises.to_vec(),
        }
    }

    #[test]
    fn instances_are_recognized() {
        let letters: Vec<Formula> = ["a", "b & c", "~d", "e | f"].iter().map(|s| parse(s).unwrap()).collect();
        for logic in LogicId::ALL {
            for rule in logic.rules() {
                let (premises, conclusion) = rule.instance(&letters[..rule.letters()]);
                let refs: Vec<&Sequent> = premises.iter().collect();
                assert!(rule.is_instance(&refs, &conclusion), "{rule}");
            }
        }
    }

    #[test]
    fn hand_derivation_replays() {
        // ~~~p |- ~p: double negation intro, then contraposition
        let d = Derivation {
            steps: vec![
                step("p |- ~~p", Rule::DoubleNegIntro, &[]),
                step("~~~p |- ~p", Rule::Contraposition, &[0]),
            ],
        };
        assert_eq!(check_derivation(&d, LogicId::Fundamental, &seq("~~~p |- ~p")), Ok(()));
        assert!(matches!(
            check_derivation(&d, LogicId::Fundamental, &seq("p |- p")),
            Err(TraceError::WrongConclusion { .. })
        ));
    }

    #[test]
    fn replay_rejects_bad_steps() {
        let d = Derivation {
            steps: vec![step("~~p |- p", Rule::DoubleNegElim, &[])],
        };
        assert!(check_derivation(&d, LogicId::Ortho, &seq("~~p |- p")).is_ok());
        assert!(matches!(
            check_derivation(&d, LogicId::Fundamental, &seq("~~p |- p")),
            Err(TraceError::RuleNotAdmitted { .. })
        ));
        let d = Derivation {
            steps: vec![step("p & q |- q", Rule::AndElimLeft, &[])],
        };
        assert!(matches!(
            check_derivation(&d, LogicId::Fundamental, &seq("p & q |- q")),
            Err(TraceError::NotAnInstance { .. })
        ));
        let d = Derivation {
            steps: vec![step("~q |- ~p", Rule::Contraposition, &[0])],
        };
        assert!(matches!(
            check_derivation(&d, LogicId::Fundamental, &seq("~q |- ~p")),
            Err(TraceError::ForwardReference { .. })
        ));
    }
}
