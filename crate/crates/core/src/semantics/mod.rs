//! Models over frames and the two truth definitions: the fixpoint semantics,
//! where disjunction is the closure of the union, and Fine's semantics, where
//! it is the plain union.

pub(crate) mod compiled;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, Sequent};
use crate::frame::{Frame, FrameError, StateSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemanticsId {
    Fixpoint,
    Fine,
}

impl fmt::Display for SemanticsId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemanticsId::Fixpoint => "fixpoint",
            SemanticsId::Fine => "fine",
        })
    }
}

impl FromStr for SemanticsId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixpoint" => Ok(SemanticsId::Fixpoint),
            "fine" => Ok(SemanticsId::Fine),
            other => Err(format!("unknown semantics `{other}` (expected fixpoint or fine)")),
        }
    }
}

/// A variable whose value is not closed at a state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub var: String,
    pub state: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "V({}) is not a fixpoint: {} is in its closure but not in it",
            self.var, self.state
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("valuation is not a fixpoint valuation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    NotFixpoint(Vec<Violation>),
    #[error("variable `{0}` has no value in the model")]
    UnknownVariable(String),
}

/// A frame together with a valuation of variables as sets of states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    frame: Frame,
    valuation: BTreeMap<String, StateSet>,
}

impl Model {
    pub fn new(frame: Frame, valuation: BTreeMap<String, StateSet>) -> Result<Model, SemanticsError> {
        for set in valuation.values() {
            frame.check_set(set)?;
        }
        Ok(Model { frame, valuation })
    }

    /// Builds a model whose valuation lists state labels per variable.
    pub fn from_labels<I, S>(frame: Frame, valuation: I) -> Result<Model, SemanticsError>
    where
        I: IntoIterator<Item = (String, Vec<S>)>,
        S: AsRef<str>,
    {
        let mut map = BTreeMap::new();
        for (var, labels) in valuation {
            let mut set = frame.empty_set();
            for l in labels {
                set.insert(frame.state(l.as_ref())?);
            }
            map.insert(var, set);
        }
        Ok(Model {
            frame,
            valuation: map,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn valuation(&self) -> &BTreeMap<String, StateSet> {
        &self.valuation
    }

    pub fn value(&self, var: &str) -> Option<&StateSet> {
        self.valuation.get(var)
    }

    pub fn set_value(&mut self, var: impl Into<String>, set: StateSet) -> Result<(), SemanticsError> {
        self.frame.check_set(&set)?;
        self.valuation.insert(var.into(), set);
        Ok(())
    }

    /// Labels of the members of `set`, in state order.
    pub fn labels_of(&self, set: &StateSet) -> Vec<String> {
        set.iter().map(|x| self.frame.label(x).to_string()).collect()
    }

    /// Every `(p, x)` with `x ∈ c(V(p)) \ V(p)`.
    pub fn validate_fixpoint_model(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (var, set) in &self.valuation {
            let closed = self.frame.closure_of(set);
            for x in closed.difference(set).iter() {
                out.push(Violation {
                    var: var.clone(),
                    state: self.frame.label(x).to_string(),
                });
            }
        }
        out
    }
}

/// Evaluates formulas in one model under one semantics.
#[derive(Debug)]
pub struct Evaluator<'m> {
    model: &'m Model,
    semantics: SemanticsId,
    strict: bool,
}

impl<'m> Evaluator<'m> {
    /// Fails for the fixpoint semantics when some value is not a fixpoint.
    pub fn new(model: &'m Model, semantics: SemanticsId) -> Result<Self, SemanticsError> {
        if semantics == SemanticsId::Fixpoint {
            let violations = model.validate_fixpoint_model();
            if !violations.is_empty() {
                return Err(SemanticsError::NotFixpoint(violations));
            }
        }
        Ok(Evaluator {
            model,
            semantics,
            strict: true,
        })
    }

    /// Unknown variables evaluate to the empty set instead of failing.
    pub fn lenient(mut self) -> Self {
        self.strict = false;
        self
    }

    pub fn model(&self) -> &Model {
        self.model
    }

    pub fn eval(&self, f: &Formula) -> Result<StateSet, SemanticsError> {
        let mut memo = HashMap::new();
        self.eval_memo(f, &mut memo)
    }

    fn eval_memo<'f>(
        &self,
        f: &'f Formula,
        memo: &mut HashMap<&'f Formula, StateSet>,
    ) -> Result<StateSet, SemanticsError> {
        if let Some(v) = memo.get(f) {
            return Ok(v.clone());
        }
        let frame = self.model.frame();
        let value = match f {
            Formula::Var(name) => match self.model.value(name) {
                Some(set) => set.clone(),
                None if self.strict => return Err(SemanticsError::UnknownVariable(name.clone())),
                None => frame.empty_set(),
            },
            Formula::Neg(inner) => frame.negation_of(&self.eval_memo(inner, memo)?),
            Formula::And(l, r) => self
                .eval_memo(l, memo)?
                .intersection(&self.eval_memo(r, memo)?),
            Formula::Or(l, r) => {
                let union = self.eval_memo(l, memo)?.union(&self.eval_memo(r, memo)?);
                match self.semantics {
                    SemanticsId::Fixpoint => frame.closure_of(&union),
                    SemanticsId::Fine => union,
                }
            }
        };
        memo.insert(f, value.clone());
        Ok(value)
    }
}

/// The extension of `f` in `model`, in strict mode.
pub fn eval(model: &Model, f: &Formula, semantics: SemanticsId) -> Result<StateSet, SemanticsError> {
    Evaluator::new(model, semantics)?.eval(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Stance {
    /// The state is in the extension.
    pub accepts: bool,
    /// No successor of the state is in the extension.
    pub rejects: bool,
    /// No predecessor of the state is in the extension.
    pub accepts_negation: bool,
}

pub fn accepts_rejects(
    model: &Model,
    f: &Formula,
    x: usize,
    semantics: SemanticsId,
) -> Result<Stance, SemanticsError> {
    let frame = model.frame();
    if x >= frame.len() {
        return Err(FrameError::StateOutOfRange {
            index: x,
            size: frame.len(),
        }
        .into());
    }
    let ext = eval(model, f, semantics)?;
    Ok(Stance {
        accepts: ext.contains(x),
        rejects: !frame.successors(x).intersects(&ext),
        accepts_negation: !frame.predecessors(x).intersects(&ext),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Consequence {
    Holds,
    Counterexample { model_index: usize, state: usize },
}

/// Checks `lhs ⊨ rhs` over every state of every model; the counterexample
/// reported is the first in (model, state) order.
pub fn consequence_over(
    models: &[Model],
    sequent: &Sequent,
    semantics: SemanticsId,
) -> Result<Consequence, SemanticsError> {
    let per_model = models
        .par_iter()
        .map(|m| {
            let ev = Evaluator::new(m, semantics)?;
            let lhs = ev.eval(&sequent.lhs)?;
            let rhs = ev.eval(&sequent.rhs)?;
            Ok(lhs.difference(&rhs).first())
        })
        .collect::<Result<Vec<Option<usize>>, SemanticsError>>()?;
    Ok(per_model
        .into_iter()
        .enumerate()
        .find_map(|(model_index, bad)| bad.map(|state| Consequence::Counterexample { model_index, state }))
        .unwrap_or(Consequence::Holds))
}
