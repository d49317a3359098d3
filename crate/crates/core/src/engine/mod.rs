//! Sequent checking for the five logics: forward rule saturation finds
//! derivations, countermodel search over the logic's frame class finds
//! refutations, and anything neither half settles is reported as unknown.

pub mod rules;
pub mod saturate;
pub mod search;

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::formula::Sequent;
use crate::frame::FrameClass;
use crate::io::ModelFile;
use crate::semantics::SemanticsId;

pub use rules::{check_derivation, Derivation, Rule, Step, TraceError};
pub use saturate::{build_universe, saturate, Saturation, SaturationError, SaturationOptions};
pub use search::{check_witness, find_countermodel, SearchOptions, SearchOutcome, Witness, WitnessSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogicId {
    Fundamental,
    Ortho,
    Compatibility,
    Intuitionistic,
    Classical,
}

/// Rules a logic adds to the base intro-elim rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Extensions {
    pub double_negation_elim: bool,
    pub cases_with_side: bool,
    pub pseudocomplement: bool,
}

impl LogicId {
    pub const ALL: [LogicId; 5] = [
        LogicId::Fundamental,
        LogicId::Ortho,
        LogicId::Compatibility,
        LogicId::Intuitionistic,
        LogicId::Classical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LogicId::Fundamental => "fundamental",
            LogicId::Ortho => "ortho",
            LogicId::Compatibility => "compatibility",
            LogicId::Intuitionistic => "intuitionistic",
            LogicId::Classical => "classical",
        }
    }

    /// Classical logic gets both strengthenings of orthologic; either one
    /// yields the same logic, and having both shortens derivations.
    pub fn extensions(self) -> Extensions {
        let (dne, cases, pseudo) = match self {
            LogicId::Fundamental => (false, false, false),
            LogicId::Ortho => (true, false, false),
            LogicId::Compatibility => (false, true, false),
            LogicId::Intuitionistic => (false, true, true),
            LogicId::Classical => (true, true, true),
        };
        Extensions {
            double_negation_elim: dne,
            cases_with_side: cases,
            pseudocomplement: pseudo,
        }
    }

    pub fn rules(self) -> Vec<Rule> {
        let ext = self.extensions();
        let mut out = Rule::BASE.to_vec();
        if ext.double_negation_elim {
            out.push(Rule::DoubleNegElim);
        }
        if ext.cases_with_side {
            out.push(Rule::CasesWithSide);
        }
        if ext.pseudocomplement {
            out.push(Rule::Pseudocomplement);
        }
        out
    }

    /// The frames the logic is sound and complete for.
    pub fn frame_class(self) -> FrameClass {
        let r = FrameClass::reflexive();
        match self {
            LogicId::Fundamental => r.with_pseudosymmetric(),
            LogicId::Ortho | LogicId::Compatibility => r.with_symmetric(),
            LogicId::Intuitionistic => r.with_transitive(),
            LogicId::Classical => r.with_symmetric().with_compossible(),
        }
    }

    pub fn semantics(self) -> SemanticsId {
        match self {
            LogicId::Compatibility => SemanticsId::Fine,
            _ => SemanticsId::Fixpoint,
        }
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LogicId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LogicId::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| {
                format!("unknown logic `{s}` (expected fundamental, ortho, compatibility, intuitionistic or classical)")
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub max_size: usize,
    pub universe_depth: usize,
    pub universe_cap: usize,
    pub assignment_cap: u64,
    /// Try the Sorites models as countermodels before enumerating.
    pub seeds: bool,
    /// Also search for a countermodel when a derivation was found, and fail
    /// with [`CheckError::Conflict`] if one turns up.
    pub cross_check: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        let sat = SaturationOptions::default();
        let search = SearchOptions::default();
        CheckOptions {
            max_size: search.max_size,
            universe_depth: sat.universe_depth,
            universe_cap: sat.universe_cap,
            assignment_cap: search.assignment_cap,
            seeds: search.seeds,
            cross_check: false,
        }
    }
}

/// What the two halves covered when neither settled the goal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub universe_depth: usize,
    /// `None` when the universe exceeded the cap and saturation was skipped.
    pub universe_size: Option<usize>,
    /// Largest frame size searched exhaustively.
    pub searched_size: usize,
    /// Whether the search stopped early at the assignment cap.
    pub cap_reached: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid(Derivation),
    Invalid(Witness),
    Unknown(Bounds),
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Valid(_) => VerdictKind::Valid,
            Verdict::Invalid(_) => VerdictKind::Invalid,
            Verdict::Unknown(_) => VerdictKind::Unknown,
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid(_))
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Verdict::Invalid(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Valid,
    Invalid,
    Unknown,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Valid => "valid",
            VerdictKind::Invalid => "invalid",
            VerdictKind::Unknown => "unknown",
        })
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Witness", 4)?;
        st.serialize_field("state", self.state_label())?;
        st.serialize_field("semantics", &self.semantics)?;
        st.serialize_field("source", &self.source)?;
        st.serialize_field("model", &ModelFile::from_model(&self.model, Some(self.semantics)))?;
        st.end()
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Verdict", 2)?;
        st.serialize_field("verdict", &self.kind())?;
        match self {
            Verdict::Valid(d) => st.serialize_field("derivation", &d.steps)?,
            Verdict::Invalid(w) => st.serialize_field("witness", w)?,
            Verdict::Unknown(b) => st.serialize_field("bounds", b)?,
        }
        st.end()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("{goal} has both a derivation and a countermodel in {logic}")]
    Conflict { goal: Sequent, logic: LogicId },
}

/// Decides `goal` in `logic` within the given budgets. Saturation runs
/// first; the countermodel search runs when it finds nothing (or always,
/// with `cross_check`).
pub fn check(goal: &Sequent, logic: LogicId, options: &CheckOptions) -> Result<Verdict, CheckError> {
    let sat_opts = SaturationOptions {
        universe_depth: options.universe_depth,
        universe_cap: options.universe_cap,
        stop_at_goal: true,
    };
    let (derivation, universe_size) = match saturate(goal, logic, &sat_opts) {
        Ok(sat) => (sat.derivation(goal), Some(sat.universe().len())),
        Err(SaturationError::UniverseTooLarge { .. }) => (None, None),
    };
    if let Some(d) = &derivation {
        if !options.cross_check {
            return Ok(Verdict::Valid(d.clone()));
        }
    }
    let search_opts = SearchOptions {
        max_size: options.max_size,
        assignment_cap: options.assignment_cap,
        seeds: options.seeds,
    };
    let outcome = find_countermodel(goal, logic, &search_opts);
    match (derivation, outcome) {
        (Some(_), SearchOutcome::Found(_)) => Err(CheckError::Conflict {
            goal: goal.clone(),
            logic,
        }),
        (Some(d), _) => Ok(Verdict::Valid(d)),
        (None, SearchOutcome::Found(w)) => Ok(Verdict::Invalid(w)),
        (None, SearchOutcome::Exhausted { max_size }) => Ok(Verdict::Unknown(Bounds {
            universe_depth: options.universe_depth,
            universe_size,
            searched_size: max_size,
            cap_reached: false,
        })),
        (None, SearchOutcome::CapExceeded { searched_up_to, .. }) => Ok(Verdict::Unknown(Bounds {
            universe_depth: options.universe_depth,
            universe_size,
            searched_size: searched_up_to,
            cap_reached: true,
        })),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Agreement {
    Agree,
    Disagree,
    Inconclusive,
}

/// Compares a sequent in orthologic with its double-negation translation in
/// fundamental logic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub sequent: Sequent,
    pub translated: Sequent,
    pub ortho: Verdict,
    pub fundamental: Verdict,
    pub agreement: Agreement,
}

pub fn gg_embedding_check(goal: &Sequent, options: &CheckOptions) -> Result<EmbeddingReport, CheckError> {
    let translated = goal.godel_gentzen();
    let ortho = check(goal, LogicId::Ortho, options)?;
    let fundamental = check(&translated, LogicId::Fundamental, options)?;
    let agreement = match (ortho.kind(), fundamental.kind()) {
        (VerdictKind::Unknown, _) | (_, VerdictKind::Unknown) => Agreement::Inconclusive,
        (a, b) if a == b => Agreement::Agree,
        _ => Agreement::Disagree,
    };
    Ok(EmbeddingReport {
        sequent: goal.clone(),
        translated,
        ortho,
        fundamental,
        agreement,
    })
}
