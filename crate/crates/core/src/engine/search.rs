//! Exhaustive countermodel search over the frames of a logic's class.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use super::LogicId;
use crate::formula::{Sequent, SoritesParams, BOTTOM_VAR};
use crate::frame::enumerate::relation_masks;
use crate::frame::{Frame, FrameClass, StateSet, MAX_ENUMERATION_SIZE};
use crate::semantics::compiled::{MaskFrame, Program};
use crate::semantics::{Model, SemanticsId};
use crate::sorites::{build_pseudosymmetric, build_symmetric, Ext, SoritesState};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest frame size enumerated.
    pub max_size: usize,
    /// Budget on valuations tried, summed over all sizes; a size whose
    /// estimate would overrun it is not started.
    pub assignment_cap: u64,
    /// Try the Sorites models before enumerating frames.
    pub seeds: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_size: 5,
            assignment_cap: 400_000_000,
            seeds: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessSource {
    Enumerated { size: usize },
    Sorites { n: usize, delta: usize, pseudosymmetric: bool },
}

/// A model of the logic's class refuting a sequent at a state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub model: Model,
    pub state: usize,
    pub semantics: SemanticsId,
    pub source: WitnessSource,
}

impl Witness {
    pub fn state_label(&self) -> &str {
        self.model.frame().label(self.state)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Witness),
    /// Every frame up to `max_size` was searched.
    Exhausted { max_size: usize },
    /// Sizes up to `searched_up_to` were searched; the next would overrun
    /// the assignment cap.
    CapExceeded { searched_up_to: usize, cap: u64 },
}

struct CachedFrame {
    frame: Frame,
    masks: MaskFrame,
    fixpoints: Vec<u64>,
}

type FrameCache = Mutex<HashMap<(usize, FrameClass), Arc<Vec<CachedFrame>>>>;

fn frames_of(size: usize, class: FrameClass) -> Arc<Vec<CachedFrame>> {
    static CACHE: OnceLock<FrameCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("frame cache").get(&(size, class)) {
        return hit.clone();
    }
    let built: Vec<CachedFrame> = relation_masks(size, &class, true)
        .into_par_iter()
        .map(|m| {
            let frame = Frame::from_mask(size, m);
            let masks = MaskFrame::new(&frame);
            let fixpoints = masks.fixpoints();
            CachedFrame {
                frame,
                masks,
                fixpoints,
            }
        })
        .collect();
    let built = Arc::new(built);
    cache
        .lock()
        .expect("frame cache")
        .entry((size, class))
        .or_insert(built)
        .clone()
}

/// Goal variables split by the side(s) they occur on.
struct Split {
    vars: Vec<String>,
    shared: Vec<usize>,
    lhs_only: Vec<usize>,
    rhs_only: Vec<usize>,
    lhs: Program,
    rhs: Program,
    lhs_slots: Vec<usize>,
    rhs_slots: Vec<usize>,
}

impl Split {
    fn new(goal: &Sequent) -> Split {
        let vars: Vec<String> = goal.vars().into_iter().collect();
        let lv = goal.lhs.vars();
        let rv = goal.rhs.vars();
        let mut split = (Vec::new(), Vec::new(), Vec::new());
        for (i, v) in vars.iter().enumerate() {
            match (lv.contains(v), rv.contains(v)) {
                (true, true) => split.0.push(i),
                (true, false) => split.1.push(i),
                _ => split.2.push(i),
            }
        }
        let lhs = Program::new(&[&goal.lhs]);
        let rhs = Program::new(&[&goal.rhs]);
        let slots = |p: &Program| -> Vec<usize> {
            p.vars()
                .iter()
                .map(|v| vars.iter().position(|w| w == v).expect("goal variable"))
                .collect()
        };
        let lhs_slots = slots(&lhs);
        let rhs_slots = slots(&rhs);
        Split {
            vars,
            shared: split.0,
            lhs_only: split.1,
            rhs_only: split.2,
            lhs,
            rhs,
            lhs_slots,
            rhs_slots,
        }
    }

    fn work(&self, values: u64) -> u64 {
        let pow = |k: usize| values.saturating_pow(k as u32);
        pow(self.shared.len()).saturating_mul(pow(self.lhs_only.len()).saturating_add(pow(self.rhs_only.len())))
    }
}

/// Calls `f` on every assignment of `choices` to the positions `slots` of
/// `assignment`, in lexicographic order, until it returns `true`.
fn each_assignment(
    slots: &[usize],
    choices: &[u64],
    assignment: &mut [u64],
    f: &mut dyn FnMut(&[u64]) -> bool,
) -> bool {
    if choices.is_empty() && !slots.is_empty() {
        return false;
    }
    let mut digits = vec![0usize; slots.len()];
    for &s in slots {
        assignment[s] = choices[0];
    }
    loop {
        if f(assignment) {
            return true;
        }
        let mut i = slots.len();
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < choices.len() {
                assignment[slots[i]] = choices[digits[i]];
                break;
            }
            digits[i] = 0;
            assignment[slots[i]] = choices[0];
        }
    }
}

struct Refutation {
    values: Vec<u64>,
    state: usize,
}

fn refute(
    frame: &MaskFrame,
    choices: &[u64],
    split: &Split,
    semantics: SemanticsId,
) -> Option<Refutation> {
    let mut scratch = Vec::new();
    let mut lhs_vals = vec![0u64; split.lhs_slots.len()];
    let mut rhs_vals = vec![0u64; split.rhs_slots.len()];
    let eval_side = |prog: &Program, slots: &[usize], buf: &mut Vec<u64>, a: &[u64], scratch: &mut Vec<u64>| {
        for (k, &s) in slots.iter().enumerate() {
            buf[k] = a[s];
        }
        prog.run(frame, buf, semantics, scratch)[0]
    };
    let full = frame.full();
    let mut assignment = vec![0u64; split.vars.len()];
    let mut found = None;

    each_assignment(&split.shared, choices, &mut assignment, &mut |shared| {
        let mut a = shared.to_vec();
        // states in rhs under every rhs-only assignment
        let mut b = full;
        each_assignment(&split.rhs_only, choices, &mut a, &mut |a| {
            b &= eval_side(&split.rhs, &split.rhs_slots, &mut rhs_vals, a, &mut scratch);
            b == 0
        });
        let mut hit = None;
        each_assignment(&split.lhs_only, choices, &mut a, &mut |a| {
            let bad = eval_side(&split.lhs, &split.lhs_slots, &mut lhs_vals, a, &mut scratch) & !b;
            if bad == 0 {
                return false;
            }
            hit = Some((a.to_vec(), bad.trailing_zeros() as usize));
            true
        });
        let Some((mut a, x)) = hit else {
            return false;
        };
        each_assignment(&split.rhs_only, choices, &mut a.clone(), &mut |r| {
            if eval_side(&split.rhs, &split.rhs_slots, &mut rhs_vals, r, &mut scratch) & (1 << x) == 0 {
                for &s in &split.rhs_only {
                    a[s] = r[s];
                }
                true
            } else {
                false
            }
        });
        found = Some(Refutation { values: a, state: x });
        true
    });
    found
}

fn witness_model(frame: &Frame, split: &Split, values: &[u64]) -> Model {
    let valuation: BTreeMap<String, StateSet> = split
        .vars
        .iter()
        .zip(values)
        .map(|(v, &m)| (v.clone(), StateSet::from_mask(frame.len(), m)))
        .collect();
    Model::new(frame.clone(), valuation).expect("valuation over the frame")
}

fn choices_for(frame: &CachedFrame, semantics: SemanticsId) -> Vec<u64> {
    match semantics {
        SemanticsId::Fixpoint => frame.fixpoints.clone(),
        SemanticsId::Fine => (0..(1u64 << frame.masks.n)).collect(),
    }
}

fn search_class(
    split: &Split,
    class: FrameClass,
    semantics: SemanticsId,
    sizes: std::ops::RangeInclusive<usize>,
    cap: u64,
    spent: &mut u64,
) -> Result<Option<Witness>, usize> {
    for size in sizes {
        let frames = frames_of(size, class);
        let work: u64 = frames
            .iter()
            .map(|f| {
                let count = match semantics {
                    SemanticsId::Fixpoint => f.fixpoints.len() as u64,
                    SemanticsId::Fine => 1 << size,
                };
                split.work(count)
            })
            .fold(0u64, u64::saturating_add);
        if spent.saturating_add(work) > cap {
            return Err(size - 1);
        }
        *spent += work;
        let hit = frames.par_iter().find_map_first(|f| {
            let choices = choices_for(f, semantics);
            refute(&f.masks, &choices, split, semantics).map(|r| Witness {
                model: witness_model(&f.frame, split, &r.values),
                state: r.state,
                semantics,
                source: WitnessSource::Enumerated { size },
            })
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// The series length `n` when every goal variable is one of `p0 .. p(n-1)`
/// (or the reserved contradiction variable) and `n ≥ 3`.
fn series_length(goal: &Sequent) -> Option<usize> {
    let mut n = 0;
    for v in goal.vars() {
        if v == BOTTOM_VAR {
            continue;
        }
        let k: usize = v.strip_prefix('p')?.parse().ok()?;
        if v != format!("p{k}") {
            return None;
        }
        n = n.max(k + 1);
    }
    (n >= 3).then_some(n)
}

fn seed_witness(goal: &Sequent, logic: LogicId, split: &Split) -> Option<Witness> {
    let n = series_length(goal)?;
    let class = logic.frame_class();
    let semantics = logic.semantics();
    for delta in 1..n - 1 {
        let params = SoritesParams::new(n, delta).ok()?;
        for pseudo in [false, true] {
            let built = if pseudo {
                build_pseudosymmetric(params)
            } else {
                build_symmetric(params)
            };
            if built.states().len() > 64 || !built.frame().class_check().satisfies(&class) {
                continue;
            }
            let focus = built.index_of(SoritesState::Pair(Ext::Fin(0), Ext::Fin(n - 1)));
            let mut model = built.model().clone();
            for v in &split.vars {
                if model.value(v).is_none() {
                    let empty = model.frame().empty_set();
                    model.set_value(v.clone(), empty).expect("same frame");
                }
            }
            let masks = MaskFrame::new(model.frame());
            let values: Vec<u64> = split.vars.iter().map(|v| model.value(v).expect("assigned").mask()).collect();
            // every variable is fixed, so each side has one assignment
            let fixed = split;
            let mut scratch = Vec::new();
            let lv: Vec<u64> = fixed.lhs_slots.iter().map(|&s| values[s]).collect();
            let rv: Vec<u64> = fixed.rhs_slots.iter().map(|&s| values[s]).collect();
            let l = fixed.lhs.run(&masks, &lv, semantics, &mut scratch)[0];
            let r = fixed.rhs.run(&masks, &rv, semantics, &mut scratch)[0];
            let bad = l & !r;
            if bad == 0 {
                continue;
            }
            let state = match focus {
                Some(x) if bad & (1 << x) != 0 => x,
                _ => bad.trailing_zeros() as usize,
            };
            return Some(Witness {
                model,
                state,
                semantics,
                source: WitnessSource::Sorites {
                    n,
                    delta,
                    pseudosymmetric: pseudo,
                },
            });
        }
    }
    None
}

/// Searches the logic's models for one refuting `goal`.
pub fn find_countermodel(goal: &Sequent, logic: LogicId, options: &SearchOptions) -> SearchOutcome {
    let split = Split::new(goal);
    let semantics = logic.semantics();
    let max_size = options.max_size.clamp(1, MAX_ENUMERATION_SIZE);
    let mut spent = 0u64;

    if logic == LogicId::Classical {
        let identity = FrameClass::reflexive().with_identity();
        if let Ok(Some(w)) = search_class(&split, identity, semantics, 1..=1, u64::MAX, &mut spent) {
            return SearchOutcome::Found(w);
        }
    }
    if options.seeds {
        if let Some(w) = seed_witness(goal, logic, &split) {
            return SearchOutcome::Found(w);
        }
    }
    match search_class(
        &split,
        logic.frame_class(),
        semantics,
        1..=max_size,
        options.assignment_cap.saturating_add(spent),
        &mut spent,
    ) {
        Ok(Some(w)) => SearchOutcome::Found(w),
        Ok(None) => SearchOutcome::Exhausted { max_size },
        Err(searched_up_to) => SearchOutcome::CapExceeded {
            searched_up_to,
            cap: options.assignment_cap,
        },
    }
}

/// Whether `w` is in the class of `logic` and refutes `goal` at its state,
/// evaluated with the general evaluator.
pub fn check_witness(w: &Witness, goal: &Sequent, logic: LogicId) -> bool {
    use crate::semantics::Evaluator;
    if w.semantics != logic.semantics() || !w.model.frame().class_check().satisfies(&logic.frame_class()) {
        return false;
    }
    let Ok(ev) = Evaluator::new(&w.model, w.semantics) else {
        return false;
    };
    match (ev.eval(&goal.lhs), ev.eval(&goal.rhs)) {
        (Ok(l), Ok(r)) => l.contains(w.state) && !r.contains(w.state),
        _ => false,
    }
}
