#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;
use workbench_core::formula::Formula;
use workbench_core::frame::{enumerate_frames, EnumerationOptions, Frame, FrameClass, StateSet};
use workbench_core::semantics::Model;

pub const VARS: [&str; 3] = ["p", "q", "r"];

/// Formulas over `vars` with at most `depth` nested connectives.
pub fn formula(vars: &'static [&'static str], depth: u32, with_or: bool) -> BoxedStrategy<Formula> {
    let leaf = proptest::sample::select(vars).prop_map(Formula::var);
    leaf.prop_recursive(depth, 32, 2, move |inner| {
        let mut ops = vec![
            inner.clone().prop_map(Formula::neg).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)).boxed(),
        ];
        if with_or {
            ops.push((inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)).boxed());
        }
        proptest::strategy::Union::new(ops)
    })
    .boxed()
}

pub fn random_formula<R: Rng>(rng: &mut R, vars: &[&str], depth: u32, with_or: bool) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return Formula::var(vars[rng.gen_range(0..vars.len())]);
    }
    let arms = if with_or { 3 } else { 2 };
    match rng.gen_range(0..arms) {
        0 => Formula::neg(random_formula(rng, vars, depth - 1, with_or)),
        1 => Formula::and(
            random_formula(rng, vars, depth - 1, with_or),
            random_formula(rng, vars, depth - 1, with_or),
        ),
        _ => Formula::or(
            random_formula(rng, vars, depth - 1, with_or),
            random_formula(rng, vars, depth - 1, with_or),
        ),
    }
}

/// An arbitrary relation on `n` states given by the low `n*n` bits of `bits`.
pub fn frame_from_bits(n: usize, bits: u64, reflexive: bool) -> Frame {
    let mut pairs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if bits & (1 << (x * n + y)) != 0 || (reflexive && x == y) {
                pairs.push((x, y));
            }
        }
    }
    Frame::new((0..n).map(|i| i.to_string()).collect(), pairs).unwrap()
}

pub fn frames_up_to(max: usize, class: &FrameClass) -> Vec<Frame> {
    (1..=max)
        .flat_map(|n| enumerate_frames(n, class, &EnumerationOptions { max_size: max, dedup: true }).unwrap())
        .collect()
}

pub fn refl_sym() -> FrameClass {
    FrameClass::reflexive().with_symmetric()
}

pub fn refl_pseudo() -> FrameClass {
    FrameClass::reflexive().with_pseudosymmetric()
}

/// Every model on `frame` valuing `vars` by fixpoints.
pub fn fixpoint_models(frame: &Frame, vars: &[&str]) -> Vec<Model> {
    let fps = frame.fixpoints().unwrap();
    valuations(frame, vars, &fps)
}

/// Every model on `frame` valuing `vars` by arbitrary sets.
pub fn all_models(frame: &Frame, vars: &[&str]) -> Vec<Model> {
    let sets: Vec<StateSet> = StateSet::all_subsets(frame.len()).collect();
    valuations(frame, vars, &sets)
}

fn valuations(frame: &Frame, vars: &[&str], sets: &[StateSet]) -> Vec<Model> {
    let mut out = Vec::new();
    let total = sets.len().pow(vars.len() as u32);
    for mut code in 0..total {
        let mut val = BTreeMap::new();
        for v in vars {
            val.insert(v.to_string(), sets[code % sets.len()].clone());
            code /= sets.len();
        }
        out.push(Model::new(frame.clone(), val).unwrap());
    }
    out
}
