//! One line per acceptance criterion. Run with
//! `cargo test -p workbench-core --test acceptance`; exits non-zero if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use workbench_core::engine::{
    check, find_countermodel, gg_embedding_check, Agreement, CheckOptions, LogicId, Rule, SearchOptions,
    SearchOutcome, Verdict, WitnessSource,
};
use workbench_core::formula::{parse_sequent, sorites_formula, Formula, Sequent, SoritesParams};
use workbench_core::frame::{FrameClass, StateSet};
use workbench_core::lattice::{Lattice, LatticeOrder};
use workbench_core::semantics::{Evaluator, SemanticsId};
use workbench_core::sorites::{build_pseudosymmetric, build_symmetric, verify_facts};

// Runtime budgets per criterion.
const BUDGET_1: Duration = Duration::from_secs(10);
const BUDGET_2: Duration = Duration::from_secs(60);
const BUDGET_5: Duration = Duration::from_secs(300);

const RANDOM_CLOSURE_INSTANCES: usize = 1000;
const FORMULAS_PER_MODEL: usize = 12;
const GG_MIN_DEFINITE: usize = 50;
const RANDOM_LATTICES: usize = 5;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("sorites facts", sorites_facts),
        ("consistency split", consistency_split),
        ("closure laws", closure_laws),
        ("fixpoint lemma, persistence, or-free coincidence", semantic_lemmas),
        ("rule soundness", soundness_sweep),
        ("known separations", separations),
        ("double-negation translation agreement", translation_agreement),
        ("prime filter representation", representation),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} [{name}] {} ({:.1}s)",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn grid() -> Vec<SoritesParams> {
    (3..=8)
        .flat_map(|n| (1..=3.min(n - 2)).map(move |d| SoritesParams::new(n, d).unwrap()))
        .collect()
}

fn sorites_facts() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for params in grid() {
        for pseudo in [false, true] {
            let report = verify_facts(params, pseudo);
            for f in report.failures() {
                failures.push(format!(
                    "({},{}) {}: {} missing {:?} extra {:?}",
                    params.n(),
                    params.delta(),
                    f.fact,
                    f.claim,
                    f.missing,
                    f.extra
                ));
            }
        }
    }
    let p = SoritesParams::new(4, 1).unwrap();
    let s_states = build_symmetric(p).states().len();
    let r_states = build_pseudosymmetric(p).states().len();
    let counts_ok = s_states == 12 && r_states == 16;
    let in_time = start.elapsed() < BUDGET_1;
    let pass = failures.is_empty() && counts_ok && in_time;
    let mut detail = format!("states {s_states}/{r_states}; {} failed checks", failures.len());
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    outcome(pass, detail)
}

fn sorites_goal() -> Sequent {
    Sequent::new(sorites_formula(SoritesParams::new(4, 1).unwrap()), Formula::bottom())
}

fn consistency_split() -> Outcome {
    let start = Instant::now();
    let goal = sorites_goal();
    let opts = CheckOptions::default();
    let mut notes = Vec::new();

    let ortho = match check(&goal, LogicId::Ortho, &opts) {
        Ok(Verdict::Invalid(w)) => {
            let ok = w.state_label() == "(0,3)"
                && matches!(w.source, WitnessSource::Sorites { n: 4, delta: 1, pseudosymmetric: false })
                && w.model.frame().len() == 12;
            notes.push(format!("ortho invalid at {}", w.state_label()));
            ok
        }
        other => {
            notes.push(format!("ortho {other:?}"));
            false
        }
    };
    let compat = match check(&goal, LogicId::Compatibility, &opts) {
        Ok(Verdict::Invalid(w)) => {
            notes.push(format!("compatibility invalid at {}", w.state_label()));
            w.semantics == SemanticsId::Fine
        }
        other => {
            notes.push(format!("compatibility {:?}", other.map(|v| v.kind())));
            false
        }
    };
    let classical = matches!(check(&goal, LogicId::Classical, &opts), Ok(Verdict::Valid(_)));
    notes.push(format!("classical valid: {classical}"));
    let intu_verdict = check(&goal, LogicId::Intuitionistic, &opts);
    let intu_check = matches!(intu_verdict, Ok(ref v) if !v.is_invalid());
    let sweep = find_countermodel(
        &goal,
        LogicId::Intuitionistic,
        &SearchOptions {
            max_size: 5,
            seeds: false,
            ..SearchOptions::default()
        },
    );
    let intu_sweep = matches!(sweep, SearchOutcome::Exhausted { max_size: 5 });
    notes.push(format!("intuitionistic not invalid: {intu_check}, sweep to 5 empty: {intu_sweep}"));
    let in_time = start.elapsed() < BUDGET_2;
    outcome(ortho && compat && classical && intu_check && intu_sweep && in_time, notes.join("; "))
}

fn closure_laws() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut violations = 0;
    for _ in 0..RANDOM_CLOSURE_INSTANCES {
        let n = rng.gen_range(1..=5);
        let frame = frame_from_bits(n, rng.gen(), false);
        let lim = (1u64 << n) - 1;
        let a = StateSet::from_mask(n, rng.gen::<u64>() & lim);
        let b = a.union(&StateSet::from_mask(n, rng.gen::<u64>() & lim));
        let ca = frame.closure(&a).unwrap();
        if !a.is_subset(&ca) || frame.closure(&ca).unwrap() != ca || !ca.is_subset(&frame.closure(&b).unwrap()) {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("{RANDOM_CLOSURE_INSTANCES} instances, {violations} violations"))
}

fn semantic_lemmas() -> Outcome {
    let mut frames = frames_up_to(4, &refl_sym());
    frames.extend(frames_up_to(4, &refl_pseudo()));
    let mut rng = StdRng::seed_from_u64(11);
    let formulas: Vec<Formula> = (0..FORMULAS_PER_MODEL)
        .map(|_| random_formula(&mut rng, &["p", "q"], 4, true))
        .collect();
    let or_free: Vec<Formula> = (0..FORMULAS_PER_MODEL)
        .map(|_| random_formula(&mut rng, &["p", "q"], 4, false))
        .collect();
    let mut models = 0;
    let mut violations = Vec::new();
    for frame in &frames {
        for m in fixpoint_models(frame, &["p", "q"]) {
            models += 1;
            let fix = Evaluator::new(&m, SemanticsId::Fixpoint).unwrap();
            let fine = Evaluator::new(&m, SemanticsId::Fine).unwrap();
            for f in &formulas {
                let ext = fix.eval(f).unwrap();
                if !frame.is_fixpoint(&ext).unwrap() {
                    violations.push(format!("not a fixpoint: {f}"));
                }
                for x in 0..frame.len() {
                    for y in 0..frame.len() {
                        if frame.pre_refines(x, y).unwrap() && ext.contains(y) && !ext.contains(x) {
                            violations.push(format!("persistence: {f}"));
                        }
                    }
                }
            }
            for f in &or_free {
                if fix.eval(f).unwrap() != fine.eval(f).unwrap() {
                    violations.push(format!("semantics differ: {f}"));
                }
            }
        }
    }
    let mut detail = format!(
        "{} frames, {models} models, {} formulas each, {} violations",
        frames.len(),
        2 * FORMULAS_PER_MODEL,
        violations.len()
    );
    if let Some(v) = violations.first() {
        detail.push_str(&format!("; first: {v}"));
    }
    outcome(violations.is_empty(), detail)
}

/// Every instance of every rule of `logic` with letters drawn from `p, q, r`.
fn rule_instances(logic: LogicId) -> Vec<(Rule, Vec<Sequent>, Sequent)> {
    let atoms: Vec<Formula> = ["p", "q", "r"].into_iter().map(Formula::var).collect();
    let mut out = Vec::new();
    for rule in logic.rules() {
        let k = rule.letters();
        for mut code in 0..atoms.len().pow(k as u32) {
            let mut letters = Vec::with_capacity(k);
            for _ in 0..k {
                letters.push(atoms[code % atoms.len()].clone());
                code /= atoms.len();
            }
            let (premises, conclusion) = rule.instance(&letters);
            out.push((rule, premises, conclusion));
        }
    }
    out
}

fn soundness_sweep() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut total_violations = 0;
    for logic in LogicId::ALL {
        let instances = rule_instances(logic);
        let class: FrameClass = logic.frame_class();
        let frames = frames_up_to(4, &class);
        let sem = logic.semantics();
        let (models, violations): (usize, Vec<String>) = frames
            .par_iter()
            .map(|frame| {
                let models = match sem {
                    SemanticsId::Fixpoint => fixpoint_models(frame, &["p", "q", "r"]),
                    SemanticsId::Fine => all_models(frame, &["p", "q", "r"]),
                };
                let mut bad = Vec::new();
                for m in &models {
                    let ev = Evaluator::new(m, sem).unwrap();
                    let holds = |s: &Sequent| ev.eval(&s.lhs).unwrap().is_subset(&ev.eval(&s.rhs).unwrap());
                    for (rule, premises, conclusion) in &instances {
                        if premises.iter().all(&holds) && !holds(conclusion) {
                            bad.push(format!("{logic} {rule}: {conclusion}"));
                        }
                    }
                }
                (models.len(), bad)
            })
            .reduce(
                || (0, Vec::new()),
                |(a, mut x), (b, y)| {
                    x.extend(y);
                    (a + b, x)
                },
            );
        total_violations += violations.len();
        lines.push(format!(
            "{logic}: {} frames, {models} models, {} instances, {} violations",
            frames.len(),
            instances.len(),
            violations.len()
        ));
        if let Some(v) = violations.first() {
            lines.push(format!("first: {v}"));
        }
    }
    let in_time = start.elapsed() < BUDGET_5;
    outcome(total_violations == 0 && in_time, lines.join("; "))
}

fn separations() -> Outcome {
    let opts = CheckOptions::default();
    let mut notes = Vec::new();
    let mut ok = true;
    let mut expect = |label: &str, seq: &str, logic: LogicId, want: &dyn Fn(&Verdict) -> bool| {
        let goal = parse_sequent(seq).unwrap();
        let v = check(&goal, logic, &opts);
        let good = matches!(v, Ok(ref v) if want(v));
        ok &= good;
        let shown = match &v {
            Ok(Verdict::Invalid(w)) => format!("invalid ({} states)", w.model.frame().len()),
            Ok(v) => format!("{:?}", v.kind()).to_lowercase(),
            Err(e) => e.to_string(),
        };
        notes.push(format!("{label} {logic} {shown}{}", if good { "" } else { " (unexpected)" }));
    };
    let valid = |v: &Verdict| v.is_valid();
    let not_invalid = |v: &Verdict| !v.is_invalid();

    expect("~~p|-p", "~~p |- p", LogicId::Ortho, &valid);
    expect(
        "~~p|-p",
        "~~p |- p",
        LogicId::Fundamental,
        &|v| matches!(v, Verdict::Invalid(w) if w.model.frame().len() == 2),
    );
    let dist = "p & (q | r) |- (p & q) | (p & r)";
    expect(
        "distributivity",
        dist,
        LogicId::Ortho,
        &|v| matches!(v, Verdict::Invalid(w) if w.model.frame().len() <= 6),
    );
    expect("distributivity", dist, LogicId::Compatibility, &valid);
    let split = "~(~p | ~(q | r)) |- ~(~p | ~q) | ~(~p | ~r)";
    expect("negated-or split", split, LogicId::Fundamental, &|v| v.is_invalid());
    expect("negated-or split", split, LogicId::Compatibility, &not_invalid);
    let intersection = "p & (q | r) |- (p | ~p) | ((p & q) | (p & r))";
    expect("intersection", intersection, LogicId::Ortho, &valid);
    expect("intersection", intersection, LogicId::Compatibility, &valid);
    outcome(ok, notes.join("; "))
}

fn translation_agreement() -> Outcome {
    let opts = CheckOptions::default();
    let mut rng = StdRng::seed_from_u64(3);
    let mut suite: Vec<Sequent> = [
        "p |- ~~p",
        "~~p |- p",
        "p & q |- q & p",
        "p | q |- q | p",
        "p |- p | q",
        "~(p | q) |- ~p & ~q",
        "~p & ~q |- ~(p | q)",
        "~(p & q) |- ~p | ~q",
        "p & ~p |- q",
        "q |- p | ~p",
        "p & (q | r) |- (p & q) | (p & r)",
        "p |- q",
        "p | q |- p",
        "~p |- ~q",
    ]
    .iter()
    .map(|s| parse_sequent(s).unwrap())
    .collect();
    let mut seen: BTreeSet<Sequent> = suite.iter().cloned().collect();
    while suite.len() < 200 {
        let s = Sequent::new(
            random_formula(&mut rng, &VARS, 2, true),
            random_formula(&mut rng, &VARS, 2, true),
        );
        if seen.insert(s.clone()) {
            suite.push(s);
        }
    }
    let reports: Vec<_> = suite.par_iter().map(|s| gg_embedding_check(s, &opts)).collect();
    let (mut agree_valid, mut agree_invalid, mut disagree, mut inconclusive, mut errors) = (0, 0, 0, 0, 0);
    let mut first_bad = None;
    for r in &reports {
        match r {
            Ok(r) => match r.agreement {
                Agreement::Agree if r.ortho.is_valid() => agree_valid += 1,
                Agreement::Agree => agree_invalid += 1,
                Agreement::Disagree => {
                    disagree += 1;
                    first_bad.get_or_insert_with(|| r.sequent.to_string());
                }
                Agreement::Inconclusive => inconclusive += 1,
            },
            Err(e) => {
                errors += 1;
                first_bad.get_or_insert_with(|| e.to_string());
            }
        }
    }
    let definite = agree_valid + agree_invalid + disagree;
    let mut detail = format!(
        "{} sequents: {definite} definite ({agree_valid} valid, {agree_invalid} invalid agree), {disagree} disagree, {inconclusive} inconclusive, {errors} errors",
        suite.len()
    );
    if let Some(b) = first_bad {
        detail.push_str(&format!("; first: {b}"));
    }
    outcome(definite >= GG_MIN_DEFINITE && disagree == 0 && errors == 0, detail)
}

fn lattice(order: LatticeOrder, neg: &[&str]) -> Lattice {
    let neg = neg.iter().map(|l| order.index_of(l).unwrap()).collect();
    Lattice::new(order, neg).unwrap()
}

fn representation() -> Outcome {
    let mut cases: Vec<(String, Lattice)> = Vec::new();
    let ba2 = LatticeOrder::boolean_algebra(1);
    cases.push(("2-element Boolean algebra".into(), lattice(ba2, &["{0}", "{}"])));
    let ba4 = LatticeOrder::boolean_algebra(2);
    cases.push((
        "4-element Boolean algebra".into(),
        lattice(ba4, &["{0,1}", "{1}", "{0}", "{}"]),
    ));
    cases.push(("3-chain".into(), lattice(LatticeOrder::chain(3).unwrap(), &["2", "0", "0"])));

    let mut rng = StdRng::seed_from_u64(5);
    let mut random = 0;
    while random < RANDOM_LATTICES {
        let m = rng.gen_range(2..=3);
        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .filter(|_| rng.gen_bool(0.4))
            .collect();
        let order = LatticeOrder::downsets_of_poset(m, &pairs);
        if order.len() > 8 {
            continue;
        }
        random += 1;
        for (k, neg) in order.weak_pseudocomplementations().into_iter().enumerate() {
            cases.push((
                format!("downsets of {pairs:?} on {m} points, negation {k}"),
                Lattice::new(order.clone(), neg).unwrap(),
            ));
        }
    }

    let mut failures = Vec::new();
    for (name, l) in &cases {
        match l.represent() {
            Ok(r) if r.report.all_green() => {}
            Ok(r) => failures.push(format!("{name}: {:?}", r.report.failures)),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let mut detail = format!(
        "{} lattice/negation pairs ({RANDOM_LATTICES} random lattices), {} failures",
        cases.len(),
        failures.len()
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    outcome(failures.is_empty(), detail)
}
