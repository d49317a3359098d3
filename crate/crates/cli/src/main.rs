use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use workbench_core::dot::write_dot;
use workbench_core::engine::{check, CheckOptions, LogicId, Verdict, WitnessSource};
use workbench_core::formula::{parse, parse_sequent, Formula, Sequent, SoritesParams};
use workbench_core::frame::StateSet;
use workbench_core::io::{read_model, write_model};
use workbench_core::lattice::read_lattice;
use workbench_core::semantics::{Evaluator, Model, SemanticsId};
use workbench_core::sorites::{build_pseudosymmetric, build_symmetric, verify_facts, SoritesModel};

#[derive(Parser)]
#[command(name = "workbench", version)]
#[command(about = "Relational semantics, sequent checking and lattice representation for orthologic and its relatives")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads (defaults to one per core)
    #[arg(long, global = true, env = "WORKBENCH_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Valid,
    Invalid,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula or sequent and print it in canonical form
    Parse {
        /// Formula, or sequent written `lhs |- rhs`
        input: String,
    },
    /// Evaluate a formula in a model file
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_parser = parse_formula)]
        formula: Formula,
        /// Overrides the semantics named in the model file (default fixpoint)
        #[arg(long)]
        semantics: Option<SemanticsId>,
    },
    /// Decide a sequent in one of the logics
    Check {
        #[arg(long)]
        logic: LogicId,
        #[arg(long, value_parser = parse_goal)]
        sequent: Sequent,
        /// Largest frame searched for a countermodel
        #[arg(long, default_value_t = CheckOptions::default().max_size)]
        max_size: usize,
        /// Negation depth of the saturation universe
        #[arg(long, default_value_t = CheckOptions::default().universe_depth)]
        depth: usize,
        /// Largest saturation universe before saturation is skipped
        #[arg(long, default_value_t = CheckOptions::default().universe_cap)]
        universe_cap: usize,
        /// Valuations tried per frame size before the search gives up
        #[arg(long, default_value_t = CheckOptions::default().assignment_cap)]
        assignment_cap: u64,
        /// Skip the Sorites models when looking for countermodels
        #[arg(long)]
        no_seeds: bool,
        /// Search for a countermodel even after a derivation is found
        #[arg(long)]
        cross_check: bool,
        /// Print the derivation of a valid sequent
        #[arg(long)]
        trace: bool,
        /// Write the countermodel of an invalid sequent to this file
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Exit with status 1 unless the verdict is this one
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Build a Sorites model and query it
    Sorites {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        /// Build the model with rejector states
        #[arg(long)]
        pseudo: bool,
        /// Check every fact about the model's extensions
        #[arg(long)]
        verify_facts: bool,
        /// Print the extension of a formula
        #[arg(long, value_parser = parse_formula)]
        eval: Option<Formula>,
        /// Write the frame in DOT format
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the model file
        #[arg(long)]
        write_model: Option<PathBuf>,
    },
    /// Translate a formula or sequent
    Translate {
        /// Double-negation translation of this formula or sequent
        #[arg(long)]
        gg: String,
    },
    /// Represent a finite distributive lattice with negation by prime filters
    Represent {
        #[arg(long)]
        lattice: PathBuf,
        /// Write the prime filter frame in DOT format
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

fn parse_formula(s: &str) -> Result<Formula, String> {
    parse(s).map_err(|e| e.to_string())
}

fn parse_goal(s: &str) -> Result<Sequent, String> {
    parse_sequent(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            Cli::command().error(ErrorKind::ValueValidation, "--jobs must be at least 1").exit();
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Ok(false) is a domain failure: the command ran but the answer was not
/// the one asked for.
fn run(cli: Cli) -> Result<bool> {
    let json = cli.format == Format::Json;
    match cli.command {
        Command::Parse { input } => cmd_parse(&input, json),
        Command::Eval {
            model,
            formula,
            semantics,
        } => cmd_eval(&model, &formula, semantics, json),
        Command::Check {
            logic,
            sequent,
            max_size,
            depth,
            universe_cap,
            assignment_cap,
            no_seeds,
            cross_check,
            trace,
            witness,
            expect,
        } => {
            let opts = CheckOptions {
                max_size,
                universe_depth: depth,
                universe_cap,
                assignment_cap,
                seeds: !no_seeds,
                cross_check,
            };
            cmd_check(&sequent, logic, &opts, trace, witness.as_deref(), expect, json)
        }
        Command::Sorites {
            n,
            delta,
            pseudo,
            verify_facts,
            eval,
            dot,
            write_model,
        } => {
            let params = SoritesParams::new(n, delta)
                .unwrap_or_else(|e| Cli::command().error(ErrorKind::ValueValidation, e).exit());
            cmd_sorites(params, pseudo, verify_facts, eval.as_ref(), dot.as_deref(), write_model.as_deref(), json)
        }
        Command::Translate { gg } => cmd_translate(&gg, json),
        Command::Represent { lattice, dot } => cmd_represent(&lattice, dot.as_deref(), json),
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn set_text(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(", "))
}

fn cmd_parse(input: &str, json: bool) -> Result<bool> {
    let parsed = if input.contains("|-") {
        parse_sequent(input).map(|s| ("sequent", s.to_string(), s.vars()))
    } else {
        parse(input).map(|f| ("formula", f.to_string(), f.vars()))
    };
    match parsed {
        Ok((kind, printed, vars)) => {
            if json {
                print_json(&json!({ "kind": kind, "printed": printed, "vars": vars }));
            } else {
                println!("{printed}");
            }
            Ok(true)
        }
        Err(e) => {
            if json {
                print_json(&json!({ "error": e.message, "offset": e.offset }));
            } else {
                eprintln!("parse error: {e}");
            }
            Ok(false)
        }
    }
}

fn cmd_eval(path: &Path, f: &Formula, semantics: Option<SemanticsId>, json: bool) -> Result<bool> {
    let (model, from_file) = read_model(path)?;
    let sem = semantics.or(from_file).unwrap_or(SemanticsId::Fixpoint);
    let ext = Evaluator::new(&model, sem)
        .and_then(|ev| ev.eval(f))
        .with_context(|| format!("evaluating {f} under {sem} semantics"))?;
    let labels = model.labels_of(&ext);
    if json {
        print_json(&json!({ "formula": f, "semantics": sem, "extension": labels }));
    } else {
        println!("[[{f}]] = {} ({sem})", set_text(&labels));
    }
    Ok(true)
}

fn describe_model(out: &mut String, model: &Model) {
    let frame = model.frame();
    writeln!(out, "  states: {}", frame.labels().join(" ")).unwrap();
    let rel: Vec<String> = frame
        .pairs()
        .filter(|(x, y)| x != y)
        .map(|(x, y)| format!("{}<{}", frame.label(x), frame.label(y)))
        .collect();
    let refl = (0..frame.len()).all(|x| frame.related(x, x));
    writeln!(
        out,
        "  relation: {}{}",
        if refl { "reflexive" } else { "not reflexive" },
        if rel.is_empty() { String::new() } else { format!(", {}", rel.join(" ")) }
    )
    .unwrap();
    for (var, set) in model.valuation() {
        writeln!(out, "  {var} = {}", set_text(&model.labels_of(set))).unwrap();
    }
}

fn cmd_check(
    goal: &Sequent,
    logic: LogicId,
    opts: &CheckOptions,
    trace: bool,
    witness_path: Option<&Path>,
    expect: Option<Expect>,
    json: bool,
) -> Result<bool> {
    let verdict = check(goal, logic, opts)?;
    if let (Some(path), Verdict::Invalid(w)) = (witness_path, &verdict) {
        write_model(path, &w.model, Some(w.semantics))?;
    }
    if json {
        let mut v = json!({ "logic": logic, "sequent": goal });
        let extra = serde_json::to_value(&verdict)?;
        v.as_object_mut()
            .unwrap()
            .extend(extra.as_object().cloned().unwrap_or_default());
        print_json(&v);
    } else {
        let mut out = String::new();
        writeln!(out, "{logic}: {goal}").unwrap();
        match &verdict {
            Verdict::Valid(d) => {
                writeln!(out, "verdict: valid ({} step{})", d.len(), if d.len() == 1 { "" } else { "s" }).unwrap();
                if trace {
                    write!(out, "{d}").unwrap();
                }
            }
            Verdict::Invalid(w) => {
                writeln!(out, "verdict: invalid").unwrap();
                let source = match &w.source {
                    WitnessSource::Enumerated { size } => format!("enumerated frame of size {size}"),
                    WitnessSource::Sorites {
                        n,
                        delta,
                        pseudosymmetric,
                    } => format!(
                        "{} sorites model n={n} delta={delta}",
                        if *pseudosymmetric { "pseudosymmetric" } else { "symmetric" }
                    ),
                };
                writeln!(
                    out,
                    "countermodel: {} states ({source}), {} semantics, fails at {}",
                    w.model.frame().len(),
                    w.semantics,
                    w.state_label()
                )
                .unwrap();
                describe_model(&mut out, &w.model);
            }
            Verdict::Unknown(b) => {
                let universe = match b.universe_size {
                    Some(n) => format!("saturated a universe of {n} formulas at depth {}", b.universe_depth),
                    None => "universe too large to saturate".to_string(),
                };
                writeln!(
                    out,
                    "verdict: unknown ({universe}; frames searched up to size {}{})",
                    b.searched_size,
                    if b.cap_reached { ", assignment cap reached" } else { "" }
                )
                .unwrap();
            }
        }
        print!("{out}");
    }
    Ok(match expect {
        None => true,
        Some(Expect::Valid) => verdict.is_valid(),
        Some(Expect::Invalid) => verdict.is_invalid(),
    })
}

fn cmd_sorites(
    params: SoritesParams,
    pseudo: bool,
    facts: bool,
    eval: Option<&Formula>,
    dot: Option<&Path>,
    model_path: Option<&Path>,
    json: bool,
) -> Result<bool> {
    let m: SoritesModel = if pseudo {
        build_pseudosymmetric(params)
    } else {
        build_symmetric(params)
    };
    let labels: Vec<String> = m.states().iter().map(|s| s.to_string()).collect();
    let kind = if pseudo { "pseudosymmetric" } else { "symmetric" };
    let extension = match eval {
        Some(f) => {
            let ext: StateSet = Evaluator::new(m.model(), SemanticsId::Fixpoint)
                .and_then(|ev| ev.eval(f))
                .with_context(|| format!("evaluating {f}"))?;
            Some((f, m.model().labels_of(&ext)))
        }
        None => None,
    };
    let report = facts.then(|| verify_facts(params, pseudo));
    if let Some(path) = dot {
        let name = format!("sorites_{}_{}{}", params.n(), params.delta(), if pseudo { "_pseudo" } else { "" });
        write_dot(m.frame(), &name, path).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = model_path {
        write_model(path, m.model(), Some(SemanticsId::Fixpoint))?;
    }

    if json {
        let mut v = json!({
            "n": params.n(),
            "delta": params.delta(),
            "pseudosymmetric": pseudo,
            "states": labels,
        });
        let obj = v.as_object_mut().unwrap();
        if let Some((f, ext)) = &extension {
            obj.insert("extension".into(), json!({ "formula": f, "states": ext }));
        }
        if let Some(r) = &report {
            obj.insert("facts".into(), serde_json::to_value(r)?);
            obj.insert("all_passed".into(), json!(r.all_passed()));
        }
        print_json(&v);
    } else {
        let mut out = String::new();
        writeln!(
            out,
            "{kind} sorites model n={} delta={}: {} states",
            params.n(),
            params.delta(),
            labels.len()
        )
        .unwrap();
        writeln!(out, "states: {}", labels.join(" ")).unwrap();
        if let Some((f, ext)) = &extension {
            writeln!(out, "[[{f}]] = {}", set_text(ext)).unwrap();
        }
        if let Some(r) = &report {
            for (fact, passed) in r.summary() {
                writeln!(out, "{fact}: {}", if passed { "pass" } else { "FAIL" }).unwrap();
            }
            for c in r.failures() {
                writeln!(out, "  failed {}: {}", c.fact, c.claim).unwrap();
                writeln!(out, "    missing {}, extra {}", set_text(&c.missing), set_text(&c.extra)).unwrap();
            }
            let failed = r.failures().count();
            if failed == 0 {
                writeln!(out, "facts: all {} checks passed", r.checks.len()).unwrap();
            } else {
                writeln!(out, "facts: {failed} of {} checks failed", r.checks.len()).unwrap();
            }
        }
        print!("{out}");
    }
    Ok(report.is_none_or(|r| r.all_passed()))
}

fn cmd_translate(input: &str, json: bool) -> Result<bool> {
    let translated = if input.contains("|-") {
        parse_sequent(input).map(|s| s.godel_gentzen().to_string())
    } else {
        parse(input).map(|f| f.godel_gentzen().to_string())
    };
    let translated = match translated {
        Ok(t) => t,
        Err(e) => Cli::command()
            .error(ErrorKind::ValueValidation, format!("--gg: {e}"))
            .exit(),
    };
    if json {
        print_json(&json!({ "input": input, "translation": translated }));
    } else {
        println!("{translated}");
    }
    Ok(true)
}

fn cmd_represent(path: &Path, dot: Option<&Path>, json: bool) -> Result<bool> {
    let lattice = read_lattice(path)?;
    let order = lattice.order();
    let dist = lattice.check_distributive();
    let wpc = lattice.check_weak_pseudocomplementation();
    let rep = if dist.distributive && wpc.holds {
        Some(lattice.represent()?)
    } else {
        None
    };
    if let (Some(path), Some(r)) = (dot, &rep) {
        write_dot(&r.frame, "prime_filters", path).with_context(|| format!("writing {}", path.display()))?;
    }
    let green = rep.as_ref().is_some_and(|r| r.report.all_green());

    if json {
        let mut v = json!({
            "elements": order.labels(),
            "distributivity": dist,
            "weak_pseudocomplementation": wpc,
        });
        if let Some(r) = &rep {
            let f = &r.frame;
            let obj = v.as_object_mut().unwrap();
            obj.insert("filters".into(), json!(f.labels()));
            let rel: Vec<[&str; 2]> = f.pairs().map(|(x, y)| [f.label(x), f.label(y)]).collect();
            obj.insert("compatibility".into(), json!(rel));
            let emb: serde_json::Map<String, Value> = (0..order.len())
                .map(|a| {
                    let set: Vec<&str> = r.embedding[a].iter().map(|i| f.label(i)).collect();
                    (order.label(a).to_string(), json!(set))
                })
                .collect();
            obj.insert("embedding".into(), Value::Object(emb));
            obj.insert("report".into(), serde_json::to_value(&r.report)?);
        }
        v.as_object_mut().unwrap().insert("all_green".into(), json!(green));
        print_json(&v);
    } else {
        let mut out = String::new();
        writeln!(out, "lattice: {} elements", order.len()).unwrap();
        match &dist.witness {
            None => writeln!(out, "distributive: yes").unwrap(),
            Some([a, b, c]) => writeln!(out, "distributive: no ({a} & ({b} | {c}) fails)").unwrap(),
        }
        writeln!(out, "weak pseudocomplementation: {}", if wpc.holds { "yes" } else { "no" }).unwrap();
        for v in &wpc.violations {
            writeln!(out, "  {}", serde_json::to_string(v)?).unwrap();
        }
        if let Some(r) = &rep {
            let f = &r.frame;
            writeln!(out, "prime filters: {}", f.labels().join(" ")).unwrap();
            let rel: Vec<String> = f
                .pairs()
                .filter(|(x, y)| x < y)
                .map(|(x, y)| format!("{}~{}", f.label(x), f.label(y)))
                .collect();
            writeln!(
                out,
                "compatible pairs (besides each filter with itself): {}",
                if rel.is_empty() { "none".to_string() } else { rel.join(" ") }
            )
            .unwrap();
            for a in 0..order.len() {
                let set: Vec<String> = r.embedding[a].iter().map(|i| f.label(i).to_string()).collect();
                writeln!(out, "e({}) = {}", order.label(a), set_text(&set)).unwrap();
            }
            let rp = &r.report;
            let yn = |b: bool| if b { "yes" } else { "no" };
            writeln!(
                out,
                "reflexive {} symmetric {} injective {} meets {} joins {} bottom {} top {} negation {}",
                yn(rp.reflexive),
                yn(rp.symmetric),
                yn(rp.injective),
                yn(rp.preserves_meets),
                yn(rp.preserves_joins),
                yn(rp.preserves_bottom),
                yn(rp.preserves_top),
                yn(rp.preserves_negation)
            )
            .unwrap();
            for msg in &rp.failures {
                writeln!(out, "  {msg}").unwrap();
            }
        }
        writeln!(out, "{}", if green { "representation verified" } else { "representation failed" }).unwrap();
        print!("{out}");
    }
    Ok(green)
}
