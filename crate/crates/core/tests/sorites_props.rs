use workbench_core::dot::to_dot;
use workbench_core::formula::{parse, parse_sequent, series_var, Formula, SoritesParams};
use workbench_core::semantics::{consequence_over, eval, Consequence, SemanticsId};
use workbench_core::sorites::{build_pseudosymmetric, build_symmetric, verify_facts, Ext, SoritesState};

fn grid() -> impl Iterator<Item = SoritesParams> {
    (3..=8).flat_map(|n| (1..=3.min(n - 2)).map(move |d| SoritesParams::new(n, d).unwrap()))
}

#[test]
fn grid_models_are_fixpoint_models_of_their_class() {
    for params in grid() {
        let s = build_symmetric(params);
        assert!(s.model().validate_fixpoint_model().is_empty());
        let c = s.frame().class_check();
        assert!(c.reflexive && c.symmetric);

        let p = build_pseudosymmetric(params);
        assert!(p.model().validate_fixpoint_model().is_empty());
        let c = p.frame().class_check();
        assert!(c.reflexive && c.pseudosymmetric && !c.symmetric, "{params:?}");
    }
}

#[test]
fn state_counts() {
    let p = SoritesParams::new(4, 1).unwrap();
    assert_eq!(build_symmetric(p).states().len(), 12);
    assert_eq!(build_pseudosymmetric(p).states().len(), 16);
    assert_eq!(build_symmetric(SoritesParams::new(8, 1).unwrap()).states().len(), 38);
}

#[test]
fn every_fact_but_the_lem_spot_value_holds_on_the_grid() {
    for params in grid() {
        for pseudo in [false, true] {
            let report = verify_facts(params, pseudo);
            let failures: Vec<_> = report.failures().collect();
            if pseudo {
                assert_eq!(failures.len(), 1, "{params:?}");
                assert_eq!(failures[0].fact, "DenyLEMs");
            } else {
                assert!(failures.is_empty(), "{params:?}: {failures:?}");
            }
        }
    }
}

#[test]
fn lem_conjunction_is_forced_only_at_the_two_end_states() {
    // evaluate each excluded-middle instance on its own and intersect
    for params in grid() {
        let n = params.n();
        let m = build_pseudosymmetric(params);
        let fr = m.frame();
        let lem = |k: usize| Formula::or(series_var(k), Formula::neg(series_var(k)));
        let mut expected = fr.full_set();
        for k in 0..n {
            let ext = eval(m.model(), &lem(k), SemanticsId::Fixpoint).unwrap();
            expected = expected.intersection(&ext);
        }
        let want = m.states_where(|s| {
            matches!(s, SoritesState::Pair(Ext::NegInf, Ext::Fin(0)))
                || matches!(s, SoritesState::Pair(Ext::Fin(i), Ext::PosInf) if *i == n - 1)
        });
        assert_eq!(expected, want, "{params:?}");
    }
}

#[test]
fn or_of_negated_atom_is_not_forced_at_the_focus() {
    let m = build_pseudosymmetric(SoritesParams::new(4, 1).unwrap());
    let focus = m.index_of(SoritesState::pair(Ext::Fin(0), Ext::Fin(3))).unwrap();
    let ext = eval(m.model(), &parse("~p0 | p1").unwrap(), SemanticsId::Fixpoint).unwrap();
    assert!(!ext.contains(focus));
    let ext = eval(m.model(), &parse("~(p0 & ~p1)").unwrap(), SemanticsId::Fixpoint).unwrap();
    assert!(ext.is_full());
}

#[test]
fn disjunctive_syllogism_holds_in_each_rejector_model() {
    for params in grid() {
        let m = build_pseudosymmetric(params);
        for k in 0..params.n() - 1 {
            let s = parse_sequent(&format!("p{k} & (~p{k} | p{}) |- p{}", k + 1, k + 1)).unwrap();
            let r = consequence_over(std::slice::from_ref(m.model()), &s, SemanticsId::Fixpoint).unwrap();
            assert_eq!(r, Consequence::Holds, "{params:?} k={k}");
        }
    }
}

#[test]
fn compatible_states_without_a_common_refinement() {
    let m = build_symmetric(SoritesParams::new(4, 1).unwrap());
    let fr = m.frame();
    let x = m.index_of(SoritesState::pair(Ext::Fin(1), Ext::Fin(3))).unwrap();
    let y = m.index_of(SoritesState::pair(Ext::Fin(0), Ext::Fin(2))).unwrap();
    assert!(fr.related(x, y));
    for z in 0..fr.len() {
        assert!(!(fr.pre_refines(z, x).unwrap() && fr.pre_refines(z, y).unwrap()));
    }
    assert!(!fr.class_check().compossible);
    // (1,3) forces p1, (0,2) forces ~p2
    let p1 = eval(m.model(), &parse("p1").unwrap(), SemanticsId::Fixpoint).unwrap();
    let np2 = eval(m.model(), &parse("~p2").unwrap(), SemanticsId::Fixpoint).unwrap();
    assert!(p1.contains(x) && np2.contains(y));
}

#[test]
fn consequence_examples() {
    let s = build_symmetric(SoritesParams::new(4, 1).unwrap());
    let seq = parse_sequent("p0 & ~p1 |- q").unwrap();
    let mut model = s.into_model();
    model.set_value("q", model.frame().empty_set()).unwrap();
    assert_eq!(consequence_over(&[model], &seq, SemanticsId::Fixpoint).unwrap(), Consequence::Holds);
}

#[test]
fn dot_rendering_of_the_sorites_models() {
    let p = SoritesParams::new(4, 1).unwrap();
    let s = to_dot(build_symmetric(p).frame(), "s");
    assert_eq!(s.lines().filter(|l| l.ends_with("\";")).count(), 12);
    assert!(s.lines().filter(|l| l.contains("->")).all(|l| l.contains("[dir=none]")));

    let r = to_dot(build_pseudosymmetric(p).frame(), "r");
    assert!(r.contains("  \"r2\" -> \"(0,2)\";\n"));
    assert!(r.contains("  \"(0,3)\" -> \"r1\" [dir=none];\n"));
}
