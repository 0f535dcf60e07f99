mod common;

use mgpkit::bench::all_cases;
use mgpkit::judge::{compress_bits, Zlib};
use mgpkit::lang::DiagCode;
use mgpkit::mgp::*;
use mgpkit::model::{
    DomainDecl, GeneratorRef, Generators, Goal, LiteralDecl, Modification, NeverConstraints,
    PlanningDomain, PredicateDecl, SchemaDecl, SortDecl, State, Step, Strategy, World,
};
use mgpkit::planner::{search_plan, validate_plan, DEFAULT_CAP};

use common::oracle::{instance, names};
use common::{bench_case, case, random_case};

fn schema(w: &World, name: &str) -> GeneratorRef {
    GeneratorRef::Schema(w.domain().schema_id(name).unwrap_or_else(|| panic!("no schema {name}")))
}

fn action(w: &World, label: &str) -> Step {
    Step::Act(
        w.ground_actions()
            .iter()
            .find(|a| a.label == label)
            .unwrap_or_else(|| panic!("no ground action {label}"))
            .clone(),
    )
}

fn extend(refs: impl IntoIterator<Item = GeneratorRef>) -> Step {
    Step::Modify(Modification::extension(Generators::from_refs(refs)))
}

#[test]
fn corpus_cases_classify_as_listed() {
    let budget = Budget::default();
    for c in all_cases().unwrap() {
        let (_, p) = c.load().unwrap();
        let v = classify_problem(&p, &budget).unwrap();
        assert_eq!(v.status, c.expected, "{}", c.name);
        assert!(!v.subdomain.truncated, "{}", c.name);
        let witness = v.witness.expect("every corpus case has a witness");
        let view = if v.status == MgpStatus::Mgp {
            p.world_view()
        } else {
            p.subdomain.clone()
        };
        assert!(validate_plan(&view, &p.init, &witness, &p.goal, &p.never).valid, "{}", c.name);
    }
}

#[test]
fn no_touch_witness_uses_push() {
    let (_, p) = case("block_towel_notouch");
    let v = classify_problem(&p, &Budget::default()).unwrap();
    assert_eq!(v.status, MgpStatus::Mgp);
    assert_eq!(v.witness.unwrap().labels(), ["reach(B,L2)", "push(B,L2,L3)"]);
    assert!(!v.world.unwrap().truncated);
}

#[test]
fn strict_report_on_no_touch() {
    let (_, p) = case("block_towel_notouch");
    let v = classify_problem_strict(&p, &Budget::default()).unwrap();
    let s = v.strict.expect("strict report");
    assert!(!s.truncated);
    assert!(!s.subdomain_all_goal);
    assert!(!s.world_all_goal, "the initial state does not satisfy the goal");
    assert!(!s.mgp);
    assert_eq!(v.status, MgpStatus::Mgp);
}

#[test]
fn tiny_cap_gives_unknown_budget() {
    let (_, p) = case("block_towel_notouch");
    let v = classify_problem(&p, &Budget::with_cap(2)).unwrap();
    assert_eq!(v.status, MgpStatus::UnknownBudget);
    assert!(matches!(minimal_extensions(&p, &Budget::with_cap(2)), Err(MgpError::Budget)));
}

fn two_atom_domain(pred: &str, action: &str) -> PlanningDomain {
    PlanningDomain::from_decl(&DomainDecl {
        sorts: vec![SortDecl::new("thing", None)],
        objects: vec![],
        predicates: vec![PredicateDecl::new("p", &[]), PredicateDecl::new(pred, &[])],
        schemas: vec![SchemaDecl {
            name: action.into(),
            params: vec![],
            pre: vec![LiteralDecl::parse_compact("p")],
            eff: vec![LiteralDecl::parse_compact(pred)],
        }],
    })
    .unwrap()
}

#[test]
fn reduction_shape() {
    let d = PlanningDomain::from_decl(&DomainDecl {
        sorts: vec![SortDecl::new("thing", None)],
        objects: vec![],
        predicates: vec![PredicateDecl::new("p", &[])],
        schemas: vec![],
    })
    .unwrap();
    let p = d.atom_id("p", &[]).unwrap();
    let r = reduce_to_mgp(&d, &State::empty(d.atom_count()), &Goal::positive(vec![p])).unwrap();
    assert_eq!(r.world.domain().schemas().len(), 1);
    assert!(r.diagnostics.is_empty());
    let v = classify_problem(&r.problem, &Budget::default()).unwrap();
    assert_eq!(v.status, MgpStatus::Mgp);
    assert_eq!(v.witness.unwrap().labels(), ["warp()"]);
}

#[test]
fn reduction_renames_on_collision() {
    let d = two_atom_domain("goalStar", "warp");
    let q = d.atom_id("goalStar", &[]).unwrap();
    let r = reduce_to_mgp(&d, &State::empty(d.atom_count()), &Goal::positive(vec![q])).unwrap();
    let codes: Vec<_> = r.diagnostics.iter().map(|x| x.code).collect();
    assert_eq!(codes, [DiagCode::Rename, DiagCode::Rename]);
    assert!(r.world.domain().predicate_id("goalStar_1").is_some());
    assert!(r.world.domain().schema_id("warp_1").is_some());
    let v = classify_problem(&r.problem, &Budget::default()).unwrap();
    assert_eq!(v.status, MgpStatus::Mgp, "p never holds, so the original action is useless");
}

#[test]
fn reduction_direction_on_random_instances() {
    for seed in 0..40 {
        let (_, w, p) = random_case(seed);
        let classical = search_plan(
            &p.world_view(),
            &p.init,
            &p.goal,
            &NeverConstraints::none(),
            DEFAULT_CAP,
        )
        .unwrap();
        let r = reduce_to_mgp(w.domain(), &p.init, &p.goal).unwrap();
        let v = classify_problem(&r.problem, &Budget::default()).unwrap();
        let expected = if classical.plan.is_some() {
            MgpStatus::SolvableInSubdomain
        } else {
            MgpStatus::Mgp
        };
        assert_eq!(v.status, expected, "seed {seed}");
    }
}

#[test]
fn insightfulness() {
    let budget = Budget::default();
    let (w, p) = case("block_towel_notouch");
    let d = w.domain();
    let covered = GeneratorRef::Predicate(d.predicate_id("covered").unwrap());
    let start = p.initial_context();
    let w1 = Strategy::new(vec![extend([covered, schema(&w, "push")])]);
    assert!(is_insightful(&start, &p, &w1, &budget).unwrap());
    assert!(!is_insightful(&start, &p, &Strategy::default(), &budget).unwrap());
    let only_covered = Strategy::new(vec![extend([covered])]);
    assert!(!is_insightful(&start, &p, &only_covered, &budget).unwrap());
    let touched = Strategy::new(vec![
        extend([schema(&w, "push")]),
        action(&w, "reach(B,L2)"),
        action(&w, "grasp(B,L2)"),
    ]);
    assert!(!is_insightful(&start, &p, &touched, &budget).unwrap());
    let bad = Strategy::new(vec![action(&w, "push(B,L2,L3)")]);
    assert!(matches!(is_insightful(&start, &p, &bad, &budget), Err(MgpError::Exec(_))));

    let (sw, sp) = case("screwdriver_recessed");
    let w2 = Strategy::new(vec![extend([schema(&sw, "grab~1"), schema(&sw, "reachAndEngage~0")])]);
    assert!(is_insightful(&sp.initial_context(), &sp, &w2, &budget).unwrap());
}

#[test]
fn minimal_extensions_match_oracle() {
    let budget = Budget::default();
    for c in all_cases().unwrap() {
        let (w, p) = c.load().unwrap();
        let ours = minimal_extensions(&p, &budget).unwrap();
        assert!(!ours.partial);
        let theirs = if c.expected == MgpStatus::Mgp {
            instance(&p).minimal_extensions()
        } else {
            Vec::new()
        };
        let ours_names: Vec<_> = ours.sets.iter().map(|s| names(&w, s)).collect();
        assert_eq!(ours_names.len(), theirs.len(), "{}", c.name);
        for n in &theirs {
            assert!(ours_names.contains(n), "{}: oracle set {n:?} missing", c.name);
        }
        if let Some(size) = c.golden("minimal_delta_size") {
            assert_eq!(ours.sets[0].len() as u64, size, "{}", c.name);
        }
    }
}

#[test]
fn minimal_sets_are_minimal() {
    let budget = Budget::default();
    for name in ["block_towel_notouch", "screwdriver_missing", "screwdriver_recessed"] {
        let (_, p) = case(name);
        let m = minimal_extensions(&p, &budget).unwrap();
        assert!(!m.sets.is_empty());
        for set in &m.sets {
            let ext = p.subdomain.with_generators(p.subdomain.generators().union(set)).unwrap();
            assert!(search_plan(&ext, &p.init, &p.goal, &p.never, DEFAULT_CAP).unwrap().plan.is_some());
            for r in set.refs() {
                let smaller = set.difference(&Generators::from_refs([r]));
                let v = p
                    .subdomain
                    .with_generators(p.subdomain.generators().union(&smaller))
                    .unwrap();
                let res = search_plan(&v, &p.init, &p.goal, &p.never, DEFAULT_CAP).unwrap();
                assert!(res.plan.is_none(), "{name}: dropping a generator keeps it solvable");
            }
        }
        for pair in m.sets.windows(2) {
            assert!(pair[0].len() <= pair[1].len());
        }
    }
    let (w, p) = case("screwdriver_recessed");
    let m = minimal_extensions(&p, &budget).unwrap();
    let both = Generators::from_refs([schema(&w, "grab~1"), schema(&w, "reachAndEngage~0")]);
    assert!(m.sets.contains(&both));
}

#[test]
fn optimal_strategies_of_corpus() {
    let budget = Budget::default();
    let (w, p) = case("block_towel_notouch");
    let opt = optimal_strategies(&p, &budget).unwrap();
    let first = &opt.optimal.strategies()[0];
    assert_eq!(first.modifications().count(), 1);
    assert_eq!(first.actions().count(), 2);
    let insightful = &opt.insightful.strategies()[0];
    assert_eq!(insightful.len(), 1, "revealing push alone is insightful");
    assert_eq!(
        opt.minimal.sets[0],
        Generators::from_refs([schema(&w, "push")])
    );

    let (_, base) = case("block_towel_baseline");
    assert!(matches!(
        optimal_strategies(&base, &budget),
        Err(MgpError::NotMgp(MgpStatus::SolvableInSubdomain))
    ));

    let (sw, sp) = case("screwdriver_missing");
    let opt = optimal_strategies(&sp, &budget).unwrap();
    let labels: Vec<_> = opt.optimal.strategies()[0].actions().map(|a| a.label.clone()).collect();
    assert_eq!(
        labels,
        ["select(coin,screw)", "reachAndEngage~0(coin,screw)", "install(screw,coin,B1,B2)"]
    );
    assert_eq!(labels.len() as u64, bench_case("screwdriver_missing").golden("extended_plan_length").unwrap());
    let end = sp.initial_context().execute(&opt.optimal.strategies()[0]).unwrap();
    assert!(sw.domain().atom_count() > 0 && end.view.entails(&end.state, &sp.goal));
}

#[test]
fn m_number_properties() {
    let budget = Budget::default();
    let z = Zlib;
    let (w, p) = case("block_towel_notouch");
    let empty = StrategySet::new(StrategySetKind::OptimalInsightful, w.clone(), vec![]);
    assert_eq!(m_number(&empty, &z), compress_bits(b"MG"));

    let notouch: Vec<u64> = (0..3)
        .map(|_| m_number(&optimal_strategies(&p, &budget).unwrap().insightful, &z))
        .collect();
    assert!(notouch.windows(2).all(|x| x[0] == x[1]));
    let (_, rp) = case("screwdriver_recessed");
    let recessed = m_number(&optimal_strategies(&rp, &budget).unwrap().insightful, &z);
    assert!(notouch[0] < recessed);
    assert_eq!(Some(notouch[0]), bench_case("block_towel_notouch").golden("m_number_bits"));
    assert_eq!(Some(recessed), bench_case("screwdriver_recessed").golden("m_number_bits"));

    let opt = optimal_strategies(&p, &budget).unwrap();
    let s = opt.optimal.strategies().to_vec();
    let mut doubled = s.clone();
    doubled.extend(s.iter().cloned());
    doubled.reverse();
    let a = StrategySet::new(StrategySetKind::Optimal, w.clone(), s);
    let b = StrategySet::new(StrategySetKind::Optimal, w.clone(), doubled);
    assert_eq!(a, b);
    assert_eq!(m_number(&a, &z), m_number(&b, &z));
}

#[test]
fn report_lists_deltas_and_bits() {
    let (_, p) = case("block_towel_notouch");
    let r = MgpReport::build(&p, &Budget::default(), &Zlib, true).unwrap();
    assert_eq!(r.status, MgpStatus::Mgp);
    assert_eq!(r.minimal_deltas, vec![vec!["action push".to_string()]]);
    assert_eq!(r.m_number_bits, bench_case("block_towel_notouch").golden("m_number_bits"));
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["status"], "MGP");
    assert!(json["strict"].is_object());

    let (_, base) = case("block_towel_baseline");
    let r = MgpReport::build(&base, &Budget::default(), &Zlib, false).unwrap();
    assert!(r.m_number_bits.is_none() && r.minimal_deltas.is_empty());
    assert!(serde_json::to_value(&r).unwrap().get("strict").is_none());
}
