mod common;

use std::sync::Arc;

use mgpkit::model::*;
use mgpkit::model::Strategy;
use proptest::prelude::*;

use common::case;

const PI1: [&str; 5] = [
    "reach(B,L2)",
    "grasp(B,L2)",
    "lift(B,L2)",
    "carryTo(B,L3)",
    "release(B,L3)",
];

fn action(w: &World, label: &str) -> GroundAction {
    w.ground_actions()
        .iter()
        .find(|a| a.label == label)
        .unwrap_or_else(|| panic!("no ground action {label}"))
        .clone()
}

fn atom(w: &World, p: &str, args: &[&str]) -> AtomId {
    w.domain().atom_id(p, args).expect("atom exists")
}

fn tiny_domain() -> PlanningDomain {
    PlanningDomain::from_decl(&DomainDecl {
        sorts: vec![SortDecl::new("thing", None)],
        objects: vec![ObjectDecl::new("a", &["thing"])],
        predicates: vec![PredicateDecl::new("on", &[]), PredicateDecl::new("lit", &["thing"])],
        schemas: vec![
            SchemaDecl {
                name: "toggle".into(),
                params: vec![],
                pre: vec![],
                eff: vec![LiteralDecl::parse_compact("on")],
            },
            SchemaDecl {
                name: "idle".into(),
                params: vec![("x".into(), "thing".into())],
                pre: vec![LiteralDecl::parse_compact("lit ?x")],
                eff: vec![],
            },
        ],
    })
    .expect("tiny domain is well-formed")
}

#[test]
fn grounding_counts() {
    let (w, _) = case("block_towel_baseline");
    let d = w.domain();
    let reach = d.schema(d.schema_id("reach").unwrap());
    assert_eq!(ground_schema(reach, d).unwrap().len(), 6);

    let tiny = tiny_domain();
    let toggle = tiny.schema(tiny.schema_id("toggle").unwrap());
    assert_eq!(tiny.ground_schema(toggle).unwrap().len(), 1);

    let (sw, _) = case("screwdriver_missing");
    let d = sw.domain();
    let grab = d.schema(d.schema_id("grab").unwrap());
    let ground = d.ground_schema(grab).unwrap();
    assert_eq!(ground.len(), 6);
    let labels: Vec<_> = ground.iter().map(|a| a.label.as_str()).collect();
    assert_eq!(
        labels,
        [
            "grab(hammer,nail)",
            "grab(hammer,screw)",
            "grab(plier,nail)",
            "grab(plier,screw)",
            "grab(screwdriver,nail)",
            "grab(screwdriver,screw)",
        ]
    );
}

#[test]
fn applicability_at_initial_state() {
    let (w, p) = case("block_towel_baseline");
    assert!(!applicable(&p.init, &action(&w, "grasp(B,L2)")));
    assert!(applicable(&p.init, &action(&w, "reach(B,L2)")));

    let tiny = tiny_domain();
    let toggle = &tiny.ground_all()[1];
    assert_eq!(toggle.label, "toggle()");
    assert!(applicable(&State::empty(tiny.atom_count()), toggle));
}

#[test]
fn action_application() {
    let (w, p) = case("block_towel_baseline");
    let s1 = apply_action(&p.init, &action(&w, "reach(B,L2)")).unwrap();
    assert!(s1.contains(atom(&w, "near", &["L2"])));
    assert_eq!(s1.len(), p.init.len() + 1);
    assert_eq!(p.init.len(), 2, "input state is unchanged");

    let err = apply_action(&p.init, &action(&w, "grasp(B,L2)")).unwrap_err();
    assert!(matches!(err, ModelError::PreconditionViolation(_)));

    let tiny = tiny_domain();
    let idle = &tiny.ground_all()[0];
    assert_eq!(idle.label, "idle(a)");
    let lit = tiny.atom_id("lit", &["a"]).unwrap();
    let s = State::from_atoms(tiny.atom_count(), [lit]);
    assert_eq!(apply_action(&s, idle).unwrap(), s);

    let mut s = p.init.clone();
    for l in PI1 {
        s = apply_action(&s, &action(&w, l)).unwrap();
    }
    assert!(s.contains(atom(&w, "at", &["B", "L3"])));
    assert!(!s.contains(atom(&w, "holding", &["B"])));
}

#[test]
fn goal_entailment() {
    let (w, p) = case("block_towel_baseline");
    let at_b_l3 = atom(&w, "at", &["B", "L3"]);
    assert!(entails_goal(&p.init, &Goal::default()));
    assert!(!entails_goal(&p.init, &Goal::positive(vec![at_b_l3])));
    let mut s = p.init.clone();
    for l in PI1 {
        s = apply_action(&s, &action(&w, l)).unwrap();
    }
    assert!(entails_goal(&s, &Goal::positive(vec![at_b_l3])));
    assert!(entails_goal(&s, &p.goal));
}

#[test]
fn modifications() {
    let (w, p) = case("block_towel_notouch");
    let d = w.domain();
    let covered = GeneratorRef::Predicate(d.predicate_id("covered").unwrap());
    let push = GeneratorRef::Schema(d.schema_id("push").unwrap());
    let ext = Modification::extension(Generators::from_refs([covered, push]));
    let v = apply_modification(&p.subdomain, &ext).unwrap();
    assert!(v.contains(covered) && v.contains(push));

    let reach = GeneratorRef::Schema(d.schema_id("reach").unwrap());
    let known = Modification::extension(Generators::from_refs([reach]));
    assert!(matches!(
        apply_modification(&p.subdomain, &known),
        Err(ModelError::Modification(_))
    ));
    let missing = Modification::contraction(Generators::from_refs([push]));
    assert!(matches!(
        apply_modification(&p.subdomain, &missing),
        Err(ModelError::Modification(_))
    ));
    let empty = Modification::extension(Generators::default());
    assert!(apply_modification(&p.subdomain, &empty).is_err());

    let (sw, sp) = case("screwdriver_missing");
    let d = sw.domain();
    let grab1 = GeneratorRef::Schema(d.schema_id("grab~1").unwrap());
    assert!(!sp.subdomain.contains(grab1));
    let v = apply_modification(&sp.subdomain, &Modification::extension(Generators::from_refs([grab1])))
        .unwrap();
    let a = action(&sw, "grab~1(plier,coin)");
    assert!(v.admits(&a));
    assert!(!sp.subdomain.admits(&a));
}

#[test]
fn modification_outside_world_is_rejected() {
    let (w, p) = case("block_towel_notouch");
    let (other, _) = case("screwdriver_missing");
    let foreign = GeneratorRef::Schema(SchemaId::from(other.domain().schemas().len() + 3));
    let m = Modification::extension(Generators::from_refs([foreign]));
    assert!(matches!(
        apply_modification(&p.subdomain, &m),
        Err(ModelError::OutsideWorld(_))
    ));
    assert!(SubdomainView::new(w.clone(), Generators::from_refs([foreign])).is_err());
}

#[test]
fn strategy_projection() {
    let (w, p) = case("block_towel_notouch");
    let d = w.domain();
    let acts = Strategy::from_plan(PI1.iter().map(|l| action(&w, l)));
    let (plan, delta) = project_strategy(&acts);
    assert_eq!(plan.len(), 5);
    assert!(delta.is_empty());
    assert!(!acts.is_domain_modifying());

    let push = GeneratorRef::Schema(d.schema_id("push").unwrap());
    let covered = GeneratorRef::Predicate(d.predicate_id("covered").unwrap());
    let w2 = Strategy::new(vec![
        Step::Modify(Modification::extension(Generators::from_refs([covered, push]))),
        Step::Act(action(&w, "reach(B,L2)")),
        Step::Act(action(&w, "push(B,L2,L3)")),
    ]);
    let (plan, delta) = project_strategy(&w2);
    assert_eq!(delta.len(), 1);
    assert_eq!(plan.len() + w2.modifications().count(), w2.len());
    assert!(w2.is_domain_modifying());
    let end = p.initial_context().execute(&w2).unwrap();
    assert!(end.view.entails(&end.state, &p.goal));

    let (plan, delta) = project_strategy(&Strategy::default());
    assert!(plan.is_empty() && delta.is_empty());
}

#[test]
fn execution_reports_failing_step() {
    let (w, p) = case("block_towel_notouch");
    let bad = Strategy::from_plan([action(&w, "reach(B,L2)"), action(&w, "push(B,L2,L3)")]);
    let err = p.initial_context().execute(&bad).unwrap_err();
    assert_eq!(err.index, 1);
    assert!(matches!(err.source, ModelError::OutsideView(_)));
}

#[test]
fn observation_filters_to_the_vocabulary() {
    let (w, p) = case("block_towel_notouch");
    let d = w.domain();
    let covered = d.atom_id("covered", &["T", "B"]).unwrap();
    let mut s = p.init.clone();
    s.insert(covered);
    let ctx = Context::new(p.subdomain.clone(), s.clone());
    assert!(!ctx.observed_state().contains(covered));
    assert!(ctx.state.contains(covered));
    let whole = Context::new(p.world_view(), s);
    assert!(whole.observed_state().contains(covered));
}

fn block_towel() -> (Arc<World>, Problem) {
    case("block_towel_notouch")
}

fn state_strategy(n: usize) -> impl proptest::strategy::Strategy<Value = Vec<bool>> {
    proptest::collection::vec(any::<bool>(), n)
}

fn to_state(bits: &[bool]) -> State {
    State::from_atoms(
        bits.len(),
        bits.iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| AtomId::from(i)),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn add_delete_soundness(bits in state_strategy(block_towel().0.atom_count()), ix in 0usize..1000) {
        let (w, _) = block_towel();
        let s = to_state(&bits);
        let a = &w.ground_actions()[ix % w.ground_actions().len()];
        if a.applicable(&s) {
            let t = a.apply(&s).unwrap();
            prop_assert!(a.add.iter().all(|x| t.contains(*x)));
            prop_assert!(a.del.iter().all(|x| !t.contains(*x)));
            prop_assert_eq!(a.apply(&s).unwrap(), t, "deterministic");
        } else {
            prop_assert!(a.apply(&s).is_err());
        }
    }

    #[test]
    fn modification_round_trip_and_containment(mask in any::<u16>()) {
        let (w, p) = case("screwdriver_recessed");
        let missing = p.subdomain.missing();
        let picked: Vec<_> = missing
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << (i % 16)) != 0)
            .map(|(_, r)| *r)
            .collect();
        prop_assume!(!picked.is_empty());
        let m = Modification::extension(Generators::from_refs(picked.clone()));
        let v = apply_modification(&p.subdomain, &m).unwrap();
        let back = apply_modification(&v, &Modification::contraction(Generators::from_refs(picked))).unwrap();
        prop_assert_eq!(back.generators(), p.subdomain.generators());
        let before: Vec<_> = p.subdomain.actions().map(|a| a.label.clone()).collect();
        let after: Vec<_> = v.actions().map(|a| a.label.clone()).collect();
        prop_assert!(before.iter().all(|l| after.contains(l)));
        prop_assert!(v.generators().len() > p.subdomain.generators().len());
        prop_assert_eq!(w.all_generators().difference(v.generators()).len() + v.generators().len(), w.all_generators().len());
    }

    #[test]
    fn projection_preserves_length(choices in proptest::collection::vec(0usize..40, 0..12)) {
        let (w, p) = case("block_towel_notouch");
        let missing = p.subdomain.missing();
        let steps: Vec<Step> = choices
            .iter()
            .map(|&c| {
                if c < missing.len() {
                    Step::Modify(Modification::extension(Generators::from_refs([missing[c]])))
                } else {
                    Step::Act(w.ground_actions()[c % w.ground_actions().len()].clone())
                }
            })
            .collect();
        let s = Strategy::new(steps);
        let (plan, _) = project_strategy(&s);
        prop_assert_eq!(plan.len() + s.modifications().count(), s.len());
    }
}
