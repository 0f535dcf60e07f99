use std::path::PathBuf;
use std::sync::Arc;

use mgpkit::lang::{
    parse_problem, parse_world, problem_to_text, world_to_text, CanonicalBytes, DiagCode,
    SourceDoc,
};
use proptest::prelude::*;

fn corpus(name: &str) -> SourceDoc {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    SourceDoc::new(std::fs::read_to_string(&path).unwrap(), name)
}

#[test]
fn block_towel_world_shape() {
    let w = parse_world(&corpus("block_towel.world")).unwrap().value;
    let d = w.domain();
    let loc = d.sort_id("location").unwrap();
    let obj = d.sort_id("object").unwrap();
    assert_eq!(d.members(loc).len(), 3);
    assert_eq!(d.members(obj).len(), 2);
    assert_eq!(w.visible_generators().schemas.len(), 5);
    assert_eq!(w.hidden().schemas.len(), 1);
    assert_eq!(w.hidden().predicates.len(), 1);
}

#[test]
fn corpus_round_trips() {
    for (wf, pfs) in [
        ("block_towel.world", vec!["block_towel_baseline.problem", "block_towel_notouch.problem"]),
        ("screwdriver.world", vec!["screwdriver_missing.problem", "screwdriver_available.problem"]),
        ("screwdriver_recessed.world", vec!["screwdriver_recessed.problem"]),
    ] {
        let w = parse_world(&corpus(wf)).unwrap().value;
        let text = world_to_text(&w);
        let w2 = parse_world(&SourceDoc::new(text.clone(), "rt")).unwrap().value;
        assert_eq!(w, w2, "{wf}");
        assert_eq!(world_to_text(&w2), text);
        assert_eq!(w.canonical_bytes(), w2.canonical_bytes());
        let w = Arc::new(w);
        for pf in pfs {
            let p = parse_problem(&corpus(pf), &w).unwrap();
            assert!(p.warnings.is_empty(), "{pf}: {:?}", p.warnings);
            let text = problem_to_text(&p.value);
            let p2 = parse_problem(&SourceDoc::new(text.clone(), "rt"), &w)
                .unwrap()
                .value;
            assert_eq!(p.value, p2, "{pf}");
            assert_eq!(problem_to_text(&p2), text);
        }
    }
}

#[test]
fn empty_document_has_no_world() {
    let errs = parse_world(&SourceDoc::new("", "e")).unwrap_err();
    assert_eq!(errs.len(), 1);
    assert_eq!(errs[0].code, DiagCode::NoWorld);
    assert!(errs[0].message.contains("no world declaration"));
}

#[test]
fn undeclared_predicate_is_named() {
    let src = "(:world w (:sorts s) (:objects (a s))\n (:predicates (p s))\n (:action go (:params (?x s)) (:pre (q ?x)) (:eff (p ?x))))";
    let errs = parse_world(&SourceDoc::new(src, "w")).unwrap_err();
    assert_eq!(errs[0].code, DiagCode::UnknownPredicate);
    assert!(errs[0].message.contains("`q`"));
    assert_eq!((errs[0].line, errs[0].column), (3, 38));
}

#[test]
fn distinct_codes() {
    let cases = [
        ("(:world w (:sorts s) (:objects (a t)))", DiagCode::UnknownSort),
        ("(:world w (:sorts s) (:objects (a s) (a s)))", DiagCode::DuplicateName),
        (
            "(:world w (:sorts s) (:objects (a s)) (:predicates (p s)) (:action x (:params (?v s)) (:eff (p ?v ?v))))",
            DiagCode::ArityMismatch,
        ),
        ("(:world w (:sorts s) (:objects (a s))", DiagCode::Syntax),
    ];
    for (src, code) in cases {
        let errs = parse_world(&SourceDoc::new(src, "w")).unwrap_err();
        assert_eq!(errs[0].code, code, "{src}");
    }
}

#[test]
fn unknown_goal_object_has_position() {
    let w = Arc::new(parse_world(&corpus("block_towel.world")).unwrap().value);
    let src = "(:problem p (:world block_towel)\n  (:init (at B L2))\n  (:goal (at B L9)))";
    let errs = parse_problem(&SourceDoc::new(src, "p"), &w).unwrap_err();
    assert_eq!(errs[0].code, DiagCode::UnknownObject);
    assert_eq!((errs[0].line, errs[0].column), (3, 16));
}

#[test]
fn goal_outside_subdomain_warns() {
    let w = Arc::new(parse_world(&corpus("block_towel.world")).unwrap().value);
    let src = "(:problem p (:world block_towel) (:init (at B L2)) (:goal (covered B T)))";
    let p = parse_problem(&SourceDoc::new(src, "p"), &w).unwrap();
    assert_eq!(p.warnings.len(), 1);
    assert_eq!(p.warnings[0].code, DiagCode::GoalOutsideSubdomain);
}

#[test]
fn inconsistent_init_rejected() {
    let w = Arc::new(parse_world(&corpus("block_towel.world")).unwrap().value);
    let src = "(:problem p (:world block_towel) (:init (at B L2) (not (at B L2))) (:goal))";
    let errs = parse_problem(&SourceDoc::new(src, "p"), &w).unwrap_err();
    assert_eq!(errs[0].code, DiagCode::InconsistentInit);
}

#[test]
fn invalid_utf8_is_a_diagnostic() {
    let d = SourceDoc::from_bytes(b"(:world\n w \xff)", "x").unwrap_err();
    assert_eq!(d.code, DiagCode::InvalidUtf8);
    assert_eq!((d.line, d.column), (2, 4));
}

fn parse_bytes(bytes: &[u8], world: &Arc<mgpkit::model::World>) {
    if let Ok(doc) = SourceDoc::from_bytes(bytes, "fuzz") {
        let _ = parse_world(&doc);
        let _ = parse_problem(&doc, world);
    }
}

fn mutate(base: &[u8], edits: &[(usize, u8, u8)]) -> Vec<u8> {
    let mut out = base.to_vec();
    for &(pos, byte, op) in edits {
        if out.is_empty() {
            out.push(byte);
            continue;
        }
        let i = pos % out.len();
        match op % 3 {
            0 => out[i] = byte,
            1 => out.insert(i, byte),
            _ => {
                out.remove(i);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..512)) {
        let w = Arc::new(parse_world(&corpus("block_towel.world")).unwrap().value);
        parse_bytes(&bytes, &w);
    }

    #[test]
    fn mutated_corpus_never_panics(
        which in 0usize..3,
        edits in proptest::collection::vec((any::<usize>(), any::<u8>(), any::<u8>()), 1..12),
    ) {
        let w = Arc::new(parse_world(&corpus("block_towel.world")).unwrap().value);
        let base = ["block_towel.world", "block_towel_notouch.problem", "screwdriver.world"][which];
        let text = std::fs::read(
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(base),
        )
        .unwrap();
        parse_bytes(&mutate(&text, &edits), &w);
    }

    #[test]
    fn deep_nesting_is_a_diagnostic(depth in 1usize..4000) {
        let src = format!("(:world w {}{})", "(".repeat(depth), ")".repeat(depth));
        let _ = parse_world(&SourceDoc::new(src, "deep"));
    }
}
