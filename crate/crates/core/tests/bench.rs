mod common;

use std::collections::BTreeSet;

use mgpkit::bench::*;
use mgpkit::judge::Zlib;
use mgpkit::lang::{problem_to_text, world_to_text, SourceDoc};
use mgpkit::mgp::{classify_problem, Budget, MgpStatus};

use common::oracle::{instance, NaiveOracle};

#[test]
fn manifest_is_consistent() {
    let m = manifest().unwrap();
    assert_eq!(m.schema_version, 1);
    assert_eq!(m.compressor, Zlib::ID);
    let names: BTreeSet<_> = m.cases.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names.len(), m.cases.len());
    for c in &m.cases {
        assert!(corpus_file(&c.world).is_some(), "{}", c.world);
        assert!(corpus_file(&c.problem).is_some(), "{}", c.problem);
    }
}

#[test]
fn builders_pick_the_right_cases() {
    assert_eq!(build_block_towel(BlockTowel::Baseline).unwrap().expected, MgpStatus::SolvableInSubdomain);
    assert_eq!(build_block_towel(BlockTowel::NoTouch).unwrap().expected, MgpStatus::Mgp);
    assert_eq!(build_screwdriver(Screwdriver::Missing).unwrap().expected, MgpStatus::Mgp);
    assert_eq!(
        build_screwdriver(Screwdriver::Available).unwrap().expected,
        MgpStatus::SolvableInSubdomain
    );
    let recessed = build_screwdriver(Screwdriver::Recessed).unwrap();
    assert!(recessed.golden("minimal_delta_size").unwrap() >= 2);
}

#[test]
fn corpus_round_trips_and_classifies() {
    for c in all_cases().unwrap() {
        let (w, p) = c.load().unwrap();
        let again = BenchCase {
            world_doc: SourceDoc::new(world_to_text(&w), "rt.world"),
            problem_doc: SourceDoc::new(problem_to_text(&p), "rt.problem"),
            ..c.clone()
        };
        let (w2, p2) = again.load().unwrap();
        assert_eq!(*w, *w2, "{}", c.name);
        assert_eq!(p.init, p2.init);
        assert_eq!(p.goal, p2.goal);
        assert_eq!(p.subdomain.generators(), p2.subdomain.generators());
        let v = classify_problem(&p, &Budget::default()).unwrap();
        assert_eq!(v.status, c.expected, "{}", c.name);
    }
}

#[test]
fn goldens_agree_with_the_oracle() {
    for c in all_cases().unwrap() {
        let (_, p) = c.load().unwrap();
        let inst = instance(&p);
        for (key, g) in &c.golden {
            let oracle_value = match key.as_str() {
                "plan_length" => inst.distance(&inst.subdomain).map(|d| d as u64),
                "minimal_delta_size" => inst.minimal_extensions().first().map(|m| {
                    (m.predicates.len() + m.objects.len() + m.schemas.len()) as u64
                }),
                "extended_plan_length" => inst
                    .minimal_extensions()
                    .first()
                    .and_then(|m| inst.distance(&inst.with_extra(m)))
                    .map(|d| d as u64),
                "subdomain_states" => Some(inst.count(&inst.subdomain) as u64),
                "world_states" => Some(inst.count(&inst.world) as u64),
                "m_number_bits" => {
                    assert_eq!(g.source, GoldenSource::Computed);
                    continue;
                }
                other => panic!("{}: golden `{other}` has no check", c.name),
            };
            assert_eq!(oracle_value, Some(g.value), "{} {key}", c.name);
        }
    }
}

#[test]
fn no_touch_world_reaches_more_states() {
    let c = build_block_towel(BlockTowel::NoTouch).unwrap();
    assert!(c.golden("world_states").unwrap() > c.golden("subdomain_states").unwrap());
}

#[test]
fn seed_42_matches_the_oracle() {
    let c = gen_random_mgp(42, RandomSizes::new(4, 3, 5, 0.4), &NaiveOracle).unwrap();
    let (_, p) = c.load().unwrap();
    let v = classify_problem(&p, &Budget::default()).unwrap();
    assert_eq!(v.status, c.expected);
    let planner = gen_random_mgp(42, RandomSizes::new(4, 3, 5, 0.4), &PlannerOracle::default()).unwrap();
    assert_eq!(planner, c);
}

#[test]
fn nothing_hidden_is_never_an_mgp() {
    for seed in 0..30 {
        let c = gen_random_mgp(seed, RandomSizes::new(3, 3, 4, 0.0), &NaiveOracle).unwrap();
        assert_ne!(c.expected, MgpStatus::Mgp, "seed {seed}");
        let (w, p) = c.load().unwrap();
        assert_eq!(p.subdomain.generators(), &w.all_generators());
    }
}

#[test]
fn oversized_requests_are_rejected() {
    for sizes in [
        RandomSizes::new(9, 3, 5, 0.4),
        RandomSizes::new(0, 3, 5, 0.4),
        RandomSizes::new(4, 9, 5, 0.4),
        RandomSizes::new(4, 3, 25, 0.4),
        RandomSizes::new(4, 3, 5, 1.5),
    ] {
        assert!(matches!(gen_random_mgp(1, sizes, &NaiveOracle), Err(BenchError::Budget(_))));
    }
}

#[test]
fn generation_is_reproducible_and_varied() {
    let mut statuses = BTreeSet::new();
    for seed in 0..60 {
        let sizes = common::sizes_for(seed);
        let a = gen_random_mgp(seed, sizes, &NaiveOracle).unwrap();
        let b = gen_random_mgp(seed, sizes, &NaiveOracle).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.name, format!("rand_{seed}"));
        let (w, _) = a.load().unwrap();
        assert!(w.atom_count() <= 16);
        statuses.insert(a.expected.as_str());
    }
    assert!(statuses.contains("MGP"), "{statuses:?}");
    assert!(statuses.contains("SolvableInSubdomain"), "{statuses:?}");
}
