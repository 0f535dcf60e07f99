#![allow(dead_code)]

pub mod oracle;

use std::sync::Arc;

use mgpkit::bench::{all_cases, BenchCase};
use mgpkit::model::{Problem, World};

pub fn case(name: &str) -> (Arc<World>, Problem) {
    bench_case(name).load().expect("corpus case loads")
}

pub fn bench_case(name: &str) -> BenchCase {
    all_cases()
        .expect("manifest parses")
        .into_iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("no corpus case {name}"))
}

/// Varied small sizes for seeded random cases.
pub fn sizes_for(seed: u64) -> mgpkit::bench::RandomSizes {
    let s = seed as usize;
    let hidden = [0.2, 0.4, 0.6][s % 3];
    mgpkit::bench::RandomSizes::new(2 + s % 3, 2 + (s / 3) % 3, 3 + (s / 2) % 4, hidden)
}

pub fn random_case(seed: u64) -> (BenchCase, Arc<World>, Problem) {
    let c = mgpkit::bench::gen_random_mgp(seed, sizes_for(seed), &oracle::NaiveOracle)
        .expect("random case generates");
    let (w, p) = c.load().expect("random case loads");
    (c, w, p)
}
