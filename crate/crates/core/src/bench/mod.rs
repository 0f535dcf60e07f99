//! The shipped corpus, its manifest of expected verdicts and golden values,
//! and a seeded generator of small random problems.

mod random;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use random::{gen_random_mgp, OracleVerdict, PlannerOracle, RandomSizes, VerdictOracle};

use crate::lang::{parse_problem, parse_world, Diagnostic, SourceDoc};
use crate::mgp::MgpStatus;
use crate::model::{ModelError, Problem, World};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("{}", render(.origin, .diagnostics))]
    Parse {
        origin: String,
        diagnostics: Vec<Diagnostic>,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("sizes exceed the generator budget: {0}")]
    Budget(String),
    #[error("oracle failed: {0}")]
    Oracle(String),
}

fn render(origin: &str, diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.render(origin))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Every corpus file, by file name.
pub const CORPUS: &[(&str, &str)] = &[
    ("block_towel.world", include_str!("../../../../corpus/block_towel.world")),
    (
        "block_towel_baseline.problem",
        include_str!("../../../../corpus/block_towel_baseline.problem"),
    ),
    (
        "block_towel_notouch.problem",
        include_str!("../../../../corpus/block_towel_notouch.problem"),
    ),
    ("screwdriver.world", include_str!("../../../../corpus/screwdriver.world")),
    (
        "screwdriver_recessed.world",
        include_str!("../../../../corpus/screwdriver_recessed.world"),
    ),
    (
        "screwdriver_missing.problem",
        include_str!("../../../../corpus/screwdriver_missing.problem"),
    ),
    (
        "screwdriver_available.problem",
        include_str!("../../../../corpus/screwdriver_available.problem"),
    ),
    (
        "screwdriver_recessed.problem",
        include_str!("../../../../corpus/screwdriver_recessed.problem"),
    ),
];

pub const MANIFEST: &str = include_str!("../../../../corpus/manifest.json");

pub fn corpus_file(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoldenSource {
    /// Read off a published listing.
    Transcribed,
    /// Produced by an independent brute-force check.
    Oracle,
    /// Measured with this library and frozen.
    Computed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Golden {
    pub value: u64,
    pub source: GoldenSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestCase {
    pub name: String,
    pub world: String,
    pub problem: String,
    pub expected_status: MgpStatus,
    pub golden: BTreeMap<String, Golden>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub compressor: String,
    pub cases: Vec<ManifestCase>,
}

pub fn manifest() -> Result<Manifest, BenchError> {
    serde_json::from_str(MANIFEST).map_err(|e| BenchError::Manifest(e.to_string()))
}

/// A world and problem document with the verdict they should produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchCase {
    pub name: String,
    pub world_doc: SourceDoc,
    pub problem_doc: SourceDoc,
    pub expected: MgpStatus,
    pub golden: BTreeMap<String, Golden>,
}

impl BenchCase {
    pub fn load(&self) -> Result<(Arc<World>, Problem), BenchError> {
        let world = parse_world(&self.world_doc).map_err(|diagnostics| BenchError::Parse {
            origin: self.world_doc.origin.clone(),
            diagnostics,
        })?;
        let world = Arc::new(world.value);
        let problem =
            parse_problem(&self.problem_doc, &world).map_err(|diagnostics| BenchError::Parse {
                origin: self.problem_doc.origin.clone(),
                diagnostics,
            })?;
        Ok((world, problem.value))
    }

    pub fn golden(&self, key: &str) -> Option<u64> {
        self.golden.get(key).map(|g| g.value)
    }
}

fn from_manifest(name: &str) -> Result<BenchCase, BenchError> {
    let m = manifest()?;
    let case = m
        .cases
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| BenchError::Manifest(format!("no case `{name}`")))?;
    let doc = |file: &str| {
        corpus_file(file)
            .map(|t| SourceDoc::new(t, format!("corpus/{file}")))
            .ok_or_else(|| BenchError::Manifest(format!("no corpus file `{file}`")))
    };
    Ok(BenchCase {
        name: case.name,
        world_doc: doc(&case.world)?,
        problem_doc: doc(&case.problem)?,
        expected: case.expected_status,
        golden: case.golden,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockTowel {
    Baseline,
    NoTouch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Screwdriver {
    Missing,
    Available,
    Recessed,
}

pub fn build_block_towel(variant: BlockTowel) -> Result<BenchCase, BenchError> {
    from_manifest(match variant {
        BlockTowel::Baseline => "block_towel_baseline",
        BlockTowel::NoTouch => "block_towel_notouch",
    })
}

pub fn build_screwdriver(variant: Screwdriver) -> Result<BenchCase, BenchError> {
    from_manifest(match variant {
        Screwdriver::Missing => "screwdriver_missing",
        Screwdriver::Available => "screwdriver_available",
        Screwdriver::Recessed => "screwdriver_recessed",
    })
}

/// Every case listed in the manifest, in manifest order.
pub fn all_cases() -> Result<Vec<BenchCase>, BenchError> {
    manifest()?
        .cases
        .iter()
        .map(|c| from_manifest(&c.name))
        .collect()
}
