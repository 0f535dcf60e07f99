//! Open-world planning with hidden generators: a typed STRIPS-style model,
//! a text format, exhaustive planning, classification of problems that need
//! domain modification, simulated agents, compression-based judging and a
//! benchmark corpus.

pub mod agent;
pub mod bench;
pub mod judge;
pub mod lang;
pub mod mgp;
pub mod model;
pub mod planner;

pub type HypothesisRegistryF64 = judge::HypothesisRegistry<f64>;
pub type HypothesisRegistryF32 = judge::HypothesisRegistry<f32>;
pub type ProgressReportF64 = judge::ProgressReport<f64>;
pub type ProgressReportF32 = judge::ProgressReport<f32>;
pub type PredictionF64 = judge::Prediction<f64>;
pub type PredictionF32 = judge::Prediction<f32>;
