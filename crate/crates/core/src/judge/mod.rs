//! Compression-based stand-ins for a universal judge: hypothesis priors,
//! strategy likelihoods, expected progress and continuation prediction.
//!
//! Every numeric type is generic over `F: Float`; the crate root exports
//! `f64` and `f32` aliases.

mod compress;
mod hypothesis;
mod progress;

use thiserror::Error;

pub use compress::{compress_bits, ncd, Compressor, Zlib};
pub use hypothesis::{
    random_agent_likelihood, Hypothesis, HypothesisKind, HypothesisRegistry, EPSILON,
};
pub use progress::{
    expected_progress, predict_continuation, resourcefulness_default, Evaluator,
    HypothesisScore, InsightProgress, Prediction, ProgressMetric, ProgressOptions,
    ProgressReport,
};

use crate::mgp::{MgpError, MgpStatus};
use crate::model::ExecError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JudgeError {
    #[error("compression distance needs two non-empty inputs")]
    EmptyInput,
    #[error("hypothesis registry is empty")]
    EmptyRegistry,
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error(transparent)]
    Mgp(#[from] MgpError),
    #[error("progress metric undefined for status {0}")]
    MetricUndefined(MgpStatus),
    #[error("conditional on a strategy with zero mass")]
    ZeroMass,
    #[error("candidate {index} has {len} steps, more than the horizon {k}")]
    TooLong { index: usize, len: usize, k: usize },
}
