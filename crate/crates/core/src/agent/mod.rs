//! Simulated agents that interleave planning with requests for domain
//! extensions, answered by an environment that holds the whole world.

mod relax;
mod solve;
mod trace;

use thiserror::Error;

pub use relax::relax_schema;
pub use solve::{
    solve_mgp, Environment, Outcome, Policy, PolicyKind, Request, StrategyTrace,
    DEFAULT_EXPLORATION_BUDGET,
};
pub use trace::{parse_trace, trace_to_jsonl};

use crate::mgp::MgpError;
use crate::model::{ExecError, ModelError};
use crate::planner::PlanError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgentError {
    #[error("invalid policy: {0}")]
    Policy(String),
    #[error("relaxation rejected: {0}")]
    Relax(String),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error(transparent)]
    Mgp(#[from] MgpError),
    #[error("trace line {line}: {message}")]
    Trace { line: usize, message: String },
}
