//! Problem classification, the classical-to-open-world reduction, minimal
//! extensions, optimal strategies and the approximate M-number.

mod classify;
mod extend;
mod reduce;
mod report;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use classify::{classify_problem, classify_problem_strict, MgpStatus, MgpVerdict, StrictReport};
pub use extend::{
    is_insightful, m_number, minimal_extensions, optimal_strategies, reveal_steps,
    MinimalExtensions, OptimalStrategies, StrategySet, StrategySetKind,
};
pub use reduce::{reduce_to_mgp, ReducedInstance};
pub use report::{MgpReport, ReportBudget};

use crate::model::{ExecError, ModelError};
use crate::planner::{PlanError, DEFAULT_CAP};

/// Search limits shared by every exhaustive operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Maximum number of stored states per search.
    pub cap: usize,
    /// Maximum number of candidate subsets tested for minimal extensions.
    pub max_subsets: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            cap: DEFAULT_CAP,
            max_subsets: 4096,
        }
    }
}

impl Budget {
    pub fn with_cap(cap: usize) -> Self {
        Budget {
            cap,
            ..Budget::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MgpError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error("not an MGP (status {0})")]
    NotMgp(MgpStatus),
    #[error("search budget exhausted before a definite answer")]
    Budget,
}
