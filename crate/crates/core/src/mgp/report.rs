use serde::{Deserialize, Serialize};

use super::classify::{classify_problem, classify_problem_strict, MgpStatus, StrictReport};
use super::extend::{m_number, optimal_strategies};
use super::{Budget, MgpError};
use crate::judge::Compressor;
use crate::model::Problem;
use crate::planner::SearchStats;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportBudget {
    pub cap: usize,
    pub max_subsets: usize,
    pub subdomain: SearchStats,
    pub world: Option<SearchStats>,
}

/// JSON-facing summary of a classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MgpReport {
    pub status: MgpStatus,
    pub witness: Option<Vec<String>>,
    pub minimal_deltas: Vec<Vec<String>>,
    pub m_number_bits: Option<u64>,
    pub budget: ReportBudget,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict: Option<StrictReport>,
}

impl MgpReport {
    /// Classifies `p` and, for MGPs, adds minimal extensions and the
    /// approximate M-number.
    pub fn build(
        p: &Problem,
        budget: &Budget,
        compressor: &dyn Compressor,
        strict: bool,
    ) -> Result<MgpReport, MgpError> {
        let v = if strict {
            classify_problem_strict(p, budget)?
        } else {
            classify_problem(p, budget)?
        };
        let mut report = MgpReport {
            status: v.status,
            witness: v.witness.as_ref().map(|w| w.labels()),
            minimal_deltas: Vec::new(),
            m_number_bits: None,
            budget: ReportBudget {
                cap: budget.cap,
                max_subsets: budget.max_subsets,
                subdomain: v.subdomain,
                world: v.world,
            },
            strict: v.strict,
        };
        if v.status == MgpStatus::Mgp {
            let opt = optimal_strategies(p, budget)?;
            report.minimal_deltas = opt
                .minimal
                .sets
                .iter()
                .map(|s| s.refs().map(|r| p.world.generator_name(r)).collect())
                .collect();
            report.m_number_bits = Some(m_number(&opt.insightful, compressor));
        }
        Ok(report)
    }
}
