use serde::{Deserialize, Serialize};

use super::{Budget, MgpError};
use crate::model::Problem;
use crate::planner::{reachable_filtered, search_plan, Plan, SearchStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MgpStatus {
    SolvableInSubdomain,
    #[serde(rename = "MGP")]
    Mgp,
    UnsolvableInWorld,
    UnknownBudget,
}

impl MgpStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            MgpStatus::SolvableInSubdomain => "SolvableInSubdomain",
            MgpStatus::Mgp => "MGP",
            MgpStatus::UnsolvableInWorld => "UnsolvableInWorld",
            MgpStatus::UnknownBudget => "UnknownBudget",
        }
    }
}

impl std::fmt::Display for MgpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MgpStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "SolvableInSubdomain" => Ok(MgpStatus::SolvableInSubdomain),
            "MGP" => Ok(MgpStatus::Mgp),
            "UnsolvableInWorld" => Ok(MgpStatus::UnsolvableInWorld),
            "UnknownBudget" => Ok(MgpStatus::UnknownBudget),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

/// The literal universal reading: every reachable state satisfies the goal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictReport {
    pub world_all_goal: bool,
    pub subdomain_all_goal: bool,
    /// `world_all_goal && !subdomain_all_goal`.
    pub mgp: bool,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MgpVerdict {
    pub status: MgpStatus,
    /// A world-level plan, present when the status is MGP or the problem is
    /// solvable in the subdomain (then it is the subdomain plan).
    pub witness: Option<Plan>,
    pub subdomain: SearchStats,
    pub world: Option<SearchStats>,
    pub strict: Option<StrictReport>,
}

/// Decides the problem's class by exhaustive search: first in the agent
/// subdomain, then in the whole world.
pub fn classify_problem(p: &Problem, budget: &Budget) -> Result<MgpVerdict, MgpError> {
    let sub = search_plan(&p.subdomain, &p.init, &p.goal, &p.never, budget.cap)?;
    if sub.plan.is_some() {
        return Ok(MgpVerdict {
            status: MgpStatus::SolvableInSubdomain,
            witness: sub.plan,
            subdomain: sub.stats,
            world: None,
            strict: None,
        });
    }
    if sub.stats.truncated {
        return Ok(MgpVerdict {
            status: MgpStatus::UnknownBudget,
            witness: None,
            subdomain: sub.stats,
            world: None,
            strict: None,
        });
    }
    let world = search_plan(&p.world_view(), &p.init, &p.goal, &p.never, budget.cap)?;
    let status = match (&world.plan, world.stats.truncated) {
        (Some(_), _) => MgpStatus::Mgp,
        (None, true) => MgpStatus::UnknownBudget,
        (None, false) => MgpStatus::UnsolvableInWorld,
    };
    Ok(MgpVerdict {
        status,
        witness: world.plan,
        subdomain: sub.stats,
        world: Some(world.stats),
        strict: None,
    })
}

/// [`classify_problem`] plus the universal-quantifier reading, evaluated
/// over full closures.
pub fn classify_problem_strict(p: &Problem, budget: &Budget) -> Result<MgpVerdict, MgpError> {
    let mut v = classify_problem(p, budget)?;
    let sub = reachable_filtered(&p.subdomain, &p.init, &p.never, budget.cap)?;
    let world = reachable_filtered(&p.world_view(), &p.init, &p.never, budget.cap)?;
    let sub_all = sub.states().iter().all(|s| p.subdomain.entails(s, &p.goal));
    let world_all = world.all_entail(&p.goal);
    v.strict = Some(StrictReport {
        world_all_goal: world_all,
        subdomain_all_goal: sub_all,
        mgp: world_all && !sub_all,
        truncated: sub.truncated() || world.truncated(),
    });
    Ok(v)
}
