use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::classify::{classify_problem, MgpStatus};
use super::{Budget, MgpError};
use crate::judge::Compressor;
use crate::lang::{strategy_body, strategy_set_bytes, CanonicalBytes};
use crate::model::{
    Context, GeneratorRef, Generators, Modification, Problem, Step, Strategy, World,
};
use crate::planner::search_plan;

/// Inclusion-minimal sets of generators whose addition makes the goal
/// reachable, smallest first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinimalExtensions {
    pub sets: Vec<Generators>,
    /// Set when the subset budget ran out or a search was truncated.
    pub partial: bool,
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns `false`.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut ix: Vec<usize> = (0..k).collect();
    loop {
        if !f(&ix) {
            return;
        }
        let mut i = k;
        while i > 0 && ix[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        ix[i - 1] += 1;
        for j in i..k {
            ix[j] = ix[j - 1] + 1;
        }
    }
}

/// Whether the goal is reachable after adding `extra` to the subdomain.
/// `None` when the search was truncated.
fn solvable_with(p: &Problem, extra: &Generators, budget: &Budget) -> Result<Option<bool>, MgpError> {
    let view = p
        .subdomain
        .with_generators(p.subdomain.generators().union(extra))?;
    let r = search_plan(&view, &p.init, &p.goal, &p.never, budget.cap)?;
    Ok(match (r.plan.is_some(), r.stats.truncated) {
        (true, _) => Some(true),
        (false, true) => None,
        (false, false) => Some(false),
    })
}

/// Breadth-first search over subsets of the generators missing from the
/// agent subdomain. Supersets of sets already found are skipped.
pub fn minimal_extensions(p: &Problem, budget: &Budget) -> Result<MinimalExtensions, MgpError> {
    let verdict = classify_problem(p, budget)?;
    match verdict.status {
        MgpStatus::Mgp => {}
        MgpStatus::SolvableInSubdomain | MgpStatus::UnsolvableInWorld => {
            return Ok(MinimalExtensions::default())
        }
        MgpStatus::UnknownBudget => return Err(MgpError::Budget),
    }
    let pool: Vec<GeneratorRef> = p.subdomain.missing();
    let mut out = MinimalExtensions::default();
    let mut tested = 0usize;
    let mut err = None;
    for k in 1..=pool.len() {
        let mut stop = false;
        for_each_combination(pool.len(), k, |ix| {
            let cand = Generators::from_refs(ix.iter().map(|&i| pool[i]));
            if out.sets.iter().any(|s| s.is_subset(&cand)) {
                return true;
            }
            if tested >= budget.max_subsets {
                out.partial = true;
                stop = true;
                return false;
            }
            tested += 1;
            match solvable_with(p, &cand, budget) {
                Ok(Some(true)) => out.sets.push(cand),
                Ok(Some(false)) => {}
                Ok(None) => out.partial = true,
                Err(e) => {
                    err = Some(e);
                    stop = true;
                    return false;
                }
            }
            true
        });
        if let Some(e) = err {
            return Err(e);
        }
        if stop {
            break;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategySetKind {
    Optimal,
    OptimalInsightful,
}

/// A canonical set of strategies over one world. Ordered by number of
/// modifications, then number of actions, then encoding.
#[derive(Clone, Debug)]
pub struct StrategySet {
    pub kind: StrategySetKind,
    pub world: Arc<World>,
    strategies: Vec<Strategy>,
}

impl PartialEq for StrategySet {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_bytes() == other.canonical_bytes()
    }
}

impl StrategySet {
    pub fn new(kind: StrategySetKind, world: Arc<World>, strategies: Vec<Strategy>) -> Self {
        let mut keyed: Vec<(usize, usize, Vec<u8>, Strategy)> = strategies
            .into_iter()
            .map(|w| {
                let body = strategy_body(&world, &w);
                let mods = w.modifications().map(|m| m.payload.len()).sum();
                (mods, w.actions().count(), body, w)
            })
            .collect();
        keyed.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
        keyed.dedup_by(|a, b| a.2 == b.2);
        StrategySet {
            kind,
            world,
            strategies: keyed.into_iter().map(|k| k.3).collect(),
        }
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }
}

impl CanonicalBytes for StrategySet {
    fn canonical_bytes(&self) -> Vec<u8> {
        strategy_set_bytes(&self.world, &self.strategies)
    }
}

/// Approximate M-number: compressed size in bits of the set's canonical
/// encoding. An upper bound on its description length, not the exact value.
pub fn m_number(set: &StrategySet, compressor: &dyn Compressor) -> u64 {
    compressor.compress_bits(&set.canonical_bytes())
}

/// Whether executing `w` from `c` modifies the subdomain and leaves the goal
/// reachable in the resulting subdomain.
pub fn is_insightful(
    c: &Context,
    p: &Problem,
    w: &Strategy,
    budget: &Budget,
) -> Result<bool, MgpError> {
    let end = c.execute(w)?;
    if !w.is_domain_modifying() || !p.never.admits(&end.state) {
        return Ok(false);
    }
    let r = search_plan(&end.view, &end.state, &p.goal, &p.never, budget.cap)?;
    match (r.plan, r.stats.truncated) {
        (Some(_), _) => Ok(true),
        (None, true) => Err(MgpError::Budget),
        (None, false) => Ok(false),
    }
}

#[derive(Clone, Debug)]
pub struct OptimalStrategies {
    pub optimal: StrategySet,
    pub insightful: StrategySet,
    pub minimal: MinimalExtensions,
}

/// One modification step per generator, in kind-then-id order.
pub fn reveal_steps(set: &Generators) -> Vec<Step> {
    set.refs()
        .map(|r| Step::Modify(Modification::extension(Generators::from_refs([r]))))
        .collect()
}

/// Pairs each minimal extension set, applied up front, with the
/// lexicographically least shortest plan in the extended subdomain.
pub fn optimal_strategies(p: &Problem, budget: &Budget) -> Result<OptimalStrategies, MgpError> {
    let verdict = classify_problem(p, budget)?;
    if verdict.status != MgpStatus::Mgp {
        return Err(MgpError::NotMgp(verdict.status));
    }
    let minimal = minimal_extensions(p, budget)?;
    let mut optimal = Vec::new();
    let mut insightful = Vec::new();
    let start = p.initial_context();
    for set in &minimal.sets {
        let mods = Strategy::new(reveal_steps(set));
        let ext = start.execute(&mods)?;
        let r = search_plan(&ext.view, &ext.state, &p.goal, &p.never, budget.cap)?;
        let Some(plan) = r.plan else {
            return Err(MgpError::Budget);
        };
        let full = mods.concat(&Strategy::from_plan(plan.actions.iter().cloned()));
        // shortest prefix of the plan after which the goal stays reachable
        let n_mods = mods.len();
        let mut prefix = None;
        for k in 0..=plan.len() {
            let cand = full.prefix(n_mods + k);
            if is_insightful(&start, p, &cand, budget)? {
                prefix = Some(cand);
                break;
            }
        }
        insightful.push(prefix.ok_or(MgpError::Budget)?);
        optimal.push(full);
    }
    Ok(OptimalStrategies {
        optimal: StrategySet::new(StrategySetKind::Optimal, p.world.clone(), optimal),
        insightful: StrategySet::new(
            StrategySetKind::OptimalInsightful,
            p.world.clone(),
            insightful,
        ),
        minimal,
    })
}
