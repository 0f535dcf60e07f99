//! Breadth-first reachability and optimal plan search over subdomain views.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{entails_goal, GroundAction, Goal, NeverConstraints, State, SubdomainView};

/// Default limit on the number of stored states.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("state cap must be at least 1")]
    ZeroCap,
    #[error("the initial state violates a never-constraint")]
    InitViolatesNever,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Plan {
    pub actions: Vec<GroundAction>,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.actions.iter().map(|a| a.label.clone()).collect()
    }
}

/// Counts describing a finished search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub states: usize,
    pub explored: usize,
    pub truncated: bool,
}

/// States reachable from a start state, with BFS parent links.
#[derive(Clone, Debug)]
pub struct ReachableSet {
    states: Vec<State>,
    index: HashMap<State, u32>,
    parent: Vec<Option<(u32, u32)>>,
    actions: Vec<GroundAction>,
    truncated: bool,
    explored: usize,
}

impl ReachableSet {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn explored(&self) -> usize {
        self.explored
    }

    pub fn stats(&self) -> SearchStats {
        SearchStats {
            states: self.len(),
            explored: self.explored,
            truncated: self.truncated,
        }
    }

    /// States in discovery order; the first is the start state.
    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn contains(&self, s: &State) -> bool {
        self.index.contains_key(s)
    }

    pub fn is_subset_of(&self, other: &ReachableSet) -> bool {
        self.states.iter().all(|s| other.contains(s))
    }

    /// The BFS path from the start state to `s`.
    pub fn path_to(&self, s: &State) -> Option<Plan> {
        let mut ix = *self.index.get(s)?;
        let mut rev = Vec::new();
        while let Some((p, a)) = self.parent[ix as usize] {
            rev.push(self.actions[a as usize].clone());
            ix = p;
        }
        rev.reverse();
        Some(Plan { actions: rev })
    }

    pub fn any_entails(&self, goal: &Goal) -> bool {
        self.states.iter().any(|s| entails_goal(s, goal))
    }

    pub fn all_entail(&self, goal: &Goal) -> bool {
        self.states.iter().all(|s| entails_goal(s, goal))
    }
}

/// Full breadth-first closure of `view` from `s0`.
pub fn reachable(view: &SubdomainView, s0: &State, cap: usize) -> Result<ReachableSet, PlanError> {
    reachable_filtered(view, s0, &NeverConstraints::none(), cap)
}

/// As [`reachable`], excluding states that violate `never`.
pub fn reachable_filtered(
    view: &SubdomainView,
    s0: &State,
    never: &NeverConstraints,
    cap: usize,
) -> Result<ReachableSet, PlanError> {
    if cap == 0 {
        return Err(PlanError::ZeroCap);
    }
    if !never.admits(s0) {
        return Err(PlanError::InitViolatesNever);
    }
    let actions: Vec<GroundAction> = view.actions().cloned().collect();
    let mut rs = ReachableSet {
        states: vec![s0.clone()],
        index: HashMap::from([(s0.clone(), 0)]),
        parent: vec![None],
        actions,
        truncated: false,
        explored: 0,
    };
    let mut head = 0;
    'bfs: while head < rs.states.len() {
        let cur = rs.states[head].clone();
        rs.explored += 1;
        for (ai, a) in rs.actions.iter().enumerate() {
            if !a.applicable(&cur) {
                continue;
            }
            let next = a.apply_unchecked(&cur);
            if !never.admits(&next) || rs.index.contains_key(&next) {
                continue;
            }
            if rs.states.len() >= cap {
                rs.truncated = true;
                break 'bfs;
            }
            rs.index.insert(next.clone(), rs.states.len() as u32);
            rs.states.push(next);
            rs.parent.push(Some((head as u32, ai as u32)));
        }
        head += 1;
    }
    Ok(rs)
}

/// Result of a goal-directed search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanSearch {
    pub plan: Option<Plan>,
    pub stats: SearchStats,
}

/// Actions that can contribute to the goal, and the atoms they depend on.
///
/// An action is relevant when it adds an atom that must become true or
/// deletes one that must become false; its preconditions then join those
/// sets. Irrelevant actions never shorten a plan, so dropping them keeps
/// every shortest plan and search can run on states projected to the
/// relevant atoms.
fn relevance(
    actions: &[&GroundAction],
    goal: &Goal,
    never: &NeverConstraints,
    n_atoms: usize,
) -> (Vec<usize>, FixedBitSet) {
    let mut need_true = FixedBitSet::with_capacity(n_atoms);
    let mut need_false = FixedBitSet::with_capacity(n_atoms);
    for &a in &goal.pos {
        need_true.insert(a.index());
    }
    for &a in &goal.neg {
        need_false.insert(a.index());
    }
    let mut relevant = vec![false; actions.len()];
    loop {
        let mut changed = false;
        for (i, a) in actions.iter().enumerate() {
            if relevant[i] {
                continue;
            }
            let hit = a.add.iter().any(|x| need_true.contains(x.index()))
                || a.del.iter().any(|x| need_false.contains(x.index()));
            if hit {
                relevant[i] = true;
                changed = true;
                for x in &a.pre_pos {
                    need_true.insert(x.index());
                }
                for x in &a.pre_neg {
                    need_false.insert(x.index());
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut mask = need_true;
    mask.union_with(&need_false);
    for a in never.atoms() {
        mask.insert(a.index());
    }
    let idx = relevant
        .iter()
        .enumerate()
        .filter_map(|(i, &r)| r.then_some(i))
        .collect();
    (idx, mask)
}

/// Breadth-first search for the lexicographically least shortest plan.
///
/// Goal literals outside the view's vocabulary are never satisfied.
pub fn search_plan(
    view: &SubdomainView,
    s0: &State,
    goal: &Goal,
    never: &NeverConstraints,
    cap: usize,
) -> Result<PlanSearch, PlanError> {
    if cap == 0 {
        return Err(PlanError::ZeroCap);
    }
    if !never.admits(s0) {
        return Err(PlanError::InitViolatesNever);
    }
    let unsolvable = |stats| PlanSearch { plan: None, stats };
    if !goal.atoms().all(|a| view.admits_atom(a)) {
        return Ok(unsolvable(SearchStats::default()));
    }
    if entails_goal(s0, goal) {
        return Ok(PlanSearch {
            plan: Some(Plan::default()),
            stats: SearchStats {
                states: 1,
                explored: 0,
                truncated: false,
            },
        });
    }
    let all: Vec<&GroundAction> = view.actions().collect();
    let (rel, mask) = relevance(&all, goal, never, s0.capacity());
    let acts: Vec<&GroundAction> = rel.into_iter().map(|i| all[i]).collect();

    let start = s0.restrict(&mask);
    let mut states = vec![start.clone()];
    let mut index: HashMap<State, u32> = HashMap::from([(start, 0)]);
    let mut parent: Vec<Option<(u32, u32)>> = vec![None];
    let mut stats = SearchStats {
        states: 1,
        explored: 0,
        truncated: false,
    };
    let mut head = 0;
    while head < states.len() {
        let cur = states[head].clone();
        stats.explored += 1;
        for (ai, a) in acts.iter().enumerate() {
            if !a.applicable(&cur) {
                continue;
            }
            let next = a.apply_unchecked(&cur).restrict(&mask);
            if !never.admits(&next) || index.contains_key(&next) {
                continue;
            }
            if states.len() >= cap {
                stats.truncated = true;
                stats.states = states.len();
                return Ok(unsolvable(stats));
            }
            let found = entails_goal(&next, goal);
            index.insert(next.clone(), states.len() as u32);
            states.push(next);
            parent.push(Some((head as u32, ai as u32)));
            if found {
                let mut ix = states.len() - 1;
                let mut rev = Vec::new();
                while let Some((p, a)) = parent[ix] {
                    rev.push(acts[a as usize].clone());
                    ix = p as usize;
                }
                rev.reverse();
                stats.states = states.len();
                return Ok(PlanSearch {
                    plan: Some(Plan { actions: rev }),
                    stats,
                });
            }
        }
        head += 1;
    }
    stats.states = states.len();
    Ok(unsolvable(stats))
}

/// Minimum-length plan under the default cap; `None` when no plan exists,
/// the search is truncated, or the start state is invalid.
pub fn shortest_plan(
    view: &SubdomainView,
    s0: &State,
    goal: &Goal,
    never: &NeverConstraints,
) -> Option<Plan> {
    search_plan(view, s0, goal, never, DEFAULT_CAP)
        .ok()
        .and_then(|r| r.plan)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    /// Index of the first failing action; equal to the plan length when
    /// every action applies but the goal does not hold at the end.
    pub failure: Option<usize>,
}

pub fn validate_plan(
    view: &SubdomainView,
    s0: &State,
    plan: &Plan,
    goal: &Goal,
    never: &NeverConstraints,
) -> Validation {
    let fail = |i| Validation {
        valid: false,
        failure: Some(i),
    };
    let mut s = s0.clone();
    for (i, a) in plan.actions.iter().enumerate() {
        if !view.admits(a) || !a.applicable(&s) {
            return fail(i);
        }
        s = a.apply_unchecked(&s);
        if !never.admits(&s) {
            return fail(i);
        }
    }
    if view.entails(&s, goal) {
        Validation {
            valid: true,
            failure: None,
        }
    } else {
        fail(plan.len())
    }
}

/// Final state of a plan, or the index of the first inapplicable action.
pub fn execute_plan(s0: &State, plan: &Plan) -> Result<State, usize> {
    let mut s = s0.clone();
    for (i, a) in plan.actions.iter().enumerate() {
        s = a.apply(&s).map_err(|_| i)?;
    }
    Ok(s)
}
