use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::relax::relax_schema;
use super::AgentError;
use crate::mgp::{minimal_extensions, Budget};
use crate::model::{
    ActionSchema, Context, ExecError, GeneratorRef, Generators, ModKind, Modification, Problem,
    SortId, Step, Strategy, SubdomainView, World,
};
use crate::planner::{search_plan, Plan};

pub const DEFAULT_EXPLORATION_BUDGET: usize = 32;
const MAX_RELAXATION_DEPTH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    /// Asks the environment for one observation at a time.
    RandomExplorer,
    /// Proposes variable relaxations of known schemas, then observes.
    PlanFirstExplorer,
    /// Reveals a precomputed minimal extension set.
    OracleGuided,
}

impl PolicyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::RandomExplorer => "random-explorer",
            PolicyKind::PlanFirstExplorer => "plan-first-explorer",
            PolicyKind::OracleGuided => "oracle-guided",
        }
    }
}

impl FromStr for PolicyKind {
    type Err = AgentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" | "random-explorer" => Ok(PolicyKind::RandomExplorer),
            "plan-first" | "plan-first-explorer" => Ok(PolicyKind::PlanFirstExplorer),
            "oracle" | "oracle-guided" => Ok(PolicyKind::OracleGuided),
            other => Err(AgentError::Policy(format!("unknown policy `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Policy {
    pub kind: PolicyKind,
    pub seed: u64,
    /// Maximum number of extension requests, granted or not.
    pub exploration_budget: usize,
    /// How many parameters a proposed relaxation may retype.
    pub relaxation_depth: usize,
}

impl Policy {
    pub fn new(kind: PolicyKind, seed: u64) -> Self {
        Policy {
            kind,
            seed,
            exploration_budget: DEFAULT_EXPLORATION_BUDGET,
            relaxation_depth: 1,
        }
    }

    pub fn validate(&self) -> Result<(), AgentError> {
        if self.relaxation_depth > MAX_RELAXATION_DEPTH {
            return Err(AgentError::Policy(format!(
                "relaxation depth {} exceeds {MAX_RELAXATION_DEPTH}",
                self.relaxation_depth
            )));
        }
        Ok(())
    }
}

/// What the agent asks of its environment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Request {
    /// Any one generator the agent does not know yet.
    Observe,
    /// Whether a relaxed schema proposed by the agent exists in the world.
    Relaxation(ActionSchema),
    /// A specific generator.
    Reveal(GeneratorRef),
}

/// Plays the world: answers requests with extensions of the subdomain.
#[derive(Clone, Debug)]
pub struct Environment {
    world: Arc<World>,
    rng: ChaCha8Rng,
}

impl Environment {
    pub fn new(world: Arc<World>, seed: u64) -> Self {
        Environment {
            world,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn answer(&mut self, view: &SubdomainView, req: &Request) -> Option<Modification> {
        let grant = |r| Some(Modification::extension(Generators::from_refs([r])));
        match req {
            Request::Observe => {
                let missing = view.missing();
                if missing.is_empty() {
                    return None;
                }
                let i = self.rng.gen_range(0..missing.len());
                grant(missing[i])
            }
            Request::Relaxation(s) => {
                let d = self.world.domain();
                let id = d.schema_id(&s.name)?;
                let r = GeneratorRef::Schema(id);
                if view.contains(r) || !d.schema(id).same_shape(s) {
                    return None;
                }
                grant(r)
            }
            Request::Reveal(r) => {
                if view.contains(*r) || !self.world.all_generators().contains(*r) {
                    return None;
                }
                grant(*r)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Solved,
    GaveUp,
    BudgetExhausted,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Solved => "Solved",
            Outcome::GaveUp => "GaveUp",
            Outcome::BudgetExhausted => "BudgetExhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyTrace {
    pub problem: String,
    pub policy: Policy,
    pub steps: Strategy,
    pub outcome: Outcome,
    /// The initial context followed by the context after each step.
    pub contexts: Vec<Context>,
    pub solved_plan: Option<Plan>,
    pub requests: usize,
}

impl StrategyTrace {
    pub fn final_context(&self) -> &Context {
        // contexts always holds at least the initial context
        &self.contexts[self.contexts.len() - 1]
    }

    /// Steps up to and including the last modification.
    pub fn insightful_prefix(&self) -> Strategy {
        let n = self
            .steps
            .steps
            .iter()
            .rposition(|s| matches!(s, Step::Modify(_)))
            .map_or(0, |i| i + 1);
        self.steps.prefix(n)
    }

    /// Every generator added by the trace.
    pub fn extensions(&self) -> Generators {
        self.steps
            .modifications()
            .filter(|m| m.kind == ModKind::Extension)
            .fold(Generators::default(), |acc, m| acc.union(&m.payload))
    }
}

struct Explorer {
    kind: PolicyKind,
    depth: usize,
    rng: ChaCha8Rng,
    tried: BTreeSet<String>,
    targets: Vec<GeneratorRef>,
}

impl Explorer {
    fn new(p: &Problem, policy: &Policy, budget: &Budget) -> Result<Self, AgentError> {
        let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
        rng.set_stream(1);
        let targets = if policy.kind == PolicyKind::OracleGuided {
            minimal_extensions(p, budget)?
                .sets
                .first()
                .map(|s| s.refs().collect())
                .unwrap_or_default()
        } else {
            Vec::new()
        };
        Ok(Explorer {
            kind: policy.kind,
            depth: policy.relaxation_depth,
            rng,
            tried: BTreeSet::new(),
            targets,
        })
    }

    fn next(&mut self, view: &SubdomainView) -> Request {
        match self.kind {
            PolicyKind::RandomExplorer => Request::Observe,
            PolicyKind::PlanFirstExplorer => {
                for mut layer in relaxation_candidates(view, self.depth) {
                    layer.shuffle(&mut self.rng);
                    if let Some(s) = layer.into_iter().find(|s| !self.tried.contains(&s.name)) {
                        self.tried.insert(s.name.clone());
                        return Request::Relaxation(s);
                    }
                }
                Request::Observe
            }
            PolicyKind::OracleGuided => self
                .targets
                .iter()
                .find(|r| !view.contains(**r))
                .map_or(Request::Observe, |&r| Request::Reveal(r)),
        }
    }
}

fn visible_members(view: &SubdomainView, sort: SortId) -> Vec<crate::model::ObjId> {
    view.world()
        .domain()
        .members(sort)
        .iter()
        .copied()
        .filter(|&o| view.contains(GeneratorRef::Object(o)))
        .collect()
}

/// Relaxations of the view's schemas grouped by how many parameters they
/// retype, each group in name order. Only sorts that strictly widen over
/// the objects the agent knows are proposed.
fn relaxation_candidates(view: &SubdomainView, depth: usize) -> Vec<Vec<ActionSchema>> {
    let d = view.world().domain();
    let sorts: Vec<(SortId, Vec<_>)> = (0..d.sorts().len())
        .map(|i| {
            let s = SortId::from(i);
            (s, visible_members(view, s))
        })
        .collect();
    let known: BTreeSet<String> = view
        .generators()
        .schemas
        .iter()
        .map(|&id| d.schema(id).name.clone())
        .collect();
    let mut seen = known.clone();
    let mut prev: Vec<ActionSchema> = view
        .generators()
        .schemas
        .iter()
        .map(|&id| d.schema(id).clone())
        .collect();
    let mut layers = Vec::new();
    for _ in 0..depth {
        let mut layer = Vec::new();
        for s in &prev {
            for (idx, param) in s.params.iter().enumerate() {
                let old = &sorts[param.sort.index()].1;
                for (new, members) in &sorts {
                    let widens = members.len() > old.len()
                        && old.iter().all(|o| members.binary_search(o).is_ok());
                    if !widens {
                        continue;
                    }
                    if let Ok(r) = relax_schema(d, s, idx, *new) {
                        if seen.insert(r.name.clone()) {
                            layer.push(r);
                        }
                    }
                }
            }
        }
        layer.sort_by(|a, b| a.name.cmp(&b.name));
        prev = layer.clone();
        layers.push(layer);
    }
    layers
}

/// Runs `policy` on `p` until the goal becomes plannable, the policy runs
/// out of ideas or the request budget is spent. Reproducible from the
/// problem, policy and budget.
pub fn solve_mgp(p: &Problem, policy: &Policy, budget: &Budget) -> Result<StrategyTrace, AgentError> {
    policy.validate()?;
    let mut env = Environment::new(p.world.clone(), policy.seed);
    let mut explorer = Explorer::new(p, policy, budget)?;
    let mut ctx = p.initial_context();
    let mut steps: Vec<Step> = Vec::new();
    let mut contexts = vec![ctx.clone()];
    let mut requests = 0usize;
    let mut solved_plan = None;
    let outcome = loop {
        let r = search_plan(&ctx.view, &ctx.state, &p.goal, &p.never, budget.cap)?;
        if let Some(plan) = r.plan {
            for a in &plan.actions {
                let step = Step::Act(a.clone());
                ctx = ctx.step(&step).map_err(|source| ExecError {
                    index: steps.len(),
                    source,
                })?;
                steps.push(step);
                contexts.push(ctx.clone());
            }
            solved_plan = Some(plan);
            break Outcome::Solved;
        }
        if requests >= policy.exploration_budget {
            break Outcome::BudgetExhausted;
        }
        let req = explorer.next(&ctx.view);
        requests += 1;
        match env.answer(&ctx.view, &req) {
            Some(m) => {
                let step = Step::Modify(m);
                ctx = ctx.step(&step).map_err(|source| ExecError {
                    index: steps.len(),
                    source,
                })?;
                steps.push(step);
                contexts.push(ctx.clone());
            }
            None if req == Request::Observe => break Outcome::GaveUp,
            None => {}
        }
    };
    Ok(StrategyTrace {
        problem: p.name.clone(),
        policy: *policy,
        steps: Strategy::new(steps),
        outcome,
        contexts,
        solved_plan,
        requests,
    })
}
