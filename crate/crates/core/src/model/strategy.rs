use serde::{Deserialize, Serialize};

use super::action::GroundAction;
use super::error::{ExecError, ModelError};
use super::state::State;
use super::world::{Generators, SubdomainView};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModKind {
    Extension,
    Contraction,
}

/// A change to the agent's subdomain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modification {
    pub kind: ModKind,
    pub payload: Generators,
}

impl Modification {
    pub fn extension(payload: Generators) -> Self {
        Modification {
            kind: ModKind::Extension,
            payload,
        }
    }

    pub fn contraction(payload: Generators) -> Self {
        Modification {
            kind: ModKind::Contraction,
            payload,
        }
    }
}

pub fn apply_modification(
    view: &SubdomainView,
    m: &Modification,
) -> Result<SubdomainView, ModelError> {
    if m.payload.is_empty() {
        return Err(ModelError::EmptyModification);
    }
    let world = view.world();
    if let Some(bad) = m.payload.difference(&world.all_generators()).refs().next() {
        return Err(ModelError::OutsideWorld(format!("{bad:?}")));
    }
    let gens = view.generators();
    match m.kind {
        ModKind::Extension => {
            if let Some(dup) = m.payload.refs().find(|r| gens.contains(*r)) {
                return Err(ModelError::Modification(format!(
                    "{} is already in the subdomain",
                    world.generator_name(dup)
                )));
            }
            view.with_generators(gens.union(&m.payload))
        }
        ModKind::Contraction => {
            if let Some(gone) = m.payload.refs().find(|r| !gens.contains(*r)) {
                return Err(ModelError::Modification(format!(
                    "{} is not in the subdomain",
                    world.generator_name(gone)
                )));
            }
            view.with_generators(gens.difference(&m.payload))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Act(GroundAction),
    Modify(Modification),
}

/// An ordered interleaving of actions and subdomain modifications.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Strategy {
    pub steps: Vec<Step>,
}

impl Strategy {
    pub fn new(steps: Vec<Step>) -> Self {
        Strategy { steps }
    }

    pub fn from_plan<I: IntoIterator<Item = GroundAction>>(plan: I) -> Self {
        Strategy {
            steps: plan.into_iter().map(Step::Act).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_domain_modifying(&self) -> bool {
        self.steps.iter().any(|s| matches!(s, Step::Modify(_)))
    }

    pub fn modifications(&self) -> impl Iterator<Item = &Modification> + '_ {
        self.steps.iter().filter_map(|s| match s {
            Step::Modify(m) => Some(m),
            Step::Act(_) => None,
        })
    }

    pub fn actions(&self) -> impl Iterator<Item = &GroundAction> + '_ {
        self.steps.iter().filter_map(|s| match s {
            Step::Act(a) => Some(a),
            Step::Modify(_) => None,
        })
    }

    /// `self` followed by `tail`.
    pub fn concat(&self, tail: &Strategy) -> Strategy {
        let mut steps = self.steps.clone();
        steps.extend(tail.steps.iter().cloned());
        Strategy { steps }
    }

    pub fn prefix(&self, n: usize) -> Strategy {
        Strategy {
            steps: self.steps[..n.min(self.steps.len())].to_vec(),
        }
    }
}

/// Splits a strategy into its plan and its set of modifications.
pub fn project_strategy(w: &Strategy) -> (Vec<GroundAction>, Vec<Modification>) {
    let plan = w.actions().cloned().collect();
    let mut delta: Vec<Modification> = Vec::new();
    for m in w.modifications() {
        if !delta.contains(m) {
            delta.push(m.clone());
        }
    }
    (plan, delta)
}

/// The agent's subdomain together with the world-level state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub view: SubdomainView,
    pub state: State,
}

impl Context {
    pub fn new(view: SubdomainView, state: State) -> Self {
        Context { view, state }
    }

    pub fn step(&self, step: &Step) -> Result<Context, ModelError> {
        match step {
            Step::Act(a) => {
                if !self.view.admits(a) {
                    return Err(ModelError::OutsideView(a.label.clone()));
                }
                Ok(Context {
                    view: self.view.clone(),
                    state: a.apply(&self.state)?,
                })
            }
            Step::Modify(m) => Ok(Context {
                view: apply_modification(&self.view, m)?,
                state: self.state.clone(),
            }),
        }
    }

    pub fn execute(&self, w: &Strategy) -> Result<Context, ExecError> {
        let mut cur = self.clone();
        for (index, step) in w.steps.iter().enumerate() {
            cur = cur
                .step(step)
                .map_err(|source| ExecError { index, source })?;
        }
        Ok(cur)
    }

    /// Every intermediate context, starting with `self`.
    pub fn trace(&self, w: &Strategy) -> Result<Vec<Context>, ExecError> {
        let mut out = vec![self.clone()];
        for (index, step) in w.steps.iter().enumerate() {
            let next = out[index]
                .step(step)
                .map_err(|source| ExecError { index, source })?;
            out.push(next);
        }
        Ok(out)
    }

    /// The agent's view of the state.
    pub fn observed_state(&self) -> State {
        self.view.observe(&self.state)
    }
}
