use serde::{Deserialize, Serialize};

use super::error::ModelError;
use super::ids::{AtomId, ObjId, PredId, SchemaId};
use super::state::State;

/// A fully instantiated action schema.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundAction {
    pub schema: SchemaId,
    /// Objects bound to the schema parameters, in parameter order.
    pub binding: Vec<ObjId>,
    /// Rendered as `name(arg,..)`.
    pub label: String,
    pub pre_pos: Vec<AtomId>,
    pub pre_neg: Vec<AtomId>,
    pub add: Vec<AtomId>,
    pub del: Vec<AtomId>,
    /// Every object the action mentions (binding plus template constants).
    pub objects: Vec<ObjId>,
    /// Every predicate the action mentions.
    pub predicates: Vec<PredId>,
}

fn sorted(mut v: Vec<AtomId>) -> Vec<AtomId> {
    v.sort_unstable();
    v.dedup();
    v
}

impl GroundAction {
    /// Builds a ground action. An atom both added and deleted (possible when
    /// two parameters bind to the same object) is kept as an add.
    pub fn new(
        schema: SchemaId,
        binding: Vec<ObjId>,
        label: String,
        [pre_pos, pre_neg, add, del]: [Vec<AtomId>; 4],
        objects: Vec<ObjId>,
        predicates: Vec<PredId>,
    ) -> Self {
        let add = sorted(add);
        let del = sorted(del)
            .into_iter()
            .filter(|a| add.binary_search(a).is_err())
            .collect();
        GroundAction {
            schema,
            binding,
            label,
            pre_pos: sorted(pre_pos),
            pre_neg: sorted(pre_neg),
            add,
            del,
            objects,
            predicates,
        }
    }

    pub fn applicable(&self, state: &State) -> bool {
        self.pre_pos.iter().all(|&a| state.contains(a))
            && self.pre_neg.iter().all(|&a| !state.contains(a))
    }

    /// `(state ∖ del) ∪ add`, without checking preconditions.
    pub fn apply_unchecked(&self, state: &State) -> State {
        let mut next = state.clone();
        for &a in &self.del {
            next.remove(a);
        }
        for &a in &self.add {
            next.insert(a);
        }
        next
    }

    pub fn apply(&self, state: &State) -> Result<State, ModelError> {
        if !self.applicable(state) {
            return Err(ModelError::PreconditionViolation(self.label.clone()));
        }
        Ok(self.apply_unchecked(state))
    }

    /// Ordering key: schema name order is schema id order.
    pub fn sort_key(&self) -> (SchemaId, &[ObjId]) {
        (self.schema, &self.binding)
    }
}

pub fn applicable(state: &State, a: &GroundAction) -> bool {
    a.applicable(state)
}

pub fn apply_action(state: &State, a: &GroundAction) -> Result<State, ModelError> {
    a.apply(state)
}
