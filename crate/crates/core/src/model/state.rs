use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ids::AtomId;

/// A closed-world state: the set of true ground atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    bits: FixedBitSet,
}

impl State {
    pub fn empty(atom_count: usize) -> Self {
        State {
            bits: FixedBitSet::with_capacity(atom_count),
        }
    }

    pub fn from_atoms<I: IntoIterator<Item = AtomId>>(atom_count: usize, atoms: I) -> Self {
        let mut s = State::empty(atom_count);
        for a in atoms {
            s.insert(a);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, atom: AtomId) -> bool {
        self.bits.contains(atom.index())
    }

    pub fn insert(&mut self, atom: AtomId) {
        self.bits.insert(atom.index());
    }

    pub fn remove(&mut self, atom: AtomId) {
        self.bits.set(atom.index(), false);
    }

    /// True atoms in ascending id order.
    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.bits.ones().map(AtomId::from)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_subset(&self, other: &State) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// Keeps only the atoms in `mask`.
    pub fn restrict(&self, mask: &FixedBitSet) -> State {
        let mut bits = self.bits.clone();
        bits.intersect_with(mask);
        State { bits }
    }
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            atoms: Vec<AtomId>,
        }
        Repr {
            n: self.capacity(),
            atoms: self.atoms().collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for State {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            atoms: Vec<AtomId>,
        }
        let r = Repr::deserialize(de)?;
        if let Some(bad) = r.atoms.iter().find(|a| a.index() >= r.n) {
            return Err(serde::de::Error::custom(format!(
                "atom {} out of range {}",
                bad.0, r.n
            )));
        }
        Ok(State::from_atoms(r.n, r.atoms))
    }
}

fn normalize(v: &mut Vec<AtomId>) {
    v.sort_unstable();
    v.dedup();
}

/// A conjunctive goal: atoms that must hold and atoms that must not.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Goal {
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

impl Goal {
    pub fn new(mut pos: Vec<AtomId>, mut neg: Vec<AtomId>) -> Self {
        normalize(&mut pos);
        normalize(&mut neg);
        Goal { pos, neg }
    }

    pub fn positive(pos: Vec<AtomId>) -> Self {
        Goal::new(pos, Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.pos.iter().chain(&self.neg).copied()
    }
}

impl From<Vec<AtomId>> for Goal {
    fn from(pos: Vec<AtomId>) -> Self {
        Goal::positive(pos)
    }
}

pub fn entails_goal(state: &State, g: &Goal) -> bool {
    g.pos.iter().all(|&a| state.contains(a)) && g.neg.iter().all(|&a| !state.contains(a))
}

/// Trajectory invariants: states containing a `pos` atom, or lacking a
/// `neg` atom, are excluded from search.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NeverConstraints {
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

impl NeverConstraints {
    pub fn new(mut pos: Vec<AtomId>, mut neg: Vec<AtomId>) -> Self {
        normalize(&mut pos);
        normalize(&mut neg);
        NeverConstraints { pos, neg }
    }

    pub fn none() -> Self {
        NeverConstraints::default()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    pub fn admits(&self, state: &State) -> bool {
        self.pos.iter().all(|&a| !state.contains(a)) && self.neg.iter().all(|&a| state.contains(a))
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.pos.iter().chain(&self.neg).copied()
    }
}
