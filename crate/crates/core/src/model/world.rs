use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::action::GroundAction;
use super::domain::{DomainDecl, PlanningDomain};
use super::error::ModelError;
use super::ids::{AtomId, ObjId, PredId, SchemaId};
use super::state::{Goal, State};

/// One element of a domain's generator sets. Ordered by kind, then id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GeneratorRef {
    Predicate(PredId),
    Object(ObjId),
    Schema(SchemaId),
}

/// Subsets of a domain's predicates, objects and action schemas.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generators {
    pub predicates: BTreeSet<PredId>,
    pub objects: BTreeSet<ObjId>,
    pub schemas: BTreeSet<SchemaId>,
}

impl Generators {
    pub fn all(domain: &PlanningDomain) -> Self {
        Generators {
            predicates: (0..domain.predicates().len()).map(PredId::from).collect(),
            objects: (0..domain.objects().len()).map(ObjId::from).collect(),
            schemas: (0..domain.schemas().len()).map(SchemaId::from).collect(),
        }
    }

    pub fn from_refs<I: IntoIterator<Item = GeneratorRef>>(refs: I) -> Self {
        let mut g = Generators::default();
        for r in refs {
            g.insert(r);
        }
        g
    }

    pub fn insert(&mut self, r: GeneratorRef) -> bool {
        match r {
            GeneratorRef::Predicate(p) => self.predicates.insert(p),
            GeneratorRef::Object(o) => self.objects.insert(o),
            GeneratorRef::Schema(s) => self.schemas.insert(s),
        }
    }

    pub fn remove(&mut self, r: GeneratorRef) -> bool {
        match r {
            GeneratorRef::Predicate(p) => self.predicates.remove(&p),
            GeneratorRef::Object(o) => self.objects.remove(&o),
            GeneratorRef::Schema(s) => self.schemas.remove(&s),
        }
    }

    pub fn contains(&self, r: GeneratorRef) -> bool {
        match r {
            GeneratorRef::Predicate(p) => self.predicates.contains(&p),
            GeneratorRef::Object(o) => self.objects.contains(&o),
            GeneratorRef::Schema(s) => self.schemas.contains(&s),
        }
    }

    pub fn len(&self) -> usize {
        self.predicates.len() + self.objects.len() + self.schemas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Elements in kind-then-id order.
    pub fn refs(&self) -> impl Iterator<Item = GeneratorRef> + '_ {
        self.predicates
            .iter()
            .map(|&p| GeneratorRef::Predicate(p))
            .chain(self.objects.iter().map(|&o| GeneratorRef::Object(o)))
            .chain(self.schemas.iter().map(|&s| GeneratorRef::Schema(s)))
    }

    pub fn union(&self, other: &Generators) -> Generators {
        Generators {
            predicates: self.predicates.union(&other.predicates).copied().collect(),
            objects: self.objects.union(&other.objects).copied().collect(),
            schemas: self.schemas.union(&other.schemas).copied().collect(),
        }
    }

    pub fn difference(&self, other: &Generators) -> Generators {
        Generators {
            predicates: self.predicates.difference(&other.predicates).copied().collect(),
            objects: self.objects.difference(&other.objects).copied().collect(),
            schemas: self.schemas.difference(&other.schemas).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Generators) -> bool {
        self.predicates.is_subset(&other.predicates)
            && self.objects.is_subset(&other.objects)
            && self.schemas.is_subset(&other.schemas)
    }

    pub fn is_disjoint(&self, other: &Generators) -> bool {
        self.predicates.is_disjoint(&other.predicates)
            && self.objects.is_disjoint(&other.objects)
            && self.schemas.is_disjoint(&other.schemas)
    }
}

/// Name-level description of a world: a domain plus the generators that sit
/// outside the initial agent subdomain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WorldDecl {
    pub name: String,
    pub species: String,
    pub domain: DomainDecl,
    pub hidden: GeneratorNames,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorNames {
    pub predicates: Vec<String>,
    pub objects: Vec<String>,
    pub schemas: Vec<String>,
}

fn resolve_names(domain: &PlanningDomain, names: &GeneratorNames) -> Result<Generators, ModelError> {
    let mut gens = Generators::default();
    for p in &names.predicates {
        let id = domain
            .predicate_id(p)
            .ok_or_else(|| ModelError::UnknownPredicate(p.clone()))?;
        gens.predicates.insert(id);
    }
    for o in &names.objects {
        let id = domain
            .object_id(o)
            .ok_or_else(|| ModelError::UnknownObject(o.clone()))?;
        gens.objects.insert(id);
    }
    for s in &names.schemas {
        let id = domain
            .schema_id(s)
            .ok_or_else(|| ModelError::UnknownSchema(s.clone()))?;
        gens.schemas.insert(id);
    }
    Ok(gens)
}

/// Everything physically possible for a species, with its ground actions
/// precomputed in (schema name, binding) order.
#[derive(Debug)]
pub struct World {
    name: String,
    species: String,
    domain: PlanningDomain,
    hidden: Generators,
    ground: Vec<GroundAction>,
}

impl PartialEq for World {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.species == other.species
            && self.domain == other.domain
            && self.hidden == other.hidden
    }
}

impl Eq for World {}

impl World {
    pub fn new(
        name: impl Into<String>,
        species: impl Into<String>,
        domain: PlanningDomain,
        hidden: Generators,
    ) -> Result<Self, ModelError> {
        let all = Generators::all(&domain);
        if let Some(bad) = hidden.difference(&all).refs().next() {
            return Err(ModelError::OutsideWorld(format!("{bad:?}")));
        }
        let ground = domain.ground_all();
        Ok(World {
            name: name.into(),
            species: species.into(),
            domain,
            hidden,
            ground,
        })
    }

    pub fn from_decl(decl: &WorldDecl) -> Result<Self, ModelError> {
        let domain = PlanningDomain::from_decl(&decl.domain)?;
        let hidden = resolve_names(&domain, &decl.hidden)?;
        World::new(decl.name.clone(), decl.species.clone(), domain, hidden)
    }

    pub fn resolve_names(&self, names: &GeneratorNames) -> Result<Generators, ModelError> {
        resolve_names(&self.domain, names)
    }

    pub fn generator_names(&self, gens: &Generators) -> GeneratorNames {
        let d = &self.domain;
        GeneratorNames {
            predicates: gens
                .predicates
                .iter()
                .map(|&p| d.predicate(p).name.clone())
                .collect(),
            objects: gens.objects.iter().map(|&o| d.object(o).name.clone()).collect(),
            schemas: gens.schemas.iter().map(|&s| d.schema(s).name.clone()).collect(),
        }
    }

    pub fn to_decl(&self) -> WorldDecl {
        WorldDecl {
            name: self.name.clone(),
            species: self.species.clone(),
            domain: self.domain.to_decl(),
            hidden: self.generator_names(&self.hidden),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn species(&self) -> &str {
        &self.species
    }

    pub fn domain(&self) -> &PlanningDomain {
        &self.domain
    }

    pub fn hidden(&self) -> &Generators {
        &self.hidden
    }

    pub fn all_generators(&self) -> Generators {
        Generators::all(&self.domain)
    }

    /// The generators not marked hidden.
    pub fn visible_generators(&self) -> Generators {
        self.all_generators().difference(&self.hidden)
    }

    pub fn ground_actions(&self) -> &[GroundAction] {
        &self.ground
    }

    pub fn atom_count(&self) -> usize {
        self.domain.atom_count()
    }

    pub fn generator_name(&self, r: GeneratorRef) -> String {
        let d = &self.domain;
        match r {
            GeneratorRef::Predicate(p) => {
                format!("predicate {}/{}", d.predicate(p).name, d.predicate(p).arity())
            }
            GeneratorRef::Object(o) => format!("object {}", d.object(o).name),
            GeneratorRef::Schema(s) => format!("action {}", d.schema(s).name),
        }
    }
}

/// A subset view over a world's generators.
///
/// A ground action belongs to the view when its schema, every object it
/// mentions and every predicate it mentions are in the view.
#[derive(Clone)]
pub struct SubdomainView {
    world: Arc<World>,
    gens: Generators,
}

impl fmt::Debug for SubdomainView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubdomainView")
            .field("world", &self.world.name)
            .field("gens", &self.gens)
            .finish()
    }
}

impl PartialEq for SubdomainView {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.world, &other.world) || self.world == other.world)
            && self.gens == other.gens
    }
}

impl Eq for SubdomainView {}

impl SubdomainView {
    pub fn new(world: Arc<World>, gens: Generators) -> Result<Self, ModelError> {
        if let Some(bad) = gens.difference(&world.all_generators()).refs().next() {
            return Err(ModelError::OutsideWorld(format!("{bad:?}")));
        }
        Ok(SubdomainView { world, gens })
    }

    /// The whole world as a view.
    pub fn whole(world: Arc<World>) -> Self {
        let gens = world.all_generators();
        SubdomainView { world, gens }
    }

    /// The world minus its hidden generators.
    pub fn visible(world: Arc<World>) -> Self {
        let gens = world.visible_generators();
        SubdomainView { world, gens }
    }

    pub fn world(&self) -> &Arc<World> {
        &self.world
    }

    pub fn generators(&self) -> &Generators {
        &self.gens
    }

    pub fn is_whole_world(&self) -> bool {
        self.gens == self.world.all_generators()
    }

    pub fn contains(&self, r: GeneratorRef) -> bool {
        self.gens.contains(r)
    }

    /// World generators outside this view, in kind-then-id order.
    pub fn missing(&self) -> Vec<GeneratorRef> {
        self.world
            .all_generators()
            .difference(&self.gens)
            .refs()
            .collect()
    }

    pub fn admits(&self, a: &GroundAction) -> bool {
        self.gens.schemas.contains(&a.schema)
            && a.objects.iter().all(|o| self.gens.objects.contains(o))
            && a.predicates.iter().all(|p| self.gens.predicates.contains(p))
    }

    /// Ground actions of the view, in (schema name, binding) order.
    pub fn actions(&self) -> impl Iterator<Item = &GroundAction> + '_ {
        self.world.ground.iter().filter(move |a| self.admits(a))
    }

    pub fn admits_atom(&self, atom: AtomId) -> bool {
        let ga = self.world.domain.atoms().atom(atom);
        self.gens.predicates.contains(&ga.predicate)
            && ga.args.iter().all(|o| self.gens.objects.contains(o))
    }

    /// Atoms expressible in the view vocabulary.
    pub fn vocabulary_mask(&self) -> FixedBitSet {
        let n = self.world.atom_count();
        let mut mask = FixedBitSet::with_capacity(n);
        for i in 0..n {
            if self.admits_atom(AtomId::from(i)) {
                mask.insert(i);
            }
        }
        mask
    }

    /// The agent's observation of a world-level state.
    pub fn observe(&self, state: &State) -> State {
        state.restrict(&self.vocabulary_mask())
    }

    /// Goal entailment as seen by the agent: literals outside the view's
    /// vocabulary are never entailed.
    pub fn entails(&self, state: &State, goal: &Goal) -> bool {
        goal.atoms().all(|a| self.admits_atom(a)) && super::state::entails_goal(state, goal)
    }

    pub fn with_generators(&self, gens: Generators) -> Result<Self, ModelError> {
        SubdomainView::new(self.world.clone(), gens)
    }
}
