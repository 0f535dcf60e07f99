use std::sync::Arc;

use super::error::ModelError;
use super::ids::AtomId;
use super::state::{Goal, NeverConstraints, State};
use super::strategy::Context;
use super::world::{GeneratorNames, Generators, SubdomainView, World};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomDecl {
    pub predicate: String,
    pub args: Vec<String>,
}

impl AtomDecl {
    pub fn new(predicate: &str, args: &[&str]) -> Self {
        AtomDecl {
            predicate: predicate.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundLiteralDecl {
    pub atom: AtomDecl,
    pub positive: bool,
}

impl GroundLiteralDecl {
    pub fn pos(atom: AtomDecl) -> Self {
        GroundLiteralDecl {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: AtomDecl) -> Self {
        GroundLiteralDecl {
            atom,
            positive: false,
        }
    }
}

/// Name-level problem: which world, how the agent subdomain differs from the
/// world's visible part, and the initial state, goal and never-constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemDecl {
    pub name: String,
    pub world: String,
    pub reveal: GeneratorNames,
    pub conceal: GeneratorNames,
    pub init: Vec<GroundLiteralDecl>,
    pub goal: Vec<GroundLiteralDecl>,
    pub never: Vec<GroundLiteralDecl>,
}

/// A resolved problem: world, agent subdomain, initial state, goal and
/// trajectory invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub world: Arc<World>,
    pub subdomain: SubdomainView,
    pub init: State,
    pub goal: Goal,
    pub never: NeverConstraints,
}

pub fn resolve_atom(world: &World, atom: &AtomDecl) -> Result<AtomId, ModelError> {
    let d = world.domain();
    let pred = d
        .predicate_id(&atom.predicate)
        .ok_or_else(|| ModelError::UnknownPredicate(atom.predicate.clone()))?;
    let schema = d.predicate(pred);
    if schema.arity() != atom.args.len() {
        return Err(ModelError::ArityMismatch {
            predicate: atom.predicate.clone(),
            expected: schema.arity(),
            found: atom.args.len(),
        });
    }
    let mut args = Vec::with_capacity(atom.args.len());
    for (pos, (a, &sort)) in atom.args.iter().zip(&schema.arg_sorts).enumerate() {
        let o = d
            .object_id(a)
            .ok_or_else(|| ModelError::UnknownObject(a.clone()))?;
        if !d.has_sort(o, sort) {
            return Err(ModelError::SortMismatch {
                schema: "ground atom".into(),
                predicate: atom.predicate.clone(),
                position: pos + 1,
                expected: d.sort(sort).name.clone(),
                found: format!("object `{a}`"),
            });
        }
        args.push(o);
    }
    d.atoms()
        .id(pred, &args)
        .ok_or_else(|| ModelError::UnknownObject(atom.args.join(" ")))
}

pub fn atom_decl(world: &World, id: AtomId) -> AtomDecl {
    let d = world.domain();
    let a = d.atoms().atom(id);
    AtomDecl {
        predicate: d.predicate(a.predicate).name.clone(),
        args: a.args.iter().map(|&o| d.object(o).name.clone()).collect(),
    }
}

fn split_literals(
    world: &World,
    lits: &[GroundLiteralDecl],
) -> Result<(Vec<AtomId>, Vec<AtomId>), ModelError> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for l in lits {
        let id = resolve_atom(world, &l.atom)?;
        if l.positive {
            pos.push(id)
        } else {
            neg.push(id)
        }
    }
    Ok((pos, neg))
}

impl Problem {
    /// Resolves a declaration. Returns the problem and any warnings.
    pub fn from_decl(
        decl: &ProblemDecl,
        world: Arc<World>,
    ) -> Result<(Problem, Vec<String>), ModelError> {
        let reveal = world.resolve_names(&decl.reveal)?;
        let conceal = world.resolve_names(&decl.conceal)?;
        let visible = world.visible_generators();
        let mut warnings = Vec::new();
        if let Some(r) = reveal.refs().find(|r| visible.contains(*r)) {
            warnings.push(format!(
                "{} is already part of the subdomain",
                world.generator_name(r)
            ));
        }
        let gens: Generators = visible.union(&reveal).difference(&conceal);
        let subdomain = SubdomainView::new(world.clone(), gens)?;

        let (init_pos, init_neg) = split_literals(&world, &decl.init)?;
        if let Some(&a) = init_pos.iter().find(|a| init_neg.contains(a)) {
            return Err(ModelError::InvalidProblem(format!(
                "initial state both asserts and negates {}",
                world.domain().atom_label(a)
            )));
        }
        let init = State::from_atoms(world.atom_count(), init_pos);

        let (gp, gn) = split_literals(&world, &decl.goal)?;
        let goal = Goal::new(gp, gn);
        if let Some(&a) = goal.pos.iter().find(|a| goal.neg.contains(a)) {
            return Err(ModelError::InvalidProblem(format!(
                "goal both asserts and negates {}",
                world.domain().atom_label(a)
            )));
        }
        for a in goal.atoms() {
            if !subdomain.admits_atom(a) {
                warnings.push(format!(
                    "goal atom {} is not expressible in the agent subdomain",
                    world.domain().atom_label(a)
                ));
            }
        }

        let (np, nn) = split_literals(&world, &decl.never)?;
        let never = NeverConstraints::new(np, nn);
        if !never.admits(&init) {
            return Err(ModelError::InvalidProblem(
                "initial state violates a never-constraint".into(),
            ));
        }

        Ok((
            Problem {
                name: decl.name.clone(),
                world,
                subdomain,
                init,
                goal,
                never,
            },
            warnings,
        ))
    }

    pub fn to_decl(&self) -> ProblemDecl {
        let w = &self.world;
        let visible = w.visible_generators();
        let gens = self.subdomain.generators();
        let lits = |pos: &[AtomId], neg: &[AtomId]| -> Vec<GroundLiteralDecl> {
            let mut v: Vec<GroundLiteralDecl> = pos
                .iter()
                .map(|&a| GroundLiteralDecl::pos(atom_decl(w, a)))
                .chain(neg.iter().map(|&a| GroundLiteralDecl::neg(atom_decl(w, a))))
                .collect();
            v.sort_by(|a, b| (!a.positive, &a.atom).cmp(&(!b.positive, &b.atom)));
            v
        };
        let init: Vec<AtomId> = self.init.atoms().collect();
        ProblemDecl {
            name: self.name.clone(),
            world: w.name().to_string(),
            reveal: w.generator_names(&gens.difference(&visible)),
            conceal: w.generator_names(&visible.difference(gens)),
            init: lits(&init, &[]),
            goal: lits(&self.goal.pos, &self.goal.neg),
            never: lits(&self.never.pos, &self.never.neg),
        }
    }

    pub fn initial_context(&self) -> Context {
        Context::new(self.subdomain.clone(), self.init.clone())
    }

    pub fn world_view(&self) -> SubdomainView {
        SubdomainView::whole(self.world.clone())
    }

    /// Same problem under a different agent subdomain.
    pub fn with_subdomain(&self, subdomain: SubdomainView) -> Problem {
        Problem {
            subdomain,
            ..self.clone()
        }
    }
}
