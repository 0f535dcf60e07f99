use std::collections::HashSet;
use std::sync::Arc;

use super::MgpError;
use crate::lang::{DiagCode, Diagnostic, Span};
use crate::model::{
    AtomDecl, AtomId, GeneratorNames, Goal, GroundLiteralDecl, LiteralDecl, PlanningDomain,
    PredicateDecl, Problem, ProblemDecl, SchemaDecl, State, TermDecl, World, WorldDecl,
};

/// Output of [`reduce_to_mgp`].
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub world: Arc<World>,
    pub problem: Problem,
    pub diagnostics: Vec<Diagnostic>,
}

fn fresh(base: &str, taken: &HashSet<String>, diags: &mut Vec<Diagnostic>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    let name = (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !taken.contains(n))
        .unwrap_or_default();
    diags.push(Diagnostic::warning(
        DiagCode::Rename,
        Span::default(),
        format!("`{base}` is already taken; using `{name}`"),
    ));
    name
}

fn atom_decl(domain: &PlanningDomain, id: AtomId) -> AtomDecl {
    let a = domain.atoms().atom(id);
    AtomDecl {
        predicate: domain.predicate(a.predicate).name.clone(),
        args: a.args.iter().map(|&o| domain.object(o).name.clone()).collect(),
    }
}

fn const_literal(positive: bool, a: AtomDecl) -> LiteralDecl {
    LiteralDecl {
        positive,
        predicate: a.predicate,
        args: a.args.into_iter().map(TermDecl::Const).collect(),
    }
}

/// Wraps a classical instance as a world/subdomain pair.
///
/// The world adds one fresh nullary predicate and one fresh nullary action,
/// both hidden. The action is guarded by the predicate's absence and jumps
/// to a single new state: the fresh atom plus the goal's positive atoms.
/// The agent subdomain is the classical domain itself.
pub fn reduce_to_mgp(
    domain: &PlanningDomain,
    s0: &State,
    g: &Goal,
) -> Result<ReducedInstance, MgpError> {
    let mut diags = Vec::new();
    let mut decl = domain.to_decl();
    let pred_names: HashSet<String> = decl.predicates.iter().map(|p| p.name.clone()).collect();
    let schema_names: HashSet<String> = decl.schemas.iter().map(|s| s.name.clone()).collect();
    let star = fresh("goalStar", &pred_names, &mut diags);
    let warp = fresh("warp", &schema_names, &mut diags);

    let mut eff = vec![LiteralDecl {
        positive: true,
        predicate: star.clone(),
        args: Vec::new(),
    }];
    for i in 0..domain.atom_count() {
        let id = AtomId::from(i);
        let keep = g.pos.binary_search(&id).is_ok();
        eff.push(const_literal(keep, atom_decl(domain, id)));
    }
    decl.predicates.push(PredicateDecl {
        name: star.clone(),
        arg_sorts: Vec::new(),
    });
    decl.schemas.push(SchemaDecl {
        name: warp.clone(),
        params: Vec::new(),
        pre: vec![LiteralDecl {
            positive: false,
            predicate: star.clone(),
            args: Vec::new(),
        }],
        eff,
    });
    let world = Arc::new(World::from_decl(&WorldDecl {
        name: "reduced".into(),
        species: String::new(),
        domain: decl,
        hidden: GeneratorNames {
            predicates: vec![star],
            objects: Vec::new(),
            schemas: vec![warp],
        },
    })?);

    let problem_decl = ProblemDecl {
        name: "reduced".into(),
        world: "reduced".into(),
        reveal: GeneratorNames::default(),
        conceal: GeneratorNames::default(),
        init: s0
            .atoms()
            .map(|a| GroundLiteralDecl::pos(atom_decl(domain, a)))
            .collect(),
        goal: g
            .pos
            .iter()
            .map(|&a| GroundLiteralDecl::pos(atom_decl(domain, a)))
            .chain(g.neg.iter().map(|&a| GroundLiteralDecl::neg(atom_decl(domain, a))))
            .collect(),
        never: Vec::new(),
    };
    let (problem, _) = Problem::from_decl(&problem_decl, world.clone())?;
    Ok(ReducedInstance {
        world,
        problem,
        diagnostics: diags,
    })
}
