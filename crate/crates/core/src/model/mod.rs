//! Domains, states, actions, subdomain views, modifications and strategies.

mod action;
mod atoms;
mod domain;
mod error;
mod ids;
mod problem;
mod state;
mod strategy;
mod world;

pub use action::{applicable, apply_action, GroundAction};
pub use atoms::{AtomTable, GroundAtom};
pub use domain::{
    ground_schema, ActionSchema, AtomTemplate, DomainDecl, Literal, LiteralDecl, ObjectConst,
    ObjectDecl, Param, PlanningDomain, PredicateDecl, PredicateSchema, SchemaDecl, Sort, SortDecl,
    Term, TermDecl,
};
pub use error::{ExecError, ModelError};
pub use ids::{AtomId, ObjId, PredId, SchemaId, SortId};
pub use problem::{atom_decl, resolve_atom, AtomDecl, GroundLiteralDecl, Problem, ProblemDecl};
pub use state::{entails_goal, Goal, NeverConstraints, State};
pub use strategy::{
    apply_modification, project_strategy, Context, ModKind, Modification, Step, Strategy,
};
pub use world::{GeneratorNames, GeneratorRef, Generators, SubdomainView, World, WorldDecl};
