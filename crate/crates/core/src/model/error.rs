use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate {kind} `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown action schema `{0}`")]
    UnknownSchema(String),
    #[error("variable `?{var}` is not a parameter of `{schema}`")]
    UnknownVariable { schema: String, var: String },
    #[error("`{predicate}` takes {expected} argument(s), got {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("in `{schema}`: argument {position} of `{predicate}` expects sort `{expected}`, got {found}")]
    SortMismatch {
        schema: String,
        predicate: String,
        position: usize,
        expected: String,
        found: String,
    },
    #[error("`{schema}` both adds and deletes {atom}")]
    ContradictoryEffect { schema: String, atom: String },
    #[error("sort hierarchy has a cycle through `{0}`")]
    SortCycle(String),
    #[error("object `{0}` declares no sort")]
    UnsortedObject(String),
    #[error("action {0} is not applicable")]
    PreconditionViolation(String),
    #[error("action {0} is outside the current subdomain")]
    OutsideView(String),
    #[error("modification payload is empty")]
    EmptyModification,
    #[error("modification conflicts with the subdomain: {0}")]
    Modification(String),
    #[error("modification payload is not part of the world: {0}")]
    OutsideWorld(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

/// A strategy step that could not be executed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {index}: {source}")]
pub struct ExecError {
    pub index: usize,
    #[source]
    pub source: ModelError,
}
