//! Text format for worlds and problems, diagnostics, and canonical encodings.

mod diag;
mod parse;
mod sexpr;
mod write;

pub use diag::{DiagCode, Diagnostic, Parsed, Severity, SourceDoc, Span};
pub use parse::{parse_problem, parse_world, problem_world_name};
pub use sexpr::{read_all, SExpr, MAX_DEPTH};
pub use write::{
    atom_text, generator_text, problem_to_text, schema_text, strategy_body, strategy_bytes,
    strategy_set_bytes, world_to_text, CanonicalBytes, HEADER,
};
