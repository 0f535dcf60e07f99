use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Stable diagnostic codes, one per failure kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagCode {
    InvalidUtf8,
    Syntax,
    TooDeep,
    NoWorld,
    NoProblem,
    Structure,
    DuplicateName,
    UnknownSort,
    UnknownPredicate,
    UnknownObject,
    UnknownVariable,
    UnknownSchema,
    ArityMismatch,
    SortMismatch,
    SortCycle,
    ContradictoryEffect,
    NonGround,
    InconsistentInit,
    NeverViolated,
    WorldMismatch,
    GoalOutsideSubdomain,
    RedundantReveal,
    Rename,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::InvalidUtf8 => "invalid-utf8",
            DiagCode::Syntax => "syntax",
            DiagCode::TooDeep => "too-deep",
            DiagCode::NoWorld => "no-world",
            DiagCode::NoProblem => "no-problem",
            DiagCode::Structure => "structure",
            DiagCode::DuplicateName => "duplicate-name",
            DiagCode::UnknownSort => "unknown-sort",
            DiagCode::UnknownPredicate => "unknown-predicate",
            DiagCode::UnknownObject => "unknown-object",
            DiagCode::UnknownVariable => "unknown-variable",
            DiagCode::UnknownSchema => "unknown-schema",
            DiagCode::ArityMismatch => "arity-mismatch",
            DiagCode::SortMismatch => "sort-mismatch",
            DiagCode::SortCycle => "sort-cycle",
            DiagCode::ContradictoryEffect => "contradictory-effect",
            DiagCode::NonGround => "non-ground",
            DiagCode::InconsistentInit => "inconsistent-init",
            DiagCode::NeverViolated => "never-violated",
            DiagCode::WorldMismatch => "world-mismatch",
            DiagCode::GoalOutsideSubdomain => "goal-outside-subdomain",
            DiagCode::RedundantReveal => "redundant-reveal",
            DiagCode::Rename => "rename",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Byte range plus the 1-based line and column of its first character.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagCode,
    pub line: u32,
    pub column: u32,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: DiagCode, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            line: span.line.max(1),
            column: span.col.max(1),
            message: message.into(),
        }
    }

    pub fn warning(code: DiagCode, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(code, span, message)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `origin:line:col: severity: [code] message`
    pub fn render(&self, origin: &str) -> String {
        format!(
            "{origin}:{}:{}: {}: [{}] {}",
            self.line, self.column, self.severity, self.code, self.message
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: [{}] {}",
            self.line, self.column, self.severity, self.code, self.message
        )
    }
}

/// A UTF-8 document and where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceDoc {
    pub text: String,
    pub origin: String,
}

impl SourceDoc {
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> Self {
        SourceDoc {
            text: text.into(),
            origin: origin.into(),
        }
    }

    /// Decodes bytes, reporting the position of the first invalid sequence.
    pub fn from_bytes(bytes: &[u8], origin: impl Into<String>) -> Result<Self, Diagnostic> {
        match std::str::from_utf8(bytes) {
            Ok(text) => Ok(SourceDoc::new(text, origin)),
            Err(e) => {
                let valid = &bytes[..e.valid_up_to()];
                let line = valid.iter().filter(|&&b| b == b'\n').count() as u32 + 1;
                let line_start = valid
                    .iter()
                    .rposition(|&b| b == b'\n')
                    .map_or(0, |p| p + 1);
                let col = std::str::from_utf8(&valid[line_start..])
                    .map_or(1, |s| s.chars().count() as u32 + 1);
                Err(Diagnostic::error(
                    DiagCode::InvalidUtf8,
                    Span {
                        start: e.valid_up_to(),
                        end: e.valid_up_to() + 1,
                        line,
                        col,
                    },
                    "input is not valid UTF-8",
                ))
            }
        }
    }
}

/// A parsed value and the warnings raised while producing it.
#[derive(Clone, Debug)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<Diagnostic>,
}
