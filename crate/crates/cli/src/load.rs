use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context as _;
use mgpkit::lang::{
    parse_problem, parse_world, problem_world_name, read_all, Diagnostic, SourceDoc,
};
use mgpkit::model::{Problem, World};

use crate::Failure;

/// Reads a file as a source document. Invalid UTF-8 becomes a diagnostic.
pub fn read_doc(path: &Path) -> Result<Result<SourceDoc, Diagnostic>, Failure> {
    let bytes = std::fs::read(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Io)?;
    Ok(SourceDoc::from_bytes(&bytes, path.display().to_string()))
}

fn rendered(origin: &str, diags: &[Diagnostic]) -> Failure {
    Failure::Invalid(diags.iter().map(|d| d.render(origin)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocKind {
    World,
    Problem,
}

impl DocKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DocKind::World => "world",
            DocKind::Problem => "problem",
        }
    }
}

/// Problem documents start with `(:problem`; anything else is read as a
/// world so that its diagnostics come from the world parser.
pub fn doc_kind(doc: &SourceDoc) -> DocKind {
    match read_all(&doc.text) {
        Ok(forms) if forms.first().and_then(|f| f.head()) == Some(":problem") => DocKind::Problem,
        _ => DocKind::World,
    }
}

/// The world file for a problem: `explicit` if given, otherwise
/// `<problem dir>/<world name>.world`.
pub fn world_path(problem: &Path, doc: &SourceDoc, explicit: Option<&Path>) -> Result<PathBuf, Failure> {
    if let Some(p) = explicit {
        return Ok(p.to_path_buf());
    }
    let name = problem_world_name(doc).map_err(|d| rendered(&doc.origin, &d))?;
    if name.is_empty() {
        return Err(Failure::Invalid(vec![format!(
            "{}: problem names no world; pass --world",
            doc.origin
        )]));
    }
    let dir = problem.parent().unwrap_or_else(|| Path::new("."));
    let candidate = dir.join(format!("{name}.world"));
    if candidate.is_file() {
        Ok(candidate)
    } else {
        Err(Failure::Invalid(vec![format!(
            "{}: world `{name}` not found at {}; pass --world",
            doc.origin,
            candidate.display()
        )]))
    }
}

pub fn load_world(path: &Path) -> Result<(Arc<World>, Vec<String>), Failure> {
    let doc = read_doc(path)?.map_err(|d| rendered(&path.display().to_string(), &[d]))?;
    let parsed = parse_world(&doc).map_err(|d| rendered(&doc.origin, &d))?;
    let warnings = parsed.warnings.iter().map(|d| d.render(&doc.origin)).collect();
    Ok((Arc::new(parsed.value), warnings))
}

/// A problem with its world, plus rendered warnings from both documents.
pub struct Loaded {
    pub world: Arc<World>,
    pub problem: Problem,
    pub warnings: Vec<String>,
}

pub fn load_problem(path: &Path, world: Option<&Path>) -> Result<Loaded, Failure> {
    let doc = read_doc(path)?.map_err(|d| rendered(&path.display().to_string(), &[d]))?;
    let wpath = world_path(path, &doc, world)?;
    let (world, mut warnings) = load_world(&wpath)?;
    let parsed = parse_problem(&doc, &world).map_err(|d| rendered(&doc.origin, &d))?;
    warnings.extend(parsed.warnings.iter().map(|d| d.render(&doc.origin)));
    Ok(Loaded {
        world,
        problem: parsed.value,
        warnings,
    })
}
