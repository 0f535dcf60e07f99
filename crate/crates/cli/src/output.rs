use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context as _;
use mgpkit::judge::Zlib;
use mgpkit::mgp::Budget;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Every report is wrapped with the settings needed to reproduce it.
#[derive(Serialize)]
pub struct Envelope<'a> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub compressor: &'static str,
    pub seed: u64,
    pub budget: Budget,
    pub report: &'a Value,
}

impl<'a> Envelope<'a> {
    pub fn new(command: &'a str, seed: u64, budget: Budget, report: &'a Value) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            tool: "mgpkit",
            version: env!("CARGO_PKG_VERSION"),
            command,
            compressor: Zlib::ID,
            seed,
            budget,
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).unwrap_or_default();
        s.push('\n');
        s
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Run metadata that would break byte-identical reports.
pub fn write_sidecar(report: &Path, args: &[String]) -> anyhow::Result<()> {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = serde_json::json!({
        "created_unix": secs,
        "args": args,
        "report": report.file_name().map(|n| n.to_string_lossy().into_owned()),
    });
    let mut name = report.as_os_str().to_owned();
    name.push(".meta.json");
    let mut text = serde_json::to_string_pretty(&meta)?;
    text.push('\n');
    write_atomic(Path::new(&name), text.as_bytes())
}
