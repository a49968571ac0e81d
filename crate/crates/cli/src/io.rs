use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use steiner_ramsey::format::SystemRecord;
use steiner_ramsey::partite::FHypergraph;
use steiner_ramsey::{Error, SteinerSystem};

pub const EXIT_OK: u8 = 0;
pub const EXIT_REFUTED: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

pub const MAX_MEM_VAR: &str = "STEINER_RAMSEY_MAX_MEM";

/// Rough bytes per constructed vertex, used to turn the memory cap into a
/// vertex cap.
const BYTES_PER_VERTEX: u64 = 4096;

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Input(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A JSON record and whether it reports a refuted property.
pub struct Report {
    pub record: Value,
    pub refuted: bool,
}

impl Report {
    pub fn new<T: Serialize>(record: &T, refuted: bool) -> CliResult<Self> {
        let record = serde_json::to_value(record).map_err(|e| CliError::Input(e.to_string()))?;
        Ok(Report { record, refuted })
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_record(path: &Path) -> CliResult<SystemRecord> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_system(path: &Path) -> CliResult<SteinerSystem> {
    Ok(read_record(path)?.to_system()?)
}

pub fn read_fh(path: &Path) -> CliResult<FHypergraph> {
    Ok(FHypergraph::from_json(&read(path)?)?)
}

/// Parses sizes like `512M`, `2G` or a plain byte count.
pub fn parse_bytes(s: &str) -> Option<u64> {
    let s = s.trim();
    let (digits, scale) = match s.char_indices().last()? {
        (i, 'K' | 'k') => (&s[..i], 1u64 << 10),
        (i, 'M' | 'm') => (&s[..i], 1 << 20),
        (i, 'G' | 'g') => (&s[..i], 1 << 30),
        _ => (s, 1),
    };
    digits.trim().parse::<u64>().ok()?.checked_mul(scale)
}

/// Vertex cap from the memory variable, if set.
pub fn mem_vertex_cap() -> CliResult<Option<usize>> {
    match std::env::var(MAX_MEM_VAR) {
        Err(_) => Ok(None),
        Ok(v) => parse_bytes(&v)
            .map(|b| Some((b / BYTES_PER_VERTEX).max(1) as usize))
            .ok_or_else(|| CliError::Input(format!("{MAX_MEM_VAR}: cannot parse `{v}`"))),
    }
}

fn emit(record: &Value, out: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(record).map_err(|e| e.to_string())? + "\n";
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes the record and maps the outcome to an exit code.
pub fn finish(outcome: CliResult<Report>, out: Option<&Path>) -> u8 {
    let (record, code) = match outcome {
        Ok(r) => {
            let code = if r.refuted { EXIT_REFUTED } else { EXIT_OK };
            (Some(r.record), code)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            (None, EXIT_INPUT)
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::ArrowRefuted { context, coloring } => (
                    Some(json!({ "verdict": "fails", "context": context, "coloring": coloring })),
                    EXIT_REFUTED,
                ),
                Error::ConstructionBug(_) => (None, EXIT_REFUTED),
                e if e.is_infeasible() => (None, EXIT_INFEASIBLE),
                _ => (None, EXIT_INPUT),
            }
        }
    };
    if let Some(record) = record {
        if let Err(msg) = emit(&record, out) {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    }
    code
}
