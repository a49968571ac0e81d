//! The shared JSON text format.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::copies::{CopyEmbedding, CopyKind};
use crate::error::{Error, Result};
use crate::system::{validate_steiner, SteinerSystem};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub format_version: u32,
    pub r: usize,
    pub t: usize,
    pub vertex_count: usize,
    pub edges: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Vec<usize>>>,
}

impl SystemRecord {
    pub fn from_system(s: &SteinerSystem) -> Self {
        SystemRecord {
            format_version: FORMAT_VERSION,
            r: s.r(),
            t: s.t(),
            vertex_count: s.vertex_count(),
            edges: s.edges().to_vec(),
            classes: None,
        }
    }

    pub fn to_system(&self) -> Result<SteinerSystem> {
        check_version(self.format_version)?;
        validate_steiner(self.vertex_count, self.edges.clone(), self.r, self.t)
    }
}

pub(crate) fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format_version {v}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyRecord {
    pub pattern_hash: String,
    pub image: Vec<usize>,
    pub kind: CopyKind,
}

impl CopyRecord {
    pub fn new(pattern: &SteinerSystem, copy: &CopyEmbedding) -> Self {
        CopyRecord {
            pattern_hash: pattern_hash(pattern),
            image: copy.image(),
            kind: copy.kind,
        }
    }
}

/// Hex SHA-256 of the canonical JSON of `s` (no classes).
pub fn pattern_hash(s: &SteinerSystem) -> String {
    digest_json(&SystemRecord::from_system(s))
}

pub fn digest_json<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("records serialize");
    hex::encode(Sha256::digest(bytes))
}

pub fn system_to_json(s: &SteinerSystem) -> String {
    serde_json::to_string(&SystemRecord::from_system(s)).expect("records serialize")
}

pub fn system_from_json(text: &str) -> Result<SteinerSystem> {
    let rec: SystemRecord =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    rec.to_system()
}
