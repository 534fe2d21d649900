//! Run manifest: resolved settings, input and output digests, timings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub role: String,
    pub path: PathBuf,
    pub sha256: String,
    pub bytes: u64,
}

impl FileDigest {
    pub fn of(role: &str, path: &Path, contents: &[u8]) -> Self {
        Self {
            role: role.to_string(),
            path: path.to_path_buf(),
            sha256: sha256_hex(contents),
            bytes: contents.len() as u64,
        }
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    format!("{:x}", Sha256::digest(data))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub block: Option<String>,
    pub mode: String,
    pub records: usize,
    pub patterns: usize,
    pub attribute_sets_visited: u64,
    pub candidates_visited: u64,
    pub skipped_sets: usize,
    pub mine_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub threads: Option<usize>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub timings_ms: BTreeMap<String, f64>,
    pub blocks: Vec<BlockSummary>,
}

impl RunManifest {
    pub fn new(config: RunConfig, threads: Option<usize>) -> Self {
        Self {
            tool: "scpm".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            threads,
            inputs: Vec::new(),
            outputs: Vec::new(),
            timings_ms: BTreeMap::new(),
            blocks: Vec::new(),
        }
    }

    pub fn input(&self, role: &str) -> Option<&FileDigest> {
        self.inputs.iter().find(|d| d.role == role)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Default manifest location: next to the records file.
pub fn default_path(records: &Path) -> PathBuf {
    let mut name = records.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    records.with_file_name(name)
}
