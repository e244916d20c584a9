//! Run manifests: config hash, versions, seeds, wall time, per-check
//! verdicts and content hashes of every output file.  A rerun with an
//! unchanged config hash is a no-op unless forced.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> CheckResult {
        CheckResult { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutputFile {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub config_sha256: String,
    pub crate_version: String,
    pub mode: String,
    pub seed: Option<u64>,
    pub replicas: Option<u64>,
    pub started_unix: u64,
    pub wall_seconds: f64,
    pub outputs: Vec<OutputFile>,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    hex::encode(h.finalize())
}

/// Register a written file with its content hash.
pub fn record_output(dir: &Path, name: &str, contents: &[u8]) -> anyhow::Result<OutputFile> {
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(OutputFile { name: name.into(), sha256: sha256_hex(contents), bytes: contents.len() as u64 })
}

pub fn manifest_path(dir: &Path) -> PathBuf {
    dir.join("manifest.json")
}

/// An existing manifest with the same config hash short-circuits the run.
pub fn up_to_date(dir: &Path, config_hash: &str) -> Option<Manifest> {
    let path = manifest_path(dir);
    let bytes = std::fs::read(path).ok()?;
    let m: Manifest = serde_json::from_slice(&bytes).ok()?;
    (m.config_sha256 == config_hash).then_some(m)
}

pub fn write_manifest(dir: &Path, manifest: &Manifest) -> anyhow::Result<()> {
    let bytes = serde_json::to_vec_pretty(manifest)?;
    std::fs::write(manifest_path(dir), bytes)?;
    Ok(())
}

pub fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}
