use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::Invocation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Everything needed to re-run an invocation and check its output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub command_line: Vec<String>,
    /// Flags after merging the config file; `replay` runs exactly this.
    pub config: Invocation,
    pub seed: u64,
    pub threads: usize,
    pub inputs: Vec<InputDigest>,
    pub output_path: Option<PathBuf>,
    pub output_digest: String,
    pub output_bytes: usize,
    pub success: bool,
    pub wall_clock_seconds: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read_input(path: &Path) -> anyhow::Result<(Vec<u8>, InputDigest)> {
    let bytes = std::fs::read(path).map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    let digest = InputDigest {
        path: path.to_path_buf(),
        sha256: sha256_hex(&bytes),
    };
    Ok((bytes, digest))
}

/// `out.csv` → `out.csv.manifest.json`.
pub fn default_manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}
