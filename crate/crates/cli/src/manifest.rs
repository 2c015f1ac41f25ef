use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use zetaphase::argtrack::PathConfig;
use zetaphase::zeta::EvalConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Everything needed to repeat a run: the command line, the `ZP_*`
/// environment it saw, and the resolved configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub argv: Vec<String>,
    pub env: BTreeMap<String, String>,
    pub jobs: Option<usize>,
    pub eval_config: Option<EvalConfig>,
    pub path_config: Option<PathConfig>,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
    pub wall_time_seconds: f64,
    pub records: u64,
    pub flagged: u64,
    pub errors: u64,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("writing manifest {}", path.display()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
    }
}
