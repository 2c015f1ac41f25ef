use anyhow::{bail, Result};
use clap::Args;
use std::path::PathBuf;

use crate::helpers::{RunContext, UsageError};
use crate::manifest::RunManifest;

/// Repeat a run from its manifest, with the same `ZP_*` environment.
#[derive(Args)]
pub struct Opts {
    /// Manifest written by an earlier run.
    #[arg(value_name = "MANIFEST")]
    from: PathBuf,
}

impl Opts {
    pub fn run(&self, _ctx: &mut RunContext) -> Result<()> {
        let manifest = RunManifest::read(&self.from)?;
        if manifest.subcommand == "rerun" || manifest.argv.is_empty() {
            bail!(UsageError(format!("{} does not describe a rerunnable command", self.from.display())));
        }
        let stale: Vec<String> = std::env::vars().map(|(k, _)| k).filter(|k| k.starts_with("ZP_")).collect();
        // The process is single-threaded here apart from the idle rayon pool,
        // which never reads the environment.
        for k in stale {
            unsafe { std::env::remove_var(k) };
        }
        for (k, v) in &manifest.env {
            unsafe { std::env::set_var(k, v) };
        }
        crate::execute(manifest.argv.clone())
    }
}
