use anyhow::Result;
use clap::Args;
use std::io::Write;
use std::path::PathBuf;

use zetaphase::zeros::export_zeros;

use crate::helpers::{EvalArgs, RunContext, ZeroSource};

/// Locate or re-index zeros and write them as an indexed table.
#[derive(Args)]
pub struct Opts {
    #[command(flatten)]
    source: ZeroSource,
    #[command(flatten)]
    eval: EvalArgs,
    /// Table to write; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Opts {
    pub fn run(&self, ctx: &mut RunContext) -> Result<()> {
        let ecfg = self.eval.config(ctx)?;
        let zeros = self.source.load(&ecfg, ctx)?;
        ctx.records = zeros.len() as u64;
        let mut buf = Vec::new();
        export_zeros(&zeros, &mut buf)?;
        match &self.out {
            Some(path) => ctx.write_output(path, &buf)?,
            None => std::io::stdout().lock().write_all(&buf)?,
        }
        Ok(())
    }
}
