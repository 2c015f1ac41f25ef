use anyhow::{Context, Result};
use clap::Args;
use std::path::PathBuf;

use zetaphase::argtrack::{phase_at_zeros, PathConfig, PhaseRecord};

use crate::helpers::{EvalArgs, PathArgs, RunContext, ZeroSource};
use crate::records::write_phase_csv;

/// Continuous arg ζ′(ρ) for a batch of zeros.
#[derive(Args)]
pub struct Opts {
    #[command(flatten)]
    source: ZeroSource,
    #[command(flatten)]
    path: PathArgs,
    #[command(flatten)]
    eval: EvalArgs,
    /// Repeat every zero at dx/2 and add a winding_agrees column.
    #[arg(long)]
    dx_check: bool,
    /// Records CSV to write.
    #[arg(long)]
    out: PathBuf,
}

impl Opts {
    pub fn run(&self, ctx: &mut RunContext) -> Result<()> {
        let ecfg = self.eval.config(ctx)?;
        let pcfg = self.path.config(ctx)?;
        let half = if self.dx_check {
            let half = PathConfig { dx: pcfg.dx / 2.0, ..pcfg };
            half.validate().context("--dx-check halves dx")?;
            Some(half)
        } else {
            None
        };
        let zeros = self.source.load(&ecfg, ctx)?;

        let mut records: Vec<PhaseRecord> = Vec::with_capacity(zeros.len());
        let mut kept = Vec::with_capacity(zeros.len());
        for (z, result) in zeros.iter().zip(phase_at_zeros(&zeros, &pcfg, &ecfg)) {
            match result {
                Ok(r) => {
                    records.push(r);
                    kept.push(*z);
                }
                Err(e) => {
                    eprintln!("warning: zero k = {} at {}: {e}", z.k, z.gamma);
                    ctx.errors += 1;
                }
            }
        }

        let agrees: Option<Vec<bool>> = half.map(|half| {
            records
                .iter()
                .zip(phase_at_zeros(&kept, &half, &ecfg))
                .map(|(r, fine)| matches!(fine, Ok(f) if f.winding == r.winding))
                .collect()
        });

        let mut buf = Vec::new();
        write_phase_csv(&mut buf, &records, agrees.as_deref())?;
        ctx.write_output(&self.out, &buf)?;

        ctx.records = records.len() as u64;
        ctx.flagged = records.iter().filter(|r| r.is_flagged()).count() as u64;
        eprint!(
            "{} records, {} flagged, {} errors",
            ctx.records, ctx.flagged, ctx.errors
        );
        if let Some(a) = &agrees {
            eprint!(", {} winding disagreements at dx/2", a.iter().filter(|&&x| !x).count());
        }
        eprintln!();
        Ok(())
    }
}
