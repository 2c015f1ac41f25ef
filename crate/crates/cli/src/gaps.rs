use anyhow::Result;
use clap::Args;
use std::fmt::Write as _;
use std::path::PathBuf;

use zetaphase::fmt::g17;
use zetaphase::zeros::{recommend_dx, scan_min_gaps};

use crate::helpers::{EvalArgs, RunContext, ZeroSource};

/// Smallest consecutive gaps in an index range and the step they allow.
#[derive(Args)]
pub struct Opts {
    #[command(flatten)]
    source: ZeroSource,
    #[command(flatten)]
    eval: EvalArgs,
    /// Gaps γ_{k+1} − γ_k for K_LO <= k <= K_HI.
    #[arg(long, num_args = 2, value_names = ["K_LO", "K_HI"], required = true)]
    k: Vec<u64>,
    /// Number of gaps to list.
    #[arg(long, default_value_t = 7)]
    count: usize,
    /// Recommended dx is this fraction of the gap floor.
    #[arg(long, default_value_t = 0.5)]
    safety: f64,
    /// Also write the table as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Opts {
    pub fn run(&self, ctx: &mut RunContext) -> Result<()> {
        let ecfg = self.eval.config(ctx)?;
        let zeros = self.source.load(&ecfg, ctx)?;
        let report = scan_min_gaps(&zeros, self.k[0], self.k[1], self.count)?;
        let dx = recommend_dx(&report, self.safety)?;
        ctx.records = report.entries.len() as u64;

        let mut text = String::new();
        writeln!(text, "{:>12}  gap", "k")?;
        for e in &report.entries {
            writeln!(text, "{:>12}  {}", e.k, g17(e.delta))?;
        }
        match report.floor {
            Some(f) => writeln!(text, "floor: {}", g17(f))?,
            None => writeln!(text, "floor: none (every gap listed)")?,
        }
        writeln!(text, "recommended dx: {}", g17(dx))?;
        print!("{text}");

        if let Some(path) = &self.out {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["k", "gap"])?;
            for e in &report.entries {
                w.write_record([e.k.to_string(), g17(e.delta)])?;
            }
            ctx.write_output(path, &w.into_inner()?)?;
        }
        Ok(())
    }
}
