use anyhow::{bail, Result};
use clap::Args;
use rayon::prelude::*;
use std::path::PathBuf;

use zetaphase::argtrack::track_zeta_arg;

use crate::helpers::{EvalArgs, PathArgs, RunContext, UsageError};
use crate::records::{write_zeta_arg_csv, ZetaArgRow};

/// Continuous arg ζ(1/2 + it) at equally spaced heights, for the
/// ZETA_ARG_SELBERG statistic.
#[derive(Args)]
pub struct Opts {
    /// Heights are the centers of SAMPLES equal cells of [T_LO, T_HI].
    #[arg(long, num_args = 2, value_names = ["T_LO", "T_HI"], required = true)]
    t_range: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[command(flatten)]
    path: PathArgs,
    #[command(flatten)]
    eval: EvalArgs,
    #[arg(long)]
    out: PathBuf,
}

impl Opts {
    pub fn run(&self, ctx: &mut RunContext) -> Result<()> {
        let ecfg = self.eval.config(ctx)?;
        let pcfg = self.path.config(ctx)?;
        let (lo, hi) = (self.t_range[0], self.t_range[1]);
        if !(lo < hi) || self.samples == 0 {
            bail!(UsageError("--t-range needs T_LO < T_HI and --samples >= 1".into()));
        }
        let step = (hi - lo) / self.samples as f64;
        let results: Vec<_> = (0..self.samples)
            .into_par_iter()
            .map(|i| {
                let t = lo + (i as f64 + 0.5) * step;
                (i as u64 + 1, t, track_zeta_arg(t, &pcfg, &ecfg))
            })
            .collect();

        let mut rows = Vec::with_capacity(results.len());
        for (k, t, r) in results {
            match r {
                Ok(arg_zeta) => rows.push(ZetaArgRow { k, t, arg_zeta }),
                Err(e) => {
                    eprintln!("warning: t = {t}: {e}");
                    ctx.errors += 1;
                }
            }
        }
        ctx.records = rows.len() as u64;
        let mut buf = Vec::new();
        write_zeta_arg_csv(&mut buf, &rows)?;
        ctx.write_output(&self.out, &buf)
    }
}
