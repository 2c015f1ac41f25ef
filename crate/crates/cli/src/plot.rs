use anyhow::Result;
use clap::Args;
use std::path::PathBuf;

use zetaphase::fmt::g17;
use zetaphase::phaseplot::{render_phase, singular_cells, RegionSpec};

use crate::helpers::{EvalArgs, RunContext};

/// Domain-coloring phase portrait of ζ as a binary PPM.
#[derive(Args)]
pub struct Opts {
    /// Viewport [σ_lo, σ_hi] × [t_lo, t_hi].
    #[arg(
        long,
        num_args = 4,
        value_names = ["SIGMA_LO", "SIGMA_HI", "T_LO", "T_HI"],
        allow_negative_numbers = true,
        required = true
    )]
    region: Vec<f64>,
    /// Image size in pixels.
    #[arg(long, num_args = 2, value_names = ["WIDTH", "HEIGHT"], default_values_t = [450, 450])]
    px: Vec<usize>,
    #[command(flatten)]
    eval: EvalArgs,
    /// Print every pixel block the phase winds around.
    #[arg(long)]
    list_cells: bool,
    #[arg(long)]
    out: PathBuf,
}

impl Opts {
    pub fn run(&self, ctx: &mut RunContext) -> Result<()> {
        let ecfg = self.eval.config(ctx)?;
        let region = RegionSpec {
            sigma_lo: self.region[0],
            sigma_hi: self.region[1],
            t_lo: self.region[2],
            t_hi: self.region[3],
            width_px: self.px[0],
            height_px: self.px[1],
        };
        region.validate()?;
        let image = render_phase(&region, &ecfg)?;
        ctx.write_output(&self.out, &image.to_ppm())?;

        let cells = singular_cells(&image);
        ctx.records = (region.width_px * region.height_px) as u64;
        ctx.errors = image.masked_count() as u64;
        let zeros = cells.iter().filter(|c| c.winding > 0).count();
        eprintln!(
            "{}x{} pixels, {} masked, {} winding cells ({} zeros, {} poles)",
            region.width_px,
            region.height_px,
            image.masked_count(),
            cells.len(),
            zeros,
            cells.len() - zeros
        );
        if self.list_cells {
            for c in &cells {
                println!("{} {} {:+}", g17(c.sigma), g17(c.t), c.winding);
            }
        }
        Ok(())
    }
}
