use anyhow::{bail, Result};
use clap::Args;
use num_complex::Complex64;

use zetaphase::fmt::g17;
use zetaphase::zeta::{chi, hardy_z, theta, zeta_anywhere, zeta_deriv};

use crate::helpers::{complex_text, parse_complex, EvalArgs, RunContext, UsageError};

/// Evaluate ζ and related functions at a single point.
#[derive(Args)]
pub struct Opts {
    /// Complex argument, e.g. `2`, `0.5+14.1i` or `0.5,14.1`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, conflicts_with = "t")]
    s: Option<Complex64>,
    /// Height on the critical line; s = 1/2 + it.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    /// Print ζ(s). The default when nothing else is requested.
    #[arg(long)]
    zeta: bool,
    /// Print ζ′(s).
    #[arg(long)]
    deriv: bool,
    /// Print χ(s) from ζ(s) = χ(s) ζ(1 − s).
    #[arg(long)]
    chi: bool,
    /// Print the Riemann–Siegel theta function θ(t); needs --t.
    #[arg(long)]
    theta: bool,
    /// Print Hardy's Z(t); needs --t.
    #[arg(long)]
    z: bool,
    #[command(flatten)]
    eval: EvalArgs,
}

impl Opts {
    pub fn run(&self, ctx: &mut RunContext) -> Result<()> {
        let ecfg = self.eval.config(ctx)?;
        let s = match (self.s, self.t) {
            (Some(s), _) => s,
            (None, Some(t)) => Complex64::new(0.5, t),
            (None, None) => bail!(UsageError("one of --s or --t is required".into())),
        };
        if (self.theta || self.z) && self.t.is_none() {
            bail!(UsageError("--theta and --z need --t".into()));
        }
        let nothing_else = !(self.deriv || self.chi || self.theta || self.z);
        if self.zeta || nothing_else {
            println!("zeta = {}", complex_text(zeta_anywhere(s, &ecfg)?));
        }
        if self.deriv {
            println!("zeta' = {}", complex_text(zeta_deriv(s, &ecfg)?));
        }
        if self.chi {
            println!("chi = {}", complex_text(chi(s)?));
        }
        if let Some(t) = self.t {
            if self.theta {
                println!("theta = {}", g17(theta(t)?.theta));
            }
            if self.z {
                println!("Z = {}", g17(hardy_z(t, &ecfg)?));
            }
        }
        ctx.records = 1;
        Ok(())
    }
}
