use anyhow::{bail, Result};
use clap::Args;
use serde::Serialize;
use std::path::{Path, PathBuf};

use zetaphase::argtrack::principal_arg;
use zetaphase::fmt::g17;
use zetaphase::stats::{
    histogram, joint_log_scatter, moments_of, normalize_records, normalize_selberg,
    uniformity_chi_square, HistogramSpec, MomentsReport, Normalization, NormalizedSample,
    SampleKind, UniformityTest,
};

use crate::helpers::{RunContext, StatsError};
use crate::records::{read_phase_csv, read_zeta_arg_csv};

/// Normalized moments, histogram and phase uniformity of a records file.
#[derive(Args)]
pub struct Opts {
    /// Records CSV from `phase`, or a `zeta-arg` CSV for ZETA_ARG_SELBERG.
    records: PathBuf,
    /// Statistic to normalize.
    #[arg(long, default_value = "LOGMOD_HEJHAL")]
    kind: SampleKind,
    /// Reference height of the log log normalization: a zero count N for
    /// the ζ′ statistics, a height T for ZETA_ARG_SELBERG. Defaults to the
    /// largest k, or the largest t.
    #[arg(long = "N-ref", alias = "n-ref")]
    n_ref: Option<f64>,
    /// Divide by √(log log N / 2) instead of √(log log N).
    #[arg(long)]
    theorem_norm: bool,
    /// Histogram range and bin count.
    #[arg(long, num_args = 3, value_names = ["LO", "HI", "BINS"], allow_negative_numbers = true)]
    hist: Option<Vec<String>>,
    /// Keep records flagged as possible slips.
    #[arg(long)]
    include_flagged: bool,
    /// Bins of the chi-square test on the principal phases.
    #[arg(long, default_value_t = 32)]
    uniformity_bins: usize,
    /// Output prefix: writes PREFIX.moments.json, PREFIX.hist.csv and, for
    /// ζ′ records, PREFIX.uniformity.json and PREFIX.scatter.csv. Without it
    /// the moments go to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct MomentsFile<'a> {
    kind: SampleKind,
    normalization: Normalization,
    denominator: f64,
    excluded_flagged: u64,
    #[serde(flatten)]
    moments: &'a MomentsReport,
}

impl Opts {
    fn hist_spec(&self) -> Result<HistogramSpec> {
        let Some(h) = &self.hist else {
            return Ok(HistogramSpec::default());
        };
        let spec = HistogramSpec {
            lo: h[0].parse()?,
            hi: h[1].parse()?,
            bins: h[2].parse()?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn run(&self, ctx: &mut RunContext) -> Result<()> {
        let spec = self.hist_spec()?;
        let bytes = ctx.read_input(&self.records)?;

        let (samples, norm, phases, scatter) = if self.kind == SampleKind::ZetaArgSelberg {
            let rows = read_zeta_arg_csv(&bytes[..])?;
            enough(rows.len())?;
            let t_ref = self
                .n_ref
                .unwrap_or_else(|| rows.iter().map(|r| r.t).fold(f64::NAN, f64::max));
            let samples = rows
                .iter()
                .map(|r| normalize_selberg(r.k, r.arg_zeta, t_ref))
                .collect::<zetaphase::Result<Vec<_>>>()?;
            (samples, Normalization::theorem(t_ref), None, None)
        } else {
            let records = read_phase_csv(&bytes[..])?;
            ctx.flagged = records.iter().filter(|r| r.is_flagged()).count() as u64;
            enough(records.len() - if self.include_flagged { 0 } else { ctx.flagged as usize })?;
            let n_ref = self
                .n_ref
                .unwrap_or_else(|| records.iter().map(|r| r.k).max().unwrap_or(0) as f64);
            let norm = Normalization {
                n_ref,
                theorem: self.theorem_norm,
            };
            let samples = normalize_records(&records, self.kind, &norm)?;
            let kept: Vec<_> = records
                .iter()
                .filter(|r| self.include_flagged || !r.is_flagged())
                .copied()
                .collect();
            let phases: Vec<f64> = kept.iter().map(|r| principal_arg(r.zeta_prime)).collect();
            (samples, norm, Some(phases), Some(joint_log_scatter(&kept)))
        };
        ctx.records = samples.len() as u64;

        let values: Vec<f64> = samples
            .iter()
            .filter(|s| self.include_flagged || !s.excluded)
            .map(|s| s.value)
            .collect();
        let report = moments_of(&values)?;
        let file = MomentsFile {
            kind: self.kind,
            normalization: norm,
            denominator: denominator(&norm, self.kind)?,
            excluded_flagged: excluded(&samples, self.include_flagged),
            moments: &report,
        };
        let hist = histogram(&values, &spec)?;

        let Some(prefix) = &self.out else {
            println!("{}", serde_json::to_string_pretty(&file)?);
            return Ok(());
        };
        write_json(ctx, &with_suffix(prefix, "moments.json"), &file)?;

        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["bin_lo", "bin_hi", "count", "density", "gauss_ref"])?;
        for row in hist.rows() {
            w.write_record([
                g17(row.bin_lo),
                g17(row.bin_hi),
                row.count.to_string(),
                g17(row.density),
                g17(row.gauss_ref),
            ])?;
        }
        ctx.write_output(&with_suffix(prefix, "hist.csv"), &w.into_inner()?)?;

        if let Some(phases) = phases {
            match uniformity_chi_square(&phases, self.uniformity_bins) {
                Ok(test) => write_json::<UniformityTest>(ctx, &with_suffix(prefix, "uniformity.json"), &test)?,
                Err(zetaphase::Error::TooFewSamples(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
        if let Some(points) = scatter {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["k", "log_abs", "arg"])?;
            for p in points {
                w.write_record([p.k.to_string(), g17(p.re), g17(p.im)])?;
            }
            ctx.write_output(&with_suffix(prefix, "scatter.csv"), &w.into_inner()?)?;
        }
        eprintln!(
            "{}: n = {}, mean = {}, stdev = {}",
            self.kind,
            report.n,
            g17(report.mean),
            g17(report.stdev)
        );
        Ok(())
    }
}

// Checked before normalizing so that a tiny input reports the sample count
// rather than a reference height that is too small.
fn enough(n: usize) -> Result<()> {
    if n < 2 {
        bail!(StatsError(format!("need at least 2 samples for moments, got {n}")));
    }
    Ok(())
}

fn denominator(norm: &Normalization, kind: SampleKind) -> Result<f64> {
    Ok(if kind == SampleKind::ZetaArgSelberg {
        Normalization::theorem(norm.n_ref).denominator()?
    } else {
        norm.denominator()?
    })
}

fn excluded(samples: &[NormalizedSample], include_flagged: bool) -> u64 {
    if include_flagged {
        0
    } else {
        samples.iter().filter(|s| s.excluded).count() as u64
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

fn write_json<T: Serialize>(ctx: &mut RunContext, path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_vec_pretty(value)?;
    text.push(b'\n');
    ctx.write_output(path, &text)
}
