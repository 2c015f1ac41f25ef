//! Normalized statistics of ζ′ at the zeros: centering and scaling, central
//! moments, histograms with a Gaussian reference, and a uniformity check on
//! the wrapped phases.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::f64::consts::{LN_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::argtrack::{principal_arg, PhaseRecord};
use crate::error::{Error, Result};
use crate::zeta::a_prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SampleKind {
    /// (arg ζ′(ρ) + π − γ log 2) / D
    ArgPaper,
    /// (arg ζ′(ρ) − π + γ log 2) / D
    ArgConvention,
    /// log(|ζ′(ρ)| / A′(γ)) / D
    LogmodHejhal,
    /// arg ζ(1/2 + it) / √(log log T / 2)
    ZetaArgSelberg,
}

impl SampleKind {
    pub fn name(self) -> &'static str {
        match self {
            SampleKind::ArgPaper => "ARG_PAPER",
            SampleKind::ArgConvention => "ARG_CONVENTION",
            SampleKind::LogmodHejhal => "LOGMOD_HEJHAL",
            SampleKind::ZetaArgSelberg => "ZETA_ARG_SELBERG",
        }
    }
}

impl fmt::Display for SampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SampleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "ARG_PAPER" => Ok(SampleKind::ArgPaper),
            "ARG_CONVENTION" => Ok(SampleKind::ArgConvention),
            "LOGMOD_HEJHAL" => Ok(SampleKind::LogmodHejhal),
            "ZETA_ARG_SELBERG" => Ok(SampleKind::ZetaArgSelberg),
            other => Err(Error::InvalidConfig(format!("unknown sample kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedSample {
    pub k: u64,
    pub value: f64,
    pub kind: SampleKind,
    /// The source record was flagged.
    pub excluded: bool,
}

/// Scale applied to the centered statistics.
///
/// The figure form divides by √(log log N); the theorem form by
/// √(log log N / 2). Both are kept because the two disagree by √2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub n_ref: f64,
    pub theorem: bool,
}

impl Normalization {
    pub fn figure(n_ref: f64) -> Self {
        Normalization { n_ref, theorem: false }
    }

    pub fn theorem(n_ref: f64) -> Self {
        Normalization { n_ref, theorem: true }
    }

    pub fn denominator(&self) -> Result<f64> {
        log_log_scale(self.n_ref, self.theorem)
    }
}

fn log_log_scale(x: f64, halve: bool) -> Result<f64> {
    if !(x >= 3.0) || !x.is_finite() {
        return Err(Error::Domain(format!("reference height must be >= 3, got {x}")));
    }
    let ll = x.ln().ln();
    Ok(if halve { (0.5 * ll).sqrt() } else { ll.sqrt() })
}

/// Both centerings of the continuous argument: [ARG_PAPER, ARG_CONVENTION].
pub fn normalize_arg(rec: &PhaseRecord, norm: &Normalization) -> Result<[NormalizedSample; 2]> {
    let d = norm.denominator()?;
    let shift = PI - rec.gamma * LN_2;
    let make = |value: f64, kind| {
        finite_sample(NormalizedSample {
            k: rec.k,
            value,
            kind,
            excluded: rec.is_flagged(),
        })
    };
    Ok([
        make((rec.continuous_arg + shift) / d, SampleKind::ArgPaper)?,
        make((rec.continuous_arg - shift) / d, SampleKind::ArgConvention)?,
    ])
}

/// log|2π ζ′(ρ) / log(γ/2π)|, i.e. log(|ζ′(ρ)| / A′(γ)), scaled.
pub fn normalize_logmod(rec: &PhaseRecord, norm: &Normalization) -> Result<NormalizedSample> {
    if !(rec.gamma > TAU) {
        return Err(Error::Domain(format!("log-modulus needs gamma > 2 pi, got {}", rec.gamma)));
    }
    let modulus = rec.zeta_prime.norm();
    if modulus == 0.0 {
        return Err(Error::Domain(format!("zeta' vanishes at gamma = {}", rec.gamma)));
    }
    let d = norm.denominator()?;
    let value = (modulus / a_prime(rec.gamma)?).ln() / d;
    finite_sample(NormalizedSample {
        k: rec.k,
        value,
        kind: SampleKind::LogmodHejhal,
        excluded: rec.is_flagged(),
    })
}

/// arg ζ(1/2 + it) / √(log log T_ref / 2). `k` is the caller's sample index.
pub fn normalize_selberg(k: u64, arg_zeta: f64, t_ref: f64) -> Result<NormalizedSample> {
    let d = log_log_scale(t_ref, true)?;
    finite_sample(NormalizedSample {
        k,
        value: arg_zeta / d,
        kind: SampleKind::ZetaArgSelberg,
        excluded: false,
    })
}

fn finite_sample(s: NormalizedSample) -> Result<NormalizedSample> {
    if s.value.is_finite() {
        Ok(s)
    } else {
        Err(Error::NonFinite("normalized sample"))
    }
}

/// Samples of one kind for every record, in record order.
pub fn normalize_records(
    records: &[PhaseRecord],
    kind: SampleKind,
    norm: &Normalization,
) -> Result<Vec<NormalizedSample>> {
    records
        .iter()
        .map(|r| match kind {
            SampleKind::ArgPaper => normalize_arg(r, norm).map(|p| p[0]),
            SampleKind::ArgConvention => normalize_arg(r, norm).map(|p| p[1]),
            SampleKind::LogmodHejhal => normalize_logmod(r, norm),
            SampleKind::ZetaArgSelberg => Err(Error::InvalidConfig(
                "ZETA_ARG_SELBERG samples come from arg zeta on the critical line, not from zeros".into(),
            )),
        })
        .collect()
}

/// Values that survive the flag filter.
pub fn included_values(samples: &[NormalizedSample], exclude_flagged: bool) -> Vec<f64> {
    samples
        .iter()
        .filter(|s| !(exclude_flagged && s.excluded))
        .map(|s| s.value)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentsReport {
    pub n: u64,
    pub mean: f64,
    /// Population convention (divisor n).
    pub stdev: f64,
    pub central_moments_3_to_6: [f64; 4],
}

/// Streaming central-moment accumulator up to order 6.
///
/// `m[p]` holds Σ (x − mean)^p for p = 2..=6. Two accumulators merge exactly
/// (up to rounding) with the pairwise update, so any fixed merge tree gives
/// a reproducible result.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MomentAccumulator {
    n: u64,
    mean: f64,
    m: [f64; 7],
}

const CHUNK: usize = 4096;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl MomentAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn push(&mut self, x: f64) {
        let single = MomentAccumulator {
            n: 1,
            mean: x,
            m: [0.0; 7],
        };
        *self = self.merge(&single);
    }

    pub fn merge(&self, other: &MomentAccumulator) -> MomentAccumulator {
        if other.n == 0 {
            return *self;
        }
        if self.n == 0 {
            return *other;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let delta = other.mean - self.mean;
        let mut m = [0.0; 7];
        for p in 2..=6usize {
            let mut acc = self.m[p] + other.m[p];
            for k in 1..=p - 2 {
                let a = (-nb / n).powi(k as i32) * self.m[p - k];
                let b = (na / n).powi(k as i32) * other.m[p - k];
                acc += binomial(p, k) * delta.powi(k as i32) * (a + b);
            }
            let pe = p as i32;
            acc += (na * nb * delta / n).powi(pe) * (1.0 / nb.powi(pe - 1) - (-1.0 / na).powi(pe - 1));
            m[p] = acc;
        }
        MomentAccumulator {
            n: self.n + other.n,
            mean: self.mean + delta * nb / n,
            m,
        }
    }

    pub fn report(&self) -> Result<MomentsReport> {
        if self.n < 2 {
            return Err(Error::TooFewSamples(self.n as usize));
        }
        let n = self.n as f64;
        let c = |p: usize| self.m[p] / n;
        Ok(MomentsReport {
            n: self.n,
            mean: self.mean,
            stdev: c(2).max(0.0).sqrt(),
            central_moments_3_to_6: [c(3), c(4), c(5), c(6)],
        })
    }
}

/// Accumulate in fixed-size chunks and merge the chunks pairwise in index
/// order, so the result does not depend on the thread count.
pub fn accumulate(values: &[f64]) -> MomentAccumulator {
    let mut level: Vec<MomentAccumulator> = values
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = MomentAccumulator::new();
            for &x in chunk {
                acc.push(x);
            }
            acc
        })
        .collect();
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => a.merge(b),
                [a] => *a,
                _ => unreachable!(),
            })
            .collect();
    }
    level.pop().unwrap_or_default()
}

pub fn moments_of(values: &[f64]) -> Result<MomentsReport> {
    accumulate(values).report()
}

pub fn moments(samples: &[NormalizedSample], exclude_flagged: bool) -> Result<MomentsReport> {
    moments_of(&included_values(samples, exclude_flagged))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl Default for HistogramSpec {
    fn default() -> Self {
        HistogramSpec {
            lo: -8.0,
            hi: 8.0,
            bins: 160,
        }
    }
}

impl HistogramSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "histogram range must satisfy lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.bins == 0 {
            return Err(Error::InvalidConfig("histogram needs at least one bin".into()));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    pub fn edge(&self, i: usize) -> f64 {
        if i == self.bins {
            self.hi
        } else {
            self.lo + i as f64 * self.width()
        }
    }

    /// Bins are half-open [lo_i, hi_i) except the last, which includes hi.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo && x <= self.hi) {
            return None;
        }
        let i = ((x - self.lo) / self.width()).floor() as usize;
        Some(i.min(self.bins - 1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramRow {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: u64,
    /// count / (n · width); integrates to the in-range fraction.
    pub density: f64,
    /// N(0, stdev²) density at the bin center, stdev from all samples.
    pub gauss_ref: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub spec: HistogramSpec,
    pub counts: Vec<u64>,
    /// Below lo, or NaN.
    pub below: u64,
    pub above: u64,
    pub n: u64,
    /// Population stdev of the samples, when there are at least two.
    pub stdev: Option<f64>,
}

impl Histogram {
    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn rows(&self) -> Vec<HistogramRow> {
        let width = self.spec.width();
        (0..self.spec.bins)
            .map(|i| {
                let (lo, hi) = (self.spec.edge(i), self.spec.edge(i + 1));
                let center = 0.5 * (lo + hi);
                let gauss_ref = match self.stdev {
                    Some(sd) if sd > 0.0 => {
                        (-0.5 * (center / sd).powi(2)).exp() / (sd * (TAU).sqrt())
                    }
                    _ => 0.0,
                };
                let density = if self.n == 0 {
                    0.0
                } else {
                    self.counts[i] as f64 / (self.n as f64 * width)
                };
                HistogramRow {
                    bin_lo: lo,
                    bin_hi: hi,
                    count: self.counts[i],
                    density,
                    gauss_ref,
                }
            })
            .collect()
    }
}

pub fn histogram(values: &[f64], spec: &HistogramSpec) -> Result<Histogram> {
    spec.validate()?;
    let mut counts = vec![0u64; spec.bins];
    let (mut below, mut above) = (0u64, 0u64);
    for &x in values {
        match spec.bin_of(x) {
            Some(i) => counts[i] += 1,
            None if x > spec.hi => above += 1,
            None => below += 1,
        }
    }
    let stdev = moments_of(values).ok().map(|m| m.stdev);
    Ok(Histogram {
        spec: *spec,
        counts,
        below,
        above,
        n: values.len() as u64,
        stdev,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformityTest {
    pub bins: usize,
    pub n: u64,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square of angles against the uniform law on (−π, π].
/// Angles are wrapped first.
pub fn uniformity_chi_square(angles: &[f64], bins: usize) -> Result<UniformityTest> {
    if bins < 2 {
        return Err(Error::InvalidConfig("uniformity test needs at least two bins".into()));
    }
    if angles.is_empty() {
        return Err(Error::TooFewSamples(0));
    }
    let mut counts = vec![0u64; bins];
    for &a in angles {
        let w = crate::argtrack::wrap_angle(a);
        if !w.is_finite() {
            return Err(Error::NonFinite("angle"));
        }
        let i = (((w + PI) / TAU) * bins as f64).floor() as usize;
        counts[i.min(bins - 1)] += 1;
    }
    let n = angles.len() as f64;
    let expected = n / bins as f64;
    let statistic: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dof = bins - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok(UniformityTest {
        bins,
        n: angles.len() as u64,
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogPoint {
    pub k: u64,
    /// log|ζ′(ρ)|
    pub re: f64,
    /// Principal arg ζ′(ρ) in (−π, π].
    pub im: f64,
}

/// (Re, Im) of the principal log ζ′(ρ) for every unflagged record.
pub fn joint_log_scatter(records: &[PhaseRecord]) -> Vec<LogPoint> {
    records
        .iter()
        .filter(|r| !r.is_flagged())
        .map(|r| LogPoint {
            k: r.k,
            re: r.zeta_prime.norm().ln(),
            im: principal_arg(r.zeta_prime),
        })
        .collect()
}
