//! Continuous variation of arg ζ′ (and arg ζ) along 4 → 4 + iγ → 1/2 + iγ.
//!
//! The vertical leg is closed-form: at σ = 4 the term −log(2)·2^{-s} strictly
//! dominates the rest of the Dirichlet series for ζ′, so ζ′ winds exactly as
//! that term does. The horizontal leg samples ζ on an equally spaced grid,
//! estimates ζ′ with a 7-point central stencil and accumulates principal
//! phase differences, refining any step that looks ambiguous.

use bitflags::bitflags;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::zeros::ZeroRecord;
use crate::zeta::{zeta, zeta_deriv, zeta_deriv_dirichlet, EvalConfig, ZetaLine};
use crate::ComplexValue;

/// Guard points added beyond each end of the horizontal grid.
pub const GUARD: usize = 3;

/// Slack added to the arcsin bound before the vertical certificate fails.
pub const CERTIFICATE_SLACK: f64 = 1e-6;

/// A zero of ζ closer than this to 1/2 + iγ rejects γ as an ordinate.
pub const ZERO_TOLERANCE: f64 = 1e-6;

/// |ζ(1/2 + it)| below this makes the ζ-argument endpoint singular.
pub const ENDPOINT_TOLERANCE: f64 = 1e-8;

// A step whose observed phase change and log-derivative prediction differ by
// more than this is refined.
const PREDICTION_TOLERANCE: f64 = 0.25;

// Disagreement between the tracked endpoint and the exact ζ′(ρ), modulo 2π,
// beyond which a record is marked suspect.
const SNAP_TOLERANCE: f64 = 0.1;

bitflags! {
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
    pub struct PhaseFlags: u8 {
        /// At least one step was subdivided.
        const REFINED = 1;
        /// Refinement ran out before every sub-step was unambiguous.
        const SLIP_SUSPECT = 1 << 1;
        /// The local linear model puts a zero of the tracked function within
        /// two grid steps of the path.
        const NEAR_ZETA_PRIME_ZERO = 1 << 2;
    }
}

impl fmt::Display for PhaseFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter_names().map(|(name, _)| name).collect();
        f.write_str(&names.join("|"))
    }
}

impl FromStr for PhaseFlags {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut flags = PhaseFlags::empty();
        for name in s.split('|').map(str::trim).filter(|n| !n.is_empty()) {
            flags |= PhaseFlags::from_name(name).ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("unknown flag {name:?}"),
            })?;
        }
        Ok(flags)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathConfig {
    pub dx: f64,
    pub sigma_start: f64,
    /// Radians; steps at or above this are refined.
    pub slip_threshold: f64,
    pub max_refine_depth: u32,
}

impl Default for PathConfig {
    fn default() -> Self {
        PathConfig {
            dx: 0.0025,
            sigma_start: 4.0,
            slip_threshold: 0.9 * PI,
            max_refine_depth: 6,
        }
    }
}

impl PathConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dx > 0.0 && self.dx <= 0.01) {
            return Err(Error::InvalidConfig(format!("dx must be in (0, 0.01], got {}", self.dx)));
        }
        if !(self.sigma_start >= 2.0) || !self.sigma_start.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "sigma_start must be >= 2, got {}",
                self.sigma_start
            )));
        }
        if !(self.slip_threshold > 0.0 && self.slip_threshold < PI) {
            return Err(Error::InvalidConfig(format!(
                "slip_threshold must be in (0, pi), got {}",
                self.slip_threshold
            )));
        }
        let steps = (self.sigma_start - 0.5) / self.dx;
        if (steps - steps.round()).abs() > 1e-6 {
            return Err(Error::InvalidConfig(format!(
                "sigma_start - 1/2 = {} is not a multiple of dx = {}",
                self.sigma_start - 0.5,
                self.dx
            )));
        }
        if self.max_refine_depth > 20 {
            return Err(Error::InvalidConfig("max_refine_depth must be <= 20".into()));
        }
        VerticalCertificate::at(self.sigma_start)?;
        Ok(())
    }

    /// Grid steps between σ = 1/2 and sigma_start.
    pub fn steps(&self) -> usize {
        ((self.sigma_start - 0.5) / self.dx).round() as usize
    }
}

/// Per-zero result of the phase computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRecord {
    pub k: u64,
    pub gamma: f64,
    pub zeta_prime: ComplexValue,
    /// Net turns: continuous_arg = 2π·winding + principal arg of zeta_prime.
    pub winding: i64,
    pub continuous_arg: f64,
    /// Continuous argument at sigma_start + iγ.
    pub vertical_arg: f64,
    pub flags: PhaseFlags,
}

impl PhaseRecord {
    pub fn principal_arg(&self) -> f64 {
        principal_arg(self.zeta_prime)
    }

    pub fn is_flagged(&self) -> bool {
        self.flags.intersects(PhaseFlags::SLIP_SUSPECT)
    }
}

/// arg z in (−π, π].
pub fn principal_arg(z: ComplexValue) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Reduce an angle to (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x % TAU;
    if y > PI {
        y -= TAU;
    } else if y <= -PI {
        y += TAU;
    }
    y
}

/// 7-point central estimate of f′ from f at s−3h … s+3h.
pub fn stencil_deriv(values: &[ComplexValue; 7], dx: f64) -> ComplexValue {
    let [m3, m2, m1, _, p1, p2, p3] = *values;
    ((p3 - m3) - (p2 - m2) * 9.0 + (p1 - m1) * 45.0) / (60.0 * dx)
}

/// 7-point central estimate of f″.
pub fn stencil_second_deriv(values: &[ComplexValue; 7], dx: f64) -> ComplexValue {
    let [m3, m2, m1, c, p1, p2, p3] = *values;
    ((p3 + m3) * 2.0 - (p2 + m2) * 27.0 + (p1 + m1) * 270.0 - c * 490.0) / (180.0 * dx * dx)
}

/// Dominance data for the vertical leg at a given real part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalCertificate {
    pub sigma: f64,
    /// |log(2)·2^{-σ}|.
    pub leading: f64,
    /// Σ_{n>=3} log(n) n^{-σ} (plus its truncation bound), which bounds the
    /// rest of the series on the whole line.
    pub tail: f64,
}

impl VerticalCertificate {
    pub fn at(sigma: f64) -> Result<Self> {
        let d = zeta_deriv_dirichlet(Complex64::new(sigma, 0.0))?;
        let leading = d.leading.norm();
        let tail = -d.tail.re + d.truncation_bound;
        if tail >= leading {
            return Err(Error::InvalidConfig(format!(
                "leading term does not dominate at sigma = {sigma} (tail {tail} >= {leading})"
            )));
        }
        Ok(VerticalCertificate { sigma, leading, tail })
    }

    /// Largest possible |arg(1 + tail/leading)|.
    pub fn delta_bound(&self) -> f64 {
        (self.tail / self.leading).asin()
    }
}

/// Closed-form vertical leg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalLeg {
    /// Continuous arg ζ′(σ + iγ).
    pub arg: f64,
    /// Principal arg of ζ′ / leading term.
    pub delta: f64,
    pub zeta_prime: ComplexValue,
}

pub fn vertical_leg(gamma: f64, sigma: f64) -> Result<VerticalLeg> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be >= 0, got {gamma}")));
    }
    let cert = VerticalCertificate::at(sigma)?;
    let d = zeta_deriv_dirichlet(Complex64::new(sigma, gamma))?;
    let delta = principal_arg(d.value() / d.leading);
    let bound = cert.delta_bound() + CERTIFICATE_SLACK;
    if delta.abs() > bound {
        return Err(Error::CertificateViolation { gamma, delta, bound });
    }
    // −log(2)·2^{-σ-iy} has argument π − y·log 2, continuous from y = 0.
    Ok(VerticalLeg {
        arg: PI - gamma * LN_2 + delta,
        delta,
        zeta_prime: d.value(),
    })
}

/// Continuous arg ζ′(4 + iγ), reached from ζ′(4) < 0 (argument π).
pub fn vertical_leg_arg(gamma: f64) -> Result<f64> {
    vertical_leg(gamma, 4.0).map(|v| v.arg)
}

/// ζ(σ_j + iγ) on an ascending grid with spacing dx from 1/2 − 3dx to
/// sigma_start + 3dx.
#[derive(Debug, Clone)]
pub struct StencilTable {
    pub gamma: f64,
    pub dx: f64,
    pub sigma_grid: Vec<f64>,
    pub values: Vec<ComplexValue>,
    ecfg: EvalConfig,
}

impl StencilTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn window(&self, j: usize) -> &[ComplexValue; 7] {
        self.values[j - GUARD..=j + GUARD].try_into().expect("7-point window")
    }

    pub fn eval_config(&self) -> &EvalConfig {
        &self.ecfg
    }
}

pub fn build_stencil_table(gamma: f64, cfg: &PathConfig, ecfg: &EvalConfig) -> Result<StencilTable> {
    if !(gamma > 1.0) {
        return Err(Error::Domain(format!("gamma must be > 1, got {gamma}")));
    }
    cfg.validate()?;
    let count = cfg.steps() + 1 + 2 * GUARD;
    let sigma0 = 0.5 - GUARD as f64 * cfg.dx;
    let line = ZetaLine::new(gamma, ecfg)?;
    let values = line.progression(sigma0, cfg.dx, count)?;
    let sigma_grid = (0..count).map(|j| sigma0 + j as f64 * cfg.dx).collect();
    Ok(StencilTable {
        gamma,
        dx: cfg.dx,
        sigma_grid,
        values,
        ecfg: *ecfg,
    })
}

/// Which function's argument is being followed along the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tracked {
    Zeta,
    ZetaPrime,
}

impl Tracked {
    /// (f, df/dσ) at the centre of a 7-point window of ζ values.
    fn sample(self, w: &[ComplexValue; 7], h: f64) -> (ComplexValue, ComplexValue) {
        match self {
            Tracked::Zeta => (w[3], stencil_deriv(w, h)),
            Tracked::ZetaPrime => (stencil_deriv(w, h), stencil_second_deriv(w, h)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    f: ComplexValue,
    df: ComplexValue,
}

impl Sample {
    fn near_zero(&self, h: f64) -> bool {
        self.f.norm() < 2.0 * h * self.df.norm()
    }
}

/// Phase change from `a` to `b` (σ decreasing by h), if unambiguous.
fn step_phase(a: &Sample, b: &Sample, h: f64, cfg: &PathConfig) -> Option<f64> {
    let d = principal_arg(b.f / a.f);
    // d/dσ arg f = Im(f′/f); moving left by h.
    let predicted = -0.5 * h * ((a.df / a.f).im + (b.df / b.f).im);
    let ok = d.abs() < cfg.slip_threshold
        && (d - predicted).abs() <= PREDICTION_TOLERANCE
        && d.is_finite();
    ok.then_some(d)
}

/// Outcome of one horizontal leg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizontalLeg {
    /// Continuous argument at σ = 1/2.
    pub arg: f64,
    pub flags: PhaseFlags,
    /// Tracked function at σ = 1/2 (stencil estimate for ζ′).
    pub endpoint: ComplexValue,
}

/// Follow arg f from σ = sigma_start down to σ = 1/2 over the table, where f
/// is ζ or ζ′ as requested.
pub fn horizontal_leg(
    table: &StencilTable,
    start_arg: f64,
    cfg: &PathConfig,
    tracked: Tracked,
) -> Result<HorizontalLeg> {
    let n = table.len();
    if n < 2 * GUARD + 2 {
        return Err(Error::Domain("stencil table too short".into()));
    }
    let h = table.dx;
    let top = n - 1 - GUARD;
    let sample_at = |j: usize| {
        let (f, df) = tracked.sample(table.window(j), h);
        Sample { f, df }
    };

    let mut flags = PhaseFlags::empty();
    let mut prev = sample_at(top);
    let mut arg = start_arg + wrap_angle(principal_arg(prev.f) - start_arg);
    let mut line: Option<ZetaLine> = None;
    for j in (GUARD..top).rev() {
        let cur = sample_at(j);
        if cur.near_zero(h) {
            flags |= PhaseFlags::NEAR_ZETA_PRIME_ZERO;
        }
        match step_phase(&prev, &cur, h, cfg) {
            Some(d) => arg += d,
            None => {
                flags |= PhaseFlags::REFINED;
                let line = match &mut line {
                    Some(l) => &*l,
                    None => line.insert(ZetaLine::new(table.gamma, &table.ecfg)?),
                };
                let (d, resolved) =
                    refine_step(line, table.sigma_grid[j], h, cfg, tracked)?;
                if !resolved {
                    flags |= PhaseFlags::SLIP_SUSPECT;
                }
                arg += d;
            }
        }
        prev = cur;
    }
    Ok(HorizontalLeg {
        arg,
        flags,
        endpoint: prev.f,
    })
}

/// Arg change over [sigma_lo, sigma_lo + h] (travelling left), by successive
/// halving of the step. Returns the finest estimate and whether every
/// sub-step was unambiguous.
fn refine_step(
    line: &ZetaLine,
    sigma_lo: f64,
    h: f64,
    cfg: &PathConfig,
    tracked: Tracked,
) -> Result<(f64, bool)> {
    let mut best = 0.0;
    for depth in 1..=cfg.max_refine_depth {
        let parts = 1usize << depth;
        let fine = h / parts as f64;
        let values = line.progression(sigma_lo - GUARD as f64 * fine, fine, parts + 1 + 2 * GUARD)?;
        let samples: Vec<Sample> = (GUARD..=GUARD + parts)
            .map(|i| {
                let w: &[ComplexValue; 7] = values[i - GUARD..=i + GUARD].try_into().expect("window");
                let (f, df) = tracked.sample(w, fine);
                Sample { f, df }
            })
            .collect();
        let mut total = 0.0;
        let mut resolved = true;
        for pair in samples.windows(2).rev() {
            // pair[1] is to the right of pair[0]; travel right to left.
            match step_phase(&pair[1], &pair[0], fine, cfg) {
                Some(d) => total += d,
                None => {
                    resolved = false;
                    total += principal_arg(pair[0].f / pair[1].f);
                }
            }
        }
        best = total;
        if resolved {
            return Ok((total, true));
        }
    }
    Ok((best, false))
}

/// Continuous arg ζ′(1/2 + iγ) from the table, starting from the continuous
/// argument at sigma_start.
pub fn horizontal_leg_arg(
    table: &StencilTable,
    start_arg: f64,
    cfg: &PathConfig,
) -> Result<(f64, PhaseFlags)> {
    let leg = horizontal_leg(table, start_arg, cfg, Tracked::ZetaPrime)?;
    Ok((leg.arg, leg.flags))
}

/// Full two-leg computation for one zero.
pub fn phase_at_zero(z: &ZeroRecord, cfg: &PathConfig, ecfg: &EvalConfig) -> Result<PhaseRecord> {
    let gamma = z.gamma;
    let table = build_stencil_table(gamma, cfg, ecfg)?;
    let on_line = table.values[GUARD];
    if on_line.norm() > ZERO_TOLERANCE {
        return Err(Error::NotAZero {
            gamma,
            modulus: on_line.norm(),
        });
    }
    let vertical = vertical_leg(gamma, cfg.sigma_start)?;
    let leg = horizontal_leg(&table, vertical.arg, cfg, Tracked::ZetaPrime)?;
    let mut flags = leg.flags;

    let zeta_prime = zeta_deriv(Complex64::new(0.5, gamma), ecfg)?;
    let principal = principal_arg(zeta_prime);
    let winding = ((leg.arg - principal) / TAU).round() as i64;
    let continuous_arg = principal + TAU * winding as f64;
    if (leg.arg - continuous_arg).abs() > SNAP_TOLERANCE {
        flags |= PhaseFlags::SLIP_SUSPECT;
    }
    Ok(PhaseRecord {
        k: z.k,
        gamma,
        zeta_prime,
        winding,
        continuous_arg,
        vertical_arg: vertical.arg,
        flags,
    })
}

/// [`phase_at_zero`] over many zeros on the current rayon pool; results come
/// back in input order.
pub fn phase_at_zeros(
    zeros: &[ZeroRecord],
    cfg: &PathConfig,
    ecfg: &EvalConfig,
) -> Vec<Result<PhaseRecord>> {
    zeros.par_iter().map(|z| phase_at_zero(z, cfg, ecfg)).collect()
}

/// Continuous arg ζ(1/2 + it) along the same path.
///
/// On the vertical leg |ζ(σ + iy) − 1| ≤ ζ(σ) − 1 < 1 for σ >= 2, so the
/// argument there is just the principal value.
pub fn track_zeta_arg(t: f64, cfg: &PathConfig, ecfg: &EvalConfig) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::Domain(format!("t must be > 1, got {t}")));
    }
    let table = build_stencil_table(t, cfg, ecfg)?;
    let end = table.values[GUARD];
    if end.norm() < ENDPOINT_TOLERANCE {
        return Err(Error::EndpointAtZero { t, modulus: end.norm() });
    }
    let start = zeta(Complex64::new(cfg.sigma_start, t), ecfg)?;
    let leg = horizontal_leg(&table, principal_arg(start), cfg, Tracked::Zeta)?;
    Ok(leg.arg)
}

/// N(t) = θ(t)/π + 1 + arg ζ(1/2 + it)/π, the number of zeros with
/// 0 < γ < t.
pub fn zero_count(t: f64, cfg: &PathConfig, ecfg: &EvalConfig) -> Result<f64> {
    let theta = crate::zeta::theta(t)?.theta;
    let s = track_zeta_arg(t, cfg, ecfg)?;
    Ok(theta / PI + 1.0 + s / PI)
}
