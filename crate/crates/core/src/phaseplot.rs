//! Domain-coloring phase portraits of ζ and argument-principle winding checks.
//!
//! Hue is arg ζ / 2π at full saturation and value. Each pixel row shares one
//! ordinate, so a row is evaluated as one horizontal progression: right of
//! the critical line directly, left of it through ζ(s) = χ(s)·conj ζ(1 − s̄).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::io::Write;

use crate::argtrack::principal_arg;
use crate::error::{Error, Result};
use crate::zeta::{chi, zeta_anywhere, EvalConfig, ZetaLine};
use crate::ComplexValue;

/// A contour passing closer than this to a zero is rejected.
pub const CONTOUR_MIN_MODULUS: f64 = 1e-8;

// Contour steps whose phase change exceeds this are subdivided.
const MAX_CONTOUR_STEP: f64 = PI / 4.0;
const MAX_CONTOUR_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub width_px: usize,
    pub height_px: usize,
}

impl RegionSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.sigma_lo, self.sigma_hi, self.t_lo, self.t_hi]
            .iter()
            .all(|v| v.is_finite());
        if !finite || !(self.sigma_lo < self.sigma_hi) || !(self.t_lo < self.t_hi) {
            return Err(Error::InvalidConfig(format!(
                "region needs sigma_lo < sigma_hi and t_lo < t_hi, got [{}, {}] x [{}, {}]",
                self.sigma_lo, self.sigma_hi, self.t_lo, self.t_hi
            )));
        }
        if self.width_px == 0 || self.height_px == 0 {
            return Err(Error::InvalidConfig("pixel counts must be >= 1".into()));
        }
        Ok(())
    }

    pub fn dsigma(&self) -> f64 {
        (self.sigma_hi - self.sigma_lo) / self.width_px as f64
    }

    pub fn dt(&self) -> f64 {
        (self.t_hi - self.t_lo) / self.height_px as f64
    }

    pub fn sigma_at(&self, col: usize) -> f64 {
        self.sigma_lo + (col as f64 + 0.5) * self.dsigma()
    }

    /// Row 0 is the top of the image, t near t_hi.
    pub fn t_at(&self, row: usize) -> f64 {
        self.t_hi - (row as f64 + 0.5) * self.dt()
    }

    pub fn point(&self, col: usize, row: usize) -> ComplexValue {
        Complex64::new(self.sigma_at(col), self.t_at(row))
    }
}

/// Rendered portrait. `args` holds the principal argument per pixel (NaN
/// where evaluation failed; those pixels are black).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseImage {
    pub region: RegionSpec,
    pub args: Vec<f64>,
    pub rgb: Vec<u8>,
}

impl PhaseImage {
    pub fn width(&self) -> usize {
        self.region.width_px
    }

    pub fn height(&self) -> usize {
        self.region.height_px
    }

    pub fn arg(&self, col: usize, row: usize) -> Option<f64> {
        let a = self.args[row * self.width() + col];
        a.is_finite().then_some(a)
    }

    pub fn masked_count(&self) -> usize {
        self.args.iter().filter(|a| !a.is_finite()).count()
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width(), self.height()).into_bytes();
        out.extend_from_slice(&self.rgb);
        out
    }

    pub fn write_ppm<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(&self.to_ppm())
    }
}

/// frac(arg/2π + 1).
pub fn hue(arg: f64) -> f64 {
    let h = arg / TAU + 1.0;
    h - h.floor()
}

/// Hexcone HSV → RGB at S = V = 1, channels rounded half-up to 8 bits.
pub fn hue_to_rgb(h: f64) -> [u8; 3] {
    let h6 = h * 6.0;
    let sector = h6.floor();
    let f = h6 - sector;
    let (r, g, b) = match (sector as i64).rem_euclid(6) {
        0 => (1.0, f, 0.0),
        1 => (1.0 - f, 1.0, 0.0),
        2 => (0.0, 1.0, f),
        3 => (0.0, 1.0 - f, 1.0),
        4 => (f, 0.0, 1.0),
        _ => (1.0, 0.0, 1.0 - f),
    };
    let byte = |x: f64| (x * 255.0 + 0.5).floor() as u8;
    [byte(r), byte(g), byte(b)]
}

pub fn render_phase(region: &RegionSpec, ecfg: &EvalConfig) -> Result<PhaseImage> {
    region.validate()?;
    ecfg.validate()?;
    let rows: Vec<Vec<f64>> = (0..region.height_px)
        .into_par_iter()
        .map(|row| render_row(region, row, ecfg))
        .collect();
    let args: Vec<f64> = rows.into_iter().flatten().collect();
    let mut rgb = Vec::with_capacity(args.len() * 3);
    for &a in &args {
        if a.is_finite() {
            rgb.extend_from_slice(&hue_to_rgb(hue(a)));
        } else {
            rgb.extend_from_slice(&[0, 0, 0]);
        }
    }
    Ok(PhaseImage {
        region: *region,
        args,
        rgb,
    })
}

fn render_row(region: &RegionSpec, row: usize, ecfg: &EvalConfig) -> Vec<f64> {
    let w = region.width_px;
    let t = region.t_at(row);
    let d = region.dsigma();
    // First column on or right of the critical line.
    let split = (0..w).find(|&c| region.sigma_at(c) >= 0.5).unwrap_or(w);
    let mut values: Vec<Option<ComplexValue>> = vec![None; w];

    if let Ok(line) = ZetaLine::new(t, ecfg) {
        if split < w {
            if let Ok(v) = line.progression(region.sigma_at(split), d, w - split) {
                for (c, z) in (split..w).zip(v) {
                    values[c] = Some(z);
                }
            }
        }
        if split > 0 {
            // Columns split-1, ..., 0 reflect to 1 − σ ascending.
            let sigma0 = 1.0 - region.sigma_at(split - 1);
            if let Ok(v) = line.progression(sigma0, d, split) {
                for (i, z) in v.into_iter().enumerate() {
                    let c = split - 1 - i;
                    let s = region.point(c, row);
                    values[c] = chi(s).ok().map(|x| x * z.conj());
                }
            }
        }
    }

    (0..w)
        .map(|c| {
            let z = match values[c] {
                Some(z) if z.re.is_finite() && z.im.is_finite() => Ok(z),
                _ => zeta_anywhere(region.point(c, row), ecfg),
            };
            match z {
                Ok(z) if z.re.is_finite() && z.im.is_finite() && z != Complex64::new(0.0, 0.0) => {
                    principal_arg(z)
                }
                _ => f64::NAN,
            }
        })
        .collect()
}

/// A 2×2 block of neighbouring pixel centers around which the hue winds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularCell {
    /// Top-left pixel of the block.
    pub col: usize,
    pub row: usize,
    /// Center of the block.
    pub sigma: f64,
    pub t: f64,
    /// Turns counter-clockwise in the (σ, t) plane: +1 at a simple zero,
    /// −1 at a simple pole.
    pub winding: i64,
}

/// Every block whose four corners are unmasked and whose hue winds.
pub fn singular_cells(image: &PhaseImage) -> Vec<SingularCell> {
    let (w, h) = (image.width(), image.height());
    let r = &image.region;
    let mut out = Vec::new();
    for row in 0..h.saturating_sub(1) {
        for col in 0..w.saturating_sub(1) {
            // Counter-clockwise in (σ, t): bottom-left, bottom-right,
            // top-right, top-left. Row + 1 is lower in t.
            let corners = [
                image.arg(col, row + 1),
                image.arg(col + 1, row + 1),
                image.arg(col + 1, row),
                image.arg(col, row),
            ];
            let Some(a) = corners.iter().copied().collect::<Option<Vec<f64>>>() else {
                continue;
            };
            let total: f64 = (0..4)
                .map(|i| crate::argtrack::wrap_angle(a[(i + 1) % 4] - a[i]))
                .sum();
            let winding = (total / TAU).round() as i64;
            if winding != 0 {
                out.push(SingularCell {
                    col,
                    row,
                    sigma: r.sigma_at(col) + 0.5 * r.dsigma(),
                    t: r.t_at(row) - 0.5 * r.dt(),
                    winding,
                });
            }
        }
    }
    out
}

/// Net turns of ζ around the closed polyline through `points` (the last
/// point connects back to the first), refining any edge whose phase change
/// is large.
pub fn contour_winding(points: &[ComplexValue], ecfg: &EvalConfig) -> Result<i64> {
    if points.len() < 3 {
        return Err(Error::InvalidConfig("a contour needs at least three points".into()));
    }
    let values: Vec<ComplexValue> = points
        .iter()
        .map(|&s| checked_eval(s, ecfg))
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for i in 0..points.len() {
        let j = (i + 1) % points.len();
        total += edge_phase(points[i], values[i], points[j], values[j], ecfg, 0)?;
    }
    Ok((total / TAU).round() as i64)
}

fn checked_eval(s: ComplexValue, ecfg: &EvalConfig) -> Result<ComplexValue> {
    let z = zeta_anywhere(s, ecfg).map_err(|e| match e {
        Error::PoleAtOne => Error::Domain("contour passes through the pole at s = 1".into()),
        other => other,
    })?;
    if z.norm() <= CONTOUR_MIN_MODULUS {
        return Err(Error::ZeroOnContour { min_modulus: z.norm() });
    }
    Ok(z)
}

fn edge_phase(
    a: ComplexValue,
    fa: ComplexValue,
    b: ComplexValue,
    fb: ComplexValue,
    ecfg: &EvalConfig,
    depth: u32,
) -> Result<f64> {
    let d = principal_arg(fb / fa);
    if d.abs() <= MAX_CONTOUR_STEP || depth >= MAX_CONTOUR_DEPTH {
        return Ok(d);
    }
    let m = (a + b) * 0.5;
    let fm = checked_eval(m, ecfg)?;
    Ok(edge_phase(a, fa, m, fm, ecfg, depth + 1)? + edge_phase(m, fm, b, fb, ecfg, depth + 1)?)
}

/// Zeros minus poles of ζ inside the circle |s − center| = radius, from
/// `samples` equally spaced points (refined where the phase moves fast).
pub fn verify_winding(
    center: ComplexValue,
    radius: f64,
    samples: usize,
    ecfg: &EvalConfig,
) -> Result<i64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidConfig(format!("radius must be positive, got {radius}")));
    }
    let n = samples.max(3);
    let points: Vec<ComplexValue> = (0..n)
        .map(|j| center + Complex64::from_polar(radius, TAU * j as f64 / n as f64))
        .collect();
    contour_winding(&points, ecfg)
}

/// Same count around the rectangle [sigma_lo, sigma_hi] × [t_lo, t_hi],
/// traversed counter-clockwise with `per_side` points on each edge.
pub fn verify_winding_rect(
    sigma_lo: f64,
    sigma_hi: f64,
    t_lo: f64,
    t_hi: f64,
    per_side: usize,
    ecfg: &EvalConfig,
) -> Result<i64> {
    if !(sigma_lo < sigma_hi) || !(t_lo < t_hi) {
        return Err(Error::InvalidConfig("degenerate rectangle".into()));
    }
    let n = per_side.max(1);
    let corners = [
        Complex64::new(sigma_lo, t_lo),
        Complex64::new(sigma_hi, t_lo),
        Complex64::new(sigma_hi, t_hi),
        Complex64::new(sigma_lo, t_hi),
    ];
    let mut points = Vec::with_capacity(4 * n);
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        points.extend((0..n).map(|j| a + (b - a) * (j as f64 / n as f64)));
    }
    contour_winding(&points, ecfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn color_wheel_primaries() {
        assert_eq!(hue_to_rgb(hue(0.0)), [255, 0, 0]);
        assert_eq!(hue_to_rgb(hue(TAU / 3.0)), [0, 255, 0]);
        assert_eq!(hue_to_rgb(hue(-TAU / 3.0)), [0, 0, 255]);
        assert_eq!(hue_to_rgb(hue(PI)), [0, 255, 255]);
        // Half-up rounding: f = 0.5 in sector 0 gives 127.5 → 128.
        assert_eq!(hue_to_rgb(1.0 / 12.0), [255, 128, 0]);
    }

    #[test]
    fn hue_range() {
        for a in [-PI + 1e-12, -1.0, 0.0, 1.0, PI] {
            let h = hue(a);
            assert!((0.0..1.0).contains(&h));
        }
        assert!((hue(PI) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn region_geometry() {
        let r = RegionSpec {
            sigma_lo: 0.0,
            sigma_hi: 1.0,
            t_lo: 10.0,
            t_hi: 20.0,
            width_px: 4,
            height_px: 5,
        };
        r.validate().unwrap();
        assert_eq!(r.sigma_at(0), 0.125);
        assert_eq!(r.t_at(0), 19.0);
        assert_eq!(r.t_at(4), 11.0);
        let bad = RegionSpec { width_px: 0, ..r };
        assert!(bad.validate().is_err());
        let bad = RegionSpec { t_hi: 5.0, ..r };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn ppm_header() {
        let region = RegionSpec {
            sigma_lo: 2.0,
            sigma_hi: 3.0,
            t_lo: 10.0,
            t_hi: 11.0,
            width_px: 3,
            height_px: 2,
        };
        let img = render_phase(&region, &EvalConfig::default()).unwrap();
        let ppm = img.to_ppm();
        assert!(ppm.starts_with(b"P6\n3 2\n255\n"));
        assert_eq!(ppm.len(), 11 + 18);
    }

    #[test]
    fn row_progression_matches_pointwise() {
        let region = RegionSpec {
            sigma_lo: -4.5,
            sigma_hi: 5.5,
            t_lo: 100.0,
            t_hi: 101.0,
            width_px: 40,
            height_px: 2,
        };
        let cfg = EvalConfig::default();
        let img = render_phase(&region, &cfg).unwrap();
        for row in 0..2 {
            for col in 0..40 {
                let z = zeta_anywhere(region.point(col, row), &cfg).unwrap();
                let got = img.arg(col, row).unwrap();
                assert!(crate::argtrack::wrap_angle(got - principal_arg(z)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn pole_pixel_is_masked() {
        // 3×3 grid whose center pixel sits exactly on s = 1.
        let region = RegionSpec {
            sigma_lo: 0.25,
            sigma_hi: 1.75,
            t_lo: -0.75,
            t_hi: 0.75,
            width_px: 3,
            height_px: 3,
        };
        let img = render_phase(&region, &EvalConfig::default()).unwrap();
        assert_eq!(img.masked_count(), 1);
        assert_eq!(&img.rgb[12..15], &[0, 0, 0]);
    }

    #[test]
    fn winding_simple_cases() {
        let cfg = EvalConfig::default();
        let g1 = 14.134725141734693;
        assert_eq!(verify_winding(Complex64::new(0.5, g1), 0.3, 64, &cfg).unwrap(), 1);
        assert_eq!(verify_winding(Complex64::new(2.0, 50.0), 0.3, 64, &cfg).unwrap(), 0);
        // Pole at 1 counts negatively.
        assert_eq!(verify_winding(Complex64::new(1.0, 0.0), 0.5, 64, &cfg).unwrap(), -1);
    }

    #[test]
    fn zero_on_contour() {
        let cfg = EvalConfig::default();
        let g1 = 14.134725141734693;
        let err = verify_winding(Complex64::new(0.5, g1 - 0.25), 0.25, 4, &cfg).unwrap_err();
        assert!(matches!(err, Error::ZeroOnContour { .. }));
    }

    #[test]
    fn singular_cell_at_first_zero() {
        let region = RegionSpec {
            sigma_lo: 0.0,
            sigma_hi: 1.0,
            t_lo: 13.6,
            t_hi: 14.6,
            width_px: 20,
            height_px: 21,
        };
        let img = render_phase(&region, &EvalConfig::default()).unwrap();
        let cells = singular_cells(&img);
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].winding, 1);
        assert!((cells[0].t - 14.1347).abs() < 0.05 && (cells[0].sigma - 0.5).abs() < 0.05);
    }
}
