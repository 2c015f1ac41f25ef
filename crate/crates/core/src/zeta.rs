//! Evaluation of ζ(s), ζ′(s) and the functional-equation quantities built on
//! them (χ, θ, Z, the zero-counting main term A).
//!
//! ζ is computed by Euler–Maclaurin summation with
//! `N = ceil(em_terms_factor * max(|t|/2π, 10))` leading terms and
//! `bernoulli_depth` correction terms. Far to the right the plain Dirichlet
//! series is used instead.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::special::{em_coefficient, ln_gamma, MAX_BERNOULLI_INDEX};
use crate::ComplexValue;

/// Distance from s = 1 inside which evaluation is refused.
pub const POLE_RADIUS: f64 = 1e-8;

/// Lowest real part accepted by [`zeta`]; use [`reflect_zeta`] below it.
pub const MIN_SIGMA: f64 = -5.0;

/// Accuracy target of the stand-alone Dirichlet route.
pub const DIRICHLET_TARGET: f64 = 1e-13;

const MAX_PLAIN_TERMS: usize = 1 << 17;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Multiplier on `max(|t|/2π, 10)` giving the number of summed terms.
    pub em_terms_factor: f64,
    /// Number of Bernoulli correction terms.
    pub bernoulli_depth: usize,
    /// At or above this real part the plain Dirichlet series is summed.
    pub dirichlet_sigma_min: f64,
    pub target_abs_error: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            em_terms_factor: 4.0,
            bernoulli_depth: 8,
            dirichlet_sigma_min: 6.0,
            target_abs_error: 1e-10,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.em_terms_factor >= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "em_terms_factor must be >= 1, got {}",
                self.em_terms_factor
            )));
        }
        if self.bernoulli_depth < 1 || self.bernoulli_depth >= MAX_BERNOULLI_INDEX {
            return Err(Error::InvalidConfig(format!(
                "bernoulli_depth must be in [1, {}), got {}",
                MAX_BERNOULLI_INDEX, self.bernoulli_depth
            )));
        }
        if !(self.dirichlet_sigma_min >= 2.0) {
            return Err(Error::InvalidConfig(format!(
                "dirichlet_sigma_min must be >= 2, got {}",
                self.dirichlet_sigma_min
            )));
        }
        if !(self.target_abs_error > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "target_abs_error must be > 0, got {}",
                self.target_abs_error
            )));
        }
        Ok(())
    }

    /// Number of leading terms summed directly at height `t`.
    pub fn em_terms(&self, t: f64) -> usize {
        (self.em_terms_factor * (t.abs() / (2.0 * PI)).max(10.0)).ceil() as usize
    }
}

/// Riemann–Siegel theta at a given ordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaValue {
    pub t: f64,
    pub theta: f64,
}

fn check_arg(s: ComplexValue) -> Result<()> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if (s - 1.0).norm() < POLE_RADIUS {
        return Err(Error::PoleAtOne);
    }
    if s.re < MIN_SIGMA {
        return Err(Error::Domain(format!(
            "Re(s) = {} below {MIN_SIGMA}; use reflect_zeta",
            s.re
        )));
    }
    Ok(())
}

fn finite(z: ComplexValue, what: &'static str) -> Result<ComplexValue> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

fn accept(value: ComplexValue, tail: f64, cfg: &EvalConfig) -> Result<ComplexValue> {
    // Far left of the critical line |ζ| grows like |t|^(1/2-σ); the target is
    // then applied relative to the value.
    let allowed = cfg.target_abs_error * value.norm().max(1.0);
    if tail > allowed {
        return Err(Error::AccuracyNotMet {
            estimate: tail,
            target: allowed,
        });
    }
    Ok(value)
}

/// n^{-s} for n >= 1.
#[inline]
fn n_pow_neg(ln_n: f64, s: ComplexValue) -> ComplexValue {
    let (sin, cos) = (s.im * ln_n).sin_cos();
    let m = (-s.re * ln_n).exp();
    Complex64::new(m * cos, -m * sin)
}

/// Euler–Maclaurin remainder for Σ_{n>=N} n^{-s}, with its derivative in s.
///
/// Returns (tail, d tail / ds, error estimate of tail, error estimate of derivative).
pub(crate) fn em_tail(s: ComplexValue, n: usize, depth: usize) -> (Complex64, Complex64, f64, f64) {
    let big_n = n as f64;
    let ln_n = big_n.ln();
    let n_neg_s = n_pow_neg(ln_n, s);
    let sm1 = s - 1.0;
    let inv_sm1 = sm1.inv();

    let mut value = n_neg_s * big_n * inv_sm1 + n_neg_s * 0.5;
    let mut deriv = -(n_neg_s * big_n) * (inv_sm1 * ln_n + inv_sm1 * inv_sm1) - n_neg_s * (0.5 * ln_n);

    // P_k(s) = s (s+1) ... (s+2k-2), tracked with its derivative.
    let mut poly = s;
    let mut poly_d = Complex64::new(1.0, 0.0);
    let inv_n = 1.0 / big_n;
    // N^{-s-2k+1}
    let mut power = n_neg_s * inv_n;
    let mut est_value = 0.0;
    let mut est_deriv = 0.0;
    for k in 1..=depth + 1 {
        let c = em_coefficient(k);
        let term = poly * power * c;
        let term_d = (poly_d - poly * ln_n) * power * c;
        if k <= depth {
            value += term;
            deriv += term_d;
            // advance P_k -> P_{k+1}: multiply by (s+2k-1)(s+2k)
            for j in [2 * k - 1, 2 * k] {
                let f = s + j as f64;
                poly_d = poly_d * f + poly;
                poly *= f;
            }
            power *= inv_n * inv_n;
        } else {
            // The series is asymptotic; once terms decrease the error is of
            // the order of the first omitted term.
            est_value = term.norm();
            est_deriv = term_d.norm();
        }
    }
    (value, deriv, est_value, est_deriv)
}

/// Rounding error of Σ_{m<n} m^{-σ} (times log m when `with_log`): one
/// unit roundoff per unit of the summed moduli. Left of the critical line
/// the moduli grow and this dominates the truncation error.
fn summation_roundoff(n: usize, sigma: f64, with_log: bool) -> f64 {
    let x = n as f64;
    let a = 1.0 - sigma;
    let mass = if a.abs() < 1e-9 {
        x.ln()
    } else {
        (x.powf(a) - 1.0) / a
    };
    let weight = if with_log { x.ln() } else { 1.0 };
    f64::EPSILON * (1.0 + mass) * weight
}

fn plain_terms(sigma: f64, target: f64, with_log: bool) -> Option<usize> {
    let mut n = 16usize;
    while n <= MAX_PLAIN_TERMS {
        let x = n as f64;
        let a = sigma - 1.0;
        // Integral bound on Σ_{m>n} (ln m) m^{-σ} or Σ m^{-σ}.
        let bound = if with_log {
            x.powf(-a) * (x.ln() / a + 1.0 / (a * a))
        } else {
            x.powf(-a) / a
        };
        if bound <= target {
            return Some(n);
        }
        n *= 2;
    }
    None
}

/// ζ(s) for Re(s) >= −5.
pub fn zeta(s: ComplexValue, cfg: &EvalConfig) -> Result<ComplexValue> {
    check_arg(s)?;
    if s.re >= cfg.dirichlet_sigma_min {
        if let Some(n) = plain_terms(s.re, cfg.target_abs_error / 4.0, false) {
            let mut sum = Complex64::new(0.0, 0.0);
            for m in (1..=n).rev() {
                sum += n_pow_neg((m as f64).ln(), s);
            }
            return finite(sum, "zeta");
        }
    }
    let n = cfg.em_terms(s.im);
    let (tail, _, est, _) = em_tail(s, n, cfg.bernoulli_depth);
    // Smallest terms first.
    let mut sum = tail;
    for m in (1..n).rev() {
        sum += n_pow_neg((m as f64).ln(), s);
    }
    let value = finite(sum, "zeta")?;
    accept(value, est + summation_roundoff(n, s.re, false), cfg)
}

/// ζ′(s) for Re(s) >= −5, by term-wise differentiation.
pub fn zeta_deriv(s: ComplexValue, cfg: &EvalConfig) -> Result<ComplexValue> {
    check_arg(s)?;
    if s.re >= cfg.dirichlet_sigma_min {
        if let Some(n) = plain_terms(s.re, cfg.target_abs_error / 4.0, true) {
            let mut sum = Complex64::new(0.0, 0.0);
            for m in (2..=n).rev() {
                let ln_m = (m as f64).ln();
                sum -= n_pow_neg(ln_m, s) * ln_m;
            }
            return finite(sum, "zeta_deriv");
        }
    }
    let n = cfg.em_terms(s.im);
    let (_, tail_d, _, est) = em_tail(s, n, cfg.bernoulli_depth);
    let mut sum = tail_d;
    for m in (2..n).rev() {
        let ln_m = (m as f64).ln();
        sum -= n_pow_neg(ln_m, s) * ln_m;
    }
    let value = finite(sum, "zeta_deriv")?;
    accept(value, est + summation_roundoff(n, s.re, true), cfg)
}

/// ζ′(s) split as leading term −log(2)·2^{-s} plus the remaining series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletDerivative {
    pub leading: ComplexValue,
    /// −Σ_{n>=3} log(n) n^{-s}.
    pub tail: ComplexValue,
    /// Bound on the truncation error of `tail`.
    pub truncation_bound: f64,
    pub terms: usize,
}

impl DirichletDerivative {
    pub fn value(&self) -> ComplexValue {
        self.leading + self.tail
    }
}

/// ζ′(s) from the differentiated Dirichlet series, Re(s) >= 2.
///
/// Where the plain series would need more than 2^17 terms, the remainder past
/// the cutoff is replaced by its integral and three endpoint corrections.
pub fn zeta_deriv_dirichlet(s: ComplexValue) -> Result<DirichletDerivative> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if s.re < 2.0 {
        return Err(Error::Domain(format!(
            "Dirichlet series for zeta' needs Re(s) >= 2, got {}",
            s.re
        )));
    }
    let leading = -n_pow_neg(LN_2, s) * LN_2;
    let plain = plain_terms(s.re, DIRICHLET_TARGET, true);
    let n = plain.unwrap_or_else(|| 2000usize.max((20.0 * s.norm()).ceil() as usize));

    let mut tail = Complex64::new(0.0, 0.0);
    for m in (3..=n).rev() {
        let ln_m = (m as f64).ln();
        tail -= n_pow_neg(ln_m, s) * ln_m;
    }
    let truncation_bound = match plain {
        Some(n) => {
            let x = n as f64;
            let a = s.re - 1.0;
            x.powf(-a) * (x.ln() / a + 1.0 / (a * a))
        }
        None => {
            let (rest, bound) = dirichlet_remainder(s, n);
            tail += rest;
            bound
        }
    };
    Ok(DirichletDerivative {
        leading,
        tail: finite(tail, "zeta_deriv_dirichlet")?,
        truncation_bound,
        terms: n,
    })
}

/// Σ_{m>n} f(m) for f(x) = −log(x) x^{-s}.
fn dirichlet_remainder(s: ComplexValue, n: usize) -> (ComplexValue, f64) {
    let x = n as f64;
    let ln_x = x.ln();
    let x_neg_s = n_pow_neg(ln_x, s);
    let sm1 = s - 1.0;
    // ∫_x^∞ f = −x^{1−s} (log x/(s−1) + 1/(s−1)^2)
    let integral = -(x_neg_s * x) * (ln_x / sm1 + (sm1 * sm1).inv());

    // f^{(j)}(x) = x^{-s-j} (a_j + b_j log x)
    let mut a = Complex64::new(0.0, 0.0);
    let mut b = Complex64::new(-1.0, 0.0);
    let mut derivs = [Complex64::new(0.0, 0.0); 6];
    let mut pow = x_neg_s;
    for (j, slot) in derivs.iter_mut().enumerate() {
        *slot = pow * (a + b * ln_x);
        let e = -s - j as f64;
        let next_a = e * a + b;
        b *= e;
        a = next_a;
        pow /= x;
    }
    let rest = integral - derivs[0] * 0.5 - derivs[1] / 12.0 + derivs[3] / 720.0;
    let bound = 2.0 * derivs[5].norm() / 30240.0;
    (rest, bound)
}

/// χ(s) = π^{s−1/2} Γ((1−s)/2) / Γ(s/2), via log-Gamma.
pub fn chi(s: ComplexValue) -> Result<ComplexValue> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if s.im == 0.0 && s.re.fract() == 0.0 {
        let n = s.re as i64;
        if n <= 0 && n % 2 == 0 || n >= 1 && n % 2 == 1 {
            return Err(Error::SingularChi { re: s.re, im: s.im });
        }
    }
    let log_chi = (s - 0.5) * PI.ln() + ln_gamma((1.0 - s) * 0.5) - ln_gamma(s * 0.5);
    finite(log_chi.exp(), "chi")
}

/// ζ(s) for Re(s) < 1/2 through the functional equation ζ(s) = χ(s) ζ(1−s).
pub fn reflect_zeta(s: ComplexValue, cfg: &EvalConfig) -> Result<ComplexValue> {
    if !(s.re < 0.5) {
        return Err(Error::Domain(format!(
            "reflect_zeta needs Re(s) < 1/2, got {}",
            s.re
        )));
    }
    if s.im == 0.0 && s.re.fract() == 0.0 && s.re <= 0.0 && (s.re as i64) % 2 == 0 {
        // χ vanishes at the trivial zeros; at s = 0 the product is 0·∞.
        return Ok(if s.re == 0.0 {
            Complex64::new(-0.5, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    let c = chi(s)?;
    let z = zeta(1.0 - s, cfg)?;
    finite(c * z, "reflect_zeta")
}

/// ζ(s) anywhere we can evaluate it: Euler–Maclaurin to the right of the
/// critical line, the functional equation to the left.
pub fn zeta_anywhere(s: ComplexValue, cfg: &EvalConfig) -> Result<ComplexValue> {
    if s.re < 0.5 {
        reflect_zeta(s, cfg)
    } else {
        zeta(s, cfg)
    }
}

/// Riemann–Siegel theta, θ(t) = Im log Γ(1/4 + it/2) − (t/2) log π.
pub fn theta(t: f64) -> Result<ThetaValue> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::Domain(format!("theta needs t > 1, got {t}")));
    }
    let theta = ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln();
    Ok(ThetaValue { t, theta })
}

/// Hardy's Z(t) = e^{iθ(t)} ζ(1/2 + it), which is real.
pub fn hardy_z(t: f64, cfg: &EvalConfig) -> Result<f64> {
    let th = theta(t)?.theta;
    let z = zeta(Complex64::new(0.5, t), cfg)?;
    let rotated = Complex64::from_polar(1.0, th) * z;
    let allowed = 10.0 * cfg.target_abs_error * z.norm().max(1.0);
    if rotated.im.abs() > allowed {
        return Err(Error::AccuracyNotMet {
            estimate: rotated.im.abs(),
            target: allowed,
        });
    }
    Ok(rotated.re)
}

/// A(t) = (t/2π) log(t/2π) − t/2π.
pub fn a_of_t(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("A(t) needs t > 0, got {t}")));
    }
    let x = t / (2.0 * PI);
    Ok(x * x.ln() - x)
}

/// A′(u) = log(u/2π) / 2π, the mean density of zeros at height u.
pub fn a_prime(u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::Domain(format!("A'(u) needs u > 0, got {u}")));
    }
    Ok((u / (2.0 * PI)).ln() / (2.0 * PI))
}

/// ζ along a horizontal line σ + it, at equally spaced σ.
///
/// The factors n^{-it} are computed once; n^{-σ} is advanced by the fixed
/// real ratio n^{-step} from one point to the next.
pub struct ZetaLine {
    t: f64,
    n_terms: usize,
    depth: usize,
    cfg: EvalConfig,
    ln_n: Vec<f64>,
    rot_re: Vec<f64>,
    rot_im: Vec<f64>,
}

impl ZetaLine {
    pub fn new(t: f64, cfg: &EvalConfig) -> Result<Self> {
        cfg.validate()?;
        if !t.is_finite() {
            return Err(Error::Domain(format!("non-finite ordinate {t}")));
        }
        let n_terms = cfg.em_terms(t);
        let count = n_terms - 1;
        let mut ln_n = Vec::with_capacity(count);
        let mut rot_re = Vec::with_capacity(count);
        let mut rot_im = Vec::with_capacity(count);
        for m in 1..n_terms {
            let l = (m as f64).ln();
            let (sin, cos) = (t * l).sin_cos();
            ln_n.push(l);
            rot_re.push(cos);
            rot_im.push(-sin);
        }
        Ok(ZetaLine {
            t,
            n_terms,
            depth: cfg.bernoulli_depth,
            cfg: *cfg,
            ln_n,
            rot_re,
            rot_im,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    /// ζ(σ_j + it) for σ_j = sigma0 + j·step, j = 0..count.
    pub fn progression(&self, sigma0: f64, step: f64, count: usize) -> Result<Vec<ComplexValue>> {
        let len = self.ln_n.len();
        let mut a_re = vec![0.0; len];
        let mut a_im = vec![0.0; len];
        let mut ratio = vec![0.0; len];
        for i in 0..len {
            let m = (-sigma0 * self.ln_n[i]).exp();
            a_re[i] = m * self.rot_re[i];
            a_im[i] = m * self.rot_im[i];
            ratio[i] = (-step * self.ln_n[i]).exp();
        }
        let mut out = Vec::with_capacity(count);
        for j in 0..count {
            let sigma = sigma0 + j as f64 * step;
            let s = Complex64::new(sigma, self.t);
            check_arg(s)?;
            let head = sum_and_advance(&mut a_re, &mut a_im, &ratio);
            let (tail, _, est, _) = em_tail(s, self.n_terms, self.depth);
            let value = finite(head + tail, "zeta")?;
            let est = est + summation_roundoff(self.n_terms, sigma, false);
            out.push(accept(value, est, &self.cfg)?);
        }
        Ok(out)
    }
}

/// Σ a_n, then a_n *= ratio_n. Four interleaved partial sums keep the
/// summation order fixed while letting the loop vectorise.
fn sum_and_advance(a_re: &mut [f64], a_im: &mut [f64], ratio: &[f64]) -> Complex64 {
    let mut acc_re = [0.0f64; 4];
    let mut acc_im = [0.0f64; 4];
    let chunks = a_re.len() / 4;
    for c in 0..chunks {
        for l in 0..4 {
            let i = 4 * c + l;
            acc_re[l] += a_re[i];
            acc_im[l] += a_im[i];
            a_re[i] *= ratio[i];
            a_im[i] *= ratio[i];
        }
    }
    for i in 4 * chunks..a_re.len() {
        acc_re[0] += a_re[i];
        acc_im[0] += a_im[i];
        a_re[i] *= ratio[i];
        a_im[i] *= ratio[i];
    }
    Complex64::new(
        (acc_re[0] + acc_re[1]) + (acc_re[2] + acc_re[3]),
        (acc_im[0] + acc_im[1]) + (acc_im[2] + acc_im[3]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        Complex64::new(re, im)
    }

    #[test]
    fn analytic_values() {
        let cfg = EvalConfig::default();
        let z2 = zeta(c(2.0, 0.0), &cfg).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-13 && z2.im.abs() < 1e-15);
        let z0 = zeta(c(0.0, 0.0), &cfg).unwrap();
        assert!((z0.re + 0.5).abs() < 1e-13);
        let zm1 = zeta(c(-1.0, 0.0), &cfg).unwrap();
        assert!((zm1.re + 1.0 / 12.0).abs() < 1e-13);
    }

    #[test]
    fn zeta_four_against_direct_sum() {
        // Σ n^{-4} summed smallest-first to convergence.
        let direct: f64 = (1..200_000u64).rev().map(|n| (n as f64).powi(-4)).sum();
        let got = zeta(c(4.0, 0.0), &EvalConfig::default()).unwrap();
        assert!((got.re - direct).abs() < 1e-14);
        assert!((got.re - 1.0823232337).abs() < 1e-10);
    }

    #[test]
    fn deriv_at_four_and_two() {
        let cfg = EvalConfig::default();
        let direct: f64 = (2..200_000u64)
            .rev()
            .map(|n| -(n as f64).ln() * (n as f64).powi(-4))
            .sum();
        let d4 = zeta_deriv(c(4.0, 0.0), &cfg).unwrap();
        assert!((d4.re - direct).abs() < 1e-13);
        assert!((d4.re + 0.0689112658).abs() < 1e-10);
        // mpmath: zeta'(2) = -0.93754825431584375370...
        let d2 = zeta_deriv(c(2.0, 0.0), &cfg).unwrap();
        assert!((d2.re + 0.937_548_254_315_843_8).abs() < 1e-12);
    }

    #[test]
    fn pole_is_rejected() {
        let cfg = EvalConfig::default();
        assert_eq!(zeta(c(1.0, 0.0), &cfg), Err(Error::PoleAtOne));
        assert_eq!(zeta(c(1.0 + 5e-9, 0.0), &cfg), Err(Error::PoleAtOne));
        assert!(zeta(c(1.0 + 1e-6, 0.0), &cfg).is_ok());
        assert_eq!(zeta_deriv(c(1.0, 0.0), &cfg), Err(Error::PoleAtOne));
    }

    #[test]
    fn below_minus_five_is_a_domain_error() {
        assert!(matches!(
            zeta(c(-5.5, 3.0), &EvalConfig::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn critical_line_reference_values() {
        let cfg = EvalConfig::default();
        // mpmath, 40 digits
        let z = zeta(c(0.5, 100.0), &cfg).unwrap();
        assert!((z - c(2.692_619_885_681_324, -0.020_386_029_602_591_76)).norm() < 1e-10);
        let z = zeta(c(0.5, 10_000.0), &cfg).unwrap();
        assert!((z - c(-0.339_373_802_638_834_46, -0.037_091_505_973_206_03)).norm() < 1e-10);
        let zp = zeta_deriv(c(3.0, 100.0), &cfg).unwrap();
        assert!((zp - c(-0.060_060_648_928_323_85, 0.019_791_008_567_064_07)).norm() < 1e-10);
    }

    #[test]
    fn first_zero_is_small() {
        let z = zeta(c(0.5, 14.134_725_141_734_693_79), &EvalConfig::default()).unwrap();
        assert!(z.norm() < 1e-9);
    }

    #[test]
    fn dirichlet_leading_and_tail_constants() {
        let d = zeta_deriv_dirichlet(c(4.0, 0.0)).unwrap();
        assert!((d.leading.norm() - 0.0433217).abs() < 5e-8);
        let tail = -d.tail.re;
        assert!(tail <= 0.025590 && (tail - 0.025590).abs() < 1e-6);
        let em = zeta_deriv(c(4.0, 0.0), &EvalConfig::default()).unwrap();
        assert!((d.value() - em).norm() < 1e-12);
    }

    #[test]
    fn dirichlet_route_rejects_left_half() {
        assert!(matches!(zeta_deriv_dirichlet(c(1.9, 5.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn chi_identities() {
        assert!((chi(c(0.5, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        let s = c(0.3, 5.0);
        let prod = chi(s).unwrap() * chi(1.0 - s).unwrap();
        assert!((prod - c(1.0, 0.0)).norm() < 1e-12);
        assert!((chi(c(0.5, 100.0)).unwrap().norm() - 1.0).abs() < 1e-10);
        assert!(matches!(chi(c(-2.0, 0.0)), Err(Error::SingularChi { .. })));
        assert!(matches!(chi(c(3.0, 0.0)), Err(Error::SingularChi { .. })));
    }

    #[test]
    fn reflection_values() {
        let cfg = EvalConfig::default();
        let v = reflect_zeta(c(-1.0, 0.0), &cfg).unwrap();
        assert!((v.re + 1.0 / 12.0).abs() < 1e-13 && v.im.abs() < 1e-13);
        assert_eq!(reflect_zeta(c(-2.0, 0.0), &cfg).unwrap(), c(0.0, 0.0));
        // mpmath: zeta(-2.5 + 7000i)
        let expected = c(1_384_352_926.542_763_3, 364_053_770.117_373_83);
        let v = reflect_zeta(c(-2.5, 7000.0), &cfg).unwrap();
        assert!((v - expected).norm() / expected.norm() < 1e-9);
        let direct = zeta(c(-2.5, 7000.0), &cfg).unwrap();
        assert!((v - direct).norm() / v.norm() < 1e-6);
        assert!(matches!(reflect_zeta(c(0.7, 1.0), &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn theta_reference_values() {
        // mpmath siegeltheta
        for &(t, expected) in &[
            (10.0, -3.067_074_396_289_895_3),
            (50.0, 26.461_366_070_161_41),
            (100.0, 87.972_165_231_787_22),
            (1000.0, 2034.546_428_038_031_6),
        ] {
            let got = theta(t).unwrap().theta;
            assert!((got - expected).abs() < 1e-10, "t={t}: {got} vs {expected}");
        }
        assert!(theta(1.0).is_err());
    }

    #[test]
    fn theta_asymptotics() {
        let t = 1e4;
        let leading = t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0;
        let diff = theta(t).unwrap().theta - leading;
        let expected = 1.0 / (48.0 * t);
        assert!(((diff - expected) / expected).abs() < 0.1);
    }

    #[test]
    fn theta_is_continuous() {
        let (t, h) = (1000.0, 1e-3);
        let d = (theta(t + h).unwrap().theta - theta(t).unwrap().theta).abs();
        assert!(d <= 2.0 * h * t.ln());
    }

    #[test]
    fn hardy_z_values() {
        let cfg = EvalConfig::default();
        assert!(hardy_z(14.134_725_141_734_693_79, &cfg).unwrap().abs() < 1e-8);
        let a = hardy_z(14.0, &cfg).unwrap();
        let b = hardy_z(14.5, &cfg).unwrap();
        assert!(a.signum() != b.signum());
        let z30 = hardy_z(30.0, &cfg).unwrap();
        assert!((z30 - 0.596_028_519_239_884_9).abs() < 1e-10);
        let m = zeta(c(0.5, 30.0), &cfg).unwrap().norm_sqr();
        assert!((z30 * z30 - m).abs() < 1e-10);
    }

    #[test]
    fn zero_counting_main_term() {
        assert!((a_of_t(2.0 * PI).unwrap() + 1.0).abs() < 1e-15);
        assert!(a_of_t(2.0 * PI * std::f64::consts::E).unwrap().abs() < 1e-14);
        assert_eq!(a_prime(2.0 * PI).unwrap(), 0.0);
        assert!(a_of_t(0.0).is_err());
        assert!(a_prime(-1.0).is_err());
    }

    #[test]
    fn line_matches_pointwise() {
        let cfg = EvalConfig::default();
        let line = ZetaLine::new(1000.0, &cfg).unwrap();
        let vals = line.progression(4.0, -0.01, 351).unwrap();
        for (j, v) in vals.iter().enumerate().step_by(50) {
            let s = c(4.0 - 0.01 * j as f64, 1000.0);
            assert!((v - zeta(s, &cfg).unwrap()).norm() < 1e-10, "j={j}");
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = EvalConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.em_terms_factor = 0.5;
        assert!(cfg.validate().is_err());
        let cfg = EvalConfig {
            bernoulli_depth: 0,
            ..EvalConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = EvalConfig {
            dirichlet_sigma_min: 1.5,
            ..EvalConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn deterministic() {
        let cfg = EvalConfig::default();
        let s = c(0.5, 777.123);
        let a = zeta(s, &cfg).unwrap();
        let b = zeta(s, &cfg).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
}
