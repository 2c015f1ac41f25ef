//! Principal branch of log Γ(z) for complex z.
//!
//! Stirling's series on a region where it converges fast, reached through
//! the recurrence log Γ(z) = log Γ(z + m) − Σ log(z + j).

use num_complex::Complex64;
use std::f64::consts::PI;

use super::bernoulli::bernoulli_even;

const STIRLING_TERMS: usize = 12;
const MIN_STIRLING_MODULUS: f64 = 12.0;

/// log Γ(z), principal branch (cut along the negative real axis).
///
/// Returns a non-finite value at the poles z = 0, −1, −2, ….
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let shift = shift_count(z);
    let mut correction = Complex64::new(0.0, 0.0);
    for j in 0..shift {
        correction += (z + j as f64).ln();
    }
    stirling(z + shift as f64) - correction
}

fn shift_count(z: Complex64) -> usize {
    if z.im.abs() >= MIN_STIRLING_MODULUS {
        // Far from the real axis the series is fine anywhere in Re z >= 0.
        if z.re < 0.0 {
            (-z.re).ceil() as usize
        } else {
            0
        }
    } else if z.re < MIN_STIRLING_MODULUS {
        (MIN_STIRLING_MODULUS - z.re).ceil() as usize
    } else {
        0
    }
}

fn stirling(z: Complex64) -> Complex64 {
    let half_ln_two_pi = 0.5 * (2.0 * PI).ln();
    let mut sum = (z - 0.5) * z.ln() - z + half_ln_two_pi;
    let inv = z.inv();
    let inv_sq = inv * inv;
    let mut power = inv;
    for k in 1..=STIRLING_TERMS {
        let two_k = (2 * k) as f64;
        sum += power * (bernoulli_even(k) / (two_k * (two_k - 1.0)));
        power *= inv_sq;
    }
    sum
}
