#![allow(clippy::excessive_precision)]

use std::sync::OnceLock;

/// Largest k for which `B_{2k}` is tabulated.
pub const MAX_BERNOULLI_INDEX: usize = 30;

/// B_2, B_4, ..., B_60.
#[rustfmt::skip]
const BERNOULLI_EVEN: [f64; MAX_BERNOULLI_INDEX] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -1.3711655205088332772e13,
    4.8833231897359316667e14,
    -1.9296579341940068149e16,
    8.4169304757368261500e17,
    -4.0338071854059455413e19,
    2.1150748638081991606e21,
    -1.2086626522296525935e23,
    7.5008667460769643669e24,
    -5.0387781014810689141e26,
    3.6528776484818123335e28,
    -2.8498769302450882226e30,
    2.3865427499683627645e32,
    -2.1399949257225333666e34,
];

/// `B_{2k}` for `1 <= k <= MAX_BERNOULLI_INDEX`.
pub fn bernoulli_even(k: usize) -> f64 {
    assert!((1..=MAX_BERNOULLI_INDEX).contains(&k), "B_2k index {k} out of range");
    BERNOULLI_EVEN[k - 1]
}

/// `B_{2k} / (2k)!`, the Euler–Maclaurin weight of the (2k-1)-th derivative.
pub fn em_coefficient(k: usize) -> f64 {
    static TABLE: OnceLock<[f64; MAX_BERNOULLI_INDEX]> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut out = [0.0; MAX_BERNOULLI_INDEX];
        let mut factorial = 1.0_f64;
        for (i, slot) in out.iter_mut().enumerate() {
            let two_k = 2 * (i + 1);
            factorial *= ((two_k - 1) * two_k) as f64;
            *slot = BERNOULLI_EVEN[i] / factorial;
        }
        out
    });
    assert!((1..=MAX_BERNOULLI_INDEX).contains(&k), "B_2k index {k} out of range");
    table[k - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}, with zeta(2k) summed directly.
    #[test]
    fn table_matches_zeta_even_values() {
        for k in 2..=MAX_BERNOULLI_INDEX {
            let zeta_2k: f64 = (1..20_000).rev().map(|n| (n as f64).powi(-(2 * k as i32))).sum();
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let expected = sign * 2.0 * zeta_2k / (2.0 * PI).powi(2 * k as i32);
            let got = em_coefficient(k);
            assert!(
                ((got - expected) / expected).abs() < 1e-13,
                "k={k}: {got:e} vs {expected:e}"
            );
        }
    }

    #[test]
    fn first_entries_exact() {
        assert_eq!(bernoulli_even(1), 1.0 / 6.0);
        assert_eq!(em_coefficient(1), 1.0 / 12.0);
        assert!((em_coefficient(2) + 1.0 / 720.0).abs() < 1e-18);
    }
}
