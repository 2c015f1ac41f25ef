use std::f64::consts::{LN_2, PI, TAU};
use std::fs::File;
use std::io::BufReader;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use zetaphase::argtrack::{
    phase_at_zero, phase_at_zeros, principal_arg, track_zeta_arg, PathConfig, PhaseRecord,
};
use zetaphase::phaseplot::{render_phase, singular_cells, verify_winding, RegionSpec};
use zetaphase::stats::{
    moments_of, normalize_logmod, normalize_records, normalize_selberg,
    Normalization, SampleKind,
};
use zetaphase::zeros::{
    export_zeros, find_zeros, import_zeros, scan_min_gaps, ZeroFormat, ZeroRecord,
};
use zetaphase::zeta::{a_prime, reflect_zeta, zeta, EvalConfig};

fn fixture() -> Vec<ZeroRecord> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/zeros_100.txt");
    import_zeros(BufReader::new(File::open(path).unwrap()), ZeroFormat::Indexed, None).unwrap()
}

fn records_for(zeros: &[ZeroRecord]) -> Vec<PhaseRecord> {
    phase_at_zeros(zeros, &PathConfig::default(), &EvalConfig::default())
        .into_iter()
        .map(Result::unwrap)
        .collect()
}

#[test]
fn reflection_at_fixed_points_matches_direct_sum() {
    let wide = EvalConfig {
        em_terms_factor: 8.0,
        ..EvalConfig::default()
    };
    for (sigma, t) in [(-0.5, 50.0), (0.2, 14.0), (-1.0, 300.0), (-2.0, 480.0)] {
        let s = Complex64::new(sigma, t);
        let a = zeta(s, &wide).unwrap();
        let b = reflect_zeta(s, &EvalConfig::default()).unwrap();
        assert!((a - b).norm() <= 1e-8 * a.norm().max(1.0), "{s}");
    }
}

#[test]
fn first_hundred_zeros_have_clean_phases() {
    let records = records_for(&fixture());
    assert_eq!(records.len(), 100);
    for r in &records {
        assert!(!r.is_flagged(), "k = {} flagged {}", r.k, r.flags);
        let residue = r.continuous_arg - principal_arg(r.zeta_prime) - TAU * r.winding as f64;
        assert!(residue.abs() < 1e-9);
    }
}

#[test]
fn windings_stable_under_grid_refinement() {
    let zeros = &fixture()[..30];
    let ecfg = EvalConfig::default();
    let coarse = PathConfig::default();
    let fine = PathConfig {
        dx: 0.00125,
        ..coarse
    };
    for z in zeros {
        let a = phase_at_zero(z, &coarse, &ecfg).unwrap();
        let b = phase_at_zero(z, &fine, &ecfg).unwrap();
        assert_eq!(a.winding, b.winding, "k = {}", z.k);
        assert!((a.continuous_arg - b.continuous_arg).abs() < 1e-9);
    }
}

#[test]
fn lehmer_pair_phases_and_winding() {
    let ecfg = EvalConfig::default();
    let pair = find_zeros(7004.9, 7005.3, &ecfg).unwrap();
    assert_eq!(pair.len(), 2);
    assert!(pair[1].gamma - pair[0].gamma < 0.05);
    // Zeros below 7004.9 number 6708, so the pair is k = 6709, 6710.
    assert_eq!((pair[0].k, pair[1].k), (6709, 6710));
    for z in &pair {
        let r = phase_at_zero(z, &PathConfig::default(), &ecfg).unwrap();
        assert!(!r.is_flagged());
    }
    let w = verify_winding(Complex64::new(0.5, 7005.08), 0.2, 64, &ecfg).unwrap();
    assert_eq!(w, 2);
}

#[test]
fn finder_bracket_counts() {
    let ecfg = EvalConfig::default();
    let z = find_zeros(14.0, 26.0, &ecfg).unwrap();
    assert_eq!(z.iter().map(|r| r.k).collect::<Vec<_>>(), vec![1, 2, 3]);
    let reference = fixture();
    for (a, b) in z.iter().zip(&reference) {
        assert!((a.gamma - b.gamma).abs() < 1e-8);
    }
}

#[test]
fn export_import_round_trip_of_found_zeros() {
    let zeros = find_zeros(100.0, 300.0, &EvalConfig::default()).unwrap();
    let mut buf = Vec::new();
    export_zeros(&zeros, &mut buf).unwrap();
    let back = import_zeros(&buf[..], ZeroFormat::Indexed, None).unwrap();
    assert_eq!(back, zeros);
}

#[test]
fn logmod_identity_on_records() {
    let records = records_for(&fixture());
    for r in records.iter().filter(|r| r.gamma > TAU) {
        let hejhal = (TAU * r.zeta_prime / (r.gamma / TAU).ln()).norm();
        let via_density = r.zeta_prime.norm() / a_prime(r.gamma).unwrap();
        assert!((hejhal - via_density).abs() <= 1e-12 * hejhal.max(1.0));
        let s = normalize_logmod(r, &Normalization::figure(1e4)).unwrap();
        assert!((s.value * 1e4f64.ln().ln().sqrt() - via_density.ln()).abs() < 1e-12);
    }
}

#[test]
fn arg_centering_tracks_gamma_log_two() {
    // The vertical leg turns ζ′ like −log 2 · 2^{-s}, so the continuous
    // argument runs along π − γ log 2; the convention centering removes that.
    let records = records_for(&fixture());
    let samples = normalize_records(&records, SampleKind::ArgConvention, &Normalization::figure(100.0)).unwrap();
    let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let m = moments_of(&values).unwrap();
    assert!(m.mean.abs() < 1.0, "mean {}", m.mean);
    for r in &records {
        assert!((r.continuous_arg - (PI - r.gamma * LN_2)).abs() < 10.0, "k = {}", r.k);
    }
}

#[test]
fn selberg_spread_over_a_thousand_ordinates() {
    let mut rng = StdRng::seed_from_u64(17);
    let cfg = PathConfig::default();
    let ecfg = EvalConfig::default();
    let mut values = Vec::new();
    for i in 0..1000 {
        let t: f64 = rng.random_range(1000.0..2000.0);
        let arg = match track_zeta_arg(t, &cfg, &ecfg) {
            Ok(a) => a,
            Err(_) => continue,
        };
        values.push(normalize_selberg(i, arg, t).unwrap().value);
    }
    assert!(values.len() >= 990);
    let m = moments_of(&values).unwrap();
    assert!((m.stdev - 1.0).abs() <= 0.35, "stdev {}", m.stdev);
}

#[test]
fn seeded_normal_moments() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0008);
    let sample: Vec<f64> = (0..1_000_000).map(|_| rng.sample(StandardNormal)).collect();
    let m = moments_of(&sample).unwrap();
    let [m3, m4, m5, m6] = m.central_moments_3_to_6;
    assert!((m.stdev.powi(2) - 1.0).abs() <= 0.05);
    assert!((m4 / 3.0 - 1.0).abs() <= 0.05);
    assert!((m6 / 15.0 - 1.0).abs() <= 0.05);
    // Sampling standard deviations at n = 10^6: √6/1000 for m3, √720/1000
    // for m5.
    assert!(m3.abs() <= 0.02);
    assert!(m5.abs() <= 5.0 * 720f64.sqrt() / 1000.0, "m5 = {m5}");
}

#[test]
fn gap_scan_matches_sorting() {
    let zeros = find_zeros(10.0, 1000.0, &EvalConfig::default()).unwrap();
    let last = zeros.last().unwrap().k;
    let report = scan_min_gaps(&zeros, 1, last - 1, 5).unwrap();
    let mut gaps: Vec<f64> = zeros.windows(2).map(|w| w[1].gamma - w[0].gamma).collect();
    gaps.sort_by(f64::total_cmp);
    let listed: Vec<f64> = report.entries.iter().map(|e| e.delta).collect();
    assert_eq!(listed, gaps[..5]);
    assert_eq!(report.floor, Some(gaps[5]));
}

#[test]
fn left_half_plane_banding() {
    // Along σ = −4 the phase turns at rate about −log(t/2π) in t, so bands
    // repeat every 2π / log(t/2π), about 0.9 near t = 7000.
    let ecfg = EvalConfig::default();
    let steps = 2000;
    let (t0, t1) = (7000.0, 7010.0);
    let mut prev = reflect_zeta(Complex64::new(-4.0, t0), &ecfg).unwrap();
    let mut total = 0.0;
    for j in 1..=steps {
        let t = t0 + (t1 - t0) * j as f64 / steps as f64;
        let cur = reflect_zeta(Complex64::new(-4.0, t), &ecfg).unwrap();
        total += principal_arg(cur / prev);
        prev = cur;
    }
    let spacing = (t1 - t0) * TAU / total.abs();
    let predicted = TAU / (7005.0f64 / TAU).ln();
    assert!(total < 0.0);
    assert!((spacing / predicted - 1.0).abs() < 0.05, "{spacing} vs {predicted}");
}

#[test]
fn singular_cells_match_zero_count_in_window() {
    let region = RegionSpec {
        sigma_lo: -0.5,
        sigma_hi: 1.5,
        t_lo: 7000.0,
        t_hi: 7010.0,
        width_px: 40,
        height_px: 450,
    };
    let ecfg = EvalConfig::default();
    let img = render_phase(&region, &ecfg).unwrap();
    let cells = singular_cells(&img);
    let zeros = find_zeros(7000.0, 7010.0, &ecfg).unwrap();
    assert_eq!(cells.len(), zeros.len());
    assert!(cells.iter().all(|c| c.winding == 1));
}

#[test]
fn hue_is_continuous_away_from_singular_cells() {
    let region = RegionSpec {
        sigma_lo: 1.0,
        sigma_hi: 5.0,
        t_lo: 100.0,
        t_hi: 110.0,
        width_px: 80,
        height_px: 200,
    };
    let img = render_phase(&region, &EvalConfig::default()).unwrap();
    // ζ has no zeros for σ > 1, so any jump of half a turn in hue can only
    // come from crossing the branch cut at arg = π.
    let mut jumps = 0;
    for row in 0..region.height_px {
        for col in 1..region.width_px {
            let a = img.arg(col, row).unwrap();
            let b = img.arg(col - 1, row).unwrap();
            let dh = ((a - b) / TAU).abs();
            if dh >= 0.5 {
                jumps += 1;
                assert!(a.abs() > 2.5 && b.abs() > 2.5);
            }
        }
    }
    assert!(singular_cells(&img).is_empty());
    let _ = jumps;
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn plain_import_numbers_consecutively(gaps in prop::collection::vec(0.01f64..5.0, 1..50), first in 1u64..1_000_000) {
        let mut g = 10.0;
        let mut text = String::new();
        for d in &gaps {
            g += d;
            text.push_str(&format!("{}\n", zetaphase::fmt::g17(g)));
        }
        let recs = import_zeros(text.as_bytes(), ZeroFormat::Plain, Some(first)).unwrap();
        prop_assert_eq!(recs.len(), gaps.len());
        for (i, r) in recs.iter().enumerate() {
            prop_assert_eq!(r.k, first + i as u64);
        }
    }

    #[test]
    fn gap_scan_equals_brute_force(gaps in prop::collection::vec(0.001f64..2.0, 2..200), count in 0usize..10) {
        let mut g = 100.0;
        let zeros: Vec<ZeroRecord> = gaps
            .iter()
            .enumerate()
            .map(|(i, d)| {
                g += d;
                ZeroRecord { k: i as u64 + 1, gamma: g }
            })
            .collect();
        let last = zeros.len() as u64;
        let report = scan_min_gaps(&zeros, 1, last - 1, count).unwrap();
        let mut brute: Vec<(f64, u64)> = zeros.windows(2).map(|w| (w[1].gamma - w[0].gamma, w[0].k)).collect();
        brute.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let want = count.min(brute.len());
        prop_assert_eq!(report.entries.len(), want);
        for (e, b) in report.entries.iter().zip(&brute) {
            prop_assert_eq!((e.delta, e.k), *b);
        }
        prop_assert_eq!(report.floor, brute.get(count).map(|b| b.0));
    }
}
