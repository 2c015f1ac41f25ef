//! CSV persistence of phase records and of arg ζ samples on the critical line.

use anyhow::{Context, Result};
use num_complex::Complex64;
use serde::Deserialize;
use std::f64::consts::{LN_2, PI};
use std::io::{Read, Write};

use zetaphase::argtrack::{PhaseFlags, PhaseRecord};
use zetaphase::fmt::g17;

pub const PHASE_HEADER: [&str; 9] = [
    "k",
    "gamma",
    "re_zp",
    "im_zp",
    "winding",
    "continuous_arg",
    "arg_paper_raw",
    "arg_convention_raw",
    "flags",
];

pub const ZETA_ARG_HEADER: [&str; 3] = ["k", "t", "arg_zeta"];

/// Writes phase records; `agrees` adds a `winding_agrees` column.
pub fn write_phase_csv<W: Write>(
    out: W,
    records: &[PhaseRecord],
    agrees: Option<&[bool]>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = PHASE_HEADER.to_vec();
    if agrees.is_some() {
        header.push("winding_agrees");
    }
    w.write_record(&header)?;
    for (i, r) in records.iter().enumerate() {
        let shift = PI - r.gamma * LN_2;
        let mut row = vec![
            r.k.to_string(),
            g17(r.gamma),
            g17(r.zeta_prime.re),
            g17(r.zeta_prime.im),
            r.winding.to_string(),
            g17(r.continuous_arg),
            g17(r.continuous_arg + shift),
            g17(r.continuous_arg - shift),
            r.flags.to_string(),
        ];
        if let Some(a) = agrees {
            row.push(a[i].to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct PhaseRow {
    k: u64,
    gamma: f64,
    re_zp: f64,
    im_zp: f64,
    winding: i64,
    continuous_arg: f64,
    flags: String,
}

pub fn read_phase_csv<R: Read>(input: R) -> Result<Vec<PhaseRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut records = Vec::new();
    for (i, row) in rdr.deserialize::<PhaseRow>().enumerate() {
        let row = row.with_context(|| format!("records row {}", i + 1))?;
        let flags: PhaseFlags = row.flags.parse()?;
        records.push(PhaseRecord {
            k: row.k,
            gamma: row.gamma,
            zeta_prime: Complex64::new(row.re_zp, row.im_zp),
            winding: row.winding,
            continuous_arg: row.continuous_arg,
            // Not persisted.
            vertical_arg: f64::NAN,
            flags,
        });
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct ZetaArgRow {
    pub k: u64,
    pub t: f64,
    pub arg_zeta: f64,
}

pub fn write_zeta_arg_csv<W: Write>(out: W, rows: &[ZetaArgRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ZETA_ARG_HEADER)?;
    for r in rows {
        w.write_record([r.k.to_string(), g17(r.t), g17(r.arg_zeta)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_zeta_arg_csv<R: Read>(input: R) -> Result<Vec<ZetaArgRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    rdr.deserialize()
        .enumerate()
        .map(|(i, row)| row.with_context(|| format!("zeta-arg row {}", i + 1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_round_trip_is_exact() {
        let records = vec![
            PhaseRecord {
                k: 1,
                gamma: 14.134725141734694,
                zeta_prime: Complex64::new(0.7832965118670859, 0.12469982070631928),
                winding: -1,
                continuous_arg: -6.283185307179586 + 0.1,
                vertical_arg: 0.1,
                flags: PhaseFlags::empty(),
            },
            PhaseRecord {
                k: 2,
                gamma: 21.022039638771555,
                zeta_prime: Complex64::new(-1e-300, 1.0 / 3.0),
                winding: 0,
                continuous_arg: 1.0 / 7.0,
                vertical_arg: 0.2,
                flags: PhaseFlags::REFINED | PhaseFlags::NEAR_ZETA_PRIME_ZERO,
            },
        ];
        let mut buf = Vec::new();
        write_phase_csv(&mut buf, &records, None).unwrap();
        let back = read_phase_csv(&buf[..]).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in records.iter().zip(&back) {
            assert_eq!(a.k, b.k);
            assert_eq!(a.gamma.to_bits(), b.gamma.to_bits());
            assert_eq!(a.zeta_prime.re.to_bits(), b.zeta_prime.re.to_bits());
            assert_eq!(a.zeta_prime.im.to_bits(), b.zeta_prime.im.to_bits());
            assert_eq!(a.continuous_arg.to_bits(), b.continuous_arg.to_bits());
            assert_eq!(a.winding, b.winding);
            assert_eq!(a.flags, b.flags);
        }
    }

    #[test]
    fn extra_column_is_ignored_on_read() {
        let mut buf = Vec::new();
        let r = PhaseRecord {
            k: 3,
            gamma: 25.01,
            zeta_prime: Complex64::new(1.0, 0.0),
            winding: 2,
            continuous_arg: 12.0,
            vertical_arg: 0.0,
            flags: PhaseFlags::SLIP_SUSPECT,
        };
        write_phase_csv(&mut buf, &[r], Some(&[false])).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("k,gamma,re_zp,im_zp,winding,continuous_arg,arg_paper_raw,arg_convention_raw,flags,winding_agrees\n"));
        let back = read_phase_csv(&buf[..]).unwrap();
        assert!(back[0].is_flagged());
    }

    #[test]
    fn zeta_arg_round_trip() {
        let rows = vec![ZetaArgRow { k: 1, t: 1000.5, arg_zeta: -0.1 }];
        let mut buf = Vec::new();
        write_zeta_arg_csv(&mut buf, &rows).unwrap();
        assert_eq!(read_zeta_arg_csv(&buf[..]).unwrap(), rows);
    }
}
