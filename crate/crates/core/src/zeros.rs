//! Zeros of ζ on the critical line: a sign-change finder for desk-scale
//! heights, text-table ingestion, and the minimal-gap scan used to choose
//! the horizontal step.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::io::{BufRead, Write};

use crate::argtrack::{zero_count, PathConfig};
use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::zeta::{hardy_z, zeta, EvalConfig};

/// Upper end of the range the finder accepts.
pub const MAX_FINDER_HEIGHT: f64 = 1e5;

/// Width of the bracket at which bisection stops.
pub const BISECTION_WIDTH: f64 = 1e-9;

/// Ordinate of the first zero, used to anchor indexing.
const FIRST_ZERO_LOWER: f64 = 14.0;

const DIP_SEARCH_ITERATIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    /// 1-based index of the zero.
    pub k: u64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroFormat {
    /// One ordinate per line.
    Plain,
    /// `k gamma` per line.
    Indexed,
}

/// Mean spacing of zeros at height t, 2π / log(t/2π), for t well above 2π.
pub fn mean_gap(t: f64) -> f64 {
    2.0 * PI / (t / (2.0 * PI)).ln().max(1.0)
}

/// Zeros with t_lo < γ < t_hi, located from sign changes of Hardy's Z.
///
/// The scan grid is a quarter of the mean gap at t_hi. Pairs of zeros that
/// fall between two grid points show up as a dip of |Z| without a sign
/// change and are split by a golden-section search. The total is then
/// compared with the counting function N(t).
pub fn find_zeros(t_lo: f64, t_hi: f64, ecfg: &EvalConfig) -> Result<Vec<ZeroRecord>> {
    if !(t_lo > 2.0 && t_lo < t_hi && t_hi <= MAX_FINDER_HEIGHT) {
        return Err(Error::Domain(format!(
            "finder needs 2 < t_lo < t_hi <= {MAX_FINDER_HEIGHT}, got [{t_lo}, {t_hi}]"
        )));
    }
    ecfg.validate()?;
    let step_max = mean_gap(t_hi) / 4.0;
    let steps = ((t_hi - t_lo) / step_max).ceil() as usize;
    let h = (t_hi - t_lo) / steps as f64;
    let grid: Vec<f64> = (0..=steps).map(|i| t_lo + i as f64 * h).collect();
    let values = grid
        .par_iter()
        .map(|&t| hardy_z(t, ecfg))
        .collect::<Result<Vec<f64>>>()?;

    let mut brackets = Vec::new();
    for i in 0..steps {
        if sign_differs(values[i], values[i + 1]) {
            brackets.push((grid[i], grid[i + 1], values[i]));
        }
    }
    let dips: Vec<usize> = (1..steps)
        .filter(|&i| {
            !sign_differs(values[i - 1], values[i])
                && !sign_differs(values[i], values[i + 1])
                && values[i].abs() < values[i - 1].abs()
                && values[i].abs() <= values[i + 1].abs()
        })
        .collect();
    let split: Vec<Vec<(f64, f64, f64)>> = dips
        .par_iter()
        .map(|&i| split_dip(grid[i - 1], grid[i + 1], values[i], ecfg))
        .collect::<Result<_>>()?;
    brackets.extend(split.into_iter().flatten());
    brackets.sort_by(|a, b| a.0.total_cmp(&b.0));

    let gammas = brackets
        .par_iter()
        .map(|&(a, b, za)| bisect(a, b, za, ecfg))
        .collect::<Result<Vec<f64>>>()?;

    let path = PathConfig::default();
    let below = if t_lo < FIRST_ZERO_LOWER {
        0
    } else {
        zero_count(t_lo, &path, ecfg)?.round() as i64
    };
    let expected = zero_count(t_hi, &path, ecfg)?.round() as i64 - below;
    if gammas.len() as i64 != expected {
        return Err(Error::MissedZeroSuspected {
            t_lo,
            t_hi,
            found: gammas.len(),
            expected,
        });
    }
    let first = (below + 1) as u64;
    Ok(gammas
        .into_iter()
        .enumerate()
        .map(|(i, gamma)| ZeroRecord {
            k: first + i as u64,
            gamma,
        })
        .collect())
}

fn sign_differs(a: f64, b: f64) -> bool {
    (a < 0.0) != (b < 0.0)
}

/// Look for a sign change of Z inside [a, b] where the grid only shows a dip.
fn split_dip(a: f64, b: f64, z_mid: f64, ecfg: &EvalConfig) -> Result<Vec<(f64, f64, f64)>> {
    let sign = z_mid.signum();
    let g = |t: f64| hardy_z(t, ecfg).map(|z| z * sign);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = g(x1)?;
    let mut f2 = g(x2)?;
    for _ in 0..DIP_SEARCH_ITERATIONS {
        if f1 < 0.0 || f2 < 0.0 {
            let (m, fm) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
            return Ok(vec![(a, m, z_mid), (m, b, fm * sign)]);
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = g(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = g(x2)?;
        }
        if hi - lo < BISECTION_WIDTH {
            break;
        }
    }
    Ok(Vec::new())
}

fn bisect(mut a: f64, mut b: f64, mut za: f64, ecfg: &EvalConfig) -> Result<f64> {
    while b - a > BISECTION_WIDTH {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let zm = hardy_z(m, ecfg)?;
        if sign_differs(za, zm) {
            b = m;
        } else {
            a = m;
            za = zm;
        }
    }
    Ok(0.5 * (a + b))
}

/// |ζ(1/2 + iγ)| for a candidate ordinate.
pub fn residual(gamma: f64, ecfg: &EvalConfig) -> Result<f64> {
    Ok(zeta(Complex64::new(0.5, gamma), ecfg)?.norm())
}

/// Parse a zero table. Blank lines and lines starting with `#` are skipped;
/// CRLF line endings are accepted. The plain format needs the index of its
/// first ordinate.
pub fn import_zeros<R: BufRead>(
    source: R,
    format: ZeroFormat,
    first_index: Option<u64>,
) -> Result<Vec<ZeroRecord>> {
    let mut next_k = match format {
        ZeroFormat::Plain => Some(first_index.ok_or_else(|| {
            Error::InvalidConfig("plain zero tables need an explicit first index".into())
        })?),
        ZeroFormat::Indexed => None,
    };
    let mut out: Vec<ZeroRecord> = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut fields = text.split_whitespace();
        let parse_err = |message: String| Error::Parse { line: line_no, message };
        let (k, gamma_text) = match format {
            ZeroFormat::Plain => {
                let k = next_k.expect("plain index");
                next_k = Some(k + 1);
                (k, fields.next().expect("non-empty line"))
            }
            ZeroFormat::Indexed => {
                let k_text = fields.next().expect("non-empty line");
                let k = k_text
                    .parse::<u64>()
                    .map_err(|e| parse_err(format!("bad index {k_text:?}: {e}")))?;
                let g = fields
                    .next()
                    .ok_or_else(|| parse_err("missing ordinate".into()))?;
                (k, g)
            }
        };
        if let Some(extra) = fields.next() {
            return Err(parse_err(format!("unexpected field {extra:?}")));
        }
        let gamma = gamma_text
            .parse::<f64>()
            .map_err(|e| parse_err(format!("bad ordinate {gamma_text:?}: {e}")))?;
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(parse_err(format!("ordinate must be positive, got {gamma_text}")));
        }
        if let Some(prev) = out.last() {
            if gamma <= prev.gamma {
                return Err(Error::Monotonicity {
                    line: line_no,
                    prev: prev.gamma,
                    next: gamma,
                });
            }
            if k <= prev.k {
                return Err(parse_err(format!("index {k} does not follow {}", prev.k)));
            }
        }
        out.push(ZeroRecord { k, gamma });
    }
    Ok(out)
}

/// Write records in the indexed format, one `k gamma` pair per line.
pub fn export_zeros<W: Write>(records: &[ZeroRecord], mut out: W) -> std::io::Result<()> {
    for r in records {
        writeln!(out, "{} {}", r.k, g17(r.gamma))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapEntry {
    pub k: u64,
    /// γ_{k+1} − γ_k
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub k_lo: u64,
    pub k_hi: u64,
    /// The smallest gaps, ascending.
    pub entries: Vec<GapEntry>,
    /// Smallest gap not listed in `entries`: every unlisted gap is at least
    /// this large. `None` when every gap in range was listed.
    pub floor: Option<f64>,
}

// Max-heap order on (delta, k) so the heap top is the largest kept gap.
#[derive(PartialEq)]
struct HeapGap(GapEntry);

impl Eq for HeapGap {}

impl PartialOrd for HeapGap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapGap {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .delta
            .total_cmp(&other.0.delta)
            .then(self.0.k.cmp(&other.0.k))
    }
}

/// The `count` smallest consecutive gaps γ_{k+1} − γ_k for k_lo ≤ k ≤ k_hi.
///
/// Ties are broken by index. Records must be sorted by index and contain
/// every index from k_lo to k_hi + 1.
pub fn scan_min_gaps(records: &[ZeroRecord], k_lo: u64, k_hi: u64, count: usize) -> Result<GapReport> {
    let not_covered = Error::RangeNotCovered { k_lo, k_hi };
    if k_hi < k_lo {
        return Err(not_covered);
    }
    let start = records
        .binary_search_by(|r| r.k.cmp(&k_lo))
        .map_err(|_| not_covered.clone())?;
    let span = (k_hi - k_lo + 2) as usize;
    let slice = records.get(start..start + span).ok_or_else(|| not_covered.clone())?;
    if slice.last().map(|r| r.k) != Some(k_hi + 1) {
        return Err(not_covered);
    }

    let keep = count + 1;
    let mut heap = BinaryHeap::with_capacity(keep + 1);
    for w in slice.windows(2) {
        let entry = HeapGap(GapEntry {
            k: w[0].k,
            delta: w[1].gamma - w[0].gamma,
        });
        if heap.len() < keep {
            heap.push(entry);
        } else if entry < *heap.peek().expect("non-empty heap") {
            heap.pop();
            heap.push(entry);
        }
    }
    let mut sorted: Vec<GapEntry> = heap.into_sorted_vec().into_iter().map(|h| h.0).collect();
    let floor = if sorted.len() > count {
        sorted.pop().map(|e| e.delta)
    } else {
        None
    };
    Ok(GapReport {
        k_lo,
        k_hi,
        entries: sorted,
        floor,
    })
}

/// Horizontal step justified by a gap report: `safety` times the gap floor
/// (or the largest listed gap when the report lists every gap).
pub fn recommend_dx(report: &GapReport, safety: f64) -> Result<f64> {
    if !(safety > 0.0 && safety <= 1.0) {
        return Err(Error::Domain(format!("safety must be in (0, 1], got {safety}")));
    }
    let floor = report
        .floor
        .or_else(|| report.entries.last().map(|e| e.delta))
        .ok_or_else(|| Error::Domain("empty gap report".into()))?;
    Ok(safety * floor)
}
