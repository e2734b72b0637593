//! Plain CSV tables.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sim::complexity::LoadRow;
use crate::sim::{Detector, SweepResult};

pub const SWEEP_HEADER: &str = "snr_db,detector,ser,ci_half_width,trials,ops";
pub const COMPLEXITY_HEADER: &str = "m,k,ratio,c_zf,c_vmp,c_zf_exact";

/// Decimal text with six significant digits and no exponent.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (9.999999 -> 10.00000).
    let rounded: f64 = s.parse().unwrap_or(x);
    if decimals > 0 && rounded.abs() >= 10f64.powi(magnitude + 1) {
        return format!("{x:.prec$}", prec = decimals - 1);
    }
    s
}

/// Sweep rows sorted by SNR, then detector name.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut rows: Vec<(f64, Detector, usize)> = result
        .points
        .iter()
        .enumerate()
        .flat_map(|(i, p)| Detector::ALL.iter().map(move |&d| (p.snr_db, d, i)))
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.name().cmp(b.1.name())));
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for (snr, d, i) in rows {
        let p = &result.points[i];
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_sig(snr),
            d.name(),
            format_sig(p.ser_of(d)),
            format_sig(p.ci_of(d)),
            p.trials,
            p.ops_per_trial[d.index()]
        );
    }
    out
}

pub fn write_sweep_csv(result: &SweepResult, path: &Path) -> Result<()> {
    if result.points.is_empty() {
        return Err(Error::Dimension("sweep has no points".into()));
    }
    fs::write(path, sweep_csv(result))?;
    Ok(())
}

pub fn complexity_csv(rows: &[LoadRow]) -> String {
    let mut out = String::new();
    out.push_str(COMPLEXITY_HEADER);
    out.push('\n');
    for r in rows {
        let exact = r.count.c_zf_exact;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}/{}",
            r.m,
            r.k,
            r.ratio,
            r.count.c_zf,
            r.count.c_vmp,
            exact.numer(),
            exact.denom()
        );
    }
    out
}

pub fn write_complexity_csv(rows: &[LoadRow], path: &Path) -> Result<()> {
    fs::write(path, complexity_csv(rows))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SystemConfig;
    use crate::sim::complexity::load_table;
    use crate::sim::sweep::{finish, PointAccumulator};

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_sig(0.00123456789), "0.00123457");
        assert_eq!(format_sig(10.0), "10.0000");
        assert_eq!(format_sig(-2.5), "-2.50000");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(123456.7), "123457");
        assert_eq!(format_sig(9.999999), "10.0000");
        assert_eq!(format_sig(0.5), "0.500000");
    }

    #[test]
    fn one_row_per_point_and_detector() {
        let acc = vec![
            PointAccumulator {
                trials: 10,
                symbols: 40,
                errors: [1, 2, 3],
                ops: [10, 20, 30],
                zf_failures: 0,
            };
            2
        ];
        // Grid deliberately out of order: rows come back sorted.
        let r = finish(&SystemConfig::default(), &[4.0, 2.0], &acc);
        let text = sweep_csv(&r);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], SWEEP_HEADER);
        assert!(lines[1].starts_with("2.00000,mfb,0.0250000,"));
        assert!(lines[3].starts_with("2.00000,zf,0.0750000,"));
        assert!(lines[4].starts_with("4.00000,mfb,"));
        assert!(lines[1].ends_with(",10,1"));
    }

    #[test]
    fn complexity_rows() {
        let text = complexity_csv(&load_table(&[512], &[2], 4, 3));
        assert_eq!(text.lines().nth(1).unwrap(), "512,256,2,39277909,2757120,117833728/3");
    }
}
