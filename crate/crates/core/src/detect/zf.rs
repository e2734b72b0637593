//! Zero-forcing detection through a thin QR factorization.

use nalgebra::DVector;

use super::constellation::Constellation;
use super::{DetectionResult, OpCounter};
use crate::error::{Error, Result};
use crate::{CMatrix, C64};

pub const TERM_GRAM: &str = "gram";
pub const TERM_MATCHED: &str = "matched_filter";
pub const TERM_SOLVE: &str = "solve";

/// `K³/3` rounded to the nearest integer.
pub fn cubic_third_rounded(k: u64) -> u64 {
    (k * k * k + 1) / 3
}

/// Soft ZF estimate `(HᴴH)⁻¹Hᴴy`, solved as `R⁻¹Qᴴy` with `H = QR`.
pub fn zf_estimate(h: &CMatrix, y: &[C64]) -> Result<Vec<C64>> {
    let (m, k) = h.shape();
    if y.len() != m {
        return Err(Error::Dimension(format!("H has {m} rows, y has {}", y.len())));
    }
    if k > m {
        return Err(Error::RankDeficient {
            column: m,
            pivot: 0.0,
            tolerance: 0.0,
        });
    }
    let qr = h.clone().qr();
    let r = qr.r();
    let pivots: Vec<f64> = (0..k).map(|i| r[(i, i)].norm()).collect();
    let largest = pivots.iter().copied().fold(0.0, f64::max);
    let tolerance = m.max(k) as f64 * f64::EPSILON * largest;
    if let Some(column) = pivots.iter().position(|&p| !(p > tolerance)) {
        return Err(Error::RankDeficient {
            column,
            pivot: pivots[column],
            tolerance,
        });
    }
    let qhy = qr.q().adjoint() * DVector::from_column_slice(y);
    let x = r
        .solve_upper_triangular(&qhy)
        .ok_or(Error::RankDeficient {
            column: 0,
            pivot: 0.0,
            tolerance,
        })?;
    Ok(x.iter().copied().collect())
}

/// ZF followed by per-user nearest-point slicing.
///
/// Multiplications are tallied by the textbook count `K³/3 + MK² + MK`,
/// independent of the factorization actually used.
pub fn zf_detect(h: &CMatrix, y: &[C64], constellation: &Constellation) -> Result<DetectionResult> {
    let x = zf_estimate(h, y)?;
    let (m, k) = (h.nrows() as u64, h.ncols() as u64);
    let mut ops = OpCounter::new();
    ops.add(TERM_SOLVE, cubic_third_rounded(k));
    ops.add(TERM_GRAM, m * k * k);
    ops.add(TERM_MATCHED, m * k);
    Ok(DetectionResult {
        hard_symbols: x.iter().map(|z| constellation.slice(*z)).collect(),
        posteriors: None,
        iterations_run: 0,
        ops,
    })
}
