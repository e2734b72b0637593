//! Exhaustive maximum-likelihood detection for small systems.

use super::constellation::Constellation;
use super::{DetectionResult, OpCounter};
use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Largest hypothesis count searched.
pub const MAX_HYPOTHESES: usize = 1 << 20;

/// `argmin_x ‖y − Hx‖²` over all `|A|^K` symbol vectors. Hypotheses are
/// enumerated with user 0 as the fastest digit; ties keep the first found.
pub fn ml_detect(h: &CMatrix, y: &[C64], constellation: &Constellation) -> Result<DetectionResult> {
    let (m, k) = h.shape();
    if y.len() != m {
        return Err(Error::Dimension(format!("H has {m} rows, y has {}", y.len())));
    }
    let order = constellation.len();
    let total = (0..k).try_fold(1usize, |acc, _| acc.checked_mul(order).filter(|&t| t <= MAX_HYPOTHESES));
    let total = total.ok_or_else(|| Error::Dimension(format!("{order}^{k} hypotheses is too many")))?;
    let mut digits = vec![0usize; k];
    let mut best = digits.clone();
    let mut best_metric = f64::INFINITY;
    for idx in 0..total {
        let mut rem = idx;
        for d in digits.iter_mut() {
            *d = rem % order;
            rem /= order;
        }
        let metric: f64 = (0..m)
            .map(|b| {
                let hx: C64 = digits.iter().enumerate().map(|(u, &i)| h[(b, u)] * constellation.point(i)).sum();
                (y[b] - hx).norm_sqr()
            })
            .sum();
        if metric < best_metric {
            best_metric = metric;
            best.copy_from_slice(&digits);
        }
    }
    Ok(DetectionResult {
        hard_symbols: best,
        posteriors: None,
        iterations_run: 0,
        ops: OpCounter::new(),
    })
}
