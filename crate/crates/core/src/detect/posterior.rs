//! Discrete posterior of one user's symbol.

use super::constellation::Constellation;
use crate::C64;

/// Probability mass over the constellation with cached first two moments.
///
/// The log-pmf is the canonical representation; the pmf and the moments are
/// derived from it whenever it changes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPosterior {
    log_pmf: Vec<f64>,
    pmf: Vec<f64>,
    mean: C64,
    variance: f64,
}

/// `ln Σ exp(v)` with the maximum factored out.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Mean and variance of a pmf over `points`.
pub fn moments(pmf: &[f64], points: &[C64]) -> (C64, f64) {
    let mut mean = C64::new(0.0, 0.0);
    let mut second = 0.0;
    for (q, a) in pmf.iter().zip(points) {
        mean += a * *q;
        second += q * a.norm_sqr();
    }
    (mean, (second - mean.norm_sqr()).max(0.0))
}

impl SymbolPosterior {
    /// Normalizes unnormalized log-weights.
    pub fn from_log_weights(mut log_weights: Vec<f64>, constellation: &Constellation) -> Self {
        let z = log_sum_exp(&log_weights);
        if !z.is_finite() {
            // Every weight underflowed or is undefined: fall back to uniform.
            return Self::uniform(constellation);
        }
        log_weights.iter_mut().for_each(|v| *v -= z);
        let pmf: Vec<f64> = log_weights.iter().map(|v| v.exp()).collect();
        let (mean, variance) = moments(&pmf, constellation.points());
        Self {
            log_pmf: log_weights,
            pmf,
            mean,
            variance,
        }
    }

    /// From probabilities; renormalized so the result sums to one.
    pub fn from_pmf(pmf: &[f64], constellation: &Constellation) -> Self {
        Self::from_log_weights(pmf.iter().map(|p| p.ln()).collect(), constellation)
    }

    pub fn uniform(constellation: &Constellation) -> Self {
        let n = constellation.len();
        let pmf = vec![1.0 / n as f64; n];
        let (mean, variance) = moments(&pmf, constellation.points());
        Self {
            log_pmf: vec![-(n as f64).ln(); n],
            pmf,
            mean,
            variance,
        }
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn log_pmf(&self) -> &[f64] {
        &self.log_pmf
    }

    /// μ_x
    pub fn mean(&self) -> C64 {
        self.mean
    }

    /// σ²_x
    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Most probable index; ties go to the lowest.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.log_pmf.iter().enumerate() {
            if *v > self.log_pmf[best] {
                best = i;
            }
        }
        best
    }
}

/// `δ·q_new + (1 − δ)·q_old` in the probability domain.
pub fn damp(new: &SymbolPosterior, old: &SymbolPosterior, damping: f64, constellation: &Constellation) -> SymbolPosterior {
    if damping == 1.0 {
        return new.clone();
    }
    if damping == 0.0 {
        return old.clone();
    }
    let pmf: Vec<f64> = new
        .pmf
        .iter()
        .zip(&old.pmf)
        .map(|(a, b)| damping * a + (1.0 - damping) * b)
        .collect();
    SymbolPosterior::from_pmf(&pmf, constellation)
}
