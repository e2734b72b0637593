//! Variational message passing detector with MRC initialization.
//!
//! The posterior over user symbols and per-antenna noise precisions is
//! approximated by a fully factorized `Π q(x_k) Π q(λ_b)`. Each iteration
//! refreshes the precision means from the current symbol moments, then every
//! symbol pmf from the precision means, then blends the new pmfs with the
//! previous ones.
//!
//! Multiplications are tallied per iteration as `M(3 + 2K)` for the
//! precision step, `MK|A|` for the symbol step and `3MK` once for the
//! initialization.

use super::constellation::Constellation;
use super::posterior::{damp, SymbolPosterior};
use super::{DetectionResult, OpCounter};
use crate::config::{Schedule, SystemConfig};
use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Lower bound on the per-antenna residual energy Z_b.
pub const RESIDUAL_FLOOR: f64 = 1e-12;
/// Lower bound on the MRC initialization variance.
pub const MRC_VARIANCE_FLOOR: f64 = 1e-12;

pub const TERM_PRECISION: &str = "precision";
pub const TERM_POSTERIOR: &str = "posterior";
pub const TERM_INIT: &str = "mrc_init";

/// Per-antenna noise-plus-interference precision.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionState {
    /// `y_b − Σ_k H_bk μ_k` for the snapshot the state was computed from.
    pub residual: Vec<C64>,
    /// Z_b
    pub residual_energy: Vec<f64>,
    /// E[λ_b] = (α0 + 1) / (z0 + Z_b)
    pub precision_mean: Vec<f64>,
    pub gamma_shape: f64,
    pub gamma_rate: f64,
}

/// Gaussian MRC estimate of each user projected onto the constellation.
pub fn mrc_initialize(
    h: &CMatrix,
    y: &[C64],
    noise_variance: f64,
    constellation: &Constellation,
    ops: &mut OpCounter,
) -> Result<Vec<SymbolPosterior>> {
    check_dims(h, y)?;
    let (m, k) = h.shape();
    let norms: Vec<f64> = h.column_iter().map(|c| c.norm_squared()).collect();
    if let Some(user) = norms.iter().position(|&n| n == 0.0) {
        return Err(Error::ZeroChannel(user));
    }
    let gram = h.adjoint() * h;
    let power = constellation.power();
    let posteriors = (0..k)
        .map(|u| {
            let col = h.column(u);
            let matched: C64 = col.iter().zip(y).map(|(a, b)| a.conj() * b).sum();
            let estimate = matched / norms[u];
            let interference: f64 = (0..k)
                .filter(|&j| j != u)
                .map(|j| gram[(u, j)].norm_sqr())
                .sum();
            let variance = ((interference + norms[u] * noise_variance) / (power * norms[u] * norms[u]))
                .max(MRC_VARIANCE_FLOOR);
            let logw = constellation
                .points()
                .iter()
                .map(|a| -(a - estimate).norm_sqr() / variance)
                .collect();
            SymbolPosterior::from_log_weights(logw, constellation)
        })
        .collect();
    ops.add(TERM_INIT, 3 * (m * k) as u64);
    Ok(posteriors)
}

/// Residual energy and precision mean at every antenna for the current
/// symbol moments.
pub fn update_precisions(
    h: &CMatrix,
    y: &[C64],
    posteriors: &[SymbolPosterior],
    gamma_shape: f64,
    gamma_rate: f64,
    ops: &mut OpCounter,
) -> Result<PrecisionState> {
    check_dims(h, y)?;
    let (m, k) = h.shape();
    if posteriors.len() != k {
        return Err(Error::Dimension(format!("{} posteriors for {k} users", posteriors.len())));
    }
    let mut residual = y.to_vec();
    let mut spread = vec![0.0; m];
    for (u, q) in posteriors.iter().enumerate() {
        let (mu, var) = (q.mean(), q.variance());
        for ((r, s), hb) in residual.iter_mut().zip(spread.iter_mut()).zip(h.column(u).iter()) {
            *r -= hb * mu;
            *s += var * hb.norm_sqr();
        }
    }
    let residual_energy: Vec<f64> = residual
        .iter()
        .zip(&spread)
        .map(|(r, s)| (r.norm_sqr() + s).max(RESIDUAL_FLOOR))
        .collect();
    let precision_mean = residual_energy
        .iter()
        .map(|z| (gamma_shape + 1.0) / (gamma_rate + z))
        .collect();
    ops.add(TERM_PRECISION, (m * (3 + 2 * k)) as u64);
    Ok(PrecisionState {
        residual,
        residual_energy,
        precision_mean,
        gamma_shape,
        gamma_rate,
    })
}

// Log-weights of user `u` given the residual with every user's mean removed.
//
// −Σ_b λ_b |H_bu a − e_b|², e_b = r_b + H_bu μ_u, expands (dropping terms
// free of a) to −(A|a|² − 2 Re(a* B)) with A = Σ λ_b |H_bu|² and
// B = Σ λ_b H*_bu r_b + A μ_u.
fn user_log_weights(
    h: &CMatrix,
    u: usize,
    residual: &[C64],
    precision: &[f64],
    mean: C64,
    constellation: &Constellation,
    log_prior: &[f64],
) -> Vec<f64> {
    let mut a = 0.0;
    let mut b = C64::new(0.0, 0.0);
    for ((hb, r), lam) in h.column(u).iter().zip(residual).zip(precision) {
        a += lam * hb.norm_sqr();
        b += hb.conj() * r * *lam;
    }
    b += mean * a;
    constellation
        .points()
        .iter()
        .zip(log_prior)
        .map(|(p, lp)| -(a * p.norm_sqr() - 2.0 * (p.conj() * b).re) + lp)
        .collect()
}

/// New (undamped) symbol posteriors from the precision state, all users
/// computed against the same snapshot.
pub fn update_symbol_posteriors(
    h: &CMatrix,
    precision: &PrecisionState,
    posteriors: &[SymbolPosterior],
    constellation: &Constellation,
    log_prior: &[f64],
    ops: &mut OpCounter,
) -> Result<Vec<SymbolPosterior>> {
    let (m, k) = h.shape();
    if posteriors.len() != k || precision.residual.len() != m || log_prior.len() != constellation.len() {
        return Err(Error::Dimension("posterior update inputs disagree in size".into()));
    }
    let out = (0..k)
        .map(|u| {
            let logw = user_log_weights(
                h,
                u,
                &precision.residual,
                &precision.precision_mean,
                posteriors[u].mean(),
                constellation,
                log_prior,
            );
            SymbolPosterior::from_log_weights(logw, constellation)
        })
        .collect();
    ops.add(TERM_POSTERIOR, (m * k * constellation.len()) as u64);
    Ok(out)
}

fn check_dims(h: &CMatrix, y: &[C64]) -> Result<()> {
    if h.nrows() != y.len() {
        return Err(Error::Dimension(format!("H has {} rows, y has {}", h.nrows(), y.len())));
    }
    Ok(())
}

/// VMP detector settings.
#[derive(Debug, Clone, PartialEq)]
pub struct VmpDetector {
    pub iterations: usize,
    pub damping: f64,
    pub gamma_shape: f64,
    pub gamma_rate: f64,
    pub schedule: Schedule,
}

impl Default for VmpDetector {
    fn default() -> Self {
        Self {
            iterations: 3,
            damping: 0.45,
            gamma_shape: 0.0,
            gamma_rate: 0.0,
            schedule: Schedule::Jacobi,
        }
    }
}

impl VmpDetector {
    pub fn from_config(config: &SystemConfig) -> Self {
        Self {
            iterations: config.vmp_iterations,
            damping: config.damping,
            gamma_shape: config.gamma_shape,
            gamma_rate: config.gamma_rate,
            schedule: config.schedule,
        }
    }

    /// Runs the detector with a uniform symbol prior.
    pub fn detect(&self, h: &CMatrix, y: &[C64], noise_variance: f64, constellation: &Constellation) -> Result<DetectionResult> {
        let log_prior = vec![-(constellation.len() as f64).ln(); constellation.len()];
        self.detect_with_prior(h, y, noise_variance, constellation, &log_prior)
    }

    pub fn detect_with_prior(
        &self,
        h: &CMatrix,
        y: &[C64],
        noise_variance: f64,
        constellation: &Constellation,
        log_prior: &[f64],
    ) -> Result<DetectionResult> {
        if !(0.0..=1.0).contains(&self.damping) {
            return Err(Error::config("damping", "δ_vmp must lie in [0, 1]"));
        }
        let mut ops = OpCounter::new();
        let mut q = mrc_initialize(h, y, noise_variance, constellation, &mut ops)?;
        for _ in 0..self.iterations {
            let precision = update_precisions(h, y, &q, self.gamma_shape, self.gamma_rate, &mut ops)?;
            q = match self.schedule {
                Schedule::Jacobi => {
                    let fresh = update_symbol_posteriors(h, &precision, &q, constellation, log_prior, &mut ops)?;
                    fresh
                        .iter()
                        .zip(&q)
                        .map(|(new, old)| damp(new, old, self.damping, constellation))
                        .collect()
                }
                Schedule::GaussSeidel => self.sweep_sequential(h, precision, q, constellation, log_prior, &mut ops),
            };
        }
        Ok(DetectionResult {
            hard_symbols: q.iter().map(SymbolPosterior::argmax).collect(),
            posteriors: Some(q),
            iterations_run: self.iterations,
            ops,
        })
    }

    // Users in index order, each seeing the refreshed means of earlier users.
    fn sweep_sequential(
        &self,
        h: &CMatrix,
        precision: PrecisionState,
        mut q: Vec<SymbolPosterior>,
        constellation: &Constellation,
        log_prior: &[f64],
        ops: &mut OpCounter,
    ) -> Vec<SymbolPosterior> {
        let (m, k) = h.shape();
        let mut residual = precision.residual;
        for u in 0..k {
            let old_mean = q[u].mean();
            let logw = user_log_weights(h, u, &residual, &precision.precision_mean, old_mean, constellation, log_prior);
            let fresh = SymbolPosterior::from_log_weights(logw, constellation);
            q[u] = damp(&fresh, &q[u], self.damping, constellation);
            let shift = q[u].mean() - old_mean;
            for (r, hb) in residual.iter_mut().zip(h.column(u).iter()) {
                *r -= hb * shift;
            }
        }
        ops.add(TERM_POSTERIOR, (m * k * constellation.len()) as u64);
        q
    }
}
