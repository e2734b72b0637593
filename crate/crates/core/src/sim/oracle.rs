//! Small-instance reference suites shared by the self-test and the
//! acceptance tests.

use rayon::prelude::*;

use super::seeds::{drop_seed, stream, trial_seed, TAG_GEOMETRY};
use super::stats::wilson_half_width;
use super::trial::Realization;
use crate::channel::ChannelModel;
use crate::config::SystemConfig;
use crate::detect::mfb::qpsk_ser;
use crate::detect::{mfb_detect, ml_detect, Constellation, VmpDetector};
use crate::error::Result;
use crate::C64;

/// VMP and exhaustive ML on common realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub trials: u64,
    pub symbols: u64,
    pub ml_errors: u64,
    pub vmp_errors: u64,
}

impl SandwichReport {
    pub fn ser_ml(&self) -> f64 {
        self.ml_errors as f64 / self.symbols as f64
    }

    pub fn ser_vmp(&self) -> f64 {
        self.vmp_errors as f64 / self.symbols as f64
    }

    /// SER(ML) ≤ SER(VMP) ≤ `factor`·SER(ML).
    pub fn holds(&self, factor: f64) -> bool {
        self.ml_errors <= self.vmp_errors && self.ser_vmp() <= factor * self.ser_ml()
    }
}

/// Each trial draws its own drop (trials_per_drop is ignored) so the
/// comparison averages over geometries too.
pub fn ml_sandwich(config: &SystemConfig, snr_db: f64, trials: u64) -> Result<SandwichReport> {
    config.validate()?;
    let constellation = Constellation::new(config.constellation_order, config.symbol_power)?;
    let vmp = VmpDetector::from_config(config);
    let counts = (0..trials)
        .into_par_iter()
        .map(|t| {
            let model = ChannelModel::sample(config, &mut stream(drop_seed(config.rng_seed, t), TAG_GEOMETRY))?;
            let real = Realization::draw(&model, &constellation, trial_seed(config.rng_seed, t))?;
            let obs = real.observe(snr_db, config.symbol_power)?;
            let ml = ml_detect(&real.h, &obs.received, &constellation)?;
            let v = vmp.detect(&real.h, &obs.received, obs.noise_variance, &constellation)?;
            Ok((ml.symbol_errors(&real.truth), v.symbol_errors(&real.truth)))
        })
        .collect::<Result<Vec<_>>>()?;
    let k = config.num_users as u64;
    Ok(SandwichReport {
        trials,
        symbols: trials * k,
        ml_errors: counts.iter().map(|c| c.0).sum(),
        vmp_errors: counts.iter().map(|c| c.1).sum(),
    })
}

/// Genie MRC error count against the closed-form QPSK rate at each realized
/// post-combining SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct MfbReport {
    pub symbols: u64,
    pub errors: u64,
    /// Σ over symbols of the conditional closed-form error probability.
    pub expected_errors: f64,
}

impl MfbReport {
    pub fn empirical_ser(&self) -> f64 {
        self.errors as f64 / self.symbols as f64
    }

    pub fn analytic_ser(&self) -> f64 {
        self.expected_errors / self.symbols as f64
    }

    pub fn relative_gap(&self) -> f64 {
        (self.empirical_ser() - self.analytic_ser()).abs() / self.analytic_ser()
    }

    pub fn ci_half_width(&self) -> f64 {
        wilson_half_width(self.errors, self.symbols)
    }
}

/// Runs `trials` realizations (one user drop per `trials_per_drop`) and
/// checks every user's genie-MRC decision.
pub fn mfb_check(config: &SystemConfig, snr_db: f64, trials: u64) -> Result<MfbReport> {
    config.validate()?;
    let constellation = Constellation::new(4, config.symbol_power)?;
    let per_drop = config.trials_per_drop as u64;
    let drops = trials.div_ceil(per_drop);
    let parts = (0..drops)
        .into_par_iter()
        .map(|d| {
            let model = ChannelModel::sample(config, &mut stream(drop_seed(config.rng_seed, d), TAG_GEOMETRY))?;
            let mut errors = 0u64;
            let mut expected = 0.0;
            let mut symbols = 0u64;
            for t in d * per_drop..((d + 1) * per_drop).min(trials) {
                let real = Realization::draw(&model, &constellation, trial_seed(config.rng_seed, t))?;
                let obs = real.observe(snr_db, config.symbol_power)?;
                for u in 0..real.h.ncols() {
                    let col: Vec<C64> = real.h.column(u).iter().copied().collect();
                    let norm: f64 = col.iter().map(|z| z.norm_sqr()).sum();
                    let gamma = norm * config.symbol_power / obs.noise_variance;
                    expected += qpsk_ser(gamma);
                    let decided = mfb_detect(&col, real.symbols[u], &obs.noise, &constellation)?;
                    errors += (decided != real.truth[u]) as u64;
                    symbols += 1;
                }
            }
            Ok((symbols, errors, expected))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MfbReport {
        symbols: parts.iter().map(|p| p.0).sum(),
        errors: parts.iter().map(|p| p.1).sum(),
        expected_errors: parts.iter().map(|p| p.2).sum(),
    })
}
