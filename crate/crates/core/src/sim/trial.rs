//! One Monte Carlo trial: a channel realization seen by every detector.

use rand::Rng;

use super::seeds::{drop_seed, stream, TAG_FADING, TAG_GEOMETRY, TAG_NOISE, TAG_SYMBOLS};
use crate::channel::{complex_normal, noise_variance_for_snr, ChannelModel, Observation};
use crate::config::SystemConfig;
use crate::detect::{mfb_detect_all, zf_detect, Constellation, VmpDetector};
use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Detectors compared in every trial, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Detector {
    Mfb,
    Vmp,
    Zf,
}

impl Detector {
    pub const ALL: [Detector; 3] = [Detector::Mfb, Detector::Vmp, Detector::Zf];

    pub fn name(self) -> &'static str {
        match self {
            Detector::Mfb => "mfb",
            Detector::Vmp => "vmp",
            Detector::Zf => "zf",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Per-detector tallies, indexed by [`Detector::index`].
pub type PerDetector<T> = [T; 3];

/// Outcome of one trial at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub seed: u64,
    pub snr_db: f64,
    pub errors: PerDetector<u64>,
    /// Symbols decided per detector (= K).
    pub symbols_tested: u64,
    pub ops: PerDetector<u64>,
    /// ZF could not invert the channel; its errors were set to K.
    pub zf_failed: bool,
}

/// SNR-independent draw: channel, symbols and unit-variance noise.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub seed: u64,
    pub h: CMatrix,
    pub truth: Vec<usize>,
    pub symbols: Vec<C64>,
    pub unit_noise: Vec<C64>,
}

impl Realization {
    /// Draws fast fading, symbols and noise from the trial seed's streams.
    pub fn draw(model: &ChannelModel, constellation: &Constellation, seed: u64) -> Result<Self> {
        let h = model.realize(&mut stream(seed, TAG_FADING))?.h;
        let mut sym_rng = stream(seed, TAG_SYMBOLS);
        let truth: Vec<usize> = (0..h.ncols())
            .map(|_| sym_rng.random_range(0..constellation.len()))
            .collect();
        let symbols = truth.iter().map(|&i| constellation.point(i)).collect();
        let mut noise_rng = stream(seed, TAG_NOISE);
        let unit_noise = (0..h.nrows()).map(|_| complex_normal(&mut noise_rng)).collect();
        Ok(Self {
            seed,
            h,
            truth,
            symbols,
            unit_noise,
        })
    }

    /// Observation at the given SNR; noise is the unit draw scaled by σ.
    pub fn observe(&self, snr_db: f64, symbol_power: f64) -> Result<Observation> {
        let sigma2 = noise_variance_for_snr(&self.h, symbol_power, snr_db);
        let sigma = sigma2.sqrt();
        let noise = self.unit_noise.iter().map(|n| n * sigma).collect();
        Observation::from_noise(&self.h, &self.symbols, noise, sigma2)
    }
}

/// Runs MFB, VMP and ZF on one realization at one SNR.
pub fn evaluate(
    config: &SystemConfig,
    constellation: &Constellation,
    realization: &Realization,
    snr_db: f64,
) -> Result<TrialRecord> {
    let obs = realization.observe(snr_db, config.symbol_power)?;
    let h = &realization.h;
    let k = h.ncols() as u64;
    let truth = &realization.truth;

    let mfb = mfb_detect_all(h, &obs, constellation)?;
    let vmp = VmpDetector::from_config(config).detect(h, &obs.received, obs.noise_variance, constellation)?;
    let (zf_errors, zf_ops, zf_failed) = match zf_detect(h, &obs.received, constellation) {
        Ok(r) => (r.symbol_errors(truth), r.op_count(), false),
        Err(Error::RankDeficient { .. }) => (k, 0, true),
        Err(e) => return Err(e),
    };
    Ok(TrialRecord {
        seed: realization.seed,
        snr_db,
        errors: [mfb.symbol_errors(truth), vmp.symbol_errors(truth), zf_errors],
        symbols_tested: k,
        ops: [mfb.op_count(), vmp.op_count(), zf_ops],
        zf_failed,
    })
}

/// Self-contained trial: its own drop and realization, both derived from `seed`.
pub fn run_trial(config: &SystemConfig, snr_db: f64, seed: u64) -> Result<TrialRecord> {
    config.validate()?;
    let constellation = Constellation::new(config.constellation_order, config.symbol_power)?;
    let model = ChannelModel::sample(config, &mut stream(drop_seed(seed, 0), TAG_GEOMETRY))?;
    let realization = Realization::draw(&model, &constellation, seed)?;
    evaluate(config, &constellation, &realization, snr_db)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SystemConfig {
        SystemConfig {
            num_antennas: 16,
            num_users: 4,
            ..SystemConfig::default()
        }
    }

    #[test]
    fn trials_are_deterministic() {
        let c = small();
        let a = run_trial(&c, 10.0, 99).unwrap();
        let b = run_trial(&c, 10.0, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.errors.iter().all(|&e| e <= 4));
        assert_eq!(a.symbols_tested, 4);
    }

    #[test]
    fn detector_names_sort_in_report_order() {
        let mut names: Vec<&str> = Detector::ALL.iter().map(|d| d.name()).collect();
        let sorted = names.clone();
        names.sort();
        assert_eq!(names, sorted);
    }
}
