//! Noisy uplink observation `y = Hx + n`.

use rand::Rng;

use super::complex_normal;
use crate::error::{Error, Result};
use crate::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub received: Vec<C64>,
    pub symbols: Vec<C64>,
    pub noise_variance: f64,
    /// Kept so genie-aided receivers can reuse the exact noise.
    pub noise: Vec<C64>,
}

impl Observation {
    /// Forms `y = Hx + n` from a given noise vector.
    pub fn from_noise(h: &CMatrix, symbols: &[C64], noise: Vec<C64>, noise_variance: f64) -> Result<Self> {
        if h.ncols() != symbols.len() || h.nrows() != noise.len() {
            return Err(Error::Dimension(format!(
                "H is {}x{}, x has {} entries, n has {}",
                h.nrows(),
                h.ncols(),
                symbols.len(),
                noise.len()
            )));
        }
        let mut received = noise.clone();
        for (k, x) in symbols.iter().enumerate() {
            for (y, hk) in received.iter_mut().zip(h.column(k).iter()) {
                *y += hk * x;
            }
        }
        Ok(Self {
            received,
            symbols: symbols.to_vec(),
            noise_variance,
            noise,
        })
    }
}

/// Draws `n ~ CN(0, σ² I)` and returns the observation.
pub fn transmit<R: Rng + ?Sized>(h: &CMatrix, symbols: &[C64], noise_variance: f64, rng: &mut R) -> Result<Observation> {
    if !(noise_variance >= 0.0) {
        return Err(Error::Dimension(format!("noise variance {noise_variance} is negative")));
    }
    let sigma = noise_variance.sqrt();
    let noise = (0..h.nrows()).map(|_| complex_normal(rng) * sigma).collect();
    Observation::from_noise(h, symbols, noise, noise_variance)
}

/// σ² giving the requested SNR, where SNR is the ratio of the mean received
/// symbol energy per antenna and user, `P·‖H‖²_F / (M·K)`, to σ².
pub fn noise_variance_for_snr(h: &CMatrix, symbol_power: f64, snr_db: f64) -> f64 {
    let entries = (h.nrows() * h.ncols()).max(1) as f64;
    let mean_gain = h.iter().map(|z| z.norm_sqr()).sum::<f64>() / entries;
    symbol_power * mean_gain * 10f64.powf(-snr_db / 10.0)
}
