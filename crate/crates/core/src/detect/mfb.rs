//! Matched-filter bound: single-user MRC with all interference removed.

use super::constellation::Constellation;
use super::{DetectionResult, OpCounter};
use crate::channel::Observation;
use crate::error::{Error, Result};
use crate::{CMatrix, C64};

pub const TERM_MRC: &str = "mrc";

/// Forms the genie signal `h x + n`, combines with `hᴴ/‖h‖²` and slices.
pub fn mfb_detect(column: &[C64], symbol: C64, noise: &[C64], constellation: &Constellation) -> Result<usize> {
    if column.len() != noise.len() {
        return Err(Error::Dimension(format!(
            "channel has {} entries, noise has {}",
            column.len(),
            noise.len()
        )));
    }
    let norm: f64 = column.iter().map(|h| h.norm_sqr()).sum();
    if norm == 0.0 {
        return Err(Error::ZeroChannel(0));
    }
    let combined: C64 = column
        .iter()
        .zip(noise)
        .map(|(h, n)| h.conj() * (h * symbol + n))
        .sum();
    Ok(constellation.slice(combined / norm))
}

/// Genie detection for every user of an observation.
pub fn mfb_detect_all(h: &CMatrix, observation: &Observation, constellation: &Constellation) -> Result<DetectionResult> {
    let (m, k) = h.shape();
    if observation.symbols.len() != k {
        return Err(Error::Dimension("observation and channel disagree on K".into()));
    }
    let hard_symbols = (0..k)
        .map(|u| {
            let col: Vec<C64> = h.column(u).iter().copied().collect();
            mfb_detect(&col, observation.symbols[u], &observation.noise, constellation)
                .map_err(|e| match e {
                    Error::ZeroChannel(_) => Error::ZeroChannel(u),
                    other => other,
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ops = OpCounter::new();
    // ‖h‖² and hᴴy per user.
    ops.add(TERM_MRC, 2 * (m * k) as u64);
    Ok(DetectionResult {
        hard_symbols,
        posteriors: None,
        iterations_run: 0,
        ops,
    })
}

/// QPSK symbol error probability at post-combining SNR `γ = ‖h‖²P/σ²`:
/// `2Q(√γ) − Q(√γ)²`.
pub fn qpsk_ser(gamma: f64) -> f64 {
    let q = 0.5 * statrs::function::erf::erfc((gamma / 2.0).sqrt());
    2.0 * q - q * q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::complex_normal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn noiseless_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = Constellation::qpsk();
        let h: Vec<C64> = (0..5).map(|_| complex_normal(&mut rng)).collect();
        for i in 0..4 {
            assert_eq!(mfb_detect(&h, c.point(i), &[C64::new(0.0, 0.0); 5], &c).unwrap(), i);
        }
    }

    #[test]
    fn zero_channel_is_an_error() {
        let c = Constellation::qpsk();
        let z = [C64::new(0.0, 0.0); 3];
        assert!(matches!(mfb_detect(&z, c.point(0), &z, &c), Err(Error::ZeroChannel(_))));
    }

    #[test]
    fn closed_form_limits() {
        assert!((qpsk_ser(0.0) - 0.75).abs() < 1e-15);
        assert!(qpsk_ser(100.0) < 1e-20);
        // Q(1) = 0.158655...
        let q1 = 0.15865525393145707;
        let got = qpsk_ser(1.0);
        assert!((got - (2.0 * q1 - q1 * q1)).abs() < 1e-10, "{got}");
    }
}
