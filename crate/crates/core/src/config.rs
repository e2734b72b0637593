//! Scalar model parameters for a simulation run.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SPEED_OF_LIGHT;

/// Order in which user posteriors are refreshed within one VMP iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// Every user is updated from the previous iteration's snapshot.
    #[default]
    Jacobi,
    /// Users are updated in index order, each seeing the already-updated
    /// moments of the users before it.
    GaussSeidel,
}

/// All model, detector and sweep parameters.
///
/// Defaults reproduce the full-scale setting (M = 512, K = 256); see
/// [`SystemConfig::desk`] for the reduced M/K = 2 setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemConfig {
    /// M
    pub num_antennas: usize,
    /// K
    pub num_users: usize,
    /// Hz
    pub carrier_frequency: f64,
    /// Meters; half a wavelength when absent.
    pub antenna_spacing: Option<f64>,
    pub pathloss_exponent: f64,
    /// `true` gives `w = Ω s^(-ν)`, `false` the literal `w = Ω s^ν`.
    pub pathloss_decay: bool,
    /// Global attenuation Ω.
    pub attenuation: f64,
    /// Optional per-user Ω, one entry per user.
    pub attenuation_per_user: Option<Vec<f64>>,
    /// Retained Karhunen-Loeve modes ζ; M/4 when absent.
    pub kl_rank: Option<usize>,
    /// Log-normal location of the visibility region length (log-meters).
    pub vr_length_mu: f64,
    /// Log-normal scale of the visibility region length.
    pub vr_length_sigma: f64,
    pub scatter_radius_min: f64,
    pub scatter_radius_max: f64,
    /// Closest distance (m) of the user field in front of the array.
    pub user_depth_min: f64,
    pub user_depth_max: f64,
    pub vmp_iterations: usize,
    pub damping: f64,
    /// Gamma prior shape α0 of the per-antenna noise precision.
    pub gamma_shape: f64,
    /// Gamma prior rate z0 of the per-antenna noise precision.
    pub gamma_rate: f64,
    pub schedule: Schedule,
    /// Mean symbol energy P (identical for every user).
    pub symbol_power: f64,
    pub constellation_order: usize,
    pub rng_seed: u64,
    pub snr_start_db: f64,
    pub snr_step_db: f64,
    pub snr_stop_db: f64,
    /// Upper bound on Monte Carlo trials per SNR point.
    pub trials_per_point: usize,
    /// A point stops early once every detector has this many symbol errors.
    pub target_errors: u64,
    /// Consecutive trials sharing one user drop (geometry, visibility
    /// regions and covariances); fast fading, symbols and noise are
    /// redrawn every trial.
    pub trials_per_drop: usize,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            num_antennas: 512,
            num_users: 256,
            carrier_frequency: 2.6e9,
            antenna_spacing: None,
            pathloss_exponent: 3.0,
            pathloss_decay: true,
            attenuation: 4.0,
            attenuation_per_user: None,
            kl_rank: None,
            vr_length_mu: 2.25,
            vr_length_sigma: 0.1,
            scatter_radius_min: 5.0,
            scatter_radius_max: 10.0,
            user_depth_min: 10.0,
            user_depth_max: 100.0,
            vmp_iterations: 3,
            damping: 0.45,
            gamma_shape: 0.0,
            gamma_rate: 0.0,
            schedule: Schedule::Jacobi,
            symbol_power: 1.0,
            constellation_order: 4,
            rng_seed: 0,
            snr_start_db: 0.0,
            snr_step_db: 2.0,
            snr_stop_db: 20.0,
            trials_per_point: 100_000,
            target_errors: 200,
            trials_per_drop: 16,
        }
    }
}

impl SystemConfig {
    /// Reduced-size setting keeping the M/K = 2 load: M = 128, K = 64.
    pub fn desk() -> Self {
        Self {
            num_antennas: 128,
            num_users: 64,
            ..Self::default()
        }
    }

    /// Carrier wavelength in meters.
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    pub fn spacing(&self) -> f64 {
        self.antenna_spacing.unwrap_or(0.5 * self.wavelength())
    }

    /// Physical array length L = M × spacing.
    pub fn array_length(&self) -> f64 {
        self.num_antennas as f64 * self.spacing()
    }

    pub fn kl_rank(&self) -> usize {
        self.kl_rank.unwrap_or((self.num_antennas / 4).max(1))
    }

    /// Ω for `user`, honoring the per-user override.
    pub fn attenuation_for(&self, user: usize) -> f64 {
        self.attenuation_per_user
            .as_ref()
            .and_then(|v| v.get(user).copied())
            .unwrap_or(self.attenuation)
    }

    /// SNR grid in dB, `start:step:stop` inclusive.
    pub fn snr_grid(&self) -> Vec<f64> {
        snr_grid(self.snr_start_db, self.snr_step_db, self.snr_stop_db)
    }

    /// Checks every field constraint, naming the first violation.
    pub fn validate(&self) -> Result<()> {
        let finite_pos = |v: f64| v.is_finite() && v > 0.0;
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if self.num_users < 1 {
            return Err(Error::config("num_users", "K must be at least 1"));
        }
        if self.num_antennas < self.num_users {
            return Err(Error::config(
                "num_antennas",
                format!("M ({}) must be >= K ({})", self.num_antennas, self.num_users),
            ));
        }
        if !finite_pos(self.carrier_frequency) {
            return Err(Error::config("carrier_frequency", "must be positive"));
        }
        if let Some(d) = self.antenna_spacing {
            if !finite_pos(d) {
                return Err(Error::config("antenna_spacing", "must be positive"));
            }
        }
        if !self.pathloss_exponent.is_finite() {
            return Err(Error::config("pathloss_exponent", "must be finite"));
        }
        if !finite_pos(self.attenuation) {
            return Err(Error::config("attenuation", "Ω must be positive"));
        }
        if let Some(v) = &self.attenuation_per_user {
            if v.len() != self.num_users {
                return Err(Error::config(
                    "attenuation_per_user",
                    format!("expected {} entries, got {}", self.num_users, v.len()),
                ));
            }
            if v.iter().any(|&a| !finite_pos(a)) {
                return Err(Error::config("attenuation_per_user", "entries must be positive"));
            }
        }
        if let Some(z) = self.kl_rank {
            if z < 1 || z > self.num_antennas {
                return Err(Error::config(
                    "kl_rank",
                    format!("ζ must lie in [1, M = {}], got {z}", self.num_antennas),
                ));
            }
        }
        if !self.vr_length_mu.is_finite() {
            return Err(Error::config("vr_length_mu", "must be finite"));
        }
        if !finite_pos(self.vr_length_sigma) {
            return Err(Error::config("vr_length_sigma", "σ_l must be positive"));
        }
        if !finite_pos(self.scatter_radius_min) || !self.scatter_radius_max.is_finite() {
            return Err(Error::config("scatter_radius_min", "radii must be positive"));
        }
        if self.scatter_radius_min > self.scatter_radius_max {
            return Err(Error::config(
                "scatter_radius_max",
                "r_min must not exceed r_max",
            ));
        }
        if !finite_pos(self.user_depth_min) || !self.user_depth_max.is_finite() {
            return Err(Error::config("user_depth_min", "depth must be positive"));
        }
        if self.user_depth_min > self.user_depth_max {
            return Err(Error::config(
                "user_depth_max",
                "user_depth_min must not exceed user_depth_max",
            ));
        }
        if !(0.0..=1.0).contains(&self.damping) {
            return Err(Error::config(
                "damping",
                format!("δ_vmp must lie in [0, 1], got {}", self.damping),
            ));
        }
        if !finite_nonneg(self.gamma_shape) {
            return Err(Error::config("gamma_shape", "α0 must be non-negative"));
        }
        if !finite_nonneg(self.gamma_rate) {
            return Err(Error::config("gamma_rate", "z0 must be non-negative"));
        }
        if !finite_pos(self.symbol_power) {
            return Err(Error::config("symbol_power", "P must be positive"));
        }
        if !matches!(self.constellation_order, 4 | 16 | 64) {
            return Err(Error::config(
                "constellation_order",
                format!("supported orders are 4, 16, 64; got {}", self.constellation_order),
            ));
        }
        if !(self.snr_start_db.is_finite() && self.snr_stop_db.is_finite()) {
            return Err(Error::config("snr_start_db", "SNR bounds must be finite"));
        }
        if !finite_pos(self.snr_step_db) {
            return Err(Error::config("snr_step_db", "step must be positive"));
        }
        if self.snr_stop_db < self.snr_start_db {
            return Err(Error::config("snr_stop_db", "stop must not precede start"));
        }
        if self.trials_per_point < 1 {
            return Err(Error::config("trials_per_point", "must be at least 1"));
        }
        if self.trials_per_drop < 1 {
            return Err(Error::config("trials_per_drop", "must be at least 1"));
        }
        Ok(())
    }
}

/// Inclusive `start:step:stop` grid; points are computed as `start + i·step`
/// so no rounding error accumulates.
pub fn snr_grid(start: f64, step: f64, stop: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|i| start + i as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_defaults() {
        let c = SystemConfig::default();
        assert_eq!((c.num_antennas, c.num_users), (512, 256));
        assert_eq!(c.kl_rank(), 128);
        assert_eq!(c.vmp_iterations, 3);
        assert_eq!(c.damping, 0.45);
        c.validate().unwrap();
    }

    #[test]
    fn array_length_matches_table() {
        let c = SystemConfig::default();
        let l = c.array_length();
        assert!((l - 29.51).abs() / 29.51 < 0.005, "L = {l}");
        let spacing = c.wavelength() / 2.0;
        assert!((l - 512.0 * spacing).abs() <= 1e-9 * l);
    }

    #[test]
    fn rejects_bad_damping() {
        let c = SystemConfig {
            damping: 1.5,
            ..SystemConfig::default()
        };
        match c.validate() {
            Err(Error::InvalidConfig { field, .. }) => assert_eq!(field, "damping"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_more_users_than_antennas() {
        let c = SystemConfig {
            num_antennas: 4,
            num_users: 5,
            ..SystemConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn grid_is_inclusive() {
        assert_eq!(snr_grid(0.0, 2.0, 20.0).len(), 11);
        assert_eq!(snr_grid(0.0, 0.1, 0.3).len(), 4);
        assert_eq!(snr_grid(5.0, 1.0, 5.0), vec![5.0]);
    }
}
