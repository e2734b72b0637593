//! Covariance and Karhunen-Loeve diagnostics for one drop.

use crate::channel::{hermitian_eigen, ChannelModel};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct UserStats {
    pub user: usize,
    pub vr_start: usize,
    pub vr_len: usize,
    pub azimuth: f64,
    pub angular_spread: f64,
    pub reference_distance: f64,
    /// Σ_{i≤ζ} Λ_i / trace(R).
    pub retained_fraction: f64,
    /// ‖R − Rᴴ‖_F
    pub hermitian_error: f64,
    /// λ_min / λ_max of the in-region block.
    pub min_eig_ratio: f64,
    /// Mean large-scale weight over the region.
    pub mean_weight: f64,
}

pub fn channel_stats(model: &ChannelModel) -> Result<Vec<UserStats>> {
    model
        .users
        .iter()
        .enumerate()
        .map(|(k, u)| {
            let block = u.covariance.block();
            let herm = (&block - block.adjoint()).norm();
            let (values, _) = hermitian_eigen(&block)?;
            let max = values.first().copied().unwrap_or(0.0);
            let min = values.last().copied().unwrap_or(0.0);
            let vr = &u.geometry.vr;
            let mean_weight = vr.indices.clone().map(|m| u.weights[m]).sum::<f64>() / vr.len().max(1) as f64;
            Ok(UserStats {
                user: k,
                vr_start: vr.indices.start,
                vr_len: vr.len(),
                azimuth: u.geometry.azimuth,
                angular_spread: u.geometry.angular_spread,
                reference_distance: u.geometry.reference_distance,
                retained_fraction: u.kl.retained_energy() / u.covariance.trace(),
                hermitian_error: herm,
                min_eig_ratio: if max > 0.0 { min / max } else { 0.0 },
                mean_weight,
            })
        })
        .collect()
}
