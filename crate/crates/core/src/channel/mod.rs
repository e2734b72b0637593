//! Spatially non-stationary channel generation.
//!
//! A [`ChannelModel`] fixes everything that depends on the user drop
//! (positions, visibility regions, covariances and their Karhunen-Loeve
//! factors, large-scale weights). [`ChannelModel::realize`] then draws
//! independent fast fading and assembles `H`.

pub mod covariance;
pub mod geometry;
pub mod kl;
pub mod observation;
pub mod quadrature;
pub mod visibility;

use rand::Rng;
use rand_distr::StandardNormal;

pub use covariance::{one_ring_covariance, OneRingCovariance};
pub use geometry::{build_geometry, Point, SystemGeometry, UniformLinearArray, UserGeometry};
pub use kl::{hermitian_eigen, kl_factor, kl_factor_dense, sample_fast_fading, KlFactor};
pub use observation::{noise_variance_for_snr, transmit, Observation};
pub use visibility::{sample_visibility_region, VisibilityRegion};

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Circularly-symmetric complex Gaussian with unit variance.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `w_m = Ω · s_m^(∓ν)`: decaying with distance when `decay` is set.
pub fn large_scale_weights(distances: &[f64], attenuation: f64, exponent: f64, decay: bool) -> Vec<f64> {
    let e = if decay { -exponent } else { exponent };
    distances.iter().map(|s| attenuation * s.powf(e)).collect()
}

/// `h = √w ⊙ h̄`.
pub fn assemble_channel(weights: &[f64], fast_fading: &[C64]) -> Result<Vec<C64>> {
    if weights.len() != fast_fading.len() {
        return Err(Error::Dimension(format!(
            "{} weights for {} fading entries",
            weights.len(),
            fast_fading.len()
        )));
    }
    weights
        .iter()
        .zip(fast_fading)
        .enumerate()
        .map(|(m, (&w, &h))| {
            if w < 0.0 || w.is_nan() {
                Err(Error::NegativeWeight { antenna: m, value: w })
            } else {
                Ok(h * w.sqrt())
            }
        })
        .collect()
}

/// Stacks equal-length columns into `H`.
pub fn assemble_matrix(columns: &[Vec<C64>]) -> Result<CMatrix> {
    let m = columns.first().map_or(0, Vec::len);
    if columns.iter().any(|c| c.len() != m) {
        return Err(Error::Dimension("channel columns differ in length".into()));
    }
    Ok(CMatrix::from_fn(m, columns.len(), |i, k| columns[k][i]))
}

/// Second-order statistics of one user for a fixed drop.
#[derive(Debug, Clone, PartialEq)]
pub struct UserChannel {
    pub geometry: UserGeometry,
    pub covariance: OneRingCovariance,
    pub kl: KlFactor,
    pub weights: Vec<f64>,
}

impl UserChannel {
    pub fn vr(&self) -> &VisibilityRegion {
        &self.geometry.vr
    }
}

/// One drop: geometry plus per-user channel statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    pub array: UniformLinearArray,
    pub users: Vec<UserChannel>,
}

/// One fast-fading draw over a [`ChannelModel`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// h̄_k per user.
    pub fast_fading: Vec<Vec<C64>>,
    /// M × K channel matrix.
    pub h: CMatrix,
}

impl ChannelModel {
    /// Draws a geometry and builds every user's statistics.
    pub fn sample<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> Result<Self> {
        let geometry = build_geometry(config, rng)?;
        Self::from_geometry(config, geometry)
    }

    pub fn from_geometry(config: &SystemConfig, geometry: SystemGeometry) -> Result<Self> {
        let wavelength = config.wavelength();
        let zeta = config.kl_rank();
        let array = geometry.array;
        let users = geometry
            .users
            .into_iter()
            .enumerate()
            .map(|(k, g)| {
                let covariance = one_ring_covariance(
                    array.num_antennas,
                    g.vr.indices.clone(),
                    g.azimuth,
                    g.angular_spread,
                    array.spacing,
                    wavelength,
                )?;
                let kl = kl_factor(&covariance, zeta)?;
                let weights = large_scale_weights(
                    &g.distances,
                    config.attenuation_for(k),
                    config.pathloss_exponent,
                    config.pathloss_decay,
                );
                Ok(UserChannel {
                    geometry: g,
                    covariance,
                    kl,
                    weights,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { array, users })
    }

    /// Draws h̄_k for every user and assembles `H`.
    pub fn realize<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ChannelRealization> {
        let fast_fading: Vec<Vec<C64>> = self
            .users
            .iter()
            .map(|u| sample_fast_fading(&u.kl, rng))
            .collect();
        let columns = self
            .users
            .iter()
            .zip(&fast_fading)
            .map(|(u, f)| assemble_channel(&u.weights, f))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChannelRealization {
            h: assemble_matrix(&columns)?,
            fast_fading,
        })
    }
}
