//! Visibility regions: the contiguous stretch of the array that sees a user.

use std::ops::Range;

use rand::Rng;
use rand_distr::{Distribution, LogNormal};

use super::geometry::UniformLinearArray;
use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// Rejection budget before an empty-region draw is treated as misconfiguration.
pub const MAX_VR_REJECTIONS: usize = 1000;

// Relative slack so antennas exactly on the closed boundary are kept.
const BOUNDARY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityRegion {
    /// c_k, meters.
    pub center: f64,
    /// l_k, meters.
    pub length: f64,
    /// Antennas with x in `[c − l/2, c + l/2] ∩ [0, L]`.
    pub indices: Range<usize>,
}

impl VisibilityRegion {
    /// Region for a given center and length, clipped to the array.
    pub fn from_interval(array: &UniformLinearArray, center: f64, length: f64) -> Self {
        let d = array.spacing;
        let lo = (center - 0.5 * length).max(0.0);
        let hi = (center + 0.5 * length).min(array.length());
        let first = (lo / d - BOUNDARY_EPS).ceil().max(0.0) as usize;
        let last = (hi / d + BOUNDARY_EPS).floor();
        let indices = if last < 0.0 || hi < lo {
            0..0
        } else {
            let end = (last as usize + 1).min(array.num_antennas);
            first.min(end)..end
        };
        Self {
            center,
            length,
            indices,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, antenna: usize) -> bool {
        self.indices.contains(&antenna)
    }
}

/// Draws `c ~ U(0, L)` and `l ~ LogNormal(μ_l, σ_l)`, redrawing while the
/// region covers no antenna.
pub fn sample_visibility_region<R: Rng + ?Sized>(
    config: &SystemConfig,
    array: &UniformLinearArray,
    rng: &mut R,
) -> Result<VisibilityRegion> {
    let length_dist = LogNormal::new(config.vr_length_mu, config.vr_length_sigma)
        .map_err(|e| Error::config("vr_length_sigma", e.to_string()))?;
    let l_total = array.length();
    for _ in 0..MAX_VR_REJECTIONS {
        let center = rng.random_range(0.0..=l_total);
        let length = length_dist.sample(rng);
        let vr = VisibilityRegion::from_interval(array, center, length);
        if !vr.is_empty() {
            return Ok(vr);
        }
    }
    Err(Error::EmptyVisibilityRegion(MAX_VR_REJECTIONS))
}
