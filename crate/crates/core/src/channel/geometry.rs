//! Uniform linear array, user placement and per-user scattering geometry.

use rand::Rng;

use super::visibility::{sample_visibility_region, VisibilityRegion};
use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// Planar position in meters. The array lies on the x-axis, users at y > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Antenna `m` sits at `(m·spacing, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformLinearArray {
    pub num_antennas: usize,
    pub spacing: f64,
}

impl UniformLinearArray {
    pub fn new(num_antennas: usize, spacing: f64) -> Self {
        Self {
            num_antennas,
            spacing,
        }
    }

    pub fn position(&self, m: usize) -> Point {
        Point::new(m as f64 * self.spacing, 0.0)
    }

    pub fn positions(&self) -> Vec<Point> {
        (0..self.num_antennas).map(|m| self.position(m)).collect()
    }

    /// Physical length `M × spacing`.
    pub fn length(&self) -> f64 {
        self.num_antennas as f64 * self.spacing
    }
}

/// Where a user is and how it illuminates the array.
#[derive(Debug, Clone, PartialEq)]
pub struct UserGeometry {
    pub position: Point,
    /// Distance to every antenna, meters.
    pub distances: Vec<f64>,
    pub vr: VisibilityRegion,
    /// Azimuth of the user seen from its VR center, radians in (0, π).
    pub azimuth: f64,
    /// Distance from the user to its VR center.
    pub reference_distance: f64,
    pub scatter_radius: f64,
    /// Δ = atan(r / s).
    pub angular_spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemGeometry {
    pub array: UniformLinearArray,
    pub users: Vec<UserGeometry>,
}

impl SystemGeometry {
    /// K × M matrix of user-antenna distances, row per user.
    pub fn distances(&self) -> Vec<Vec<f64>> {
        self.users.iter().map(|u| u.distances.clone()).collect()
    }
}

/// Describes a user once its position, radius and VR are fixed.
pub fn user_geometry(
    array: &UniformLinearArray,
    user: usize,
    position: Point,
    scatter_radius: f64,
    vr: VisibilityRegion,
) -> Result<UserGeometry> {
    let mut distances = Vec::with_capacity(array.num_antennas);
    for m in 0..array.num_antennas {
        let s = position.distance(&array.position(m));
        if s <= 0.0 {
            return Err(Error::ZeroDistance { user, antenna: m });
        }
        distances.push(s);
    }
    let center = Point::new(vr.center, 0.0);
    let reference_distance = position.distance(&center);
    if reference_distance <= 0.0 {
        return Err(Error::ZeroDistance { user, antenna: vr.indices.start });
    }
    let azimuth = (position.y - center.y).atan2(position.x - center.x);
    let angular_spread = (scatter_radius / reference_distance).atan();
    Ok(UserGeometry {
        position,
        distances,
        vr,
        azimuth,
        reference_distance,
        scatter_radius,
        angular_spread,
    })
}

/// Places the array, drops K users uniformly in the rectangle
/// `[0, L] × [depth_min, depth_max]`, draws each user's scatter radius and
/// visibility region, and derives the per-user azimuth and angular spread.
pub fn build_geometry<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> Result<SystemGeometry> {
    let array = UniformLinearArray::new(config.num_antennas, config.spacing());
    let length = array.length();
    let users = (0..config.num_users)
        .map(|k| {
            let x = rng.random_range(0.0..=length);
            let y = rng.random_range(config.user_depth_min..=config.user_depth_max);
            let r = rng.random_range(config.scatter_radius_min..=config.scatter_radius_max);
            let vr = sample_visibility_region(config, &array, rng)?;
            user_geometry(&array, k, Point::new(x, y), r, vr)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SystemGeometry { array, users })
}
