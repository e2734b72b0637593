//! Multi-user symbol detection for extra-large scale MIMO arrays.
//!
//! The crate is split along the simulation pipeline:
//!
//! * [`channel`] draws spatially non-stationary channels: array geometry,
//!   visibility regions, one-ring covariances, truncated Karhunen-Loeve
//!   sampling and the noisy uplink observation.
//! * [`detect`] holds the variational message passing (VMP) detector with
//!   MRC initialization, plus the zero-forcing, matched-filter-bound and
//!   exhaustive maximum-likelihood references.
//! * [`sim`] runs seeded Monte Carlo trials, aggregates symbol error rates
//!   over SNR grids and evaluates the closed-form multiplication counts.
//! * [`io`] parses configuration documents and writes CSV/manifest output.

pub mod channel;
pub mod config;
pub mod detect;
pub mod error;
pub mod io;
pub mod sim;

pub use config::SystemConfig;
pub use error::{Error, Result};

/// Complex baseband sample.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix (column major, so user columns are contiguous).
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
