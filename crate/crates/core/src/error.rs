use thiserror::Error;

/// Errors raised while configuring, simulating or detecting.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates its constraint.
    #[error("invalid configuration: {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    /// The configuration document could not be parsed.
    #[error("config parse error: {0}")]
    Parse(String),

    /// A user position coincides with an antenna.
    #[error("user {user} is at zero distance from antenna {antenna}")]
    ZeroDistance { user: usize, antenna: usize },

    /// No antenna fell inside a sampled visibility region after the rejection budget.
    #[error("visibility region sampling failed after {0} rejections")]
    EmptyVisibilityRegion(usize),

    /// Quadrature produced a non-finite value.
    #[error("non-finite covariance entry at lag {lag} (check geometry)")]
    BadGeometry { lag: usize },

    /// Eigendecomposition did not produce a usable spectrum.
    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    /// A large-scale weight was negative.
    #[error("negative large-scale weight {value} at antenna {antenna}")]
    NegativeWeight { antenna: usize, value: f64 },

    /// Mismatched vector or matrix sizes.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A user's channel column is identically zero.
    #[error("user {0} has a zero-norm channel column")]
    ZeroChannel(usize),

    /// The channel matrix does not have full column rank.
    #[error("channel matrix is rank deficient: |r_{column},{column}| = {pivot:e} (tolerance {tolerance:e})")]
    RankDeficient {
        column: usize,
        pivot: f64,
        tolerance: f64,
    },

    #[error("unsupported constellation order {0}")]
    UnsupportedOrder(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field,
            reason: reason.into(),
        }
    }
}
