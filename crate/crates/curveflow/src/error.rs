use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size must be even and at least 16, got {0}")]
    InvalidGrid(usize),

    #[error("non-finite value at node {0}")]
    NonFiniteValue(usize),

    #[error("convexity violation: radius of curvature {radius:.6e} at node {index}")]
    ConvexityViolation { index: usize, radius: f64 },

    #[error("curvature must stay positive: k = {value:.6e} at node {index}")]
    NonpositiveCurvature { index: usize, value: f64 },

    #[error("inradius LP is infeasible or numerically corrupted")]
    InfeasibleLp,

    #[error("input points are not in strictly convex position")]
    NotConvexInput,

    #[error("harmonic smoothing failed: min radius of curvature {0:.6e} after projection")]
    SmoothingFailed(f64),

    #[error("spectral energy above mode {cutoff} is {fraction:.3e} of the total")]
    AliasedInput { cutoff: usize, fraction: f64 },

    #[error("numerical blowup at tau = {0}")]
    NumericalBlowup(f64),

    #[error("insufficient signal for decay fit: {0}")]
    InsufficientSignal(String),

    #[error("trajectory sampling mismatch: {0}")]
    MismatchedSampling(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid snapshot file: {0}")]
    InvalidSnapshot(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
