use thiserror::Error;

/// Errors shared by every geometric module.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("radius {r} outside the warp domain ({lo}, {hi})")]
    OutOfDomain { r: f64, lo: f64, hi: f64 },

    #[error("warp potential degenerate: phi({r}) = {phi} below floor {floor}")]
    DegeneratePotential { r: f64, phi: f64, floor: f64 },

    #[error("target value {value} not attainable in the warp domain")]
    OutOfRange { value: f64 },

    #[error("beta deviates from a constant by {deviation} (tolerance {tol}); not a space form")]
    NotSpaceform { deviation: f64, tol: f64 },

    #[error("Gauss curvature varies by {deviation} over the interval (tolerance {tol})")]
    InconsistentCurvature { deviation: f64, tol: f64 },

    #[error("flow left the maximum-principle bounds [{lo}, {hi}] at rho = {rho}")]
    BoundsViolation { rho: f64, lo: f64, hi: f64 },

    #[error("axis alpha = {alpha} does not lie on the grid or half-grid (n = {n})")]
    OffGridAxis { alpha: f64, n: usize },

    #[error("circle offset |a| = {a} must be < 1")]
    InvalidOffset { a: f64 },

    #[error("spherical circle meets a pole (min r = {min_r}, max r = {max_r})")]
    PoleCrossing { min_r: f64, max_r: f64 },

    #[error("characteristic integration stalled: theta' = {theta_prime} at s = {s}")]
    StalledTheta { theta_prime: f64, s: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
