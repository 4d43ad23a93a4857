//! Numerical laboratory for an area-preserving curve flow on warped
//! product surfaces dr^2 + phi(r)^2 dtheta^2.
//!
//! A closed embedded curve is represented as a radial graph rho(theta)
//! over a uniform periodic grid, differentiated pseudospectrally. The
//! flow moves the curve with normal speed phi' - u*kappa, which preserves
//! enclosed area while shrinking length; slices {r = const} are its fixed
//! points. The crate provides the warp potentials, the curve geometry and
//! functionals, the flow integrator with its monitored identities, the
//! cut-and-reflect symmetrization, and the explicit space-form circles
//! with their characteristic ODE.

pub mod curve;
pub mod error;
pub mod flow;
pub mod spaceform;
pub mod spectral;
pub mod symmetry;
pub mod warp;

pub use curve::{
    perturbation_coefficient, theta_grid, Functionals, GeometrySample, PerturbationCheck,
    RadialCurve,
};
pub use error::{Error, Result};
pub use flow::{
    dldt_formula, evolve, evolve_from, gradient_barrier, stable_dt, step, FlowConfig, FlowTrace,
    LengthDerivative, Termination, TraceRow,
};
pub use spaceform::{
    euclidean_circle, integrate_characteristic, rs_profile_residual, spherical_circle,
    CharacteristicPath, CircleModel, CircleSpec, ProfileFit,
};
pub use symmetry::{cut_and_reflect, equalizing_axis, mollify, reflect, symmetry_defect, Axis};
pub use warp::{
    CurvatureSign, PhiEval, SpaceformClassification, WarpFamily, WarpPotential, DEFAULT_PHI_FLOOR,
};
