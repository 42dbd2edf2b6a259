//! Numerical toolkit for the Brown measure of the free multiplicative
//! Brownian motion.
//!
//! The support of the measure at time `t` is the closure of the region
//! `Σ_t = { λ : T(λ) < t }`, where `T` is an explicit "gobbling time"
//! function of the point λ.  Inside `Σ_t` the density takes the product form
//! `W_t(r,θ) = w_t(θ)/r²` in polar coordinates, with the angular factor
//! `w_t` determined entirely by the geometry of the region.  The crate
//! computes:
//!
//! * [`region`] — the gobbling time `T`, boundary radii `r_t(θ)`, angular
//!   extent and membership tests for `Σ_t`;
//! * [`density`] — `w_t(θ)` by three independent routes, the full density
//!   `W_t`, the angular marginal `a_t(θ)` and mass checks;
//! * [`shadow`] — the boundary map `f_t`, the angle correspondence θ ↔ φ,
//!   the spectral density of free unitary Brownian motion and the
//!   radially-constant shadow map that pushes the Brown measure onto it;
//! * [`hjflow`] — the six-dimensional Hamiltonian characteristic system
//!   behind the regularized log-determinant, its closed-form solutions,
//!   blow-up times, and PDE residual checks;
//! * [`matsim`] — Monte Carlo simulation of Brownian motion on GL(N;ℂ)
//!   and U(N), dense eigenvalue extraction, and statistical comparison of
//!   eigenvalue clouds against the computed densities;
//! * [`verify`] — the acceptance checks wired into the `verify` CLI
//!   subcommand.

pub mod cli;
pub mod density;
pub mod hjflow;
pub mod matsim;
pub mod numerics;
pub mod output;
pub mod region;
pub mod shadow;
pub mod verify;

use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument left the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Angle outside the open wedge `|θ| < θ_max(t)` (only possible for t ≤ 4).
    #[error("angle {theta} outside wedge |θ| < {theta_max} at t = {t}")]
    OutOfWedge { t: f64, theta: f64, theta_max: f64 },
    /// Angle outside the support arc `|φ| ≤ φ_max(t)` of the unitary spectral measure.
    #[error("angle {phi} outside arc |φ| ≤ {phi_max} at t = {t}")]
    OutOfArc { t: f64, phi: f64, phi_max: f64 },
    /// The point does not lie in the closure of the support region.
    #[error("point ({re}, {im}) outside the closure of the support region at t = {t}")]
    OutsideDomain { t: f64, re: f64, im: f64 },
    /// A bracketed root search failed; carries the final bracket state.
    #[error("root finding did not converge in {context}: bracket [{lo}, {hi}]")]
    NonConvergence { context: String, lo: f64, hi: f64 },
    /// Closed-form evaluation requested at or past the trajectory blow-up time.
    #[error("evaluation at t = {t} reaches the blow-up time t* = {t_star}")]
    PastBlowup { t: f64, t_star: f64 },
    /// The integrator step size underflowed approaching a blow-up.
    #[error("step size underflow near blow-up (t = {t})")]
    StepUnderflow { t: f64 },
    /// The dense eigenvalue solver did not converge.
    #[error("eigenvalue iteration did not converge")]
    EigenNonConvergence,
    #[error("empty eigenvalue cloud")]
    EmptyCloud,
    #[error("quadrature failure: {context} ({nodes} nodes)")]
    Quadrature { context: String, nodes: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use density::{angular_marginal, brown_density, omega, total_mass, w_of_theta, DensityGrid, Route};
pub use hjflow::{
    g_of_delta, hamiltonian, hj_value_s, init_state, integrate, inverse_lambda_t, lambda_t_map,
    pde_residual, px_closed_form, s_t, t_star, x0_for_lifetime, HJConstants, HJState,
};
pub use matsim::{compare_to_brown, eigenvalues, simulate_gl, simulate_u, EigenCloud, Group, SimConfig};
pub use region::{
    contains, gobbling_time, outer_radius, sample_boundary, theta_max, Membership, PolarPoint,
    RegionBoundary,
};
pub use shadow::{biane_density, f_t, phi_max, phi_of_theta, pushforward_check, shadow_map, theta_of_phi};
