//! The unitary shadow of the Brown measure.
//!
//! The map `f_t(λ) = λ·exp((t/2)(1+λ)/(1-λ))` sends the region boundary
//! into the unit circle, pairing each boundary angle θ with a circle angle
//! φ.  Pushing the Brown measure radially onto the circle through this
//! pairing produces exactly the spectral measure `ν_t` of free unitary
//! Brownian motion; this module computes the angle correspondence, the
//! density of `ν_t`, the radially-constant shadow map, and a pointwise
//! verification of the pushforward identity.

use crate::density::angular_marginal;
use crate::numerics::{
    gauss_legendre, integrate_gl, normalize_angle, panels_refined_toward, panels_uniform,
};
use crate::region::{contains, outer_radius_clamped, theta_max, Membership, PolarPoint, RegionBoundary};
use crate::{Error, Result};
use num_complex::Complex64;

/// `f_t(λ) = λ·exp((t/2)(1+λ)/(1-λ))`, holomorphic off `λ = 1`.
pub fn f_t(t: f64, lambda: Complex64) -> Result<Complex64> {
    if lambda == Complex64::new(1.0, 0.0) {
        return Err(Error::Domain("f_t has a pole at λ = 1".into()));
    }
    let ratio = (Complex64::new(1.0, 0.0) + lambda) / (Complex64::new(1.0, 0.0) - lambda);
    Ok(lambda * (0.5 * t * ratio).exp())
}

/// Half-width of the support arc of `ν_t`:
/// `½√(t(4-t)) + arccos(1 - t/2)` for `t < 4`, π afterwards.
pub fn phi_max(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("phi_max needs t > 0, got {t}")));
    }
    Ok(if t < 4.0 {
        0.5 * (t * (4.0 - t)).sqrt() + (1.0 - t / 2.0).acos()
    } else {
        std::f64::consts::PI
    })
}

/// Boundary angle correspondence `φ(θ)`, as a continuous lift.
///
/// `φ = θ + t·r·sinθ/(r² + 1 - 2r·cosθ)` with `r = r_t(θ)`; this is the
/// argument of `f_t` along the outer boundary, written so that no branch
/// tracking of the complex logarithm is needed.
pub fn phi_of_theta(t: f64, theta: f64) -> Result<f64> {
    let theta = normalize_angle(theta);
    let r = outer_radius_clamped(t, theta)?;
    Ok(theta + t * r * theta.sin() / (r * r + 1.0 - 2.0 * r * theta.cos()))
}

/// Inverse angle correspondence `θ(φ)` by monotone bisection.
///
/// Bisection rather than Newton: the derivative `dφ/dθ` can approach zero
/// at the closing angle when `t = 4`.
pub fn theta_of_phi(t: f64, phi: f64) -> Result<f64> {
    let pm = phi_max(t)?;
    let phi = if t > 4.0 { normalize_angle(phi) } else { phi };
    if phi.abs() > pm + 1e-12 {
        return Err(Error::OutOfArc { t, phi, phi_max: pm });
    }
    let tm = theta_max(t)?;
    let phi = phi.clamp(-pm, pm);
    let (mut lo, mut hi) = (-tm, tm);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if phi_of_theta(t, mid)? < phi {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Density of `ν_t` with respect to dφ: `log(r_t(θ(φ)))/(πt)`.
///
/// Defined on the closed arc; the value at `|φ| = φ_max` (t ≤ 4) is the
/// limit 0 since the boundary radius closes to 1 there.
pub fn biane_density(t: f64, phi: f64) -> Result<f64> {
    let theta = theta_of_phi(t, phi)?;
    let r = outer_radius_clamped(t, theta)?;
    Ok(r.ln() / (std::f64::consts::PI * t))
}

/// Alternative form `(1/2π)(r²-1)/(r²+1-2r·cosθ)`; agrees with
/// [`biane_density`] because `T = t` on the boundary.
pub fn biane_density_boundary_form(t: f64, phi: f64) -> Result<f64> {
    let theta = theta_of_phi(t, phi)?;
    let r = outer_radius_clamped(t, theta)?;
    Ok((r * r - 1.0) / (r * r + 1.0 - 2.0 * r * theta.cos()) / (2.0 * std::f64::consts::PI))
}

/// Third form through the inverse boundary value `χ_t(e^{iφ}) = e^{iθ}/r_t(θ)`:
/// `(1/2π)(1-|χ|²)/|1-χ|²`.
pub fn biane_density_chi_form(t: f64, phi: f64) -> Result<f64> {
    let theta = theta_of_phi(t, phi)?;
    let r = outer_radius_clamped(t, theta)?;
    let chi = Complex64::from_polar(1.0 / r, theta);
    let one = Complex64::new(1.0, 0.0);
    Ok((1.0 - chi.norm_sqr()) / (one - chi).norm_sqr() / (2.0 * std::f64::consts::PI))
}

/// Total mass of `ν_t`; should be 1.
pub fn nu_mass(t: f64, n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::Quadrature { context: format!("nu_mass needs ≥ 4 nodes/panel, got {n}"), nodes: n });
    }
    let pm = phi_max(t)?;
    let (nodes, weights) = gauss_legendre(n);
    let panels = if t <= 4.0 {
        panels_refined_toward(0.0, pm, 45)
    } else {
        panels_uniform(0.0, std::f64::consts::PI, 8)
    };
    let mut err: Option<Error> = None;
    let mut f = |phi: f64| match biane_density(t, phi) {
        Ok(v) => v,
        Err(e) => {
            err = Some(e);
            0.0
        }
    };
    let mut acc = 0.0;
    for (a, b) in panels {
        acc += integrate_gl(&mut f, a, b, &nodes, &weights);
    }
    match err {
        Some(e) => Err(e),
        None => Ok(2.0 * acc),
    }
}

/// The radially-constant shadow map `Φ_t(λ) = e^{iφ(arg λ)}`.
///
/// Agrees with `f_t` on the boundary and is constant along radial segments
/// of the closed region; errors for points outside the closure.
pub fn shadow_map(t: f64, lambda: Complex64) -> Result<Complex64> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(Error::OutsideDomain { t, re: 0.0, im: 0.0 });
    }
    let p = PolarPoint::from_complex(lambda)?;
    if contains(t, p)? == Membership::Outside {
        return Err(Error::OutsideDomain { t, re: lambda.re, im: lambda.im });
    }
    let phi = phi_of_theta(t, p.theta())?;
    Ok(Complex64::from_polar(1.0, phi))
}

/// Sampled θ ↦ φ map along the boundary.
#[derive(Debug, Clone)]
pub struct ShadowMap {
    pub t: f64,
    pub boundary: RegionBoundary,
    /// `(θ, φ)` pairs in increasing θ.
    pub phi_samples: Vec<(f64, f64)>,
    pub phi_max: f64,
}

impl ShadowMap {
    pub fn build(t: f64, n: usize) -> Result<Self> {
        let boundary = crate::region::sample_boundary(t, n)?;
        let mut phi_samples = Vec::with_capacity(boundary.samples.len());
        for &(theta, r) in &boundary.samples {
            let phi = theta + t * r * theta.sin() / (r * r + 1.0 - 2.0 * r * theta.cos());
            phi_samples.push((theta, phi));
        }
        Ok(Self { t, boundary, phi_samples, phi_max: phi_max(t)? })
    }
}

/// Pointwise verification of the pushforward identity
/// `a_t(θ) = ν_t'(φ(θ))·dφ/dθ`, with `dφ/dθ` by central differences.
///
/// Returns the maximum discrepancy over an interior Chebyshev grid of `n`
/// angles (clamped 0.5% inside the wedge so the stencil stays valid).
pub fn pushforward_check(t: f64, n: usize) -> Result<f64> {
    let tm = theta_max(t)?;
    let half_width = if t <= 4.0 { 0.995 * tm } else { 0.999 * std::f64::consts::PI };
    let d = 1e-5 * tm;
    let mut worst = 0.0f64;
    for i in 0..n {
        let theta = half_width * (std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * n as f64)).cos();
        let dphi = (phi_of_theta(t, theta + d)? - phi_of_theta(t, theta - d)?) / (2.0 * d);
        let kappa = biane_density(t, phi_of_theta(t, theta)?)?;
        let a = angular_marginal(t, theta)?;
        worst = worst.max((a - kappa * dphi).abs());
    }
    Ok(worst)
}
