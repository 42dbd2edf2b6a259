//! The Brown measure density.
//!
//! Inside the region the density in polar coordinates is
//! `W_t(r,θ) = w_t(θ)/r²`.  The angular factor has a closed form on the
//! boundary: `w_t(θ) = ω(r_t(θ),θ)/(2πt)` with
//!
//! ```text
//! ω(r,θ) = 1 + h(r)·(α̃(r)·cosθ + β̃(r)) / (β̃(r)·cosθ + α̃(r))
//! h(r)   = r·log(r²)/(r²-1) = 1 - c(r)(r-1)²
//! α̃(r)  = 1 + 2r·c(r),   β̃(r) = 1 - (r²+1)·c(r)
//! ```
//!
//! which is smooth through `r = 1`.  Two derivative-based routes exist as
//! oracles: differentiating the boundary restriction of the angular
//! derivative of `log|λ-1|²`, and differentiating the boundary angle map
//! θ ↦ φ.  The closed-form ω route is the production path.

use crate::numerics::{gauss_legendre, integrate_gl, panels_refined_toward, panels_uniform};
use crate::region::{
    self, contains, gobbling_time, outer_radius, outer_radius_clamped, theta_max, Membership,
    PolarPoint,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which formula produces `w_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Closed-form ω evaluated on the boundary (production path).
    #[default]
    Omega,
    /// Central differences of the boundary angular-derivative expression.
    ThetaDerivative,
    /// Central differences of the boundary angle map θ ↦ φ.
    PhiJacobian,
}

/// The pieces of the ω formula at a given radius.
#[derive(Debug, Clone, Copy)]
pub struct OmegaParts {
    pub h: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub alpha_tilde: f64,
    pub beta_tilde: f64,
}

/// `c(r) = (1 - h(r))/(r-1)²`, with a series fallback where the quotient cancels.
fn c_profile(r: f64) -> f64 {
    let s = r - 1.0;
    if s.abs() < 1e-3 {
        // Taylor of (1-h)/(r-1)² at r = 1
        1.0 / 6.0
            + s * (-1.0 / 6.0
                + s * (2.0 / 15.0
                    + s * (-0.1 + s * (31.0 / 420.0 + s * (-23.0 / 420.0 + s * 13.0 / 315.0)))))
    } else {
        (1.0 - region_h(r)) / (s * s)
    }
}

#[inline]
fn region_h(r: f64) -> f64 {
    crate::region::h_profile(r)
}

/// Compute all ω ingredients at radius `r > 0`.
pub fn omega_parts(r: f64) -> Result<OmegaParts> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("omega needs r > 0, got {r}")));
    }
    let h = region_h(r);
    let c = c_profile(r);
    let s = r - 1.0;
    let alpha_tilde = 1.0 + 2.0 * r * c;
    let beta_tilde = 1.0 - (r * r + 1.0) * c;
    Ok(OmegaParts {
        h,
        c,
        alpha: s * s * alpha_tilde,
        beta: s * s * beta_tilde,
        alpha_tilde,
        beta_tilde,
    })
}

/// The boundary density factor `ω(r,θ) ∈ [1-h(r), 1+h(r)] ⊂ [0, 2]`.
pub fn omega(r: f64, theta: f64) -> Result<f64> {
    let p = omega_parts(r)?;
    let cos = theta.cos();
    Ok(1.0 + p.h * (p.alpha_tilde * cos + p.beta_tilde) / (p.beta_tilde * cos + p.alpha_tilde))
}

/// Angular density factor `w_t(θ)` by the chosen route.
///
/// Derivative routes use a central-difference step `Δθ = 1e-5·θ_max(t)`,
/// shrunk symmetrically when the stencil would leave the wedge.
pub fn w_of_theta(t: f64, theta: f64, route: Route) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("w_of_theta needs t > 0, got {t}")));
    }
    let tm = theta_max(t)?;
    let theta = crate::numerics::normalize_angle(theta);
    if t <= 4.0 && theta.abs() >= tm {
        return Err(Error::OutOfWedge { t, theta, theta_max: tm });
    }
    match route {
        Route::Omega => {
            let r = outer_radius(t, theta)?;
            Ok(omega(r, theta)? / (2.0 * std::f64::consts::PI * t))
        }
        Route::ThetaDerivative => {
            let d = fd_step(t, theta, tm);
            let md = boundary_log_angular_deriv(t, theta - d)?;
            let mu = boundary_log_angular_deriv(t, theta + d)?;
            Ok((2.0 / t + (mu - md) / (2.0 * d)) / (4.0 * std::f64::consts::PI))
        }
        Route::PhiJacobian => {
            let d = fd_step(t, theta, tm);
            let pd = crate::shadow::phi_of_theta(t, theta - d)?;
            let pu = crate::shadow::phi_of_theta(t, theta + d)?;
            Ok((pu - pd) / (2.0 * d) / (2.0 * std::f64::consts::PI * t))
        }
    }
}

fn fd_step(t: f64, theta: f64, tm: f64) -> f64 {
    let base = 1e-5 * tm;
    if t <= 4.0 {
        let room = tm - theta.abs();
        base.min(0.5 * room)
    } else {
        base
    }
}

/// The angular derivative of `log|λ-1|²` restricted to the outer boundary.
fn boundary_log_angular_deriv(t: f64, theta: f64) -> Result<f64> {
    let r = outer_radius(t, theta)?;
    Ok(2.0 * r * theta.sin() / (r * r + 1.0 - 2.0 * r * theta.cos()))
}

/// Full plane density `W_t` at a point, with its membership flag.
///
/// Boundary points report the inside limit; the measure itself does not
/// charge the boundary.
pub fn brown_density(t: f64, p: PolarPoint) -> Result<(f64, Membership)> {
    let m = contains(t, p)?;
    if m == Membership::Outside {
        return Ok((0.0, m));
    }
    let w = w_of_theta(t, p.theta(), Route::Omega).or_else(|e| {
        // A boundary point at the wedge cutoff has the limiting value 0.
        if matches!(e, Error::OutOfWedge { .. }) && m == Membership::Boundary {
            Ok(0.0)
        } else {
            Err(e)
        }
    })?;
    Ok((w / (p.r() * p.r()), m))
}

/// Density of the argument of λ under the Brown measure:
/// `a_t(θ) = 2·log(r_t(θ))·w_t(θ)`.
///
/// Defined on the closed wedge; at the cutoff angles both factors vanish in
/// the limit, so the value there is 0.
pub fn angular_marginal(t: f64, theta: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("angular_marginal needs t > 0, got {t}")));
    }
    let tm = theta_max(t)?;
    let theta = crate::numerics::normalize_angle(theta);
    if t <= 4.0 {
        if theta.abs() > tm + 1e-12 {
            return Err(Error::OutOfWedge { t, theta, theta_max: tm });
        }
        if theta.abs() >= tm * (1.0 - 1e-14) {
            return Ok(0.0);
        }
    }
    let r = outer_radius_clamped(t, theta)?;
    if r <= 1.0 {
        return Ok(0.0);
    }
    Ok(2.0 * r.ln() * omega(r, theta)? / (2.0 * std::f64::consts::PI * t))
}

/// Number of geometric refinement levels toward a wedge cutoff.
const EDGE_LEVELS: usize = 45;

/// Total mass of the angular marginal; should be 1.
///
/// Composite Gauss-Legendre with `n` nodes per panel, panels refined
/// geometrically toward the cutoff where the integrand has a square-root
/// cusp (t ≤ 4); uniform panels on the full circle otherwise.
pub fn total_mass(t: f64, n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::Quadrature { context: format!("total_mass needs ≥ 4 nodes/panel, got {n}"), nodes: n });
    }
    let tm = theta_max(t)?;
    let (nodes, weights) = gauss_legendre(n);
    let panels = if t <= 4.0 {
        panels_refined_toward(0.0, tm, EDGE_LEVELS)
    } else {
        panels_uniform(0.0, std::f64::consts::PI, 8)
    };
    let mut err: Option<Error> = None;
    let mut f = |theta: f64| match angular_marginal(t, theta) {
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
        // even integrand: wedge total is twice the positive half
        None => Ok(2.0 * acc),
    }
}

/// One row of a tabulated density grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DensityRow {
    pub theta: f64,
    pub r_t: f64,
    pub w_t: f64,
    pub a_t: f64,
}

/// Tabulated `(θ, r_t, w_t, a_t)` rows with grid metadata.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub t: f64,
    pub n: usize,
    pub route: Route,
    pub tol: f64,
    pub rows: Vec<DensityRow>,
}

impl DensityGrid {
    /// Tabulate on the standard grid: Chebyshev-spaced on the open wedge
    /// for `t ≤ 4`, uniform on `(-π, π]` otherwise.
    pub fn build(t: f64, n: usize, route: Route) -> Result<Self> {
        let tm = theta_max(t)?;
        let thetas: Vec<f64> = if t <= 4.0 {
            let mut v: Vec<f64> = (0..n)
                .map(|i| tm * (std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * n as f64)).cos())
                .collect();
            v.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            v
        } else {
            let step = 2.0 * std::f64::consts::PI / n as f64;
            (0..n).map(|i| -std::f64::consts::PI + (i as f64 + 1.0) * step).collect()
        };
        let mut rows = Vec::with_capacity(n);
        for theta in thetas {
            let r_t = outer_radius(t, theta)?;
            let w_t = w_of_theta(t, theta, route)?;
            rows.push(DensityRow { theta, r_t, w_t, a_t: 2.0 * r_t.ln() * w_t });
        }
        Ok(Self { t, n, route, tol: region::ROOT_TOL, rows })
    }
}

/// Convenience: `W_t` evaluated ignoring the membership flag.
pub fn brown_density_value(t: f64, p: PolarPoint) -> Result<f64> {
    Ok(brown_density(t, p)?.0)
}

/// Gobbling time re-export used by sibling modules' tests.
#[allow(dead_code)]
pub(crate) fn gobbling(p: PolarPoint) -> f64 {
    gobbling_time(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn omega_anchors() {
        assert_abs_diff_eq!(omega(1.0, 0.0).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(omega(1.0, PI).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(omega(1.0, PI / 2.0).unwrap(), 1.5, epsilon = 1e-14);
    }

    #[test]
    fn omega_on_unit_circle_formula() {
        for &th in &[0.3f64, 1.0, 2.2, 3.0] {
            let want = 3.0 * (1.0 + th.cos()) / (2.0 + th.cos());
            assert_abs_diff_eq!(omega(1.0, th).unwrap(), want, epsilon = 1e-13);
        }
    }

    #[test]
    fn omega_small_radius_limit() {
        // ω → 1 uniformly as r → 0; |ω - 1| ≤ h(r) with h(1e-4) ≈ 1.8e-3
        for i in 0..16 {
            let th = -PI + 2.0 * PI * (i as f64 + 0.5) / 16.0;
            assert!((omega(1e-4, th).unwrap() - 1.0).abs() < 0.01);
        }
        // at r = 0.001 the deviation at θ = 0 equals h(0.001) ≈ 0.0138
        assert!((omega(1e-3, 0.0).unwrap() - 1.0).abs() < 0.015);
    }

    #[test]
    fn omega_rejects_bad_radius() {
        assert!(omega(0.0, 1.0).is_err());
        assert!(omega(-2.0, 1.0).is_err());
    }

    #[test]
    fn h_profile_shape() {
        let h = |r: f64| crate::region::h_profile(r);
        assert_abs_diff_eq!(h(1.0), 1.0, epsilon = 0.0);
        let d = 1e-4;
        let hp = (h(1.0 + d) - h(1.0 - d)) / (2.0 * d);
        assert_abs_diff_eq!(hp, 0.0, epsilon = 1e-6);
        let d = 1e-3;
        let hpp = (h(1.0 + d) - 2.0 * h(1.0) + h(1.0 - d)) / (d * d);
        assert_abs_diff_eq!(hpp, -1.0 / 3.0, epsilon = 1e-6);
        // strictly increasing on (0,1)
        let mut prev = h(0.02);
        for i in 1..50 {
            let r = 0.02 + 0.96 * i as f64 / 50.0;
            assert!(h(r) > prev);
            prev = h(r);
        }
    }

    #[test]
    fn c_profile_series_is_continuous() {
        for &s in &[-1.1e-3, -0.9e-3, 0.9e-3, 1.1e-3] {
            let r = 1.0 + s;
            let direct = (1.0 - crate::region::h_profile(r)) / (s * s);
            assert_abs_diff_eq!(c_profile(r), direct, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(c_profile(1.0), 1.0 / 6.0, epsilon = 0.0);
    }

    #[test]
    fn omega_parts_invariants() {
        for &r in &[0.1, 0.5, 1.0, 1.0001, 3.0, 10.0] {
            let p = omega_parts(r).unwrap();
            assert!(p.c > 0.0, "c(r) must be positive at r={r}");
            assert!(p.h > 0.0 && p.h <= 1.0 + 1e-15);
            assert_abs_diff_eq!(p.h, 1.0 - p.c * (r - 1.0) * (r - 1.0), epsilon = 1e-12);
            assert_abs_diff_eq!(p.alpha_tilde, 1.0 + 2.0 * r * p.c, epsilon = 0.0);
            assert_abs_diff_eq!(p.beta_tilde, 1.0 - (r * r + 1.0) * p.c, epsilon = 0.0);
        }
    }

    #[test]
    fn w_routes_agree_at_interior_point() {
        let t = 2.0;
        let th = 0.7;
        let w1 = w_of_theta(t, th, Route::Omega).unwrap();
        let w2 = w_of_theta(t, th, Route::ThetaDerivative).unwrap();
        let w3 = w_of_theta(t, th, Route::PhiJacobian).unwrap();
        assert_abs_diff_eq!(w1, w2, epsilon = 1e-6);
        assert_abs_diff_eq!(w1, w3, epsilon = 1e-6);
        assert_abs_diff_eq!(w2, w3, epsilon = 1e-6);
    }

    #[test]
    fn w_asymptotics_spot_checks() {
        // small t: πt·w ≈ 1 at θ = 0
        let w = w_of_theta(0.1, 0.0, Route::Omega).unwrap();
        assert!((PI * 0.1 * w - 1.0).abs() < 0.05);
        // large t: 2πt·w ≈ 1 at θ = π
        let w = w_of_theta(20.0, PI, Route::Omega).unwrap();
        assert!((2.0 * PI * 20.0 * w - 1.0).abs() < 0.05);
        // t = 4: w → 0 toward the closing angle
        let w = w_of_theta(4.0, PI - 1e-6, Route::Omega).unwrap();
        assert!(w >= 0.0 && w < 1e-4, "w_4 near π should vanish, got {w}");
    }

    #[test]
    fn brown_density_anchors() {
        let p = |r, th| PolarPoint::new(r, th).unwrap();
        // outside point: T(3,0) ≈ 1.0986 > 1
        let (v, m) = brown_density(1.0, p(3.0, 0.0)).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(m, Membership::Outside);
        // reciprocal radii share w_t, so densities differ by r⁴
        let r = 1.7;
        let (vout, _) = brown_density(2.0, p(r, 0.4)).unwrap();
        let (vin, _) = brown_density(2.0, p(1.0 / r, 0.4)).unwrap();
        assert_abs_diff_eq!(vin / vout, r.powi(4), epsilon = 1e-9);
        // r = 1: W = w
        let (v, _) = brown_density(2.0, p(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v, w_of_theta(2.0, 0.0, Route::Omega).unwrap(), epsilon = 1e-15);
    }

    #[test]
    fn angular_marginal_evenness_and_cutoff() {
        assert_eq!(angular_marginal(4.0, PI).unwrap(), 0.0);
        assert_eq!(angular_marginal(4.0, -PI).unwrap(), 0.0);
        for &th in &[0.2, 0.9, 1.4] {
            let a = angular_marginal(2.0, th).unwrap();
            let b = angular_marginal(2.0, -th).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            assert!(a > 0.0);
        }
        assert!(angular_marginal(2.0, 2.0).is_err());
    }

    #[test]
    fn total_mass_is_one() {
        for &t in &[0.5, 1.0, 2.0, 7.0] {
            let m = total_mass(t, 64).unwrap();
            assert!((m - 1.0).abs() <= 1e-6, "mass at t={t}: {m}");
        }
        let m = total_mass(4.0, 64).unwrap();
        assert!((m - 1.0).abs() <= 1e-5, "mass at t=4: {m}");
    }

    #[test]
    fn total_mass_against_adaptive_simpson_oracle() {
        // independent adaptive Simpson on a_t over the open wedge
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth > 28 || (left + right - whole).abs() < 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                simpson(f, a, m, fa, flm, fm, tol / 2.0, depth + 1)
                    + simpson(f, m, b, fm, frm, fb, tol / 2.0, depth + 1)
            }
        }
        let t = 2.0;
        let tm = theta_max(t).unwrap();
        let f = |th: f64| angular_marginal(t, th).unwrap();
        let hi = tm * (1.0 - 1e-12);
        let oracle = 2.0 * simpson(&f, 0.0, hi, f(0.0), f(0.5 * hi), f(hi), 1e-9, 0);
        let got = total_mass(t, 64).unwrap();
        assert_abs_diff_eq!(got, oracle, epsilon = 1e-6);
        assert_abs_diff_eq!(got, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn half_mass_split_radial_integrals() {
        // ∫_{1/r_t}^{1} r^{-2}·r dr = ∫_{1}^{r_t} r^{-2}·r dr = log r_t
        let (nodes, weights) = gauss_legendre(32);
        let r_t = outer_radius(2.0, 0.3).unwrap();
        let mut f = |r: f64| 1.0 / r;
        let inner = integrate_gl(&mut f, 1.0 / r_t, 1.0, &nodes, &weights);
        let outer = integrate_gl(&mut f, 1.0, r_t, &nodes, &weights);
        assert_abs_diff_eq!(inner, r_t.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(outer, r_t.ln(), epsilon = 1e-12);
    }

    #[test]
    fn density_grid_shape() {
        let g = DensityGrid::build(2.0, 64, Route::Omega).unwrap();
        assert_eq!(g.rows.len(), 64);
        for w in g.rows.windows(2) {
            assert!(w[0].theta < w[1].theta);
        }
        for row in &g.rows {
            assert!(row.w_t >= 0.0);
            assert_abs_diff_eq!(row.a_t, 2.0 * row.r_t.ln() * row.w_t, epsilon = 1e-15);
        }
        let g = DensityGrid::build(4.1, 64, Route::Omega).unwrap();
        assert_eq!(g.rows.len(), 64);
        assert!(g.rows.last().unwrap().theta <= PI + 1e-12);
    }

    proptest! {
        #[test]
        fn omega_bounds_and_inversion(loge in -2.5f64..2.5, th in -3.141f64..3.141) {
            let r = loge.exp();
            let w = omega(r, th).unwrap();
            prop_assert!((-1e-12..=2.0 + 1e-12).contains(&w));
            let winv = omega(1.0 / r, th).unwrap();
            prop_assert!((w - winv).abs() <= 1e-12 * (1.0 + w.abs()));
            let h = crate::region::h_profile(r);
            prop_assert!(w >= 1.0 - h - 1e-12 && w <= 1.0 + h + 1e-12);
        }
    }
}
