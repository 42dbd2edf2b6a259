//! Geometry of the support region `Σ_t = { λ : T(λ) < t }`.
//!
//! The gobbling time `T(r,θ) = (r² + 1 - 2r·cosθ)·log(r²)/(r² - 1)` is, for
//! each angle, strictly decreasing in `r` on `(0,1)` and strictly increasing
//! on `(1,∞)` with minimum `2 - 2cosθ` at `r = 1`.  A ray at angle θ meets
//! `Σ_t` in the interval `1/r_t(θ) < r < r_t(θ)`; the outer radius is the
//! unique root of `T(·,θ) = t` above 1, found by bracketed bisection
//! followed by safeguarded Newton steps on the closed-form `∂T/∂r`.

use crate::numerics::{log_ratio, normalize_angle};
use crate::{Error, Result};
use num_complex::Complex64;

/// Default relative tolerance for boundary root finding.
pub const ROOT_TOL: f64 = 1e-12;
/// Default absolute band around `T = t` classified as boundary.
pub const MEMBERSHIP_BAND: f64 = 1e-9;
/// Bisection runs until the bracket is this wide, then Newton takes over.
const BISECT_WIDTH: f64 = 1e-8;

/// A nonzero point of the plane in polar form, angle normalized to `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    r: f64,
    theta: f64,
}

impl PolarPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("polar radius must be positive, got {r}")));
        }
        Ok(Self { r, theta: normalize_angle(theta) })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.norm(), z.arg())
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Membership of a point relative to the closed region at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

/// Gobbling time in polar coordinates.  Defined for all `r > 0`.
pub fn gobbling_time_polar(r: f64, theta: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("gobbling time needs r > 0, got {r}")));
    }
    Ok((r * r + 1.0 - 2.0 * r * theta.cos()) * log_ratio(r * r))
}

/// Gobbling time of a point: the time at which the growing region absorbs it.
pub fn gobbling_time(p: PolarPoint) -> f64 {
    (p.r * p.r + 1.0 - 2.0 * p.r * p.theta.cos()) * log_ratio(p.r * p.r)
}

/// `h(r) = r·log(r²)/(r²-1)`, the radial profile behind both `T` and ω.
pub(crate) fn h_profile(r: f64) -> f64 {
    r * log_ratio(r * r)
}

/// `h'(r)`, series near `r = 1` where the closed form cancels.
pub(crate) fn h_profile_deriv(r: f64) -> f64 {
    let s = r - 1.0;
    if s.abs() < 1e-3 {
        // from the Taylor expansion of h at r = 1
        s * (-1.0 / 3.0 + s * (0.5 + s * (-8.0 / 15.0 + s * (0.5 + s * (-31.0 / 70.0 + s * 23.0 / 60.0)))))
    } else {
        let r2 = r * r;
        2.0 / (r2 - 1.0) - (r2 + 1.0) / (r * (r2 - 1.0)) * h_profile(r)
    }
}

/// `∂T/∂r`, stable through `r = 1` via `h` and `h'`.
pub(crate) fn gobbling_time_dr(r: f64, theta: f64) -> f64 {
    (1.0 - 1.0 / (r * r)) * h_profile(r) + (r + 1.0 / r - 2.0 * theta.cos()) * h_profile_deriv(r)
}

/// Angular half-extent of the region: `arccos(1 - t/2)` for `t ≤ 4`, else π.
pub fn theta_max(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("theta_max needs t > 0, got {t}")));
    }
    Ok(if t <= 4.0 { (1.0 - t / 2.0).acos() } else { std::f64::consts::PI })
}

fn require_in_wedge(t: f64, theta: f64) -> Result<(f64, f64)> {
    let theta = normalize_angle(theta);
    let tm = theta_max(t)?;
    if t <= 4.0 && theta.abs() >= tm {
        return Err(Error::OutOfWedge { t, theta, theta_max: tm });
    }
    Ok((theta, tm))
}

/// Outer boundary radius `r_t(θ) > 1`, the root of `T(·,θ) = t`.
///
/// The companion inner radius is `1/r_t(θ)`.
pub fn outer_radius(t: f64, theta: f64) -> Result<f64> {
    outer_radius_tol(t, theta, ROOT_TOL)
}

/// [`outer_radius`] with an explicit relative tolerance.
pub fn outer_radius_tol(t: f64, theta: f64, tol: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("outer_radius needs t > 0, got {t}")));
    }
    let (theta, _) = require_in_wedge(t, theta)?;

    // T(1,θ) = 2-2cosθ < t inside the wedge, so r = 1 brackets from below.
    let mut lo = 1.0f64;
    let mut hi = (t / 2.0).exp() + 2.0;
    let mut grow = 0;
    while gobbling_time_polar(hi, theta)? < t {
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(Error::NonConvergence { context: format!("outer_radius bracket growth at t={t}, θ={theta}"), lo, hi });
        }
    }
    while hi - lo > BISECT_WIDTH {
        let mid = 0.5 * (lo + hi);
        if gobbling_time_polar(mid, theta)? < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut r = 0.5 * (lo + hi);
    for _ in 0..5 {
        let f = gobbling_time_polar(r, theta)? - t;
        let d = gobbling_time_dr(r, theta);
        if d <= 0.0 {
            break;
        }
        let next = r - f / d;
        if !next.is_finite() || next <= lo || next >= hi {
            break;
        }
        if (next - r).abs() <= tol * r {
            r = next;
            break;
        }
        r = next;
    }
    Ok(r)
}

/// Outer radius extended to the closed wedge: the cutoff angles (t ≤ 4)
/// get their limiting value 1.
pub(crate) fn outer_radius_clamped(t: f64, theta: f64) -> Result<f64> {
    let theta = normalize_angle(theta);
    let tm = theta_max(t)?;
    if t <= 4.0 {
        if theta.abs() > tm + 1e-12 {
            return Err(Error::OutOfWedge { t, theta, theta_max: tm });
        }
        if theta.abs() >= tm * (1.0 - 1e-14) {
            return Ok(1.0);
        }
    }
    outer_radius(t, theta)
}

/// Classify a point against the region at time `t` with the default band.
pub fn contains(t: f64, p: PolarPoint) -> Result<Membership> {
    contains_band(t, p, MEMBERSHIP_BAND)
}

/// [`contains`] with an explicit absolute band on `|T - t|`.
pub fn contains_band(t: f64, p: PolarPoint, band: f64) -> Result<Membership> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("contains needs t > 0, got {t}")));
    }
    let tval = gobbling_time(p);
    Ok(if tval < t - band {
        Membership::Inside
    } else if tval <= t + band {
        Membership::Boundary
    } else {
        Membership::Outside
    })
}

/// Sampled outer boundary of the region at time `t`.
#[derive(Debug, Clone)]
pub struct RegionBoundary {
    pub t: f64,
    pub theta_max: f64,
    /// `(θ, r_t(θ))` pairs in increasing θ.  Cutoff angles are excluded.
    pub samples: Vec<(f64, f64)>,
    /// Limiting radius at `θ = ±θ_max`, recorded separately (t ≤ 4 only).
    pub cutoff_radius: Option<f64>,
    pub tol: f64,
}

/// Sample the outer boundary on `n` angles.
///
/// For `t ≤ 4` the grid is Chebyshev-spaced on the open wedge, clustering
/// near the cutoff where `r_t'(θ)` blows up; the cutoff limit `r = 1` is
/// recorded separately.  For `t > 4` the grid is uniform on `(-π, π]`.
pub fn sample_boundary(t: f64, n: usize) -> Result<RegionBoundary> {
    if n < 16 {
        return Err(Error::Config(format!("boundary grid needs n ≥ 16, got {n}")));
    }
    let tm = theta_max(t)?;
    let mut thetas: Vec<f64> = if t <= 4.0 {
        (0..n).map(|i| tm * (std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * n as f64)).cos()).collect()
    } else {
        let step = 2.0 * std::f64::consts::PI / n as f64;
        (0..n).map(|i| -std::f64::consts::PI + (i as f64 + 1.0) * step).collect()
    };
    thetas.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());

    let mut samples = Vec::with_capacity(n);
    for theta in thetas {
        samples.push((theta, outer_radius(t, theta)?));
    }
    Ok(RegionBoundary {
        t,
        theta_max: tm,
        samples,
        cutoff_radius: if t <= 4.0 { Some(1.0) } else { None },
        tol: ROOT_TOL,
    })
}

impl RegionBoundary {
    /// Largest residual `|T(r,θ) - t|` over the samples, for audits.
    pub fn max_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(|&(theta, r)| (gobbling_time_polar(r, theta).unwrap() - self.t).abs())
            .fold(0.0, f64::max)
    }
}
