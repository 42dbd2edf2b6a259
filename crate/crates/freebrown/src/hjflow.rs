//! Hamilton-Jacobi characteristics of the regularized log-determinant.
//!
//! The function `S(t,λ,x)` behind the Brown measure satisfies a first-order
//! PDE whose characteristic system is Hamiltonian in the six variables
//! `(a, b, x, p_a, p_b, p_x)` with
//!
//! ```text
//! H = -x·p_x·(1 + (a²+b²)·p_x - x·p_x - a·p_a - b·p_b)
//! ```
//!
//! The system solves in closed form.  With `p0 = 1/(|λ0-1|²+x0)`,
//! `δ = (|λ0|²+1+x0)/|λ0|`, `C = p0(|λ0|²-1+x0)` and
//! `a² = C²/4 + x0·p0²`, the momentum `p_x` is a ratio of hyperbolic
//! polynomials `p0·e^{-Ct}·N(t)/D(t)` which blows up at a finite lifetime
//! `t*`.  This module provides the closed forms, the lifetime and its
//! inverse (the `x0` producing a prescribed lifetime), the time-`t`
//! transport map λ0 ↦ λ_t and its inverse, an RK4 integrator used as a
//! numerical cross-check, the value function `s_t`, and a finite-difference
//! residual of the original PDE evaluated through the characteristic chart.

use crate::numerics::{cosh_even, delta_log_factor, normalize_angle, sinhc_even};
use crate::region::{contains, gobbling_time, outer_radius, theta_max, Membership, PolarPoint};
use crate::{Error, Result};
use num_complex::Complex64;

/// State of the characteristic system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HJState {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p_x: f64,
}

/// Conserved and closed-form quantities attached to an initial condition.
#[derive(Debug, Clone, Copy)]
pub struct HJConstants {
    /// `1/(|λ0-1|² + x0)`, the initial `p_x`.
    pub p0: f64,
    /// `(|λ0|² + 1 + x0)/|λ0|`; at least 2 when `x0 ≥ 0`.
    pub delta: f64,
    /// `p0·(|λ0|² - 1 + x0) = 2Ψ - 1`.
    pub c: f64,
    /// `x·p_x + (a·p_a + b·p_b)/2`, constant along trajectories.
    pub psi: f64,
    /// Value of the Hamiltonian, `-x0·p0²`.
    pub h0: f64,
    /// `p0 + C/2`.
    pub y0: f64,
    /// `C²/4 + x0·p0²`; the square of the hyperbolic rate.
    pub a_sq: f64,
    pub lambda0_abs: f64,
    pub theta0: f64,
    pub x0: f64,
}

impl HJConstants {
    pub fn new(lambda0: Complex64, x0: f64) -> Result<Self> {
        if lambda0 == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain("characteristic initial conditions need λ0 ≠ 0".into()));
        }
        if x0 < 0.0 {
            return Err(Error::Domain(format!("regularization parameter must satisfy x0 ≥ 0, got {x0}")));
        }
        let r0 = lambda0.norm();
        let p0 = 1.0 / ((lambda0 - Complex64::new(1.0, 0.0)).norm_sqr() + x0);
        let c = p0 * (r0 * r0 - 1.0 + x0);
        Ok(Self {
            p0,
            delta: (r0 * r0 + 1.0 + x0) / r0,
            c,
            psi: 0.5 * (c + 1.0),
            h0: -x0 * p0 * p0,
            y0: p0 + 0.5 * c,
            a_sq: 0.25 * c * c + x0 * p0 * p0,
            lambda0_abs: r0,
            theta0: lambda0.arg(),
            x0,
        })
    }

    /// Numerator and denominator of the hyperbolic ratio in `p_x(t)`,
    /// evaluated as even analytic functions of the rate.
    fn hyperbolic_nd(&self, t: f64) -> (f64, f64) {
        let q = self.a_sq * t * t;
        let ch = cosh_even(q);
        // sinh(at)/γ = (p0·r0·t/2)·sinh(at)/(at)
        let e = 0.5 * self.p0 * self.lambda0_abs * t * sinhc_even(q);
        let n = ch + (2.0 * self.lambda0_abs - self.delta) * e;
        let d = ch - self.delta * e;
        (n, d)
    }

    /// Blow-up time of `p_x`.
    pub fn t_star(&self) -> f64 {
        (self.delta - 2.0 * self.theta0.cos()) * delta_log_factor(self.delta)
    }

    /// `log|λ(t)| - log|λ0| = C·t/2 - log N(t)` along the trajectory.
    fn log_radius_shift(&self, t: f64) -> f64 {
        let (n, _) = self.hyperbolic_nd(t);
        0.5 * self.c * t - n.ln()
    }
}

/// The Hamiltonian of the characteristic system.
pub fn hamiltonian(s: &HJState) -> f64 {
    -s.x * s.p_x * (1.0 + (s.a * s.a + s.b * s.b) * s.p_x - s.x * s.p_x - s.a * s.p_a - s.b * s.p_b)
}

/// Angular momentum `a·p_b - b·p_a`, conserved.
pub fn angular_momentum(s: &HJState) -> f64 {
    s.a * s.p_b - s.b * s.p_a
}

/// The scaling generator `Ψ = x·p_x + (a·p_a + b·p_b)/2`, conserved.
pub fn psi_invariant(s: &HJState) -> f64 {
    s.x * s.p_x + 0.5 * (s.a * s.p_a + s.b * s.p_b)
}

/// Initial state and cached constants for `(λ0, x0)`.
///
/// The initial momenta are the gradient of `log(|λ-1|² + x)` at the initial
/// point: `p_a = 2(a0-1)p0`, `p_b = 2b0·p0`, `p_x = p0`.
pub fn init_state(lambda0: Complex64, x0: f64) -> Result<(HJState, HJConstants)> {
    let consts = HJConstants::new(lambda0, x0)?;
    let p0 = consts.p0;
    Ok((
        HJState {
            t: 0.0,
            a: lambda0.re,
            b: lambda0.im,
            x: x0,
            p_a: 2.0 * (lambda0.re - 1.0) * p0,
            p_b: 2.0 * lambda0.im * p0,
            p_x: p0,
        },
        consts,
    ))
}

/// Closed-form `p_x(t)`; errors at or past the blow-up time.
pub fn px_closed_form(consts: &HJConstants, t: f64) -> Result<f64> {
    let (n, d) = consts.hyperbolic_nd(t);
    if d <= 0.0 {
        return Err(Error::PastBlowup { t, t_star: consts.t_star() });
    }
    Ok(consts.p0 * (-consts.c * t).exp() * n / d)
}

/// Lifetime of the characteristic starting at `(λ0, x0)`.
///
/// Equals the gobbling time `T(λ0)` when `x0 = 0` and is strictly
/// increasing in `x0`.
pub fn t_star(lambda0: Complex64, x0: f64) -> Result<f64> {
    Ok(HJConstants::new(lambda0, x0)?.t_star())
}

/// The lifetime as a function of the combined parameter δ at angle θ0:
/// `(δ - 2cosθ0)·log((δ+√(δ²-4))/(δ-√(δ²-4)))/√(δ²-4)`, value
/// `2 - 2cosθ0` at δ = 2.
pub fn g_of_delta(theta0: f64, delta: f64) -> Result<f64> {
    if delta < 2.0 {
        return Err(Error::Domain(format!("g is defined for δ ≥ 2, got {delta}")));
    }
    Ok((delta - 2.0 * theta0.cos()) * delta_log_factor(delta))
}

/// The regularization strength whose characteristic from `λ0` lives exactly
/// until time `t`: `x0 = |λ0|·((R²+1)/R - (|λ0|²+1)/|λ0|)` with `R = r_t(arg λ0)`.
///
/// Requires `λ0` in the closed region (gives 0 on the boundary).
pub fn x0_for_lifetime(t: f64, lambda0: Complex64) -> Result<f64> {
    let p = PolarPoint::from_complex(lambda0)?;
    if contains(t, p)? == Membership::Outside {
        return Err(Error::OutsideDomain { t, re: lambda0.re, im: lambda0.im });
    }
    let r0 = p.r();
    let big_r = outer_radius(t, p.theta())?;
    let x0 = r0 * ((big_r * big_r + 1.0) / big_r - (r0 * r0 + 1.0) / r0);
    // boundary round-off can land marginally negative
    Ok(x0.max(0.0))
}

/// Endpoint of the characteristic from `λ0` run to its lifetime `t`:
/// the argument is preserved and the radius moves to
/// `|λ0|·exp((t/2)(|λ0|²-1+x0)/(|λ0-1|²+x0))` with `x0 = x0_for_lifetime`.
///
/// Fixes the boundary pointwise and is a bijection of the closed region.
pub fn lambda_t_map(t: f64, lambda0: Complex64) -> Result<Complex64> {
    let x0 = x0_for_lifetime(t, lambda0)?;
    let consts = HJConstants::new(lambda0, x0)?;
    let modulus = consts.lambda0_abs * (0.5 * consts.c * t).exp();
    Ok(Complex64::from_polar(modulus, consts.theta0))
}

/// Inverse of [`lambda_t_map`] by radial monotone bisection at fixed argument.
pub fn inverse_lambda_t(t: f64, lambda: Complex64) -> Result<Complex64> {
    let p = PolarPoint::from_complex(lambda)?;
    if contains(t, p)? == Membership::Outside {
        return Err(Error::OutsideDomain { t, re: lambda.re, im: lambda.im });
    }
    let theta = p.theta();
    let big_r = outer_radius(t, theta)?;
    let target = p.r().ln();
    let mut lo = 1.0 / big_r;
    let mut hi = big_r;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let v = lambda_t_map(t, Complex64::from_polar(mid, theta))?.norm().ln();
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(Complex64::from_polar(0.5 * (lo + hi), theta))
}

/// One recorded step of an integrated trajectory.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryRow {
    pub t: f64,
    pub state: HJState,
    pub hamiltonian: f64,
    pub angular_momentum: f64,
    pub psi: f64,
    /// `x·p_x²`, which should decay as `x0·p0²·e^{-Ct}`.
    pub xpx2: f64,
    /// Running integral `∫ x·p_x ds = log|λ(s)| - log|λ0|`.
    pub log_radius_shift: f64,
}

/// An RK4 trajectory of the characteristic system.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub constants: HJConstants,
    pub rows: Vec<TrajectoryRow>,
}

// Hamilton's equations, derived from H above; the seventh component carries
// the running ∫ x·p_x ds.
fn rhs(y: &[f64; 7]) -> [f64; 7] {
    let [a, b, x, pa, pb, px, _] = *y;
    let xpx = x * px;
    let r2 = a * a + b * b;
    [
        a * xpx,
        b * xpx,
        -x - 2.0 * x * r2 * px + 2.0 * x * x * px + x * (a * pa + b * pb),
        2.0 * a * x * px * px - xpx * pa,
        2.0 * b * x * px * px - xpx * pb,
        px + r2 * px * px - 2.0 * x * px * px - px * (a * pa + b * pb),
        xpx,
    ]
}

/// Classical RK4 on the characteristic system from an initial state.
///
/// `dt` is the base step; it is reduced eightfold past 90% of the lifetime
/// where the momenta steepen.  `t_end` must stay strictly below the
/// blow-up time.
pub fn integrate(s0: &HJState, t_end: f64, dt: f64) -> Result<Trajectory> {
    if s0.t != 0.0 {
        return Err(Error::Config("integration starts from a t = 0 state".into()));
    }
    let lambda0 = Complex64::new(s0.a, s0.b);
    let consts = HJConstants::new(lambda0, s0.x)?;
    let ts = consts.t_star();
    if !(t_end > 0.0) || t_end >= ts * (1.0 - 1e-9) {
        return Err(Error::PastBlowup { t: t_end, t_star: ts });
    }
    if !(dt > 0.0) {
        return Err(Error::Config(format!("step size must be positive, got {dt}")));
    }

    let mut y = [s0.a, s0.b, s0.x, s0.p_a, s0.p_b, s0.p_x, 0.0];
    let mut t = 0.0;
    let mut rows = Vec::with_capacity((t_end / dt) as usize + 8);
    let push = |rows: &mut Vec<TrajectoryRow>, t: f64, y: &[f64; 7]| {
        let state = HJState { t, a: y[0], b: y[1], x: y[2], p_a: y[3], p_b: y[4], p_x: y[5] };
        rows.push(TrajectoryRow {
            t,
            state,
            hamiltonian: hamiltonian(&state),
            angular_momentum: angular_momentum(&state),
            psi: psi_invariant(&state),
            xpx2: state.x * state.p_x * state.p_x,
            log_radius_shift: y[6],
        });
    };
    push(&mut rows, t, &y);
    while t < t_end - 1e-15 * t_end {
        let mut h = if t > 0.9 * ts { dt / 8.0 } else { dt };
        if t + h > t_end {
            h = t_end - t;
        }
        if h < 1e-18 * ts {
            return Err(Error::StepUnderflow { t });
        }
        let k1 = rhs(&y);
        let k2 = rhs(&add_scaled(&y, &k1, 0.5 * h));
        let k3 = rhs(&add_scaled(&y, &k2, 0.5 * h));
        let k4 = rhs(&add_scaled(&y, &k3, h));
        for i in 0..7 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
        push(&mut rows, t, &y);
    }
    Ok(Trajectory { constants: consts, rows })
}

fn add_scaled(y: &[f64; 7], k: &[f64; 7], h: f64) -> [f64; 7] {
    let mut out = *y;
    for i in 0..7 {
        out[i] += h * k[i];
    }
    out
}

/// Value of `S` transported along the characteristic from `(λ0, x0)`:
///
/// `S = log(|λ0-1|²+x0) - x0·t/(|λ0-1|²+x0)² + log|λ(t)| - log|λ0|`,
///
/// with the radius shift in closed form.  At `t = t*` the shift limit
/// `C·t*/2 - log|λ0|` is used.
pub fn hj_value_s(t: f64, lambda0: Complex64, x0: f64) -> Result<f64> {
    let consts = HJConstants::new(lambda0, x0)?;
    let ts = consts.t_star();
    if t > ts * (1.0 + 1e-12) {
        return Err(Error::PastBlowup { t, t_star: ts });
    }
    let shift = if t >= ts * (1.0 - 1e-12) {
        0.5 * consts.c * ts - consts.lambda0_abs.ln()
    } else {
        consts.log_radius_shift(t)
    };
    Ok(-(consts.p0.ln()) - x0 * t * consts.p0 * consts.p0 + shift)
}

/// The regularized potential `s_t(λ) = lim_{x→0⁺} S(t,λ,x)`.
///
/// Outside the closed region this is `log|λ-1|²` (the flow leaves such
/// points untouched); inside it is the characteristic value evaluated at
/// the lifetime through the inverse transport chart.  On the boundary both
/// expressions take the same value, which is what this returns.
pub fn s_t(t: f64, lambda: Complex64) -> Result<f64> {
    let p = PolarPoint::from_complex(lambda)?;
    match contains(t, p)? {
        Membership::Outside | Membership::Boundary => {
            Ok((lambda - Complex64::new(1.0, 0.0)).norm_sqr().ln())
        }
        Membership::Inside => {
            let lambda0 = inverse_lambda_t(t, lambda)?;
            let x0 = x0_for_lifetime(t, lambda0)?;
            hj_value_s(t, lambda0, x0)
        }
    }
}

// ---------------------------------------------------------------------------
// Chart inversion at positive regularization.

/// Time-`t` image `(|λ(t)|, x(t))` of `(r0·e^{iθ}, x0)` under the flow,
/// in closed form; only meaningful before the blow-up time.
fn flow_forward(theta0: f64, r0: f64, x0: f64, t: f64) -> Result<(f64, f64)> {
    let consts = HJConstants::new(Complex64::from_polar(r0, theta0), x0)?;
    let (n, d) = consts.hyperbolic_nd(t);
    let r = r0 * (0.5 * consts.c * t).exp() / n;
    let x = x0 * (consts.c * t).exp() * (d / n) * (d / n);
    Ok((r, x))
}

/// Solve `flow_forward(θ, r0, x0, t) = (r_target, x_target)` for `(r0, x0)`.
///
/// The valid chart is `{ t < t*(r0·e^{iθ}, x0) }`.  The initial guess is the
/// target itself when that is valid; otherwise the zero-regularization chart
/// point (whose lifetime is exactly `t`) lifted off the blow-up locus by a
/// 1-D search in `x0` until the flowed `x(t)` reaches the target.  A damped
/// Newton iteration with a finite-difference Jacobian finishes.
fn invert_flow(
    t: f64,
    theta: f64,
    r_target: f64,
    x_target: f64,
    guess: Option<(f64, f64)>,
) -> Result<(f64, f64)> {
    if !(x_target > 0.0) {
        return Err(Error::Domain(format!("chart inversion needs x > 0, got {x_target}")));
    }
    let valid = |r0: f64, x0: f64| -> bool {
        r0 > 0.0
            && x0 > 0.0
            && HJConstants::new(Complex64::from_polar(r0, theta), x0)
                .map(|c| t < c.t_star())
                .unwrap_or(false)
    };
    let log_rt = r_target.ln();
    let residual = |r0: f64, x0: f64| -> Result<[f64; 2]> {
        let (r, x) = flow_forward(theta, r0, x0, t)?;
        Ok([r.ln() - log_rt, x - x_target])
    };

    let (mut r0, mut x0) = match guess {
        Some(g) if valid(g.0, g.1) => g,
        _ => {
            if valid(r_target, x_target) {
                (r_target, x_target)
            } else {
                // start on the zero-regularization chart and lift
                let lam0 = inverse_lambda_t(t, Complex64::from_polar(r_target, theta))?;
                let r0 = lam0.norm();
                let x_line = x0_for_lifetime(t, lam0)?;
                let mut d = 1e-6 * (1.0 + x_line);
                let mut grow = 0;
                while !(valid(r0, x_line + d) && flow_forward(theta, r0, x_line + d, t)?.1 >= x_target) {
                    d *= 2.0;
                    grow += 1;
                    if grow > 80 {
                        return Err(Error::NonConvergence {
                            context: format!("chart lift at t={t}, θ={theta}"),
                            lo: x_line,
                            hi: x_line + d,
                        });
                    }
                }
                let (mut lo, mut hi) = (0.0, d);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if valid(r0, x_line + mid) && flow_forward(theta, r0, x_line + mid, t)?.1 < x_target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                (r0, x_line + 0.5 * (lo + hi))
            }
        }
    };

    let mut f = residual(r0, x0)?;
    for _ in 0..100 {
        let norm = f[0].hypot(f[1]);
        if norm < 1e-13 * (1.0 + x_target.abs() + log_rt.abs()) {
            return Ok((r0, x0));
        }
        let dr = 1e-7 * r0.max(1e-3);
        let dx = 1e-7 * x0.max(1e-8);
        let fr_p = residual(r0 + dr, x0)?;
        let fr_m = residual(r0 - dr, x0)?;
        let fx_p = residual(r0, x0 + dx)?;
        let fx_m = residual(r0, x0 - dx)?;
        let j00 = (fr_p[0] - fr_m[0]) / (2.0 * dr);
        let j10 = (fr_p[1] - fr_m[1]) / (2.0 * dr);
        let j01 = (fx_p[0] - fx_m[0]) / (2.0 * dx);
        let j11 = (fx_p[1] - fx_m[1]) / (2.0 * dx);
        let det = j00 * j11 - j01 * j10;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let step_r = (f[0] * j11 - f[1] * j01) / det;
        let step_x = (j00 * f[1] - j10 * f[0]) / det;
        let mut damp = 1.0;
        let mut advanced = false;
        for _ in 0..50 {
            let rn = r0 - damp * step_r;
            let xn = x0 - damp * step_x;
            if valid(rn, xn) {
                if let Ok(fn_) = residual(rn, xn) {
                    if fn_[0].hypot(fn_[1]) < norm {
                        r0 = rn;
                        x0 = xn;
                        f = fn_;
                        advanced = true;
                        break;
                    }
                }
            }
            damp *= 0.5;
        }
        if !advanced {
            break;
        }
    }
    let norm = f[0].hypot(f[1]);
    if norm < 1e-9 {
        Ok((r0, x0))
    } else {
        Err(Error::NonConvergence { context: format!("chart inversion at t={t}, θ={theta}, residual {norm:.3e}"), lo: r0, hi: x0 })
    }
}

/// `S(t, λ, x)` for `x > 0`, evaluated through the characteristic chart.
pub fn s_value(t: f64, lambda: Complex64, x: f64) -> Result<f64> {
    Ok(s_value_with_guess(t, lambda, x, None)?.0)
}

/// As [`s_value`], returning the chart preimage for warm starts.
pub fn s_value_with_guess(
    t: f64,
    lambda: Complex64,
    x: f64,
    guess: Option<(f64, f64)>,
) -> Result<(f64, (f64, f64))> {
    let theta = normalize_angle(lambda.arg());
    let (r0, x0) = invert_flow(t, theta, lambda.norm(), x, guess)?;
    let value = hj_value_s(t, Complex64::from_polar(r0, theta), x0)?;
    Ok((value, (r0, x0)))
}

/// Central-difference residual of the PDE
/// `∂S/∂t = x·S_x·(1 + (a²+b²)·S_x - x·S_x - a·S_a - b·S_b)`
/// at `(t, λ, x)` with step `h`, all values produced through the chart.
pub fn pde_residual(t: f64, lambda: Complex64, x: f64, h: f64) -> Result<f64> {
    if !(x - h > 0.0) {
        return Err(Error::Domain(format!("stencil leaves x > 0: x = {x}, h = {h}")));
    }
    if !(t - h > 0.0) {
        return Err(Error::Domain(format!("stencil leaves t > 0: t = {t}, h = {h}")));
    }
    let (_, warm) = s_value_with_guess(t, lambda, x, None)?;
    let s = |tt: f64, ll: Complex64, xx: f64| -> Result<f64> {
        Ok(s_value_with_guess(tt, ll, xx, Some(warm))?.0)
    };
    let ea = Complex64::new(h, 0.0);
    let eb = Complex64::new(0.0, h);
    let s_t = (s(t + h, lambda, x)? - s(t - h, lambda, x)?) / (2.0 * h);
    let s_x = (s(t, lambda, x + h)? - s(t, lambda, x - h)?) / (2.0 * h);
    let s_a = (s(t, lambda + ea, x)? - s(t, lambda - ea, x)?) / (2.0 * h);
    let s_b = (s(t, lambda + eb, x)? - s(t, lambda - eb, x)?) / (2.0 * h);
    let (a, b) = (lambda.re, lambda.im);
    let rhs = x * s_x * (1.0 + (a * a + b * b) * s_x - x * s_x - a * s_a - b * s_b);
    Ok((s_t - rhs).abs())
}

/// Gobbling time restated for trajectory tests.
pub fn lifetime_at_zero_regularization(lambda0: Complex64) -> Result<f64> {
    gobbling_time(PolarPoint::from_complex(lambda0)?);
    t_star(lambda0, 0.0)
}

/// Convenience wedge accessor shared with tests.
pub fn wedge_half_angle(t: f64) -> Result<f64> {
    theta_max(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hamiltonian_anchors() {
        // value at an initial state is -x0·p0²
        let (s, c) = init_state(c64(2.0, 0.0), 1.0).unwrap();
        assert_abs_diff_eq!(c.p0, 0.5, epsilon = 0.0);
        assert_abs_diff_eq!(hamiltonian(&s), -0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(c.h0, -0.25, epsilon = 1e-15);
        // overall factor x
        let mut s2 = s;
        s2.x = 0.0;
        assert_eq!(hamiltonian(&s2), 0.0);
    }

    #[test]
    fn init_state_anchors() {
        let (s, c) = init_state(c64(1.0, 0.0), 1.0).unwrap();
        assert_eq!((c.p0, s.p_a, s.p_b, s.p_x), (1.0, 0.0, 0.0, 1.0));
        let (_, c) = init_state(c64(0.0, 1.0), 0.0).unwrap();
        assert_abs_diff_eq!(c.p0, 0.5, epsilon = 0.0);
        assert_abs_diff_eq!(c.delta, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.c, 0.0, epsilon = 1e-15);
        let (_, c) = init_state(c64(2.0, 0.0), 1.0).unwrap();
        assert_abs_diff_eq!(c.delta, 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.c, 2.0, epsilon = 1e-15);
        assert!(init_state(c64(0.0, 0.0), 1.0).is_err());
        assert!(init_state(c64(1.0, 0.0), -0.5).is_err());
    }

    #[test]
    fn constants_identities() {
        for &(lam, x0) in &[(c64(2.0, 0.0), 1.0), (c64(0.3, 0.4), 0.7), (c64(0.0, 1.0), 0.0)] {
            let c = HJConstants::new(lam, x0).unwrap();
            // a²/y0² = (δ²-4)/δ²
            assert_abs_diff_eq!(c.a_sq / (c.y0 * c.y0), (c.delta * c.delta - 4.0) / (c.delta * c.delta), epsilon = 1e-13);
            // (δ²-4) - (2|λ0|-δ)² = 4x0
            let gamma2 = c.delta * c.delta - 4.0;
            let m = 2.0 * c.lambda0_abs - c.delta;
            assert_abs_diff_eq!(gamma2 - m * m, 4.0 * x0, epsilon = 1e-12);
            assert!(c.delta >= 2.0);
            assert_abs_diff_eq!(c.psi, 0.5 * (c.c + 1.0), epsilon = 0.0);
        }
    }

    #[test]
    fn px_closed_form_at_zero_and_blowup() {
        let c = HJConstants::new(c64(2.0, 0.0), 1.0).unwrap();
        assert_abs_diff_eq!(px_closed_form(&c, 0.0).unwrap(), c.p0, epsilon = 0.0);
        let ts = c.t_star();
        assert!(px_closed_form(&c, 0.5 * ts).unwrap() > 0.0);
        assert!(matches!(px_closed_form(&c, ts * 1.01), Err(Error::PastBlowup { .. })));
    }

    #[test]
    fn delta_two_reduces_to_riccati_pole() {
        // |λ0| = 1, x0 = 0 gives δ = 2 and lifetime 2-2cosθ0 = 1/y0·(…)
        let lam = Complex64::from_polar(1.0, 1.2);
        let c = HJConstants::new(lam, 0.0).unwrap();
        assert_abs_diff_eq!(c.delta, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.t_star(), 2.0 - 2.0 * 1.2f64.cos(), epsilon = 1e-12);
    }

    #[test]
    fn t_star_anchors() {
        // x0 = 0 reduces to the gobbling time
        for &lam in &[c64(2.0, 0.0), c64(0.3, 0.4), c64(-1.5, 0.2), c64(0.0, 1.0)] {
            let ts = t_star(lam, 0.0).unwrap();
            let tt = gobbling_time(PolarPoint::from_complex(lam).unwrap());
            assert_abs_diff_eq!(ts, tt, epsilon = 1e-12 * (1.0 + tt));
        }
        // explicit value at λ0 = 2, x0 = 1
        let ts = t_star(c64(2.0, 0.0), 1.0).unwrap();
        let want = (3.0f64 - 2.0) / 5.0f64.sqrt() * ((3.0 + 5.0f64.sqrt()) / (3.0 - 5.0f64.sqrt())).ln();
        assert_abs_diff_eq!(ts, want, epsilon = 1e-13);
    }

    #[test]
    fn t_star_monotone_in_x0() {
        for &lam in &[c64(2.0, 0.0), c64(0.5, 0.5), c64(0.0, 1.0)] {
            let mut prev = t_star(lam, 0.0).unwrap();
            for &x0 in &[0.5, 1.0, 2.0, 5.0] {
                let cur = t_star(lam, x0).unwrap();
                assert!(cur > prev, "t* not increasing at λ0={lam}, x0={x0}");
                prev = cur;
            }
        }
    }

    #[test]
    fn g_of_delta_matches_gobbling_time() {
        // g_θ((r²+1)/r) = T(r·e^{iθ})
        for &(r, th) in &[(2.0, 0.7), (0.4, 2.0), (1.3, 0.0)] {
            let g = g_of_delta(th, (r * r + 1.0) / r).unwrap();
            let t = gobbling_time(PolarPoint::new(r, th).unwrap());
            assert_abs_diff_eq!(g, t, epsilon = 1e-12 * (1.0 + t));
        }
        assert_abs_diff_eq!(g_of_delta(0.9, 2.0).unwrap(), 2.0 - 2.0 * 0.9f64.cos(), epsilon = 1e-13);
        assert!(g_of_delta(0.0, 1.9).is_err());
        // log(δ²) growth for large δ
        let big = g_of_delta(0.0, 1.0e6).unwrap();
        assert!((big / (1.0e12f64).ln() - 1.0).abs() < 0.01);
    }

    #[test]
    fn g_monotone_in_delta() {
        for &th in &[0.0, 1.0, PI] {
            let mut prev = g_of_delta(th, 2.0).unwrap();
            for i in 1..40 {
                let d = 2.0 + 0.25 * i as f64;
                let cur = g_of_delta(th, d).unwrap();
                assert!(cur > prev);
                prev = cur;
            }
        }
    }

    #[test]
    fn x0_lifetime_round_trip() {
        for &t in &[1.0, 2.0, 4.0, 7.0] {
            let tm = wedge_half_angle(t).unwrap();
            for i in 0..7 {
                let th = 0.8 * tm * (2.0 * i as f64 / 6.0 - 1.0);
                let big_r = outer_radius(t, th).unwrap();
                let lam0 = Complex64::from_polar(big_r.powf(0.4), th);
                let x0 = x0_for_lifetime(t, lam0).unwrap();
                assert!(x0 > 0.0);
                assert_abs_diff_eq!(t_star(lam0, x0).unwrap(), t, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn x0_lifetime_boundary_and_continuity() {
        let t = 2.0;
        let big_r = outer_radius(t, 0.0).unwrap();
        // on the boundary the lifetime parameter vanishes
        let x0 = x0_for_lifetime(t, c64(big_r, 0.0)).unwrap();
        assert!(x0.abs() <= 1e-9);
        // just inside it is small and positive
        let x0 = x0_for_lifetime(t, c64(big_r - 1e-5, 0.0)).unwrap();
        assert!(x0 > 0.0 && x0 < 1e-3);
        // outside errors
        assert!(x0_for_lifetime(1.0, c64(3.0, 0.0)).is_err());
    }

    #[test]
    fn lambda_t_fixes_boundary_and_preserves_argument() {
        for &t in &[2.0, 4.0, 7.0] {
            let tm = wedge_half_angle(t).unwrap();
            for i in 0..5 {
                let th = 0.9 * tm * (2.0 * i as f64 / 4.0 - 1.0);
                let r = outer_radius(t, th).unwrap();
                let lam = Complex64::from_polar(r, th);
                let moved = lambda_t_map(t, lam).unwrap();
                assert!((moved - lam).norm() <= 1e-9, "boundary moved at t={t}, θ={th}");
                let inner = Complex64::from_polar(r.powf(0.3), th);
                let img = lambda_t_map(t, inner).unwrap();
                assert_abs_diff_eq!(img.arg(), inner.arg(), epsilon = 0.0);
            }
        }
    }

    #[test]
    fn lambda_t_of_one_is_exponential() {
        // the characteristic from λ0 = 1 ends at radius e^{t/2}
        for &t in &[0.5, 2.0, 5.0] {
            let img = lambda_t_map(t, c64(1.0, 0.0)).unwrap();
            assert_abs_diff_eq!(img.norm(), (t / 2.0).exp(), epsilon = 1e-9 * (t / 2.0).exp());
            assert_eq!(img.im, 0.0);
        }
    }

    #[test]
    fn lambda_t_round_trip() {
        for &t in &[1.0, 2.0, 4.0, 7.0] {
            let tm = wedge_half_angle(t).unwrap();
            for i in 0..6 {
                let th = 0.85 * tm * (2.0 * i as f64 / 5.0 - 1.0);
                let big_r = outer_radius(t, th).unwrap();
                for &fr in &[-0.6, 0.0, 0.5, 0.9] {
                    let lam = Complex64::from_polar(big_r.powf(fr), th);
                    let lam0 = inverse_lambda_t(t, lam).unwrap();
                    let back = lambda_t_map(t, lam0).unwrap();
                    assert!((back - lam).norm() <= 1e-8 * (1.0 + lam.norm()), "round trip at t={t}, θ={th}, fr={fr}");
                    assert_eq!(lam0.arg(), lam.arg());
                }
            }
        }
    }

    #[test]
    fn rk4_conserves_invariants() {
        let (s0, c) = init_state(c64(0.5, 0.5), 0.3).unwrap();
        let ts = c.t_star();
        let traj = integrate(&s0, 0.9 * ts, ts / 4096.0).unwrap();
        let first = &traj.rows[0];
        for row in &traj.rows {
            assert!((row.hamiltonian - first.hamiltonian).abs() <= 1e-8 * first.hamiltonian.abs().max(1.0));
            assert!((row.angular_momentum - first.angular_momentum).abs() <= 1e-8 * first.angular_momentum.abs().max(1.0));
            assert!((row.psi - first.psi).abs() <= 1e-8 * first.psi.abs().max(1.0));
            // x·p_x²·e^{Ct} is conserved
            let q = row.xpx2 * (c.c * row.t).exp();
            assert!((q - first.xpx2).abs() <= 1e-8 * first.xpx2.abs().max(1.0));
        }
    }

    #[test]
    fn rk4_matches_px_closed_form() {
        let cases = [(c64(2.0, 0.0), 1.0), (c64(0.5, 0.5), 0.3), (c64(0.0, 1.0), 2.0), (c64(1.5, -0.7), 0.05)];
        for &(lam, x0) in &cases {
            let (s0, c) = init_state(lam, x0).unwrap();
            let ts = c.t_star();
            let traj = integrate(&s0, 0.95 * ts, ts / 4096.0).unwrap();
            let mut worst = 0.0f64;
            for row in &traj.rows {
                let closed = px_closed_form(&c, row.t).unwrap();
                worst = worst.max((row.state.p_x - closed).abs() / closed.abs());
            }
            assert!(worst <= 1e-6, "px mismatch {worst:.2e} for λ0={lam}, x0={x0}");
        }
    }

    #[test]
    fn rk4_x_matches_closed_form_and_vanishes() {
        let (s0, c) = init_state(c64(2.0, 0.0), 1.0).unwrap();
        let ts = c.t_star();
        let traj = integrate(&s0, 0.95 * ts, ts / 4096.0).unwrap();
        for row in &traj.rows {
            let px = px_closed_form(&c, row.t).unwrap();
            let want = c.x0 * c.p0 * c.p0 * (-c.c * row.t).exp() / (px * px);
            assert!((row.state.x - want).abs() <= 1e-8 * (1.0 + want));
        }
        // x(t) → 0 approaching the lifetime, via the closed form
        let (_, x_near) = (0.0, {
            let (r, x) = super::flow_forward(0.0, 2.0, 1.0, 0.999 * ts).unwrap();
            let _ = r;
            x
        });
        assert!(x_near < 1e-2 * c.x0, "x(0.999 t*) = {x_near}");
    }

    #[test]
    fn apa_limit_at_lifetime() {
        // a·p_a + b·p_b → 2·log|λ(t*)|/t* + 1
        let (s0, c) = init_state(c64(0.5, 0.5), 0.3).unwrap();
        let ts = c.t_star();
        let t_end = ts * (1.0 - 1e-5);
        let traj = integrate(&s0, t_end, ts / 8192.0).unwrap();
        let last = traj.rows.last().unwrap().state;
        let apa = last.a * last.p_a + last.b * last.p_b;
        let log_lam_star = 0.5 * c.c * ts;
        assert!((apa - (2.0 * log_lam_star / ts + 1.0)).abs() <= 1e-4, "apa = {apa}");
    }

    #[test]
    fn integrate_rejects_past_blowup() {
        let (s0, c) = init_state(c64(2.0, 0.0), 1.0).unwrap();
        assert!(matches!(integrate(&s0, c.t_star() * 1.1, 1e-3), Err(Error::PastBlowup { .. })));
    }

    #[test]
    fn hamiltonian_scaling_symmetry() {
        let states = [
            HJState { t: 0.0, a: 0.7, b: -0.3, x: 0.4, p_a: 1.1, p_b: 0.2, p_x: 2.0 },
            HJState { t: 0.0, a: -1.2, b: 0.8, x: 1.7, p_a: -0.4, p_b: 0.9, p_x: 0.3 },
        ];
        for s in &states {
            let h = hamiltonian(s);
            for &sigma in &[-1.0, 0.3, 2.0] {
                let e = (0.5 * sigma as f64).exp();
                let scaled = HJState {
                    t: s.t,
                    a: e * s.a,
                    b: e * s.b,
                    x: e * e * s.x,
                    p_a: s.p_a / e,
                    p_b: s.p_b / e,
                    p_x: s.p_x / (e * e),
                };
                assert!((hamiltonian(&scaled) - h).abs() <= 1e-12 * (1.0 + h.abs()));
            }
        }
    }

    #[test]
    fn hj_value_anchors() {
        // t = 0 gives the initial condition
        let lam = c64(2.0, 1.0);
        let s = hj_value_s(0.0, lam, 0.7).unwrap();
        assert_abs_diff_eq!(s, ((lam - c64(1.0, 0.0)).norm_sqr() + 0.7).ln(), epsilon = 1e-14);
        // x0 = 0 outside the region: constant trajectory, S = log|λ0-1|²
        let lam = c64(3.0, 0.0);
        let s = hj_value_s(1.0, lam, 0.0).unwrap();
        assert_abs_diff_eq!(s, 4.0f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn s_t_outside_and_inside() {
        assert_abs_diff_eq!(s_t(1.0, c64(5.0, 0.0)).unwrap(), 16.0f64.ln(), epsilon = 1e-13);
        // continuity across the boundary at a sample point
        let t = 2.0;
        let r = outer_radius(t, 0.4).unwrap();
        let inside = s_t(t, Complex64::from_polar(r - 1e-4, 0.4)).unwrap();
        let outside = (Complex64::from_polar(r - 1e-4, 0.4) - c64(1.0, 0.0)).norm_sqr().ln();
        assert!((inside - outside).abs() <= 1e-4, "jump {}", (inside - outside).abs());
    }

    #[test]
    fn s_t_radial_derivative_identity() {
        // ∂s_t/∂ρ = 2ρ/t + 1 inside
        for &t in &[2.0, 7.0] {
            let tm = wedge_half_angle(t).unwrap();
            for &fr in &[-0.5, 0.2, 0.6] {
                let th = 0.5 * tm;
                let big_r = outer_radius(t, th).unwrap();
                let rho = fr * 0.8 * big_r.ln();
                let h = 1e-4;
                let sp = s_t(t, Complex64::from_polar((rho + h).exp(), th)).unwrap();
                let sm = s_t(t, Complex64::from_polar((rho - h).exp(), th)).unwrap();
                let got = (sp - sm) / (2.0 * h);
                assert!((got - (2.0 * rho / t + 1.0)).abs() <= 1e-5, "dρ identity at t={t}");
            }
        }
    }

    #[test]
    fn chart_inversion_and_pde_residual() {
        // inside point
        let r = pde_residual(2.0, c64(1.1, 0.0), 0.05, 1e-3).unwrap();
        assert!(r <= 1e-4, "inside residual {r}");
        // outside point
        let r = pde_residual(2.0, c64(-1.0, 0.0), 0.05, 1e-3).unwrap();
        assert!(r <= 1e-4, "outside residual {r}");
        // O(h²) decay
        let r1 = pde_residual(1.5, c64(0.4, 0.8), 0.2, 1e-3).unwrap();
        let r2 = pde_residual(1.5, c64(0.4, 0.8), 0.2, 5e-4).unwrap();
        let ratio = r1 / r2.max(1e-300);
        assert!((ratio - 4.0).abs() <= 0.8, "decay ratio {ratio}");
        // stencil validation
        assert!(pde_residual(2.0, c64(1.1, 0.0), 0.0005, 1e-3).is_err());
    }

    #[test]
    fn s_value_approaches_s_t() {
        // S(t,λ,x) → s_t(λ) as x → 0⁺, from both sides of the boundary
        let t = 2.0;
        for &lam in &[c64(1.3, 0.2), c64(-1.5, 0.0)] {
            let limit = s_t(t, lam).unwrap();
            let near = s_value(t, lam, 1e-6).unwrap();
            assert!((near - limit).abs() <= 1e-3, "x→0 limit at λ={lam}: {} vs {}", near, limit);
        }
    }
}
