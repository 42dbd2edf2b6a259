//! C ABI for the freebrown toolkit.
//!
//! Conventions: every fallible call returns an [`FbStatus`] and writes its
//! results through out-pointers; `FB_STATUS_OK` is zero.  A human-readable
//! message for the most recent error on the current thread is available
//! from [`fb_last_error_message`].  Aggregate results (boundary tables,
//! trajectories, eigenvalue clouds) are returned as opaque handles with
//! accessor and destructor functions.

use freebrown::{cli, density, hjflow, matsim, output, region, shadow, Error};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::path::PathBuf;

/// Status codes mirroring the library error variants.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbStatus {
    Ok = 0,
    Domain = 1,
    OutOfWedge = 2,
    OutOfArc = 3,
    OutsideDomain = 4,
    NonConvergence = 5,
    PastBlowup = 6,
    StepUnderflow = 7,
    EigenNonConvergence = 8,
    EmptyCloud = 9,
    Quadrature = 10,
    Config = 11,
    Io = 12,
    NullPointer = 13,
}

/// Membership of a point relative to the closed support region.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbMembership {
    Inside = 0,
    Boundary = 1,
    Outside = 2,
}

/// Density route selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbRoute {
    Omega = 0,
    ThetaDerivative = 1,
    PhiJacobian = 2,
}

/// Matrix group selector for the Monte Carlo simulation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbGroup {
    Gl = 0,
    U = 1,
}

/// Monte Carlo comparison statistics (see the report JSON for the full set).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FbReport {
    pub inside_fraction: f64,
    pub tol_dilate: f64,
    pub ks_arg: f64,
    pub ks_shadow: f64,
    pub n_outside: usize,
    pub n_out_of_wedge: usize,
    pub flatness_chi2: f64,
    pub flatness_band99: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn remember(e: &Error) -> FbStatus {
    let msg = CString::new(e.to_string()).unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
    match e {
        Error::Domain(_) => FbStatus::Domain,
        Error::OutOfWedge { .. } => FbStatus::OutOfWedge,
        Error::OutOfArc { .. } => FbStatus::OutOfArc,
        Error::OutsideDomain { .. } => FbStatus::OutsideDomain,
        Error::NonConvergence { .. } => FbStatus::NonConvergence,
        Error::PastBlowup { .. } => FbStatus::PastBlowup,
        Error::StepUnderflow { .. } => FbStatus::StepUnderflow,
        Error::EigenNonConvergence => FbStatus::EigenNonConvergence,
        Error::EmptyCloud => FbStatus::EmptyCloud,
        Error::Quadrature { .. } => FbStatus::Quadrature,
        Error::Config(_) => FbStatus::Config,
        Error::Io(_) => FbStatus::Io,
    }
}

fn null_error() -> FbStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new("null pointer argument").unwrap());
    FbStatus::NullPointer
}

/// Message for the most recent error on this thread.  The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

macro_rules! write_out {
    ($ptr:expr, $value:expr) => {{
        if $ptr.is_null() {
            return null_error();
        }
        unsafe { *$ptr = $value };
    }};
}

fn scalar(out: *mut f64, r: freebrown::Result<f64>) -> FbStatus {
    match r {
        Ok(v) => {
            write_out!(out, v);
            FbStatus::Ok
        }
        Err(e) => remember(&e),
    }
}

/// Gobbling time `T(r·e^{iθ})`.
#[no_mangle]
pub extern "C" fn fb_gobbling_time(r: f64, theta: f64, out: *mut f64) -> FbStatus {
    scalar(out, region::PolarPoint::new(r, theta).map(region::gobbling_time))
}

/// Angular half-extent of the support region.
#[no_mangle]
pub extern "C" fn fb_theta_max(t: f64, out: *mut f64) -> FbStatus {
    scalar(out, region::theta_max(t))
}

/// Outer boundary radius `r_t(θ)`.
#[no_mangle]
pub extern "C" fn fb_outer_radius(t: f64, theta: f64, out: *mut f64) -> FbStatus {
    scalar(out, region::outer_radius(t, theta))
}

/// Membership classification of `r·e^{iθ}` against the closed region.
#[no_mangle]
pub extern "C" fn fb_contains(t: f64, r: f64, theta: f64, out: *mut FbMembership) -> FbStatus {
    let res = region::PolarPoint::new(r, theta).and_then(|p| region::contains(t, p));
    match res {
        Ok(m) => {
            let v = match m {
                region::Membership::Inside => FbMembership::Inside,
                region::Membership::Boundary => FbMembership::Boundary,
                region::Membership::Outside => FbMembership::Outside,
            };
            write_out!(out, v);
            FbStatus::Ok
        }
        Err(e) => remember(&e),
    }
}

/// Boundary density factor ω(r,θ).
#[no_mangle]
pub extern "C" fn fb_omega(r: f64, theta: f64, out: *mut f64) -> FbStatus {
    scalar(out, density::omega(r, theta))
}

fn route_from(route: FbRoute) -> density::Route {
    match route {
        FbRoute::Omega => density::Route::Omega,
        FbRoute::ThetaDerivative => density::Route::ThetaDerivative,
        FbRoute::PhiJacobian => density::Route::PhiJacobian,
    }
}

/// Angular density factor `w_t(θ)` by the chosen route.
#[no_mangle]
pub extern "C" fn fb_w_of_theta(t: f64, theta: f64, route: FbRoute, out: *mut f64) -> FbStatus {
    scalar(out, density::w_of_theta(t, theta, route_from(route)))
}

/// Plane density `W_t` with its membership flag.
#[no_mangle]
pub extern "C" fn fb_brown_density(
    t: f64,
    r: f64,
    theta: f64,
    out_value: *mut f64,
    out_membership: *mut FbMembership,
) -> FbStatus {
    let res = region::PolarPoint::new(r, theta).and_then(|p| density::brown_density(t, p));
    match res {
        Ok((v, m)) => {
            write_out!(out_value, v);
            let mm = match m {
                region::Membership::Inside => FbMembership::Inside,
                region::Membership::Boundary => FbMembership::Boundary,
                region::Membership::Outside => FbMembership::Outside,
            };
            write_out!(out_membership, mm);
            FbStatus::Ok
        }
        Err(e) => remember(&e),
    }
}

/// Angular marginal `a_t(θ)`.
#[no_mangle]
pub extern "C" fn fb_angular_marginal(t: f64, theta: f64, out: *mut f64) -> FbStatus {
    scalar(out, density::angular_marginal(t, theta))
}

/// Total mass of the angular marginal (quadrature check; expect 1).
#[no_mangle]
pub extern "C" fn fb_total_mass(t: f64, nodes_per_panel: usize, out: *mut f64) -> FbStatus {
    scalar(out, density::total_mass(t, nodes_per_panel))
}

/// Half-width of the support arc of the unitary spectral measure.
#[no_mangle]
pub extern "C" fn fb_phi_max(t: f64, out: *mut f64) -> FbStatus {
    scalar(out, shadow::phi_max(t))
}

/// Boundary angle correspondence φ(θ).
#[no_mangle]
pub extern "C" fn fb_phi_of_theta(t: f64, theta: f64, out: *mut f64) -> FbStatus {
    scalar(out, shadow::phi_of_theta(t, theta))
}

/// Inverse angle correspondence θ(φ).
#[no_mangle]
pub extern "C" fn fb_theta_of_phi(t: f64, phi: f64, out: *mut f64) -> FbStatus {
    scalar(out, shadow::theta_of_phi(t, phi))
}

/// Spectral density of free unitary Brownian motion at angle φ.
#[no_mangle]
pub extern "C" fn fb_biane_density(t: f64, phi: f64, out: *mut f64) -> FbStatus {
    scalar(out, shadow::biane_density(t, phi))
}

/// Blow-up time of the characteristic from `(λ0, x0)`.
#[no_mangle]
pub extern "C" fn fb_t_star(lambda0_re: f64, lambda0_im: f64, x0: f64, out: *mut f64) -> FbStatus {
    scalar(out, hjflow::t_star(Complex64::new(lambda0_re, lambda0_im), x0))
}

/// Regularization strength with lifetime exactly `t` from `λ0`.
#[no_mangle]
pub extern "C" fn fb_x0_for_lifetime(t: f64, lambda0_re: f64, lambda0_im: f64, out: *mut f64) -> FbStatus {
    scalar(out, hjflow::x0_for_lifetime(t, Complex64::new(lambda0_re, lambda0_im)))
}

/// Lifetime transport map λ0 ↦ λ_t.
#[no_mangle]
pub extern "C" fn fb_lambda_t_map(
    t: f64,
    lambda0_re: f64,
    lambda0_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> FbStatus {
    match hjflow::lambda_t_map(t, Complex64::new(lambda0_re, lambda0_im)) {
        Ok(z) => {
            write_out!(out_re, z.re);
            write_out!(out_im, z.im);
            FbStatus::Ok
        }
        Err(e) => remember(&e),
    }
}

/// Inverse of the lifetime transport map.
#[no_mangle]
pub extern "C" fn fb_inverse_lambda_t(
    t: f64,
    lambda_re: f64,
    lambda_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> FbStatus {
    match hjflow::inverse_lambda_t(t, Complex64::new(lambda_re, lambda_im)) {
        Ok(z) => {
            write_out!(out_re, z.re);
            write_out!(out_im, z.im);
            FbStatus::Ok
        }
        Err(e) => remember(&e),
    }
}

/// The regularized potential `s_t(λ)`.
#[no_mangle]
pub extern "C" fn fb_s_t(t: f64, lambda_re: f64, lambda_im: f64, out: *mut f64) -> FbStatus {
    scalar(out, hjflow::s_t(t, Complex64::new(lambda_re, lambda_im)))
}

/// `S(t,λ,x)` for `x > 0` through the characteristic chart.
#[no_mangle]
pub extern "C" fn fb_s_value(t: f64, lambda_re: f64, lambda_im: f64, x: f64, out: *mut f64) -> FbStatus {
    scalar(out, hjflow::s_value(t, Complex64::new(lambda_re, lambda_im), x))
}

/// Central-difference residual of the PDE at `(t, λ, x)` with step `h`.
#[no_mangle]
pub extern "C" fn fb_pde_residual(
    t: f64,
    lambda_re: f64,
    lambda_im: f64,
    x: f64,
    h: f64,
    out: *mut f64,
) -> FbStatus {
    scalar(out, hjflow::pde_residual(t, Complex64::new(lambda_re, lambda_im), x, h))
}

/// The Hamiltonian of the characteristic system (total function).
#[no_mangle]
pub extern "C" fn fb_hamiltonian(a: f64, b: f64, x: f64, p_a: f64, p_b: f64, p_x: f64) -> f64 {
    hjflow::hamiltonian(&hjflow::HJState { t: 0.0, a, b, x, p_a, p_b, p_x })
}

// --- opaque boundary handle -------------------------------------------------

/// Opaque sampled-boundary handle.
pub struct FbBoundary(region::RegionBoundary);

/// Sample the region boundary on `n ≥ 16` angles.
#[no_mangle]
pub extern "C" fn fb_boundary_sample(t: f64, n: usize, out: *mut *mut FbBoundary) -> FbStatus {
    if out.is_null() {
        return null_error();
    }
    match region::sample_boundary(t, n) {
        Ok(b) => {
            unsafe { *out = Box::into_raw(Box::new(FbBoundary(b))) };
            FbStatus::Ok
        }
        Err(e) => remember(&e),
    }
}

#[no_mangle]
pub extern "C" fn fb_boundary_len(handle: *const FbBoundary) -> usize {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.0.samples.len()
}

/// Fetch sample `i` as `(θ, r_outer)`.
#[no_mangle]
pub extern "C" fn fb_boundary_get(
    handle: *const FbBoundary,
    index: usize,
    out_theta: *mut f64,
    out_r_outer: *mut f64,
) -> FbStatus {
    if handle.is_null() {
        return null_error();
    }
    let b = unsafe { &*handle };
    match b.0.samples.get(index) {
        Some(&(theta, r)) => {
            write_out!(out_theta, theta);
            write_out!(out_r_outer, r);
            FbStatus::Ok
        }
        None => {
            LAST_ERROR.with(|slot| {
                *slot.borrow_mut() = CString::new(format!("boundary index {index} out of range")).unwrap()
            });
            FbStatus::Config
        }
    }
}

#[no_mangle]
pub extern "C" fn fb_boundary_free(handle: *mut FbBoundary) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

// --- opaque trajectory handle -----------------------------------------------

/// Opaque characteristic-trajectory handle.
pub struct FbTrajectory(hjflow::Trajectory);

/// Integrate one characteristic from `(λ0, x0)` to `t_end` with base step `dt`.
#[no_mangle]
pub extern "C" fn fb_hj_integrate(
    lambda0_re: f64,
    lambda0_im: f64,
    x0: f64,
    t_end: f64,
    dt: f64,
    out: *mut *mut FbTrajectory,
) -> FbStatus {
    if out.is_null() {
        return null_error();
    }
    let run = || -> freebrown::Result<hjflow::Trajectory> {
        let (s0, _) = hjflow::init_state(Complex64::new(lambda0_re, lambda0_im), x0)?;
        hjflow::integrate(&s0, t_end, dt)
    };
    match run() {
        Ok(traj) => {
            unsafe { *out = Box::into_raw(Box::new(FbTrajectory(traj))) };
            FbStatus::Ok
        }
        Err(e) => remember(&e),
    }
}

#[no_mangle]
pub extern "C" fn fb_trajectory_len(handle: *const FbTrajectory) -> usize {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.0.rows.len()
}

/// Fetch row `i` as `[t, a, b, x, p_a, p_b, p_x, H, L, Psi, x·p_x²]` into a
/// caller buffer of 11 doubles.
#[no_mangle]
pub extern "C" fn fb_trajectory_get(handle: *const FbTrajectory, index: usize, out_row: *mut f64) -> FbStatus {
    if handle.is_null() || out_row.is_null() {
        return null_error();
    }
    let t = unsafe { &*handle };
    match t.0.rows.get(index) {
        Some(r) => {
            let row = [
                r.t,
                r.state.a,
                r.state.b,
                r.state.x,
                r.state.p_a,
                r.state.p_b,
                r.state.p_x,
                r.hamiltonian,
                r.angular_momentum,
                r.psi,
                r.xpx2,
            ];
            unsafe { std::ptr::copy_nonoverlapping(row.as_ptr(), out_row, 11) };
            FbStatus::Ok
        }
        None => {
            LAST_ERROR.with(|slot| {
                *slot.borrow_mut() = CString::new(format!("trajectory index {index} out of range")).unwrap()
            });
            FbStatus::Config
        }
    }
}

#[no_mangle]
pub extern "C" fn fb_trajectory_free(handle: *mut FbTrajectory) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

// --- opaque eigenvalue cloud handle ------------------------------------------

/// Opaque eigenvalue-cloud handle.
pub struct FbEigenCloud(matsim::EigenCloud);

/// Simulate `samples` realizations at dimension `dim` and pool eigenvalues.
#[no_mangle]
pub extern "C" fn fb_simulate(
    dim: usize,
    t: f64,
    steps: usize,
    seed: u64,
    samples: usize,
    group: FbGroup,
    out: *mut *mut FbEigenCloud,
) -> FbStatus {
    if out.is_null() {
        return null_error();
    }
    let cfg = matsim::SimConfig {
        dim,
        t,
        steps,
        seed,
        samples,
        group: match group {
            FbGroup::Gl => matsim::Group::Gl,
            FbGroup::U => matsim::Group::U,
        },
    };
    match matsim::simulate_cloud(&cfg) {
        Ok(cloud) => {
            unsafe { *out = Box::into_raw(Box::new(FbEigenCloud(cloud))) };
            FbStatus::Ok
        }
        Err(e) => remember(&e),
    }
}

#[no_mangle]
pub extern "C" fn fb_cloud_len(handle: *const FbEigenCloud) -> usize {
    if handle.is_null() {
        return 0;
    }
    unsafe { &*handle }.0.eigenvalues.len()
}

/// Fetch eigenvalue `i`.
#[no_mangle]
pub extern "C" fn fb_cloud_get(
    handle: *const FbEigenCloud,
    index: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> FbStatus {
    if handle.is_null() {
        return null_error();
    }
    let c = unsafe { &*handle };
    match c.0.eigenvalues.get(index) {
        Some(z) => {
            write_out!(out_re, z.re);
            write_out!(out_im, z.im);
            FbStatus::Ok
        }
        None => {
            LAST_ERROR.with(|slot| {
                *slot.borrow_mut() = CString::new(format!("cloud index {index} out of range")).unwrap()
            });
            FbStatus::Config
        }
    }
}

/// Compare the cloud against the Brown measure at time `t`.
#[no_mangle]
pub extern "C" fn fb_cloud_compare(handle: *const FbEigenCloud, t: f64, out: *mut FbReport) -> FbStatus {
    if handle.is_null() || out.is_null() {
        return null_error();
    }
    let c = unsafe { &*handle };
    match matsim::compare_to_brown(&c.0, t) {
        Ok(rep) => {
            let report = FbReport {
                inside_fraction: rep.inside_fraction,
                tol_dilate: rep.tol_dilate,
                ks_arg: rep.ks_arg,
                ks_shadow: rep.ks_shadow,
                n_outside: rep.n_outside,
                n_out_of_wedge: rep.n_out_of_wedge,
                flatness_chi2: rep.flatness_chi2,
                flatness_band99: rep.flatness_band99,
            };
            unsafe { *out = report };
            FbStatus::Ok
        }
        Err(e) => remember(&e),
    }
}

/// Write the cloud CSV (`re,im`) to `path` (UTF-8).
#[no_mangle]
pub extern "C" fn fb_cloud_write_csv(handle: *const FbEigenCloud, path: *const c_char) -> FbStatus {
    if handle.is_null() || path.is_null() {
        return null_error();
    }
    let c = unsafe { &*handle };
    let path = match unsafe { std::ffi::CStr::from_ptr(path) }.to_str() {
        Ok(s) => PathBuf::from(s),
        Err(_) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new("path is not valid UTF-8").unwrap());
            return FbStatus::Config;
        }
    };
    match output::write_eigen_csv(&path, &c.0) {
        Ok(()) => FbStatus::Ok,
        Err(e) => remember(&e),
    }
}

#[no_mangle]
pub extern "C" fn fb_cloud_free(handle: *mut FbEigenCloud) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Run the verification suite; returns the number of failed checks
/// (negative on internal error).  `quick` selects the reduced suite.
#[no_mangle]
pub extern "C" fn fb_verify(quick: bool) -> i64 {
    let results = freebrown::verify::run_suite(quick);
    results.iter().filter(|r| !r.passed).count() as i64
}

// silence the unused-import warning for cli: the run configuration type is
// deliberately not exposed over the C ABI
#[allow(unused_imports)]
use cli as _cli_not_exposed;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_calls_round_trip() {
        let mut v = 0.0;
        assert_eq!(fb_gobbling_time(1.0, std::f64::consts::PI, &mut v), FbStatus::Ok);
        assert!((v - 4.0).abs() < 1e-12);
        assert_eq!(fb_theta_max(2.0, &mut v), FbStatus::Ok);
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert_eq!(fb_omega(1.0, 0.0, &mut v), FbStatus::Ok);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn error_codes_and_messages() {
        let mut v = 0.0;
        let st = fb_gobbling_time(-1.0, 0.0, &mut v);
        assert_eq!(st, FbStatus::Domain);
        let msg = unsafe { std::ffi::CStr::from_ptr(fb_last_error_message()) };
        assert!(msg.to_str().unwrap().contains("positive"));
        let st = fb_outer_radius(2.0, 2.0, &mut v);
        assert_eq!(st, FbStatus::OutOfWedge);
        let st = fb_gobbling_time(1.0, 0.0, std::ptr::null_mut());
        assert_eq!(st, FbStatus::NullPointer);
    }

    #[test]
    fn boundary_handle_lifecycle() {
        let mut handle: *mut FbBoundary = std::ptr::null_mut();
        assert_eq!(fb_boundary_sample(2.0, 32, &mut handle), FbStatus::Ok);
        assert_eq!(fb_boundary_len(handle), 32);
        let (mut th, mut r) = (0.0, 0.0);
        assert_eq!(fb_boundary_get(handle, 0, &mut th, &mut r), FbStatus::Ok);
        assert!(r >= 1.0);
        assert_eq!(fb_boundary_get(handle, 99, &mut th, &mut r), FbStatus::Config);
        fb_boundary_free(handle);
    }

    #[test]
    fn trajectory_handle_lifecycle() {
        let mut handle: *mut FbTrajectory = std::ptr::null_mut();
        let mut ts = 0.0;
        assert_eq!(fb_t_star(2.0, 0.0, 1.0, &mut ts), FbStatus::Ok);
        assert_eq!(fb_hj_integrate(2.0, 0.0, 1.0, 0.5 * ts, ts / 512.0, &mut handle), FbStatus::Ok);
        let n = fb_trajectory_len(handle);
        assert!(n > 100);
        let mut row = [0.0f64; 11];
        assert_eq!(fb_trajectory_get(handle, n - 1, row.as_mut_ptr()), FbStatus::Ok);
        assert!((row[0] - 0.5 * ts).abs() < 1e-9);
        fb_trajectory_free(handle);
        // past-blowup integration is rejected
        assert_eq!(fb_hj_integrate(2.0, 0.0, 1.0, 2.0 * ts, 1e-3, &mut handle), FbStatus::PastBlowup);
    }

    #[test]
    fn cloud_handle_lifecycle() {
        let mut handle: *mut FbEigenCloud = std::ptr::null_mut();
        assert_eq!(fb_simulate(16, 1.0, 100, 3, 2, FbGroup::Gl, &mut handle), FbStatus::Ok);
        assert_eq!(fb_cloud_len(handle), 32);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(fb_cloud_get(handle, 5, &mut re, &mut im), FbStatus::Ok);
        let mut rep = FbReport {
            inside_fraction: 0.0,
            tol_dilate: 0.0,
            ks_arg: 0.0,
            ks_shadow: 0.0,
            n_outside: 0,
            n_out_of_wedge: 0,
            flatness_chi2: 0.0,
            flatness_band99: 0.0,
        };
        assert_eq!(fb_cloud_compare(handle, 1.0, &mut rep), FbStatus::Ok);
        assert!(rep.inside_fraction > 0.0 && rep.inside_fraction <= 1.0);
        fb_cloud_free(handle);
        // invalid configuration surfaces as a config error
        assert_eq!(fb_simulate(1, 1.0, 100, 3, 1, FbGroup::Gl, &mut handle), FbStatus::Config);
    }

    #[test]
    fn pde_residual_through_ffi() {
        let mut v = f64::NAN;
        assert_eq!(fb_pde_residual(2.0, -1.0, 0.0, 0.05, 1e-3, &mut v), FbStatus::Ok);
        assert!(v < 1e-4);
    }
}
