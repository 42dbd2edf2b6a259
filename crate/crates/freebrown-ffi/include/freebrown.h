/* C interface to the freebrown toolkit. */

#ifndef FREEBROWN_H
#define FREEBROWN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the library error variants.
 */
typedef enum FbStatus {
  FB_STATUS_OK = 0,
  FB_STATUS_DOMAIN = 1,
  FB_STATUS_OUT_OF_WEDGE = 2,
  FB_STATUS_OUT_OF_ARC = 3,
  FB_STATUS_OUTSIDE_DOMAIN = 4,
  FB_STATUS_NON_CONVERGENCE = 5,
  FB_STATUS_PAST_BLOWUP = 6,
  FB_STATUS_STEP_UNDERFLOW = 7,
  FB_STATUS_EIGEN_NON_CONVERGENCE = 8,
  FB_STATUS_EMPTY_CLOUD = 9,
  FB_STATUS_QUADRATURE = 10,
  FB_STATUS_CONFIG = 11,
  FB_STATUS_IO = 12,
  FB_STATUS_NULL_POINTER = 13,
} FbStatus;

/**
 * Membership of a point relative to the closed support region.
 */
typedef enum FbMembership {
  FB_MEMBERSHIP_INSIDE = 0,
  FB_MEMBERSHIP_BOUNDARY = 1,
  FB_MEMBERSHIP_OUTSIDE = 2,
} FbMembership;

/**
 * Density route selector.
 */
typedef enum FbRoute {
  FB_ROUTE_OMEGA = 0,
  FB_ROUTE_THETA_DERIVATIVE = 1,
  FB_ROUTE_PHI_JACOBIAN = 2,
} FbRoute;

/**
 * Matrix group selector for the Monte Carlo simulation.
 */
typedef enum FbGroup {
  FB_GROUP_GL = 0,
  FB_GROUP_U = 1,
} FbGroup;

/**
 * Opaque sampled-boundary handle.
 */
typedef struct FbBoundary FbBoundary;

/**
 * Opaque eigenvalue-cloud handle.
 */
typedef struct FbEigenCloud FbEigenCloud;

/**
 * Opaque characteristic-trajectory handle.
 */
typedef struct FbTrajectory FbTrajectory;

/**
 * Monte Carlo comparison statistics (see the report JSON for the full set).
 */
typedef struct FbReport {
  double inside_fraction;
  double tol_dilate;
  double ks_arg;
  double ks_shadow;
  size_t n_outside;
  size_t n_out_of_wedge;
  double flatness_chi2;
  double flatness_band99;
} FbReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent error on this thread.  The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *fb_last_error_message(void);

/**
 * Gobbling time `T(r·e^{iθ})`.
 */
enum FbStatus fb_gobbling_time(double r, double theta, double *out);

/**
 * Angular half-extent of the support region.
 */
enum FbStatus fb_theta_max(double t, double *out);

/**
 * Outer boundary radius `r_t(θ)`.
 */
enum FbStatus fb_outer_radius(double t, double theta, double *out);

/**
 * Membership classification of `r·e^{iθ}` against the closed region.
 */
enum FbStatus fb_contains(double t, double r, double theta, enum FbMembership *out);

/**
 * Boundary density factor ω(r,θ).
 */
enum FbStatus fb_omega(double r, double theta, double *out);

/**
 * Angular density factor `w_t(θ)` by the chosen route.
 */
enum FbStatus fb_w_of_theta(double t, double theta, enum FbRoute route, double *out);

/**
 * Plane density `W_t` with its membership flag.
 */
enum FbStatus fb_brown_density(double t,
                               double r,
                               double theta,
                               double *out_value,
                               enum FbMembership *out_membership);

/**
 * Angular marginal `a_t(θ)`.
 */
enum FbStatus fb_angular_marginal(double t, double theta, double *out);

/**
 * Total mass of the angular marginal (quadrature check; expect 1).
 */
enum FbStatus fb_total_mass(double t, size_t nodes_per_panel, double *out);

/**
 * Half-width of the support arc of the unitary spectral measure.
 */
enum FbStatus fb_phi_max(double t, double *out);

/**
 * Boundary angle correspondence φ(θ).
 */
enum FbStatus fb_phi_of_theta(double t, double theta, double *out);

/**
 * Inverse angle correspondence θ(φ).
 */
enum FbStatus fb_theta_of_phi(double t, double phi, double *out);

/**
 * Spectral density of free unitary Brownian motion at angle φ.
 */
enum FbStatus fb_biane_density(double t, double phi, double *out);

/**
 * Blow-up time of the characteristic from `(λ0, x0)`.
 */
enum FbStatus fb_t_star(double lambda0_re, double lambda0_im, double x0, double *out);

/**
 * Regularization strength with lifetime exactly `t` from `λ0`.
 */
enum FbStatus fb_x0_for_lifetime(double t, double lambda0_re, double lambda0_im, double *out);

/**
 * Lifetime transport map λ0 ↦ λ_t.
 */
enum FbStatus fb_lambda_t_map(double t,
                              double lambda0_re,
                              double lambda0_im,
                              double *out_re,
                              double *out_im);

/**
 * Inverse of the lifetime transport map.
 */
enum FbStatus fb_inverse_lambda_t(double t,
                                  double lambda_re,
                                  double lambda_im,
                                  double *out_re,
                                  double *out_im);

/**
 * The regularized potential `s_t(λ)`.
 */
enum FbStatus fb_s_t(double t, double lambda_re, double lambda_im, double *out);

/**
 * `S(t,λ,x)` for `x > 0` through the characteristic chart.
 */
enum FbStatus fb_s_value(double t, double lambda_re, double lambda_im, double x, double *out);

/**
 * Central-difference residual of the PDE at `(t, λ, x)` with step `h`.
 */
enum FbStatus fb_pde_residual(double t,
                              double lambda_re,
                              double lambda_im,
                              double x,
                              double h,
                              double *out);

/**
 * The Hamiltonian of the characteristic system (total function).
 */
double fb_hamiltonian(double a, double b, double x, double p_a, double p_b, double p_x);

/**
 * Sample the region boundary on `n ≥ 16` angles.
 */
enum FbStatus fb_boundary_sample(double t, size_t n, struct FbBoundary **out);

size_t fb_boundary_len(const struct FbBoundary *handle);

/**
 * Fetch sample `i` as `(θ, r_outer)`.
 */
enum FbStatus fb_boundary_get(const struct FbBoundary *handle,
                              size_t index,
                              double *out_theta,
                              double *out_r_outer);

void fb_boundary_free(struct FbBoundary *handle);

/**
 * Integrate one characteristic from `(λ0, x0)` to `t_end` with base step `dt`.
 */
enum FbStatus fb_hj_integrate(double lambda0_re,
                              double lambda0_im,
                              double x0,
                              double t_end,
                              double dt,
                              struct FbTrajectory **out);

size_t fb_trajectory_len(const struct FbTrajectory *handle);

/**
 * Fetch row `i` as `[t, a, b, x, p_a, p_b, p_x, H, L, Psi, x·p_x²]` into a
 * caller buffer of 11 doubles.
 */
enum FbStatus fb_trajectory_get(const struct FbTrajectory *handle, size_t index, double *out_row);

void fb_trajectory_free(struct FbTrajectory *handle);

/**
 * Simulate `samples` realizations at dimension `dim` and pool eigenvalues.
 */
enum FbStatus fb_simulate(size_t dim,
                          double t,
                          size_t steps,
                          uint64_t seed,
                          size_t samples,
                          enum FbGroup group,
                          struct FbEigenCloud **out);

size_t fb_cloud_len(const struct FbEigenCloud *handle);

/**
 * Fetch eigenvalue `i`.
 */
enum FbStatus fb_cloud_get(const struct FbEigenCloud *handle,
                           size_t index,
                           double *out_re,
                           double *out_im);

/**
 * Compare the cloud against the Brown measure at time `t`.
 */
enum FbStatus fb_cloud_compare(const struct FbEigenCloud *handle, double t, struct FbReport *out);

/**
 * Write the cloud CSV (`re,im`) to `path` (UTF-8).
 */
enum FbStatus fb_cloud_write_csv(const struct FbEigenCloud *handle, const char *path);

void fb_cloud_free(struct FbEigenCloud *handle);

/**
 * Run the verification suite; returns the number of failed checks
 * (negative on internal error).  `quick` selects the reduced suite.
 */
int64_t fb_verify(bool quick);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FREEBROWN_H */
