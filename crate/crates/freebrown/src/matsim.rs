//! Monte Carlo simulation of Brownian motion on GL(N;ℂ) and U(N), dense
//! eigenvalue extraction, and statistical comparison of eigenvalue clouds
//! against the computed densities.
//!
//! The GL step is Euler-Maruyama for `dB = B·dZ`:
//! `B_{k+1} = B_k(I + ΔZ_k)` with iid complex Gaussian entries of variance
//! `Δt/N`.  The unitary step follows `dU = iU·dX - ½U·dt` with a Hermitian
//! Gaussian increment, re-unitarized every 16 steps by a Newton-Schulz
//! polar projection.  Per-sample streams are derived from the master seed
//! through a SplitMix expansion, so clouds are bit-reproducible regardless
//! of how samples are scheduled.

use crate::density::angular_marginal;
use crate::numerics::{ks_statistic, normalize_angle, CdfTable};
use crate::region::{gobbling_time, outer_radius, theta_max, PolarPoint};
use crate::shadow::{biane_density, phi_max, phi_of_theta};
use crate::{Error, Result};
use faer::Mat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Which matrix group to simulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    #[default]
    Gl,
    U,
}

/// Parameters of one simulation run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    /// Matrix dimension N.
    #[serde(rename = "N")]
    pub dim: usize,
    pub t: f64,
    pub steps: usize,
    pub seed: u64,
    pub samples: usize,
    pub group: Group,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Config(format!("matrix dimension must be ≥ 2, got {}", self.dim)));
        }
        if !(self.t > 0.0) {
            return Err(Error::Config(format!("time must be positive, got {}", self.t)));
        }
        let needed = (100.0 * self.t).ceil() as usize;
        if self.steps < needed {
            return Err(Error::Config(format!(
                "steps = {} too coarse for t = {}; need at least {needed}",
                self.steps, self.t
            )));
        }
        if self.samples == 0 {
            return Err(Error::Config("need at least one sample".into()));
        }
        Ok(())
    }
}

/// One simulated matrix together with an accumulated rescaling exponent.
///
/// For large `t` the entries of `B_t` grow like `e^{t/2}`; if the Frobenius
/// norm threatens overflow the matrix is rescaled and the log of the factor
/// recorded, so eigenvalues can be restored exactly.
pub struct SimMatrix {
    pub mat: Mat<Complex64>,
    pub log_scale: f64,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Disjoint per-sample stream: the master seed xored with the sample index
/// is expanded through SplitMix into a ChaCha key.
fn stream_rng(seed: u64, sample: u64) -> ChaCha12Rng {
    let mut state = seed ^ sample.wrapping_mul(0xA24BAED4963EE407);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

fn frobenius_sq(m: &Mat<Complex64>) -> f64 {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut acc = 0.0;
    for j in 0..cols {
        for i in 0..rows {
            acc += m[(i, j)].norm_sqr();
        }
    }
    acc
}

/// One GL(N;ℂ) realization for the given sample index.
pub fn simulate_gl_sample(cfg: &SimConfig, sample: usize) -> Result<SimMatrix> {
    cfg.validate()?;
    let n = cfg.dim;
    let dt = cfg.t / cfg.steps as f64;
    let sd = (dt / (2.0 * n as f64)).sqrt();
    let mut rng = stream_rng(cfg.seed, sample as u64);
    let mut b = Mat::<Complex64>::identity(n, n);
    let mut log_scale = 0.0f64;
    for step in 0..cfg.steps {
        let mut m = Mat::<Complex64>::from_fn(n, n, |_, _| {
            Complex64::new(sd * rng.sample::<f64, _>(StandardNormal), sd * rng.sample::<f64, _>(StandardNormal))
        });
        for k in 0..n {
            m[(k, k)] += Complex64::new(1.0, 0.0);
        }
        b = &b * &m;
        if step % 64 == 63 {
            let f2 = frobenius_sq(&b);
            if f2 > 1e200 {
                let f = f2.sqrt();
                let inv = Complex64::new(1.0 / f, 0.0);
                for j in 0..n {
                    for i in 0..n {
                        b[(i, j)] *= inv;
                    }
                }
                log_scale += f.ln();
            }
        }
    }
    Ok(SimMatrix { mat: b, log_scale })
}

/// One GL(N;ℂ) realization (sample index 0).
pub fn simulate_gl(cfg: &SimConfig) -> Result<SimMatrix> {
    simulate_gl_sample(cfg, 0)
}

/// One U(N) realization for the given sample index.
///
/// Re-unitarization runs every 16 steps and after the final step.
pub fn simulate_u_sample(cfg: &SimConfig, sample: usize) -> Result<SimMatrix> {
    cfg.validate()?;
    let n = cfg.dim;
    let dt = cfg.t / cfg.steps as f64;
    let sd_off = (dt / (2.0 * n as f64)).sqrt();
    let sd_diag = (dt / n as f64).sqrt();
    let mut rng = stream_rng(cfg.seed, sample as u64);
    let mut u = Mat::<Complex64>::identity(n, n);
    for step in 0..cfg.steps {
        // M = (1 - dt/2)·I + i·ΔX with ΔX a Hermitian Gaussian increment,
        // E[(ΔX)_ij (ΔX)_ji] = dt/N.
        let mut m = Mat::<Complex64>::zeros(n, n);
        for i in 0..n {
            let d: f64 = rng.sample(StandardNormal);
            m[(i, i)] = Complex64::new(1.0 - 0.5 * dt, sd_diag * d);
            for j in (i + 1)..n {
                let x = Complex64::new(sd_off * rng.sample::<f64, _>(StandardNormal), sd_off * rng.sample::<f64, _>(StandardNormal));
                let ix = Complex64::new(0.0, 1.0) * x;
                m[(i, j)] = ix;
                // i·conj(x) so that ΔX stays Hermitian
                m[(j, i)] = Complex64::new(0.0, 1.0) * x.conj();
            }
        }
        u = &u * &m;
        if step % 16 == 15 || step == cfg.steps - 1 {
            u = polar_project(u);
        }
    }
    Ok(SimMatrix { mat: u, log_scale: 0.0 })
}

/// One U(N) realization (sample index 0).
pub fn simulate_u(cfg: &SimConfig) -> Result<SimMatrix> {
    simulate_u_sample(cfg, 0)
}

/// Newton-Schulz iteration toward the unitary polar factor.
fn polar_project(mut u: Mat<Complex64>) -> Mat<Complex64> {
    let n = u.nrows();
    for _ in 0..8 {
        let uh = u.adjoint().to_owned();
        let mut m = &uh * &u;
        let mut defect = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                defect += (m[(i, j)] - target).norm_sqr();
            }
        }
        if defect.sqrt() < 1e-9 {
            break;
        }
        // U ← U·(3I - UᴴU)/2
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] = -0.5 * m[(i, j)];
            }
            m[(j, j)] += Complex64::new(1.5, 0.0);
        }
        u = &u * &m;
    }
    u
}

/// Frobenius distance of `UᴴU` from the identity.
pub fn unitarity_defect(u: &Mat<Complex64>) -> f64 {
    let n = u.nrows();
    let uh = u.adjoint().to_owned();
    let m = &uh * u;
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            acc += (m[(i, j)] - target).norm_sqr();
        }
    }
    acc.sqrt()
}

/// All eigenvalues of a general complex matrix.
///
/// Dense Hessenberg/shifted-QR solver; non-convergence is reported, never
/// silent.  Returned values are sorted by real part, then imaginary part,
/// for reproducible output.
pub fn eigenvalues(m: &Mat<Complex64>) -> Result<Vec<Complex64>> {
    let mut evs = m.eigenvalues().map_err(|_| Error::EigenNonConvergence)?;
    if evs.iter().any(|z: &Complex64| z.re.is_nan() || z.im.is_nan()) {
        return Err(Error::EigenNonConvergence);
    }
    evs.sort_unstable_by(|p, q| (p.re, p.im).partial_cmp(&(q.re, q.im)).unwrap());
    Ok(evs)
}

/// Eigenvalues plus the maximum backward error `‖Av - λv‖ / ‖A‖_F` over all
/// returned pairs (verification mode).
pub fn eigenvalues_verified(m: &Mat<Complex64>) -> Result<(Vec<Complex64>, f64)> {
    let n = m.nrows();
    let evd = m.eigen().map_err(|_| Error::EigenNonConvergence)?;
    let u = evd.U();
    let s = evd.S();
    let norm_a = frobenius_sq(m).sqrt();
    let mut worst = 0.0f64;
    let mut evs = Vec::with_capacity(n);
    for k in 0..n {
        let lambda: Complex64 = s[k];
        evs.push(lambda);
        let mut resid = 0.0;
        let mut vnorm = 0.0;
        for i in 0..n {
            let mut av = Complex64::new(0.0, 0.0);
            for j in 0..n {
                av += m[(i, j)] * u[(j, k)];
            }
            resid += (av - lambda * u[(i, k)]).norm_sqr();
            vnorm += u[(i, k)].norm_sqr();
        }
        worst = worst.max((resid / vnorm.max(1e-300)).sqrt() / norm_a.max(1e-300));
    }
    evs.sort_unstable_by(|p, q| (p.re, p.im).partial_cmp(&(q.re, q.im)).unwrap());
    Ok((evs, worst))
}

/// A multiset of eigenvalues pooled over independent realizations.
#[derive(Debug, Clone)]
pub struct EigenCloud {
    pub eigenvalues: Vec<Complex64>,
    pub config: SimConfig,
}

/// Simulate `config.samples` independent realizations and pool their
/// eigenvalues.  Samples run in parallel; the pooled order is by sample
/// index, so the result is independent of scheduling.
pub fn simulate_cloud(cfg: &SimConfig) -> Result<EigenCloud> {
    cfg.validate()?;
    let per_sample: Vec<Result<Vec<Complex64>>> = (0..cfg.samples)
        .into_par_iter()
        .map(|idx| {
            let sim = match cfg.group {
                Group::Gl => simulate_gl_sample(cfg, idx)?,
                Group::U => simulate_u_sample(cfg, idx)?,
            };
            let mut evs = eigenvalues(&sim.mat)?;
            if sim.log_scale != 0.0 {
                let f = sim.log_scale.exp();
                for z in evs.iter_mut() {
                    *z *= f;
                }
            }
            Ok(evs)
        })
        .collect();
    let mut eigenvalues = Vec::with_capacity(cfg.dim * cfg.samples);
    for evs in per_sample {
        eigenvalues.extend(evs?);
    }
    if eigenvalues.len() != cfg.dim * cfg.samples {
        return Err(Error::EigenNonConvergence);
    }
    Ok(EigenCloud { eigenvalues, config: cfg.clone() })
}

/// Comparison statistics between an eigenvalue cloud and the Brown measure.
#[derive(Debug, Clone, Serialize)]
pub struct BrownComparison {
    pub t: f64,
    pub n_eigenvalues: usize,
    /// Fraction inside the region dilated by `tol_dilate` in gobbling time.
    pub inside_fraction: f64,
    pub tol_dilate: f64,
    /// KS distance between eigenvalue arguments and the CDF of `a_t`.
    pub ks_arg: f64,
    /// KS distance between shadow angles and the CDF of `ν_t`.
    pub ks_shadow: f64,
    /// Eigenvalues strictly outside the closed (undilated) region.
    pub n_outside: usize,
    /// Eigenvalues whose argument fell outside the wedge and was clamped.
    pub n_out_of_wedge: usize,
    /// Chi-square statistic of the normalized log-radius against uniformity.
    pub flatness_chi2: f64,
    /// 99% bootstrap band for the statistic under exact uniformity.
    pub flatness_band99: f64,
    pub config: SimConfig,
}

/// Number of cells in the quadrature tables backing the KS reference CDFs.
const CDF_CELLS: usize = 4096;
const FLATNESS_BINS: usize = 16;
const BOOTSTRAP_ROUNDS: usize = 400;

/// Compare an eigenvalue cloud against the Brown measure at time `t`.
pub fn compare_to_brown(cloud: &EigenCloud, t: f64) -> Result<BrownComparison> {
    if cloud.eigenvalues.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if (cloud.config.t - t).abs() > 1e-12 * t.max(1.0) {
        return Err(Error::Config(format!("cloud was generated at t = {}, compared at t = {t}", cloud.config.t)));
    }
    let tm = theta_max(t)?;
    let pm = phi_max(t)?;
    let tol_dilate = 0.05 * t;

    let mut args = Vec::with_capacity(cloud.eigenvalues.len());
    let mut shadow_angles = Vec::with_capacity(cloud.eigenvalues.len());
    let mut inside_dilated = 0usize;
    let mut n_outside = 0usize;
    let mut n_out_of_wedge = 0usize;
    let mut flat_u = Vec::new();
    for &z in &cloud.eigenvalues {
        let p = PolarPoint::from_complex(z)?;
        let tv = gobbling_time(p);
        let theta = p.theta();
        args.push(theta);
        if tv < t + tol_dilate {
            inside_dilated += 1;
        }
        if tv > t + crate::region::MEMBERSHIP_BAND {
            n_outside += 1;
        }
        let clamped = if t <= 4.0 && theta.abs() > tm {
            n_out_of_wedge += 1;
            theta.signum() * tm
        } else {
            theta
        };
        shadow_angles.push(phi_of_theta(t, clamped)?);
        if tv < t - crate::region::MEMBERSHIP_BAND {
            let r_b = outer_radius(t, theta)?;
            flat_u.push(p.r().ln() / r_b.ln());
        }
    }

    let mut a_density = |theta: f64| angular_marginal(t, theta).unwrap_or(0.0);
    let arg_table = CdfTable::build(&mut a_density, -tm, tm, CDF_CELLS);
    let ks_arg = ks_statistic(&args, &|x| arg_table.eval(x));

    let mut nu = |phi: f64| biane_density(t, phi).unwrap_or(0.0);
    let nu_table = CdfTable::build(&mut nu, -pm, pm, CDF_CELLS);
    let ks_shadow = ks_statistic(&shadow_angles, &|x| nu_table.eval(x));

    let (flatness_chi2, flatness_band99) = flatness_statistic(&flat_u, cloud.config.seed);

    Ok(BrownComparison {
        t,
        n_eigenvalues: cloud.eigenvalues.len(),
        inside_fraction: inside_dilated as f64 / cloud.eigenvalues.len() as f64,
        tol_dilate,
        ks_arg,
        ks_shadow,
        n_outside,
        n_out_of_wedge,
        flatness_chi2,
        flatness_band99,
        config: cloud.config.clone(),
    })
}

/// Chi-square of the normalized log-radii `u = log r / log r_t(θ) ∈ [-1,1]`
/// against the uniform law, plus a 99% bootstrap band from iid uniform
/// resamples of the same size.
fn flatness_statistic(u: &[f64], seed: u64) -> (f64, f64) {
    if u.is_empty() {
        return (0.0, 0.0);
    }
    let chi2 = chi2_uniform(u);
    let mut rng = stream_rng(seed ^ 0x464C_4154, 0);
    let mut boots: Vec<f64> = (0..BOOTSTRAP_ROUNDS)
        .map(|_| {
            let sample: Vec<f64> = (0..u.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            chi2_uniform(&sample)
        })
        .collect();
    boots.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((0.99 * BOOTSTRAP_ROUNDS as f64).ceil() as usize).min(BOOTSTRAP_ROUNDS) - 1;
    (chi2, boots[idx])
}

fn chi2_uniform(u: &[f64]) -> f64 {
    let mut counts = [0usize; FLATNESS_BINS];
    for &v in u {
        let idx = (((v + 1.0) / 2.0 * FLATNESS_BINS as f64) as usize).min(FLATNESS_BINS - 1);
        counts[idx] += 1;
    }
    let expect = u.len() as f64 / FLATNESS_BINS as f64;
    counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum()
}

/// KS distance of U(N) eigenvalue angles against the spectral density of
/// free unitary Brownian motion.
pub fn unitary_angle_ks(cloud: &EigenCloud, t: f64) -> Result<f64> {
    if cloud.eigenvalues.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let pm = phi_max(t)?;
    let angles: Vec<f64> = cloud.eigenvalues.iter().map(|z| normalize_angle(z.arg())).collect();
    let mut nu = |phi: f64| biane_density(t, phi).unwrap_or(0.0);
    let table = CdfTable::build(&mut nu, -pm, pm, CDF_CELLS);
    Ok(ks_statistic(&angles, &|x| table.eval(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn small_cfg() -> SimConfig {
        SimConfig { dim: 16, t: 1.0, steps: 100, seed: 42, samples: 2, group: Group::Gl }
    }

    #[test]
    fn config_validation() {
        assert!(small_cfg().validate().is_ok());
        let mut c = small_cfg();
        c.dim = 1;
        assert!(c.validate().is_err());
        let mut c = small_cfg();
        c.steps = 50; // fewer than 100·t
        assert!(c.validate().is_err());
        let mut c = small_cfg();
        c.samples = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn zero_time_is_identity_in_the_limit() {
        // the first Euler step from B_0 = I is I + ΔZ; with t → 0 the
        // increment scale vanishes, so test the scale directly
        let cfg = SimConfig { dim: 8, t: 1e-6, steps: 100, seed: 1, samples: 1, group: Group::Gl };
        let b = simulate_gl(&cfg).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((b.mat[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-2);
            }
        }
        assert_eq!(b.log_scale, 0.0);
    }

    #[test]
    fn gl_seed_determinism() {
        let cfg = small_cfg();
        let a = simulate_gl_sample(&cfg, 1).unwrap();
        let b = simulate_gl_sample(&cfg, 1).unwrap();
        for j in 0..cfg.dim {
            for i in 0..cfg.dim {
                assert_eq!(a.mat[(i, j)], b.mat[(i, j)]);
            }
        }
        // different samples differ
        let c = simulate_gl_sample(&cfg, 2).unwrap();
        assert!(c.mat[(0, 0)] != a.mat[(0, 0)]);
    }

    #[test]
    fn gl_second_moment_matches_compounded_isometry() {
        // E tr(B Bᴴ)/N = (1 + Δt)^steps exactly at any step count
        let n = 64;
        let steps = 100;
        let t = 1.0;
        let samples = 100;
        let cfg = SimConfig { dim: n, t, steps, seed: 7, samples, group: Group::Gl };
        let vals: Vec<f64> = (0..samples)
            .map(|k| {
                let b = simulate_gl_sample(&cfg, k).unwrap();
                frobenius_sq(&b.mat) / n as f64
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / samples as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples as f64 - 1.0);
        let se = (var / samples as f64).sqrt();
        let expect = (1.0 + t / steps as f64).powi(steps as i32);
        assert!(
            (mean - expect).abs() <= 3.0 * se.max(1e-6),
            "mean {mean} vs expected {expect} (se {se})"
        );
    }

    #[test]
    fn unitary_projection_keeps_defect_small() {
        let cfg = SimConfig { dim: 24, t: 1.0, steps: 100, seed: 3, samples: 1, group: Group::U };
        let u = simulate_u(&cfg).unwrap();
        assert!(unitarity_defect(&u.mat) <= 1e-8);
        // eigenvalues sit on the circle
        let evs = eigenvalues(&u.mat).unwrap();
        for z in evs {
            assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let d = [Complex64::new(1.0, 2.0), Complex64::new(-3.0, 0.5), Complex64::new(0.0, -1.0)];
        let m = Mat::from_fn(3, 3, |i, j| if i == j { d[i] } else { Complex64::new(0.0, 0.0) });
        let mut want = d.to_vec();
        want.sort_unstable_by(|p, q| (p.re, p.im).partial_cmp(&(q.re, q.im)).unwrap());
        let got = eigenvalues(&m).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() <= 1e-12);
        }
    }

    #[test]
    fn eigenvalues_of_companion_matrix() {
        // companion of z³ - 1: spectrum is the cube roots of unity
        let mut m = Mat::<Complex64>::zeros(3, 3);
        m[(0, 2)] = Complex64::new(1.0, 0.0);
        m[(1, 0)] = Complex64::new(1.0, 0.0);
        m[(2, 1)] = Complex64::new(1.0, 0.0);
        let got = eigenvalues(&m).unwrap();
        for z in &got {
            assert!((z.powu(3) - Complex64::new(1.0, 0.0)).norm() <= 1e-10);
        }
        assert_eq!(got.len(), 3);
    }

    #[test]
    fn eigenvalue_product_matches_lu_determinant() {
        // independent LU determinant oracle
        fn det_lu(m: &Mat<Complex64>) -> Complex64 {
            let n = m.nrows();
            let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
            let mut det = Complex64::new(1.0, 0.0);
            for k in 0..n {
                let mut piv = k;
                for i in (k + 1)..n {
                    if a[i][k].norm() > a[piv][k].norm() {
                        piv = i;
                    }
                }
                if piv != k {
                    a.swap(piv, k);
                    det = -det;
                }
                det *= a[k][k];
                if a[k][k].norm() == 0.0 {
                    return det;
                }
                for i in (k + 1)..n {
                    let f = a[i][k] / a[k][k];
                    for j in k..n {
                        let sub = f * a[k][j];
                        a[i][j] -= sub;
                    }
                }
            }
            det
        }
        let mut rng = stream_rng(99, 0);
        let m = Mat::from_fn(8, 8, |_, _| {
            Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        });
        let evs = eigenvalues(&m).unwrap();
        let prod = evs.iter().fold(Complex64::new(1.0, 0.0), |acc, z| acc * z);
        let det = det_lu(&m);
        assert!((prod - det).norm() <= 1e-8 * det.norm(), "{prod} vs {det}");
    }

    #[test]
    fn eigenvalue_backward_error() {
        let mut rng = stream_rng(5, 0);
        let m = Mat::from_fn(40, 40, |_, _| {
            Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        });
        let (evs, resid) = eigenvalues_verified(&m).unwrap();
        assert_eq!(evs.len(), 40);
        assert!(resid <= 1e-8, "backward error {resid}");
    }

    #[test]
    fn cloud_determinism_and_shape() {
        let cfg = small_cfg();
        let a = simulate_cloud(&cfg).unwrap();
        let b = simulate_cloud(&cfg).unwrap();
        assert_eq!(a.eigenvalues.len(), cfg.dim * cfg.samples);
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn compare_report_fields_on_small_cloud() {
        let cfg = SimConfig { dim: 48, t: 2.0, steps: 200, seed: 11, samples: 2, group: Group::Gl };
        let cloud = simulate_cloud(&cfg).unwrap();
        let rep = compare_to_brown(&cloud, 2.0).unwrap();
        assert_eq!(rep.n_eigenvalues, 96);
        assert!(rep.inside_fraction > 0.6, "inside fraction {}", rep.inside_fraction);
        assert!(rep.ks_arg < 0.35);
        assert!(rep.ks_shadow < 0.35);
        assert!(rep.flatness_band99 > 0.0);
        // mismatched t rejected
        assert!(compare_to_brown(&cloud, 3.0).is_err());
    }

    #[test]
    fn empty_cloud_rejected() {
        let cloud = EigenCloud { eigenvalues: vec![], config: small_cfg() };
        assert!(matches!(compare_to_brown(&cloud, 1.0), Err(Error::EmptyCloud)));
    }
}
