//! Run configuration and command dispatch for the command-line front end.
//!
//! Precedence: command-line flags > JSON config file > built-in defaults.
//! Every subcommand writes its artifacts into the output directory and
//! reports file paths on stdout; diagnostics go to stderr.

use crate::density::{DensityGrid, Route};
use crate::hjflow::{init_state, integrate};
use crate::matsim::{compare_to_brown, simulate_cloud, Group, SimConfig};
use crate::output;
use crate::region::sample_boundary;
use crate::shadow::ShadowMap;
use crate::verify;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Which action to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subcommand {
    Region,
    Density,
    Biane,
    Shadow,
    Hj,
    Simulate,
    Verify,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub t: f64,
    /// Grid size for region/density/biane/shadow tables.
    pub n: usize,
    /// Matrix dimension for `simulate`.
    #[serde(rename = "N")]
    pub dim: usize,
    pub steps: usize,
    pub samples: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub route: Route,
    pub group: Group,
    pub quick: bool,
    /// Emit SVG outlines next to the CSV artifacts.
    pub svg: bool,
    /// Initial point for `hj` as (re, im).
    pub lambda0: (f64, f64),
    /// Initial regularization for `hj`.
    pub x0: f64,
    /// Root-finding relative tolerance override.
    pub root_tol: f64,
    /// Membership band override.
    pub tol_band: f64,
}

/// The same fields with everything optional, as stored in a JSON config
/// file or produced by flag parsing.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub subcommand: Option<Subcommand>,
    pub t: Option<f64>,
    pub n: Option<usize>,
    #[serde(rename = "N")]
    pub dim: Option<usize>,
    pub steps: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub route: Option<Route>,
    pub group: Option<Group>,
    pub quick: Option<bool>,
    pub svg: Option<bool>,
    pub lambda0: Option<(f64, f64)>,
    pub x0: Option<f64>,
    pub root_tol: Option<f64>,
    pub tol_band: Option<f64>,
}

impl RunConfig {
    pub fn defaults(subcommand: Subcommand) -> Self {
        Self {
            subcommand,
            t: 2.0,
            n: 256,
            dim: 100,
            steps: 200,
            samples: 1,
            seed: 7,
            out: PathBuf::from("out"),
            route: Route::Omega,
            group: Group::Gl,
            quick: false,
            svg: false,
            lambda0: (0.5, 0.0),
            x0: 1.0,
            root_tol: crate::region::ROOT_TOL,
            tol_band: crate::region::MEMBERSHIP_BAND,
        }
    }

    /// Apply the non-empty fields of `p` on top of `self`.
    pub fn overlay(mut self, p: &PartialConfig) -> Self {
        if let Some(v) = p.subcommand {
            self.subcommand = v;
        }
        if let Some(v) = p.t {
            self.t = v;
        }
        if let Some(v) = p.n {
            self.n = v;
        }
        if let Some(v) = p.dim {
            self.dim = v;
        }
        if let Some(v) = p.steps {
            self.steps = v;
        }
        if let Some(v) = p.samples {
            self.samples = v;
        }
        if let Some(v) = p.seed {
            self.seed = v;
        }
        if let Some(ref v) = p.out {
            self.out = v.clone();
        }
        if let Some(v) = p.route {
            self.route = v;
        }
        if let Some(v) = p.group {
            self.group = v;
        }
        if let Some(v) = p.quick {
            self.quick = v;
        }
        if let Some(v) = p.svg {
            self.svg = v;
        }
        if let Some(v) = p.lambda0 {
            self.lambda0 = v;
        }
        if let Some(v) = p.x0 {
            self.x0 = v;
        }
        if let Some(v) = p.root_tol {
            self.root_tol = v;
        }
        if let Some(v) = p.tol_band {
            self.tol_band = v;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(Error::Config(format!("t must be positive, got {}", self.t)));
        }
        if self.n < 16 {
            return Err(Error::Config(format!("grid size n must be ≥ 16, got {}", self.n)));
        }
        Ok(())
    }
}

/// Resolve defaults, optional config file, and flag overrides.
pub fn resolve(file: Option<&Path>, flags: &PartialConfig) -> Result<RunConfig> {
    let from_file: PartialConfig = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("config file {}: {e}", path.display())))?
        }
        None => PartialConfig::default(),
    };
    let subcommand = flags
        .subcommand
        .or(from_file.subcommand)
        .ok_or_else(|| Error::Config("no subcommand given on the command line or in the config file".into()))?;
    let cfg = RunConfig::defaults(subcommand).overlay(&from_file).overlay(flags);
    cfg.validate()?;
    Ok(cfg)
}

/// Exit status of a run: 0 ok, 1 verification failure, 2 config error.
pub fn run(cfg: &RunConfig) -> Result<i32> {
    std::fs::create_dir_all(&cfg.out)?;
    match cfg.subcommand {
        Subcommand::Region => run_region(cfg),
        Subcommand::Density => run_density(cfg),
        Subcommand::Biane => run_biane(cfg),
        Subcommand::Shadow => run_shadow(cfg),
        Subcommand::Hj => run_hj(cfg),
        Subcommand::Simulate => run_simulate(cfg),
        Subcommand::Verify => run_verify(cfg),
    }
}

fn announce(path: &Path) {
    println!("wrote {}", path.display());
}

fn run_region(cfg: &RunConfig) -> Result<i32> {
    let b = sample_boundary(cfg.t, cfg.n)?;
    let csv = cfg.out.join(format!("boundary_t{}.csv", cfg.t));
    output::write_boundary_csv(&csv, &b)?;
    announce(&csv);
    if cfg.svg {
        let outer: Vec<(f64, f64)> = b.samples.iter().map(|&(th, r)| (r * th.cos(), r * th.sin())).collect();
        let inner: Vec<(f64, f64)> = b.samples.iter().map(|&(th, r)| (th.cos() / r, th.sin() / r)).collect();
        let svg = cfg.out.join(format!("boundary_t{}.svg", cfg.t));
        output::write_svg_polylines(&svg, &[outer, inner])?;
        announce(&svg);
    }
    Ok(0)
}

fn run_density(cfg: &RunConfig) -> Result<i32> {
    let g = DensityGrid::build(cfg.t, cfg.n, cfg.route)?;
    let csv = cfg.out.join(format!("density_t{}.csv", cfg.t));
    output::write_density_csv(&csv, &g)?;
    announce(&csv);
    let meta = cfg.out.join(format!("density_t{}.json", cfg.t));
    output::write_density_meta(&meta, &g)?;
    announce(&meta);
    let mass = crate::density::total_mass(cfg.t, 64)?;
    println!("total mass: {mass:.9}");
    if cfg.svg {
        let line: Vec<(f64, f64)> = g.rows.iter().map(|r| (r.theta, r.w_t)).collect();
        let svg = cfg.out.join(format!("density_t{}.svg", cfg.t));
        output::write_svg_polylines(&svg, &[line])?;
        announce(&svg);
    }
    Ok(0)
}

fn run_biane(cfg: &RunConfig) -> Result<i32> {
    let csv = cfg.out.join(format!("biane_t{}.csv", cfg.t));
    output::write_biane_csv(&csv, cfg.t, cfg.n)?;
    announce(&csv);
    let mass = crate::shadow::nu_mass(cfg.t, 64)?;
    println!("spectral-measure mass: {mass:.9}");
    Ok(0)
}

fn run_shadow(cfg: &RunConfig) -> Result<i32> {
    let s = ShadowMap::build(cfg.t, cfg.n)?;
    let csv = cfg.out.join(format!("shadow_t{}.csv", cfg.t));
    output::write_shadow_csv(&csv, &s)?;
    announce(&csv);
    Ok(0)
}

fn run_hj(cfg: &RunConfig) -> Result<i32> {
    let lambda0 = Complex64::new(cfg.lambda0.0, cfg.lambda0.1);
    if lambda0 == Complex64::new(0.0, 0.0) {
        return Err(Error::Config(
            "the characteristic system is not defined from λ0 = 0; pick a nonzero --lambda0".into(),
        ));
    }
    let (s0, consts) = init_state(lambda0, cfg.x0)?;
    let ts = consts.t_star();
    let t_end = if cfg.t < ts { cfg.t } else { 0.95 * ts };
    if cfg.t >= ts {
        eprintln!("requested t = {} is past the blow-up time t* = {ts:.6}; integrating to 0.95·t*", cfg.t);
    }
    let traj = integrate(&s0, t_end, ts / 4096.0)?;
    let csv = cfg.out.join("trajectory.csv");
    output::write_trajectory_csv(&csv, &traj)?;
    announce(&csv);
    let meta = cfg.out.join("trajectory_constants.json");
    output::write_trajectory_meta(&meta, &traj)?;
    announce(&meta);
    Ok(0)
}

fn run_simulate(cfg: &RunConfig) -> Result<i32> {
    let sim = SimConfig {
        dim: cfg.dim,
        t: cfg.t,
        steps: cfg.steps,
        seed: cfg.seed,
        samples: cfg.samples,
        group: cfg.group,
    };
    let cloud = simulate_cloud(&sim)?;
    let csv = cfg.out.join(format!("eigenvalues_t{}.csv", cfg.t));
    output::write_eigen_csv(&csv, &cloud)?;
    announce(&csv);
    let prov = cfg.out.join(format!("eigenvalues_t{}.json", cfg.t));
    output::write_json(&prov, &cloud.config)?;
    announce(&prov);
    let report = compare_to_brown(&cloud, cfg.t)?;
    let rep_path = cfg.out.join(format!("report_t{}.json", cfg.t));
    output::write_json(&rep_path, &report)?;
    announce(&rep_path);
    println!(
        "inside fraction {:.4}, KS(arg) {:.4}, KS(shadow) {:.4}, outside {}",
        report.inside_fraction, report.ks_arg, report.ks_shadow, report.n_outside
    );
    if cfg.svg {
        // histogram outline of eigenvalue arguments against the angular density
        let tm = crate::region::theta_max(cfg.t)?;
        let bins = 64usize;
        let mut counts = vec![0usize; bins];
        for z in &cloud.eigenvalues {
            let th = z.arg();
            let idx = (((th + tm) / (2.0 * tm) * bins as f64) as usize).min(bins - 1);
            if th.abs() <= tm {
                counts[idx] += 1;
            }
        }
        let scale = bins as f64 / (2.0 * tm * cloud.eigenvalues.len() as f64);
        let mut hist = Vec::with_capacity(2 * bins);
        for (i, &c) in counts.iter().enumerate() {
            let lo = -tm + 2.0 * tm * i as f64 / bins as f64;
            let hi = -tm + 2.0 * tm * (i + 1) as f64 / bins as f64;
            let y = c as f64 * scale;
            hist.push((lo, y));
            hist.push((hi, y));
        }
        let curve: Vec<(f64, f64)> = (0..257)
            .map(|i| {
                let th = -tm + 2.0 * tm * i as f64 / 256.0;
                (th, crate::density::angular_marginal(cfg.t, th).unwrap_or(0.0))
            })
            .collect();
        let svg = cfg.out.join(format!("hist_t{}.svg", cfg.t));
        output::write_svg_polylines(&svg, &[hist, curve])?;
        announce(&svg);
    }
    Ok(0)
}

fn run_verify(cfg: &RunConfig) -> Result<i32> {
    let results = verify::run_suite(cfg.quick);
    let mut all_pass = true;
    println!("{:<42} {:>6}  {:>8}  detail", "check", "status", "time");
    for r in &results {
        all_pass &= r.passed;
        println!(
            "{:<42} {:>6}  {:>7.2}s  {}",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.seconds,
            r.detail
        );
    }
    if all_pass {
        println!("all {} checks passed", results.len());
        Ok(0)
    } else {
        eprintln!("verification FAILED");
        Ok(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_flags_over_file_over_defaults() {
        let file = PartialConfig {
            subcommand: Some(Subcommand::Density),
            t: Some(3.0),
            n: Some(64),
            ..Default::default()
        };
        let flags = PartialConfig { t: Some(5.0), ..Default::default() };
        let cfg = RunConfig::defaults(Subcommand::Region).overlay(&file).overlay(&flags);
        assert_eq!(cfg.subcommand, Subcommand::Density);
        assert_eq!(cfg.t, 5.0);
        assert_eq!(cfg.n, 64);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn config_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"subcommand":"density","t":1.5,"N":32,"route":"omega"}"#).unwrap();
        let cfg = resolve(Some(&path), &PartialConfig::default()).unwrap();
        assert_eq!(cfg.subcommand, Subcommand::Density);
        assert_eq!(cfg.t, 1.5);
        assert_eq!(cfg.dim, 32);
    }

    #[test]
    fn missing_subcommand_is_config_error() {
        let err = resolve(None, &PartialConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn validation_rejects_bad_values() {
        let mut cfg = RunConfig::defaults(Subcommand::Density);
        cfg.t = -1.0;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::defaults(Subcommand::Density);
        cfg.n = 4;
        assert!(cfg.validate().is_err());
    }
}
