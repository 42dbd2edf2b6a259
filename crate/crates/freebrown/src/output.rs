//! File emission: CSV tables at 17 significant digits, JSON sidecars, and a
//! minimal polyline SVG writer.

use crate::density::DensityGrid;
use crate::hjflow::Trajectory;
use crate::matsim::EigenCloud;
use crate::region::RegionBoundary;
use crate::shadow::ShadowMap;
use crate::Result;
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

/// Format with 17 significant digits so the value round-trips exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a CSV with LF line endings and a mandatory header row.
pub fn write_csv(path: &Path, header: &str, rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut body = String::new();
    body.push_str(header);
    body.push('\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                body.push(',');
            }
            let _ = write!(body, "{}", fmt_f64(v));
            first = false;
        }
        body.push('\n');
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(body.as_bytes())?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let body = serde_json::to_string_pretty(value).map_err(|e| crate::Error::Config(e.to_string()))?;
    let mut f = std::fs::File::create(path)?;
    f.write_all(body.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

/// Boundary CSV: `theta,r_outer,r_inner` in increasing θ.
pub fn write_boundary_csv(path: &Path, b: &RegionBoundary) -> Result<()> {
    write_csv(
        path,
        "theta,r_outer,r_inner",
        b.samples.iter().map(|&(theta, r)| vec![theta, r, 1.0 / r]),
    )
}

/// Density CSV: `theta,r_t,w_t,a_t`.
pub fn write_density_csv(path: &Path, g: &DensityGrid) -> Result<()> {
    write_csv(
        path,
        "theta,r_t,w_t,a_t",
        g.rows.iter().map(|r| vec![r.theta, r.r_t, r.w_t, r.a_t]),
    )
}

#[derive(Serialize)]
pub struct DensityMeta {
    pub t: f64,
    pub n: usize,
    pub route: crate::density::Route,
    pub tol: f64,
}

pub fn write_density_meta(path: &Path, g: &DensityGrid) -> Result<()> {
    write_json(path, &DensityMeta { t: g.t, n: g.n, route: g.route, tol: g.tol })
}

/// Spectral density CSV: `phi,nu_density`.
pub fn write_biane_csv(path: &Path, t: f64, n: usize) -> Result<()> {
    let pm = crate::shadow::phi_max(t)?;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let phi = pm * (std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * n as f64)).cos();
        rows.push(vec![phi, crate::shadow::biane_density(t, phi)?]);
    }
    rows.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
    write_csv(path, "phi,nu_density", rows.into_iter())
}

/// Shadow samples CSV: `theta,phi`.
pub fn write_shadow_csv(path: &Path, s: &ShadowMap) -> Result<()> {
    write_csv(path, "theta,phi", s.phi_samples.iter().map(|&(theta, phi)| vec![theta, phi]))
}

/// Trajectory CSV: `t,a,b,x,p_a,p_b,p_x,H,L,Psi,xpx2`.
pub fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    write_csv(
        path,
        "t,a,b,x,p_a,p_b,p_x,H,L,Psi,xpx2",
        traj.rows.iter().map(|r| {
            vec![
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
            ]
        }),
    )
}

#[derive(Serialize)]
pub struct TrajectoryMeta {
    pub p0: f64,
    pub delta: f64,
    pub c: f64,
    pub psi: f64,
    pub h0: f64,
    pub y0: f64,
    pub a_sq: f64,
    pub t_star: f64,
    pub lambda0_abs: f64,
    pub theta0: f64,
    pub x0: f64,
}

pub fn write_trajectory_meta(path: &Path, traj: &Trajectory) -> Result<()> {
    let c = &traj.constants;
    write_json(
        path,
        &TrajectoryMeta {
            p0: c.p0,
            delta: c.delta,
            c: c.c,
            psi: c.psi,
            h0: c.h0,
            y0: c.y0,
            a_sq: c.a_sq,
            t_star: c.t_star(),
            lambda0_abs: c.lambda0_abs,
            theta0: c.theta0,
            x0: c.x0,
        },
    )
}

/// Eigenvalue CSV: `re,im` per row.
pub fn write_eigen_csv(path: &Path, cloud: &EigenCloud) -> Result<()> {
    write_csv(path, "re,im", cloud.eigenvalues.iter().map(|z| vec![z.re, z.im]))
}

/// Minimal SVG writer: black polylines on a white canvas, view box fitted
/// to the data with 5% padding.
pub fn write_svg_polylines(path: &Path, polylines: &[Vec<(f64, f64)>]) -> Result<()> {
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for line in polylines {
        for &(x, y) in line {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !xmin.is_finite() {
        (xmin, xmax, ymin, ymax) = (0.0, 1.0, 0.0, 1.0);
    }
    let pad = 0.05 * ((xmax - xmin).max(ymax - ymin)).max(1e-9);
    let (x0, y0) = (xmin - pad, ymin - pad);
    let (w, h) = (xmax - xmin + 2.0 * pad, ymax - ymin + 2.0 * pad);
    let mut body = String::new();
    let _ = writeln!(
        body,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0} {y0} {w} {h}\" width=\"640\" height=\"640\">"
    );
    // flip y so mathematical orientation displays upright
    let _ = writeln!(body, "<g transform=\"translate(0,{}) scale(1,-1)\">", 2.0 * y0 + h);
    for line in polylines {
        let pts: Vec<String> = line.iter().map(|&(x, y)| format!("{x:.6},{y:.6}")).collect();
        let _ = writeln!(
            body,
            "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"{:.6}\" points=\"{}\"/>",
            w / 400.0,
            pts.join(" ")
        );
    }
    let _ = writeln!(body, "</g>");
    let _ = writeln!(body, "</svg>");
    let mut f = std::fs::File::create(path)?;
    f.write_all(body.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_formatting_round_trips() {
        for &v in &[std::f64::consts::PI, 1.0 / 3.0, 1e-300, -2.5e17, 0.1 + 0.2] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "{s}");
        }
    }

    #[test]
    fn csv_has_lf_endings_and_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        write_csv(&path, "a,b", vec![vec![1.0, 2.0], vec![3.0, 4.5]].into_iter()).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("a,b\n"));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn svg_writer_emits_polylines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.svg");
        write_svg_polylines(&path, &[vec![(0.0, 0.0), (1.0, 1.0)], vec![(0.0, 1.0), (1.0, 0.0)]]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("<svg"));
        assert_eq!(text.matches("<polyline").count(), 2);
    }
}
