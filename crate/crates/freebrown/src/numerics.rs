//! Shared numerical kernels: stable scalar special functions, Gauss-Legendre
//! quadrature, cumulative distribution tables, and a Kolmogorov-Smirnov
//! statistic.

/// `log(x)/(x-1)` with the removable singularity at `x = 1` filled in.
///
/// Near 1 the quotient is evaluated by a six-term series in `u = x-1`; the
/// truncation error is below 1e-14 relative for `|u| < 2e-4`.
pub fn log_ratio(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let u = x - 1.0;
    if u.abs() < 2.1e-4 {
        1.0 - u * (0.5 - u * (1.0 / 3.0 - u * (0.25 - u * (0.2 - u / 6.0))))
    } else {
        x.ln() / u
    }
}

/// `cosh(√q)` for `q ≥ 0`, analytically continued to `cos(√-q)` for `q < 0`.
pub fn cosh_even(q: f64) -> f64 {
    if q > 1e-8 {
        q.sqrt().cosh()
    } else if q < -1e-8 {
        (-q).sqrt().cos()
    } else {
        series_even(q, &COSH_COEFFS)
    }
}

/// `sinh(√q)/√q` continued through `q = 0` (value 1) and to `sin(√-q)/√-q`.
pub fn sinhc_even(q: f64) -> f64 {
    if q > 1e-8 {
        let s = q.sqrt();
        s.sinh() / s
    } else if q < -1e-8 {
        let s = (-q).sqrt();
        s.sin() / s
    } else {
        series_even(q, &SINHC_COEFFS)
    }
}

// 1/(2k)! and 1/(2k+1)! through eight terms.
const COSH_COEFFS: [f64; 8] = [
    1.0,
    1.0 / 2.0,
    1.0 / 24.0,
    1.0 / 720.0,
    1.0 / 40320.0,
    1.0 / 3628800.0,
    1.0 / 479001600.0,
    1.0 / 87178291200.0,
];
const SINHC_COEFFS: [f64; 8] = [
    1.0,
    1.0 / 6.0,
    1.0 / 120.0,
    1.0 / 5040.0,
    1.0 / 362880.0,
    1.0 / 39916800.0,
    1.0 / 6227020800.0,
    1.0 / 1307674368000.0,
];

fn series_even(q: f64, coeffs: &[f64; 8]) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * q + c;
    }
    acc
}

/// `log((δ+γ)/(δ-γ))/γ` with `γ = √(δ²-4)`, an even analytic function of γ.
///
/// Used for blow-up times; the limit at `δ = 2` is 1.  Series evaluation in
/// `e = γ²/δ²` keeps full precision through the branch point.
pub fn delta_log_factor(delta: f64) -> f64 {
    debug_assert!(delta >= 2.0);
    let g2 = delta * delta - 4.0;
    let e = g2 / (delta * delta);
    if e < 1e-4 {
        // (2/δ) Σ e^k/(2k+1), artanh series; next term below 1e-21
        (2.0 / delta) * (1.0 + e * (1.0 / 3.0 + e * (0.2 + e * (1.0 / 7.0 + e / 9.0))))
    } else {
        let g = g2.sqrt();
        ((delta + g) / (delta - g)).ln() / g
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Newton iteration on the Legendre recurrence; standard Tricomi initial
/// guess.  Accurate to machine precision for the sizes used here (n ≤ 64).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        let (_, d) = legendre(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

// Value and derivative of P_n at x via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed-rule integration of `f` over `[a, b]`.
pub fn integrate_gl(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let c1 = 0.5 * (b - a);
    let c2 = 0.5 * (a + b);
    let mut acc = 0.0;
    for (&x, &w) in nodes.iter().zip(weights) {
        acc += w * f(c1 * x + c2);
    }
    c1 * acc
}

/// Panel edges on `[lo, hi]` refined geometrically toward `hi`.
///
/// The first panel covers half the interval, each subsequent panel half the
/// remainder; `levels` panels leave an unresolved sliver of width
/// `(hi-lo)·2^-levels`, negligible for integrable endpoint singularities.
pub fn panels_refined_toward(lo: f64, hi: f64, levels: usize) -> Vec<(f64, f64)> {
    let w = hi - lo;
    let mut edges = Vec::with_capacity(levels + 1);
    edges.push(lo);
    for k in 1..levels {
        edges.push(hi - w * 0.5f64.powi(k as i32));
    }
    edges.push(hi);
    edges.windows(2).map(|e| (e[0], e[1])).collect()
}

/// Uniform panels on `[lo, hi]`.
pub fn panels_uniform(lo: f64, hi: f64, count: usize) -> Vec<(f64, f64)> {
    let w = (hi - lo) / count as f64;
    (0..count).map(|i| (lo + i as f64 * w, lo + (i + 1) as f64 * w)).collect()
}

/// Piecewise-linear cumulative distribution table on `[lo, hi]`.
///
/// Builds the running integral of a density over `cells` uniform cells,
/// each integrated with a 4-point Gauss rule, then normalizes so the table
/// ends exactly at 1.
pub struct CdfTable {
    xs: Vec<f64>,
    cum: Vec<f64>,
}

impl CdfTable {
    pub fn build(f: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, cells: usize) -> Self {
        let (gx, gw) = gauss_legendre(4);
        let w = (hi - lo) / cells as f64;
        let mut xs = Vec::with_capacity(cells + 1);
        let mut cum = Vec::with_capacity(cells + 1);
        xs.push(lo);
        cum.push(0.0);
        let mut acc = 0.0;
        for i in 0..cells {
            let a = lo + i as f64 * w;
            let b = a + w;
            acc += integrate_gl(f, a, b, &gx, &gw);
            xs.push(b);
            cum.push(acc);
        }
        let total = acc;
        if total > 0.0 {
            for c in cum.iter_mut() {
                *c /= total;
            }
        }
        Self { xs, cum }
    }

    /// Raw (unnormalized) integral of the density over the table range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return 0.0;
        }
        if x >= self.xs[n - 1] {
            return 1.0;
        }
        let mut lo = 0;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.xs[mid] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let fr = (x - self.xs[lo]) / (self.xs[hi] - self.xs[lo]);
        self.cum[lo] * (1.0 - fr) + self.cum[hi] * fr
    }
}

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
pub fn ks_statistic(samples: &[f64], cdf: &dyn Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let fx = cdf(x);
        worst = worst.max(((i + 1) as f64 / n - fx).abs()).max((i as f64 / n - fx).abs());
    }
    worst
}

/// Normalize an angle into `(-π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut t = theta % two_pi;
    if t <= -std::f64::consts::PI {
        t += two_pi;
    } else if t > std::f64::consts::PI {
        t -= two_pi;
    }
    t
}
