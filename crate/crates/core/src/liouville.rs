//! The Liouville transformation from the string `-u'' = lambda p u` on `[0, 1]`
//! to the Sturm-Liouville form `-y'' + q(s) y = mu y` on `[0, pi]`.
//!
//! With `c = ∫₀¹ √p`, `k = pi / c`, `s(x) = k ∫₀ˣ √p` and `y = p^(1/4) u`:
//!
//! * `q = (c/pi)² (p''/(4p²) - 5p'²/(16p³))`, evaluated at `x(s)`;
//! * `lambda = k² mu`;
//! * `cot(alpha) = k √p(0) cot(gamma) + p'(0)/(4p(0))`, and the same relation
//!   links `beta` and `delta` through `p(1)`, `p'(1)`. `alpha = pi` maps to
//!   `gamma = pi` and `beta = 0` to `delta = 0`.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::eigen::{self, EigenOptions};
use crate::error::{Error, Result};
use crate::export::fmt_real;
use crate::poly::Poly;
use crate::problem::{CoefficientFn, SpectralProblem, POSITIVITY_FLOOR};
use crate::quad::{adaptive, GaussLegendre};
use crate::sampled::{uniform_grid, SampledFn};

/// Default number of uniform `x` samples.
pub const DEFAULT_SAMPLES: usize = 2049;

/// Relative mismatch of `p`, `p'`, `p''` across a breakpoint still accepted as `C²`.
const SMOOTHNESS_TOL: f64 = 1e-9;

/// Result of transforming a string problem.
#[derive(Debug, Clone)]
pub struct LiouvilleImage {
    /// `∫₀¹ √p`.
    pub c: f64,
    /// `s(x)` on a uniform `x` grid; `s(0) = 0` and `s(1) = pi` exactly.
    pub s_of_x: SampledFn,
    /// `q(s(x_i))` at the nodes of `s_of_x`.
    pub q_samples: Vec<f64>,
    pub gamma: f64,
    pub delta: f64,
    /// Piecewise-cubic Hermite interpolant of `q` on `[0, pi]`, built from exact
    /// values and `s`-derivatives at the sample nodes and at the breakpoints of `p`.
    pub potential: CoefficientFn,
}

#[derive(Serialize)]
struct ImageHeader {
    c: f64,
    gamma: f64,
    delta: f64,
}

impl LiouvilleImage {
    /// `pi / c`, the factor with `ds/dx = k √p` and `lambda = k² mu`.
    pub fn k(&self) -> f64 {
        PI / self.c
    }

    pub fn header_json(&self) -> String {
        serde_json::to_string(&ImageHeader { c: self.c, gamma: self.gamma, delta: self.delta })
            .expect("plain struct serializes")
    }

    pub fn problem(&self) -> Result<SpectralProblem> {
        SpectralProblem::sturm_liouville(self.potential.clone(), self.gamma, self.delta)
    }

    /// CSV `x,s,q` preceded by a `# {json header}` line.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "# {}", self.header_json())?;
        writeln!(out, "x,s,q")?;
        for (i, (x, q)) in self.s_of_x.nodes().zip(&self.q_samples).enumerate() {
            writeln!(out, "{},{},{}", fmt_real(x), fmt_real(self.s_of_x.values[i]), fmt_real(*q))?;
        }
        Ok(())
    }
}

fn check_c2(p: &CoefficientFn) -> Result<()> {
    let segs = p.segments();
    let (lo, hi) = p.extremum();
    let scale = 1.0 + lo.abs().max(hi.abs());
    for (i, &x) in p.breakpoints().iter().enumerate().skip(1).take(segs.len() - 1) {
        let (mut l, mut r) = (segs[i - 1].clone(), segs[i].clone());
        for order in 0..3 {
            let jump = (l.eval(x) - r.eval(x)).abs();
            if jump > SMOOTHNESS_TOL * scale {
                return Err(Error::Precondition(format!(
                    "density is not C² at x = {x}: derivative of order {order} jumps by {jump:e}"
                )));
            }
            l = l.derivative();
            r = r.derivative();
        }
    }
    Ok(())
}

/// `(q, dq/dx) / (c/pi)²` from the density polynomial on one segment.
fn potential_terms(seg: &Poly, x: f64) -> (f64, f64) {
    let d1 = seg.derivative();
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let (p, p1, p2, p3) = (seg.eval(x), d1.eval(x), d2.eval(x), d3.eval(x));
    let q = p2 / (4.0 * p * p) - 5.0 * p1 * p1 / (16.0 * p * p * p);
    let dq = p3 / (4.0 * p * p) - 9.0 / 8.0 * p1 * p2 / (p * p * p) + 15.0 / 16.0 * p1.powi(3) / p.powi(4);
    (q, dq)
}

/// Maps a string boundary angle to its Sturm-Liouville counterpart at an endpoint
/// where the density has value `p` and slope `dp`.
fn map_angle(angle: f64, p: f64, dp: f64, k: f64) -> f64 {
    let cot = angle.cos() / angle.sin();
    let mapped = (cot - dp / (4.0 * p)) / (k * p.sqrt());
    1f64.atan2(mapped)
}

/// Cubic Hermite polynomial in absolute `s` matching values and slopes at both ends.
fn hermite(s0: f64, s1: f64, (q0, d0): (f64, f64), (q1, d1): (f64, f64)) -> Poly {
    let h = s1 - s0;
    let delta = (q1 - q0) / h;
    let c2 = (3.0 * delta - 2.0 * d0 - d1) / h;
    let c3 = (d0 + d1 - 2.0 * delta) / (h * h);
    // q0 + d0 t + c2 t² + c3 t³ with t = s - s0
    let t = Poly::new(vec![-s0, 1.0]);
    let t2 = &t * &t;
    let t3 = &t2 * &t;
    &(&(&Poly::constant(q0) + &t.scale(d0)) + &t2.scale(c2)) + &t3.scale(c3)
}

/// Transforms `S(p, alpha, beta)` on `[0, 1]` into `L(q, gamma, delta)` on `[0, pi]`.
pub fn transform(p: &CoefficientFn, alpha: f64, beta: f64, grid_points: usize) -> Result<LiouvilleImage> {
    if grid_points < 2 {
        return Err(Error::Usage("the Liouville grid needs at least 2 points".into()));
    }
    SpectralProblem::string(p.clone(), alpha, beta)?;
    p.check_positive(POSITIVITY_FLOOR)?;
    check_c2(p)?;

    let sqrt_p = |x: f64| p.eval_unchecked(x).sqrt();
    let c: f64 = p.pieces().map(|(a, b, seg)| adaptive(&|x: f64| seg.eval(x).sqrt(), a, b, 1e-13)).sum();
    let k = PI / c;

    // uniform nodes merged with the density breakpoints
    let uniform: Vec<f64> = uniform_grid(0.0, 1.0, grid_points).collect();
    let mut nodes: Vec<f64> = uniform.iter().chain(p.breakpoints()).copied().collect();
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-14);

    let rule = GaussLegendre::new(10);
    let mut cumulative = vec![0.0; nodes.len()];
    for i in 1..nodes.len() {
        let (a, b) = (nodes[i - 1], nodes[i]);
        let seg = &p.segments()[p.segment_index(0.5 * (a + b))];
        cumulative[i] = cumulative[i - 1] + rule.integrate(a, b, |x| seg.eval(x).sqrt());
    }
    let total = *cumulative.last().unwrap();
    let mut s: Vec<f64> = cumulative.iter().map(|v| PI * v / total).collect();
    *s.last_mut().unwrap() = PI;

    let qscale = 1.0 / (k * k);
    let mut breakpoints = Vec::with_capacity(nodes.len());
    let mut segments = Vec::with_capacity(nodes.len() - 1);
    breakpoints.push(0.0);
    for i in 1..nodes.len() {
        let (a, b) = (nodes[i - 1], nodes[i]);
        let seg = &p.segments()[p.segment_index(0.5 * (a + b))];
        let end = |x: f64| {
            let (q, dq) = potential_terms(seg, x);
            (qscale * q, qscale * dq / (k * sqrt_p(x)))
        };
        segments.push(hermite(s[i - 1], s[i], end(a), end(b)));
        breakpoints.push(s[i]);
    }
    let potential = CoefficientFn::new(breakpoints, segments)?;

    let mut s_uniform = Vec::with_capacity(grid_points);
    let mut q_samples = Vec::with_capacity(grid_points);
    let mut j = 0;
    for &x in &uniform {
        while (nodes[j] - x).abs() > 1e-14 {
            j += 1;
        }
        s_uniform.push(s[j]);
        let seg = &p.segments()[p.segment_index(x)];
        q_samples.push(qscale * potential_terms(seg, x).0);
    }
    let s_of_x = SampledFn::new(0.0, 1.0, s_uniform)?;

    let seg0 = &p.segments()[0];
    let seg1 = p.segments().last().unwrap();
    let gamma = if alpha == PI { PI } else { map_angle(alpha, seg0.eval(0.0), seg0.derivative().eval(0.0), k) };
    let delta = if beta == 0.0 { 0.0 } else { map_angle(beta, seg1.eval(1.0), seg1.derivative().eval(1.0), k) };

    Ok(LiouvilleImage { c, s_of_x, q_samples, gamma, delta, potential })
}

/// One row of the eigenvalue comparison between the two forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConsistencyRow {
    pub n: usize,
    /// `lambda_n(p, alpha, beta)` from the string problem.
    pub direct: f64,
    /// `k² mu_n(q, gamma, delta)` from the transformed problem.
    pub transformed: f64,
    /// `|direct - transformed| / max(|direct|, 1)`.
    pub rel_gap: f64,
}

/// Compares `lambda_n` with `k² mu_n` for `n = 0..=n_max`.
pub fn consistency_check(
    p: &CoefficientFn,
    alpha: f64,
    beta: f64,
    n_max: usize,
    grid_points: usize,
    opts: &EigenOptions,
) -> Result<Vec<ConsistencyRow>> {
    let image = transform(p, alpha, beta, grid_points)?;
    let string = SpectralProblem::string(p.clone(), alpha, beta)?;
    let sl = image.problem()?;
    let k2 = image.k() * image.k();
    (0..=n_max)
        .map(|n| {
            let direct = eigen::eigenvalue(&string, n, opts)?;
            let transformed = k2 * eigen::eigenvalue(&sl, n, opts)?;
            let rel_gap = (direct - transformed).abs() / direct.abs().max(1.0);
            Ok(ConsistencyRow { n, direct, transformed, rel_gap })
        })
        .collect()
}
