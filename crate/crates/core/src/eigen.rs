//! Eigenvalue localization by Prüfer-angle shooting, eigenfunctions and inner products.
//!
//! The n-th eigenvalue is the unique `lambda` at which the terminal Prüfer
//! angle equals `(n + 1) pi - right`. The terminal angle is strictly
//! increasing in `lambda`, so the index comes for free and the search is a
//! bracketed one-dimensional root find.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::fmt_real;
use crate::ivp::{self, CartesianState, Tolerances};
use crate::problem::{CoefficientFn, SpectralProblem};
use crate::sampled::{simpson, SampledFn};

/// Default number of uniform samples for eigenfunctions and inner products.
pub const DEFAULT_GRID: usize = 4097;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Integrator tolerances used while shooting.
    pub ivp: Tolerances,
    /// Convergence tolerance on lambda, applied as `tol * max(1, |lambda|)`.
    pub lambda_tol: f64,
    /// Bisection stops once the bracket is narrower than this (same scaling).
    pub bisection_width: f64,
    /// Bracket expansion gives up beyond `|lambda| > bracket_bound`.
    pub bracket_bound: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            ivp: Tolerances { rel: 1e-13, abs: 1e-15 },
            lambda_tol: 1e-10,
            bisection_width: 1e-6,
            bracket_bound: 1e12,
        }
    }
}

/// `W(lambda) = u(l) cos(right) + u'(l) sin(right)`; zero exactly at eigenvalues.
pub fn characteristic(prob: &SpectralProblem, lambda: f64, opts: &EigenOptions) -> Result<f64> {
    let end = ivp::integrate_cartesian(prob, lambda, opts.ivp)?;
    let (s, c) = prob.angles().right().sin_cos();
    Ok(end.u * c + end.du * s)
}

/// Number of zeros in the open interval of the solution at `lambda`, read off
/// the winding of the Prüfer angle.
pub fn oscillation_count(prob: &SpectralProblem, lambda: f64, opts: &EigenOptions) -> Result<usize> {
    let theta0 = PI - prob.angles().left();
    let theta1 = ivp::terminal_angle(prob, lambda, opts.ivp)?;
    // multiples k*pi with theta0 < k*pi < theta1
    let first = (theta0 / PI).floor() as i64 + 1;
    let last = (theta1 / PI).ceil() as i64 - 1;
    Ok((last - first + 1).max(0) as usize)
}

/// The n-th eigenvalue (counting from 0).
pub fn eigenvalue(prob: &SpectralProblem, n: usize, opts: &EigenOptions) -> Result<f64> {
    let target = (n as f64 + 1.0) * PI - prob.angles().right();
    let residual = |lambda: f64| ivp::terminal_angle(prob, lambda, opts.ivp).map(|t| t - target);
    let fail = |reason: String| Error::Localization { n, reason };

    let f0 = residual(0.0)?;
    if f0 == 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut flo, mut hi, mut fhi);
    if f0 > 0.0 {
        (hi, fhi) = (0.0, f0);
        let mut trial: f64 = -1.0;
        loop {
            if trial.abs() > opts.bracket_bound {
                return Err(fail(format!("no sign change above -{:e}", opts.bracket_bound)));
            }
            let f = residual(trial)?;
            if f == 0.0 {
                return Ok(trial);
            }
            if f < 0.0 {
                (lo, flo) = (trial, f);
                break;
            }
            (hi, fhi) = (trial, f);
            trial *= 2.0;
        }
    } else {
        (lo, flo) = (0.0, f0);
        let (wmin, _) = prob.weight().extremum();
        let (_, qmax) = prob.potential().extremum();
        let base = (n as f64 + 1.0) * PI / prob.length();
        let mut trial = base * base / wmin + qmax.max(0.0) + 1.0;
        loop {
            if trial > opts.bracket_bound {
                return Err(fail(format!("no sign change below {:e}", opts.bracket_bound)));
            }
            let f = residual(trial)?;
            if f == 0.0 {
                return Ok(trial);
            }
            if f > 0.0 {
                (hi, fhi) = (trial, f);
                break;
            }
            (lo, flo) = (trial, f);
            trial *= 2.0;
        }
    }

    let scale = |x: f64| x.abs().max(1.0);
    while hi - lo > opts.bisection_width * scale(0.5 * (lo + hi)) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f = residual(mid)?;
        if f == 0.0 {
            return Ok(mid);
        }
        if f < 0.0 {
            (lo, flo) = (mid, f);
        } else {
            (hi, fhi) = (mid, f);
        }
    }

    // Secant polish, kept inside the bracket.
    let (mut x0, mut f0, mut x1, mut f1) = (lo, flo, hi, fhi);
    for _ in 0..100 {
        let mut x = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let f = residual(x)?;
        let step = (x - x1).abs();
        if f == 0.0 || step <= opts.lambda_tol * scale(x) || hi - lo <= opts.lambda_tol * scale(x) {
            return Ok(x);
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        (x0, f0, x1, f1) = (x1, f1, x, f);
    }
    Err(fail("secant refinement did not converge".into()))
}

/// The first `count` eigenvalues.
pub fn spectrum(prob: &SpectralProblem, count: usize, opts: &EigenOptions) -> Result<Vec<f64>> {
    (0..count).map(|n| eigenvalue(prob, n, opts)).collect()
}

/// An eigenvalue with its eigenfunction sampled on a uniform grid.
///
/// Samples keep the sign fixed by the initial data `(sin(left), -cos(left))`
/// and are scaled so that the weighted norm `∫ w u² dx` is 1.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub n: usize,
    pub value: f64,
    pub samples: Vec<CartesianState>,
    /// `(∫ w u² dx)^(1/2)` of the unscaled shooting solution.
    pub normalization: f64,
}

#[derive(Debug, Serialize)]
struct EigenpairHeader {
    n: usize,
    lambda: f64,
    normalization: f64,
}

impl Eigenpair {
    pub fn u(&self) -> SampledFn {
        self.column(|s| s.u)
    }

    pub fn du(&self) -> SampledFn {
        self.column(|s| s.du)
    }

    fn column(&self, f: impl Fn(&CartesianState) -> f64) -> SampledFn {
        let end = self.samples.last().unwrap().x;
        SampledFn { start: self.samples[0].x, end, values: self.samples.iter().map(f).collect() }
    }

    /// Sign changes of the sampled eigenfunction, ignoring samples that are
    /// zero to within `1e-10` of the sup norm (boundary zeros).
    pub fn interior_zeros(&self) -> usize {
        let u = self.u();
        let floor = 1e-10 * u.max_abs();
        let mut last = 0.0f64;
        let mut count = 0;
        for &v in &u.values {
            if v.abs() <= floor {
                continue;
            }
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
        count
    }

    pub fn header_json(&self) -> String {
        serde_json::to_string(&EigenpairHeader { n: self.n, lambda: self.value, normalization: self.normalization })
            .expect("plain struct serializes")
    }

    /// CSV `x,u,du` preceded by a `# {json header}` line.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "# {}", self.header_json())?;
        writeln!(out, "x,u,du")?;
        for s in &self.samples {
            writeln!(out, "{},{},{}", fmt_real(s.x), fmt_real(s.u), fmt_real(s.du))?;
        }
        Ok(())
    }
}

/// Eigenvalue `n` and its weight-normalized eigenfunction on `grid_points` nodes.
pub fn eigenfunction(prob: &SpectralProblem, n: usize, grid_points: usize, opts: &EigenOptions) -> Result<Eigenpair> {
    let value = eigenvalue(prob, n, opts)?;
    eigenfunction_at(prob, n, value, grid_points, opts)
}

/// Builds the eigenpair for an eigenvalue that is already known.
pub fn eigenfunction_at(
    prob: &SpectralProblem,
    n: usize,
    value: f64,
    grid_points: usize,
    opts: &EigenOptions,
) -> Result<Eigenpair> {
    if grid_points < 3 {
        return Err(Error::Usage("eigenfunctions need at least 3 grid points".into()));
    }
    let mut samples = spliced_trace(prob, value, grid_points, opts)?;
    let weight = prob.weight();
    let integrand: Vec<f64> = samples.iter().map(|s| weight.eval_unchecked(s.x) * s.u * s.u).collect();
    let h = prob.length() / (grid_points - 1) as f64;
    let normalization = simpson(&integrand, h).sqrt();
    for s in &mut samples {
        s.u /= normalization;
        s.du /= normalization;
    }
    Ok(Eigenpair { n, value, samples, normalization })
}

/// Solution at `lambda` from shooting off both ends, joined where the two agree best.
///
/// One-sided shooting loses a decaying eigenfunction to the growing solution
/// when `lambda` lies far below the potential. The left and right solutions
/// are each accurate where they decay, so the splice point is the node
/// minimizing `|sin(theta_L - theta_R)|` and the right solution is rescaled
/// there in the least-squares sense on `(u, u')`.
fn spliced_trace(prob: &SpectralProblem, lambda: f64, len: usize, opts: &EigenOptions) -> Result<Vec<CartesianState>> {
    let mut left = ivp::cartesian_trace(prob, lambda, len, opts.ivp)?;
    let mirrored = ivp::cartesian_trace(&prob.reflected(), lambda, len, opts.ivp)?;
    let right: Vec<(f64, f64)> = mirrored.iter().rev().map(|s| (s.u, -s.du)).collect();
    let mismatch = |i: usize| {
        let (l, (ru, rdu)) = (&left[i], right[i]);
        let cross = (l.u * rdu - l.du * ru).abs();
        cross / (l.u.hypot(l.du) * ru.hypot(rdu))
    };
    let splice = (0..len).min_by(|&i, &j| mismatch(i).total_cmp(&mismatch(j))).unwrap_or(0);
    let (lu, ldu) = (left[splice].u, left[splice].du);
    let (ru, rdu) = right[splice];
    let scale = (lu * ru + ldu * rdu) / (ru * ru + rdu * rdu);
    for (s, &(u, du)) in left.iter_mut().zip(&right).skip(splice + 1) {
        s.u = scale * u;
        s.du = scale * du;
    }
    Ok(left)
}

/// Weight applied inside an inner product.
#[derive(Debug, Clone, Copy)]
pub enum Weight<'a> {
    Unit,
    Coefficient(&'a CoefficientFn),
    Sampled(&'a SampledFn),
}

/// `∫ weight f g dx` by composite Simpson over the common uniform grid.
pub fn inner_product(f: &SampledFn, g: &SampledFn, weight: Weight<'_>) -> Result<f64> {
    if !f.same_grid(g) {
        return Err(Error::Usage("inner product of functions on different grids".into()));
    }
    let integrand: Vec<f64> = match weight {
        Weight::Unit => f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect(),
        Weight::Coefficient(w) => {
            if w.interval() != (f.start, f.end) {
                return Err(Error::Usage("weight and samples live on different intervals".into()));
            }
            f.nodes().zip(f.values.iter().zip(&g.values)).map(|(x, (a, b))| w.eval_unchecked(x) * a * b).collect()
        }
        Weight::Sampled(w) => {
            if !w.same_grid(f) {
                return Err(Error::Usage("sampled weight is on a different grid".into()));
            }
            w.values.iter().zip(f.values.iter().zip(&g.values)).map(|(w, (a, b))| w * a * b).collect()
        }
    };
    Ok(simpson(&integrand, f.step()))
}
