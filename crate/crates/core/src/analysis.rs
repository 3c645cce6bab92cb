//! Geometry of the boundary-angle square and bounds on ground-state eigenvalues.
//!
//! For the string problem the sign of `lambda_0(p, alpha, beta)` does not
//! depend on the density. It vanishes on the zero curve
//! `cos(alpha) cos(beta) - sin(alpha - beta) = 0` inside
//! `[pi/4, pi] x [0, 3pi/4]`, is positive on the side where the indicator is
//! negative within that rectangle, and negative everywhere else.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::eigen::{self, EigenOptions, Weight, DEFAULT_GRID};
use crate::error::{Error, Result};
use crate::export::{fmt_real, write_csv};
use crate::problem::{BoundaryAngles, CoefficientFn, SpectralProblem};
use crate::quad::GaussLegendre;

/// Absolute tolerance on the curve indicator for membership of the zero curve.
pub const CURVE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SignClass {
    Zero,
    Positive,
    Negative,
}

impl SignClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SignClass::Zero => "zero",
            SignClass::Positive => "positive",
            SignClass::Negative => "negative",
        }
    }

    /// Whether a computed eigenvalue has the sign this class predicts,
    /// with `zero_tol` as the acceptance band for `Zero`.
    pub fn agrees_with(&self, lambda0: f64, zero_tol: f64) -> bool {
        match self {
            SignClass::Zero => lambda0.abs() <= zero_tol,
            SignClass::Positive => lambda0 > 0.0,
            SignClass::Negative => lambda0 < 0.0,
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `cos(alpha) cos(beta) - sin(alpha - beta)`.
pub fn curve_indicator(alpha: f64, beta: f64) -> f64 {
    alpha.cos() * beta.cos() - (alpha - beta).sin()
}

/// Determinant of the linear system for a zero mode `u = kx + c`;
/// algebraically equal to the curve indicator.
pub fn zero_mode_determinant(alpha: f64, beta: f64) -> f64 {
    alpha.cos() * beta.sin() + alpha.cos() * beta.cos() - alpha.sin() * beta.cos()
}

/// The point of the zero curve above `alpha`, for `alpha` in `[pi/4, pi]`.
///
/// The curve is `tan(beta) = tan(alpha) - 1`; taking
/// `beta = atan2(sin(alpha) - cos(alpha), cos(alpha))` picks the branch in
/// `[0, 3pi/4]` and passes through `alpha = beta = pi/2` continuously.
pub fn curve_beta(alpha: f64) -> Result<f64> {
    if !(FRAC_PI_4..=PI).contains(&alpha) {
        return Err(Error::domain(format!("alpha = {alpha} is outside [pi/4, pi]")));
    }
    let (s, c) = alpha.sin_cos();
    Ok((s - c).atan2(c).max(0.0))
}

/// `count` points of the zero curve at uniformly spaced `alpha` in `[pi/4, pi]`.
pub fn curve_samples(count: usize) -> Vec<(f64, f64)> {
    crate::sampled::uniform_grid(FRAC_PI_4, PI, count).map(|a| (a, curve_beta(a).expect("alpha in range"))).collect()
}

/// Euclidean distance in the `(alpha, beta)` plane to the zero curve.
pub fn distance_to_curve(alpha: f64, beta: f64) -> f64 {
    let dist = |a: f64| {
        let b = curve_beta(a).expect("alpha in range");
        ((alpha - a).powi(2) + (beta - b).powi(2)).sqrt()
    };
    const COARSE: usize = 2001;
    let grid: Vec<f64> = crate::sampled::uniform_grid(FRAC_PI_4, PI, COARSE).collect();
    let best = (0..COARSE).min_by(|&i, &j| dist(grid[i]).total_cmp(&dist(grid[j]))).unwrap();
    // golden-section refinement on the neighbouring cells
    let (mut lo, mut hi) = (grid[best.saturating_sub(1)], grid[(best + 1).min(COARSE - 1)]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if dist(m1) <= dist(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    dist(0.5 * (lo + hi)).min(dist(grid[best]))
}

fn check_domain(alpha: f64, beta: f64) -> Result<()> {
    BoundaryAngles::new(alpha, beta).map(|_| ())
}

/// Sign of the ground-state eigenvalue of the string problem, from the angles alone.
pub fn classify_lambda0(alpha: f64, beta: f64) -> Result<SignClass> {
    check_domain(alpha, beta)?;
    let eps = CURVE_TOL;
    let indicator = curve_indicator(alpha, beta);
    let in_closed = alpha >= FRAC_PI_4 - eps && beta <= 3.0 * FRAC_PI_4 + eps;
    if indicator.abs() <= CURVE_TOL && in_closed {
        return Ok(SignClass::Zero);
    }
    let in_half_open = alpha > FRAC_PI_4 && beta < 3.0 * FRAC_PI_4;
    if indicator < 0.0 && in_half_open {
        return Ok(SignClass::Positive);
    }
    Ok(SignClass::Negative)
}

/// The linear eigenfunction `u(x) = kx + c` at `lambda = 0`, present on the zero curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroMode {
    pub k: f64,
    pub c: f64,
}

impl ZeroMode {
    /// `(|u(0) cos(alpha) + u'(0) sin(alpha)|, |u(1) cos(beta) + u'(1) sin(beta)|)`.
    pub fn boundary_residuals(&self, alpha: f64, beta: f64) -> (f64, f64) {
        let left = self.c * alpha.cos() + self.k * alpha.sin();
        let right = (self.k + self.c) * beta.cos() + self.k * beta.sin();
        (left.abs(), right.abs())
    }
}

/// Null vector of the zero-mode system, normalized to `k² + c² = 1` with the
/// first nonzero component positive.
pub fn zero_mode(alpha: f64, beta: f64) -> Result<ZeroMode> {
    if classify_lambda0(alpha, beta)? != SignClass::Zero {
        return Err(Error::domain(format!(
            "(alpha, beta) = ({alpha}, {beta}) is off the zero curve; lambda = 0 is not an eigenvalue there"
        )));
    }
    // The left condition alone fixes the direction (k, c) ∝ (cos(alpha), -sin(alpha)).
    let (s, c) = alpha.sin_cos();
    let (mut k, mut cc) = (c, -s);
    let norm = k.hypot(cc);
    k /= norm;
    cc /= norm;
    // |cos(alpha)| below rounding noise counts as zero, e.g. at alpha = pi/2
    if k.abs() < 1e-15 {
        k = 0.0;
    }
    let flip = if k != 0.0 { k < 0.0 } else { cc < 0.0 };
    if flip {
        k = -k;
        cc = -cc;
    }
    Ok(ZeroMode { k: k + 0.0, c: cc + 0.0 })
}

/// Lower and upper bound on a ground-state eigenvalue, with the reference
/// eigenvalue they were scaled or shifted from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
    pub reference: f64,
}

impl Bounds {
    pub fn contains(&self, value: f64, slack: f64) -> bool {
        value >= self.lower - slack && value <= self.upper + slack
    }
}

/// `lambda_0(1, alpha, beta) * [min 1/p, max 1/p]`, ordered so `lower <= upper`
/// (the factors swap when `lambda_0(1, alpha, beta) < 0`).
pub fn lambda0_bounds(p: &CoefficientFn, alpha: f64, beta: f64, opts: &EigenOptions) -> Result<Bounds> {
    let (pmin, pmax) = p.extremum();
    if !(pmin > 0.0) {
        return Err(Error::domain(format!("density minimum {pmin} is not positive")));
    }
    let flat = SpectralProblem::string(CoefficientFn::constant(1.0, p.start(), p.end())?, alpha, beta)?;
    let reference = eigen::eigenvalue(&flat, 0, opts)?;
    let (a, b) = (reference / pmax, reference / pmin);
    Ok(Bounds { lower: a.min(b), upper: a.max(b), reference })
}

/// `mu_0(0, gamma, delta) + [min q, max q]`.
pub fn mu0_bounds(q: &CoefficientFn, gamma: f64, delta: f64, opts: &EigenOptions) -> Result<Bounds> {
    let free = SpectralProblem::sturm_liouville(CoefficientFn::zero(q.start(), q.end()), gamma, delta)?;
    let reference = eigen::eigenvalue(&free, 0, opts)?;
    let (qmin, qmax) = q.extremum();
    Ok(Bounds { lower: reference + qmin, upper: reference + qmax, reference })
}

/// Both sides of the potential-homotopy identity
/// `mu_0(q) = mu_0(0) + ∫₀¹ ∫ q h₀²(·, tq) dx dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    /// `mu_0(0, gamma, delta)`.
    pub free: f64,
}

/// Evaluates the homotopy identity with `t_nodes` Gauss-Legendre nodes in `t`,
/// each inner integral over the `L²`-normalized ground state of `L(tq)`.
pub fn trace_formula_check(
    q: &CoefficientFn,
    gamma: f64,
    delta: f64,
    t_nodes: usize,
    opts: &EigenOptions,
) -> Result<TraceCheck> {
    if t_nodes < 4 {
        return Err(Error::Usage(format!("t_nodes = {t_nodes}; at least 4 are required")));
    }
    let problem = SpectralProblem::sturm_liouville(q.clone(), gamma, delta)?;
    let free = SpectralProblem::sturm_liouville(CoefficientFn::zero(q.start(), q.end()), gamma, delta)?;
    let lhs = eigen::eigenvalue(&problem, 0, opts)?;
    let mu_free = eigen::eigenvalue(&free, 0, opts)?;

    let rule = GaussLegendre::new(t_nodes);
    let nodes: Vec<(f64, f64)> = rule.mapped(0.0, 1.0).collect();
    let terms: Vec<f64> = nodes
        .par_iter()
        .map(|&(t, w)| {
            let scaled = SpectralProblem::sturm_liouville(q.scale(t), gamma, delta)?;
            let ground = eigen::eigenfunction(&scaled, 0, DEFAULT_GRID, opts)?;
            let h = ground.u();
            Ok(w * eigen::inner_product(&h, &h, Weight::Coefficient(q))?)
        })
        .collect::<Result<_>>()?;
    let rhs = mu_free + terms.iter().sum::<f64>();
    Ok(TraceCheck { lhs, rhs, gap: (lhs - rhs).abs(), free: mu_free })
}

/// A rectangular lattice of boundary angles, both axes inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub alpha: (f64, f64),
    pub alpha_count: usize,
    pub beta: (f64, f64),
    pub beta_count: usize,
}

impl Lattice {
    /// `alpha_i = pi (i + 1) / na`, `beta_j = pi j / nb`: covers `(0, pi] x [0, pi)`.
    pub fn standard(alpha_count: usize, beta_count: usize) -> Self {
        Lattice {
            alpha: (PI / alpha_count as f64, PI),
            alpha_count,
            beta: (0.0, PI * (beta_count as f64 - 1.0) / beta_count as f64),
            beta_count,
        }
    }

    fn axis((lo, hi): (f64, f64), count: usize) -> Vec<f64> {
        if count == 1 {
            vec![lo]
        } else {
            crate::sampled::uniform_grid(lo, hi, count).collect()
        }
    }

    pub fn nodes(&self) -> Result<Vec<(f64, f64)>> {
        if self.alpha_count == 0 || self.beta_count == 0 {
            return Err(Error::Usage("lattice needs at least one node per axis".into()));
        }
        for &(a, b) in [(self.alpha.0, self.beta.0), (self.alpha.1, self.beta.1)].iter() {
            check_domain(a, b)?;
        }
        if self.alpha.0 > self.alpha.1 || self.beta.0 > self.beta.1 {
            return Err(Error::Usage("lattice ranges must be increasing".into()));
        }
        let alphas = Lattice::axis(self.alpha, self.alpha_count);
        let betas = Lattice::axis(self.beta, self.beta_count);
        Ok(alphas.iter().flat_map(|&a| betas.iter().map(move |&b| (a, b))).collect())
    }
}

/// One node of a sign map; a solver failure at the node is kept, not raised.
#[derive(Debug, Clone)]
pub struct SignMapRow {
    pub alpha: f64,
    pub beta: f64,
    pub class: SignClass,
    pub lambda0: Result<f64>,
}

/// Predicted sign class and computed `lambda_0(p, alpha, beta)` at every lattice
/// node, in lattice order (alpha-major). Nodes are solved in parallel on the
/// current rayon pool.
pub fn sign_map(lattice: &Lattice, p: &CoefficientFn, opts: &EigenOptions) -> Result<Vec<SignMapRow>> {
    let nodes = lattice.nodes()?;
    SpectralProblem::string(p.clone(), PI, 0.0)?;
    Ok(nodes
        .par_iter()
        .map(|&(alpha, beta)| {
            let class = classify_lambda0(alpha, beta).expect("lattice nodes are validated");
            let lambda0 =
                SpectralProblem::string(p.clone(), alpha, beta).and_then(|prob| eigen::eigenvalue(&prob, 0, opts));
            SignMapRow { alpha, beta, class, lambda0 }
        })
        .collect())
}

/// CSV `alpha,beta,class,lambda0`; failed nodes carry `nan`.
pub fn write_sign_map_csv(rows: &[SignMapRow], out: impl Write) -> std::io::Result<()> {
    write_csv(out, &["alpha", "beta", "class", "lambda0"], rows, |r| {
        vec![
            fmt_real(r.alpha),
            fmt_real(r.beta),
            r.class.as_str().to_string(),
            fmt_real(*r.lambda0.as_ref().unwrap_or(&f64::NAN)),
        ]
    })
}

/// CSV `alpha,beta` of zero-curve samples.
pub fn write_curve_csv(points: &[(f64, f64)], out: impl Write) -> std::io::Result<()> {
    write_csv(out, &["alpha", "beta"], points, |(a, b)| vec![fmt_real(*a), fmt_real(*b)])
}
