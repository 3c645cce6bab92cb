//! Initial-value integration of `u'' = (q(x) - lambda w(x)) u` in Cartesian
//! and Prüfer coordinates.
//!
//! Every problem piece (a span on which `q` and `w` are single polynomials) is
//! integrated separately with an adaptive Dormand-Prince 5(4) pair, so jumps
//! in the coefficients never fall inside a step.
//!
//! The Prüfer angle is integrated directly and never reduced modulo pi. Where
//! `sin(theta) = 0` its derivative is `cos^2(theta) = 1`, so the angle crosses
//! multiples of pi only upward, whatever the sign of `lambda`.

use crate::error::{Error, Result};
use crate::problem::{Piece, SpectralProblem};
use crate::sampled::uniform_grid;

/// Local error tolerances of the adaptive stepper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rel: 1e-10, abs: 1e-12 }
    }
}

const MAX_STEPS: usize = 5_000_000;

/// `(x, u, u')` along a solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianState {
    pub x: f64,
    pub u: f64,
    pub du: f64,
}

/// Prüfer coordinates: `u = r sin(theta)`, `u' = r cos(theta)`, `logr = ln r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PruferState {
    pub x: f64,
    pub theta: f64,
    pub logr: f64,
}

impl PruferState {
    pub fn to_cartesian(&self) -> CartesianState {
        let r = self.logr.exp();
        CartesianState { x: self.x, u: r * self.theta.sin(), du: r * self.theta.cos() }
    }
}

/// Solution with `u(0) = sin(left)`, `u'(0) = -cos(left)` at the right end of the interval.
pub fn integrate_cartesian(prob: &SpectralProblem, lambda: f64, tol: Tolerances) -> Result<CartesianState> {
    let mut last = None;
    drive(prob, cartesian_rhs(lambda), cartesian_start(prob), &[prob.length()], tol, |x, y| {
        last = Some(CartesianState { x, u: y[0], du: y[1] });
    })?;
    Ok(last.expect("the interval end is always a stop"))
}

/// Cartesian solution sampled at `len` uniform nodes (dense trace).
pub fn cartesian_trace(
    prob: &SpectralProblem,
    lambda: f64,
    len: usize,
    tol: Tolerances,
) -> Result<Vec<CartesianState>> {
    let stops: Vec<f64> = uniform_grid(0.0, prob.length(), len).collect();
    let mut out = Vec::with_capacity(len);
    drive(prob, cartesian_rhs(lambda), cartesian_start(prob), &stops, tol, |x, y| {
        out.push(CartesianState { x, u: y[0], du: y[1] });
    })?;
    Ok(out)
}

/// Prüfer state at the right end, starting from `theta(0) = pi - left`, `r(0) = 1`.
pub fn integrate_prufer(prob: &SpectralProblem, lambda: f64, tol: Tolerances) -> Result<PruferState> {
    let mut last = None;
    drive(prob, prufer_rhs(lambda), prufer_start(prob), &[prob.length()], tol, |x, y| {
        last = Some(PruferState { x, theta: y[0], logr: y[1] });
    })?;
    Ok(last.expect("the interval end is always a stop"))
}

/// Prüfer trace at `len` uniform nodes.
pub fn prufer_trace(prob: &SpectralProblem, lambda: f64, len: usize, tol: Tolerances) -> Result<Vec<PruferState>> {
    let stops: Vec<f64> = uniform_grid(0.0, prob.length(), len).collect();
    let mut out = Vec::with_capacity(len);
    drive(prob, prufer_rhs(lambda), prufer_start(prob), &stops, tol, |x, y| {
        out.push(PruferState { x, theta: y[0], logr: y[1] });
    })?;
    Ok(out)
}

/// Terminal Prüfer angle alone; the amplitude equation is decoupled and skipped.
pub(crate) fn terminal_angle(prob: &SpectralProblem, lambda: f64, tol: Tolerances) -> Result<f64> {
    let mut theta = f64::NAN;
    let start = [std::f64::consts::PI - prob.angles().left()];
    drive(
        prob,
        move |piece: &Piece, x: f64, y: &[f64; 1]| {
            let (s, c) = y[0].sin_cos();
            [c * c + (lambda * piece.weight.eval(x) - piece.potential.eval(x)) * s * s]
        },
        start,
        &[prob.length()],
        tol,
        |_, y| theta = y[0],
    )?;
    Ok(theta)
}

fn cartesian_start(prob: &SpectralProblem) -> [f64; 2] {
    let (s, c) = prob.angles().left().sin_cos();
    [s, -c]
}

fn prufer_start(prob: &SpectralProblem) -> [f64; 2] {
    [std::f64::consts::PI - prob.angles().left(), 0.0]
}

fn cartesian_rhs(lambda: f64) -> impl Fn(&Piece, f64, &[f64; 2]) -> [f64; 2] {
    move |piece, x, y| [y[1], (piece.potential.eval(x) - lambda * piece.weight.eval(x)) * y[0]]
}

fn prufer_rhs(lambda: f64) -> impl Fn(&Piece, f64, &[f64; 2]) -> [f64; 2] {
    move |piece, x, y| {
        let (s, c) = y[0].sin_cos();
        let g = lambda * piece.weight.eval(x) - piece.potential.eval(x);
        [c * c + g * s * s, (1.0 - g) * s * c]
    }
}

/// Integrates across every problem piece, reporting the state at each stop.
///
/// `stops` must be sorted and lie in `[0, length]`.
fn drive<const N: usize>(
    prob: &SpectralProblem,
    rhs: impl Fn(&Piece, f64, &[f64; N]) -> [f64; N],
    mut y: [f64; N],
    stops: &[f64],
    tol: Tolerances,
    mut on_stop: impl FnMut(f64, &[f64; N]),
) -> Result<()> {
    let mut next_stop = 0;
    while next_stop < stops.len() && stops[next_stop] <= 0.0 {
        on_stop(0.0, &y);
        next_stop += 1;
    }
    let mut h = f64::NAN;
    for piece in prob.pieces() {
        let f = |x: f64, y: &[f64; N]| rhs(piece, x, y);
        let mut x = piece.a;
        while next_stop < stops.len() && stops[next_stop] <= piece.b {
            let target = stops[next_stop];
            if target > x {
                h = dopri5(&f, x, target, &mut y, h, tol)?;
                x = target;
            }
            on_stop(target, &y);
            next_stop += 1;
        }
        if x < piece.b {
            h = dopri5(&f, x, piece.b, &mut y, h, tol)?;
        }
    }
    Ok(())
}

// Dormand-Prince 5(4) coefficients.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the fifth- and fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += c * k[i];
        }
    }
    out
}

/// Advances `y` from `x0` to `x1` exactly and returns the last accepted step size.
///
/// `h0` seeds the first trial step; NaN selects a default.
fn dopri5<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    x0: f64,
    x1: f64,
    y: &mut [f64; N],
    h0: f64,
    tol: Tolerances,
) -> Result<f64> {
    let span = x1 - x0;
    let mut x = x0;
    let mut h = if h0.is_finite() && h0 > 0.0 { h0.min(span) } else { span.min(1e-2) };
    let mut k1 = f(x, y);
    let mut last_h = h;
    for _ in 0..MAX_STEPS {
        let remaining = x1 - x;
        if remaining <= 0.0 {
            return Ok(last_h);
        }
        let natural = h;
        // a step ending within rounding of the stop absorbs the remainder
        let last = h >= remaining || remaining - h <= 1e-8 * remaining;
        if last {
            h = remaining;
        }
        let k2 = f(x + C2 * h, &axpy(y, &[(h * A21, &k1)]));
        let k3 = f(x + C3 * h, &axpy(y, &[(h * A31, &k1), (h * A32, &k2)]));
        let k4 = f(x + C4 * h, &axpy(y, &[(h * A41, &k1), (h * A42, &k2), (h * A43, &k3)]));
        let k5 = f(x + C5 * h, &axpy(y, &[(h * A51, &k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)]));
        let k6 = f(x + h, &axpy(y, &[(h * A61, &k1), (h * A62, &k2), (h * A63, &k3), (h * A64, &k4), (h * A65, &k5)]));
        let y_new = axpy(y, &[(h * B1, &k1), (h * B3, &k3), (h * B4, &k4), (h * B5, &k5), (h * B6, &k6)]);
        let x_new = if last { x1 } else { x + h };
        let k7 = f(x_new, &y_new);

        let mut err = 0.0;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::Integration { x, reason: "non-finite state".into() });
        }

        if err <= 1.0 {
            x = x_new;
            *y = y_new;
            k1 = k7;
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if last {
                return Ok(natural.max(h * grow));
            }
            last_h = h;
            h *= grow;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
        if h <= 1e-14 * x.abs().max(1.0) {
            return Err(Error::Integration { x, reason: format!("step size underflow (h = {h:e})") });
        }
    }
    Err(Error::Integration { x, reason: "step budget exhausted".into() })
}
