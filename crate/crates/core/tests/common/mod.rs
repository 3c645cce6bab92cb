//! Random problem generators and an independent finite-difference oracle.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use vibstring::poly::Poly;
use vibstring::CoefficientFn;

/// Polynomial `sum c_k (x - x0)^k` in absolute `x`.
pub fn shifted(coeffs: &[f64], x0: f64) -> Poly {
    let t = Poly::new(vec![-x0, 1.0]);
    let mut power = Poly::constant(1.0);
    let mut out = Poly::zero();
    for &c in coeffs {
        out = &out + &power.scale(c);
        power = &power * &t;
    }
    out
}

/// A positive cubic on `[x0, x1]` with values in roughly `[0.3, 3.5]`.
fn positive_piece<R: Rng>(rng: &mut R, x0: f64, x1: f64) -> Poly {
    let w = x1 - x0;
    let a = rng.gen_range(0.75..3.0);
    let b = rng.gen_range(-0.15..0.15) / w;
    let c = rng.gen_range(-0.15..0.15) / (w * w);
    let d = rng.gen_range(-0.15..0.15) / (w * w * w);
    shifted(&[a, b, c, d], x0)
}

/// Piecewise-cubic density on `[0, 1]` with one to three pieces, possibly discontinuous.
pub fn random_density<R: Rng>(rng: &mut R) -> CoefficientFn {
    let pieces = rng.gen_range(1..=3);
    let mut cuts: Vec<f64> = (1..pieces).map(|_| rng.gen_range(0.15..0.85)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 0.05);
    let mut breakpoints = vec![0.0];
    breakpoints.extend(cuts);
    breakpoints.push(1.0);
    let segments = breakpoints.windows(2).map(|w| positive_piece(rng, w[0], w[1])).collect();
    CoefficientFn::new(breakpoints, segments).unwrap()
}

/// Single positive cubic on `[0, 1]`.
pub fn random_smooth_density<R: Rng>(rng: &mut R) -> CoefficientFn {
    CoefficientFn::new(vec![0.0, 1.0], vec![positive_piece(rng, 0.0, 1.0)]).unwrap()
}

/// Polynomial of degree at most 4 on `[0, pi]` with sup norm exactly `bound * u`, `u` in `[0.2, 1]`.
pub fn random_potential<R: Rng>(rng: &mut R, bound: f64) -> CoefficientFn {
    let degree = rng.gen_range(1..=4);
    let coeffs: Vec<f64> = (0..=degree).map(|k| rng.gen_range(-2.0..2.0) / PI.powi(k)).collect();
    let q = CoefficientFn::polynomial(coeffs, 0.0, PI).unwrap();
    let (lo, hi) = q.extremum();
    let sup = lo.abs().max(hi.abs());
    q.scale(bound * rng.gen_range(0.2..1.0) / sup)
}

/// Uniform angles in `(0, pi] x [0, pi)`.
pub fn random_angles<R: Rng>(rng: &mut R) -> (f64, f64) {
    let alpha = PI * (1.0 - rng.gen::<f64>());
    let beta = PI * rng.gen::<f64>();
    (alpha, beta)
}

/// Lowest eigenvalue of the second-order finite-difference discretization of
/// `-u'' = lambda p u`, `u(0) cos(alpha) + u'(0) sin(alpha) = 0`,
/// `u(1) cos(beta) + u'(1) sin(beta) = 0` on `intervals` uniform cells.
///
/// Robin ends use a centered ghost-point closure, halved so the pencil stays
/// symmetric; Dirichlet ends drop the boundary node. The pencil
/// `A u = lambda B u` with diagonal `B` is reduced to a symmetric tridiagonal
/// matrix whose lowest eigenvalue is found by Sturm-count bisection.
pub fn fd_ground_eigenvalue(p: &CoefficientFn, alpha: f64, beta: f64, intervals: usize) -> f64 {
    let h = 1.0 / intervals as f64;
    let h2 = h * h;
    let left_dirichlet = alpha.sin().abs() < 1e-14;
    let right_dirichlet = beta.sin().abs() < 1e-14;
    let first = if left_dirichlet { 1 } else { 0 };
    let last = if right_dirichlet { intervals - 1 } else { intervals };

    let mut diag = Vec::new();
    let mut off = Vec::new();
    let mut mass = Vec::new();
    for i in first..=last {
        let x = i as f64 * h;
        let mut d = 2.0 / h2;
        let mut m = p.eval(x).unwrap();
        if i == 0 {
            d = (1.0 - h * alpha.cos() / alpha.sin()) / h2;
            m *= 0.5;
        } else if i == intervals {
            d = (1.0 + h * beta.cos() / beta.sin()) / h2;
            m *= 0.5;
        }
        diag.push(d);
        mass.push(m);
        if i < last {
            off.push(-1.0 / h2);
        }
    }
    let scale: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let diag: Vec<f64> = diag.iter().zip(&scale).map(|(d, s)| d * s * s).collect();
    let off: Vec<f64> = off.iter().enumerate().map(|(i, e)| e * scale[i] * scale[i + 1]).collect();

    // number of eigenvalues below x
    let count_below = |x: f64| {
        let mut count = 0;
        let mut pivot = diag[0] - x;
        if pivot < 0.0 {
            count += 1;
        }
        for i in 1..diag.len() {
            let prev = if pivot == 0.0 { f64::EPSILON } else { pivot };
            pivot = diag[i] - x - off[i - 1] * off[i - 1] / prev;
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    };
    // Gershgorin interval
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i < off.len() { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-13 * mid.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}
