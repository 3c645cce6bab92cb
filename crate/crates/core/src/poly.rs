//! Dense real polynomials in the monomial basis, ascending degree.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients. Trailing zeros are trimmed.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `p(a + b x)`.
    pub fn compose_affine(&self, a: f64, b: f64) -> Poly {
        let inner = Poly::new(vec![a, b]);
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, &c| &(&acc * &inner) + &Poly::constant(c))
    }

    /// Real roots in the closed interval `[a, b]`, ascending.
    ///
    /// Critical points of `self` split the interval into monotone pieces, and
    /// each piece holds at most one root which is then bisected to full
    /// precision. Roots of even multiplicity are only found when the
    /// polynomial vanishes exactly at a critical point.
    pub fn roots_in(&self, a: f64, b: f64) -> Vec<f64> {
        if self.is_zero() || a > b {
            return Vec::new();
        }
        if self.degree() == 0 {
            return Vec::new();
        }
        if self.degree() == 1 {
            let r = -self.coeffs[0] / self.coeffs[1];
            return if (a..=b).contains(&r) { vec![r] } else { Vec::new() };
        }
        let mut knots = vec![a];
        knots.extend(self.derivative().roots_in(a, b).into_iter().filter(|&x| x > a && x < b));
        knots.push(b);

        let mut roots: Vec<f64> = Vec::new();
        let push = |roots: &mut Vec<f64>, r: f64| {
            if roots.last().is_none_or(|&last| r > last) {
                roots.push(r);
            }
        };
        for w in knots.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let (flo, fhi) = (self.eval(lo), self.eval(hi));
            if flo == 0.0 {
                push(&mut roots, lo);
            }
            if flo != 0.0 && fhi != 0.0 && flo.signum() != fhi.signum() {
                push(&mut roots, bisect(|x| self.eval(x), lo, hi, flo));
            }
        }
        if self.eval(b) == 0.0 {
            push(&mut roots, b);
        }
        roots
    }

    /// Global (min, max) over `[a, b]` from endpoint values and critical points.
    pub fn extrema_on(&self, a: f64, b: f64) -> (f64, f64) {
        let mut lo = self.eval(a).min(self.eval(b));
        let mut hi = self.eval(a).max(self.eval(b));
        for x in self.derivative().roots_in(a, b) {
            let v = self.eval(x);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }
}

/// Bisection on a bracketed sign change, run until the midpoint stops moving.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&0.0) + rhs.coeffs.get(i).unwrap_or(&0.0)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_and_derivative() {
        let p = Poly::new(vec![1.0, 0.0, 1.0]);
        assert_eq!(p.eval(2.0), 5.0);
        assert_eq!(p.derivative(), Poly::new(vec![0.0, 2.0]));
        assert_eq!(Poly::new(vec![3.0, 0.0, 0.0]).degree(), 0);
    }

    #[test]
    fn roots_of_cubic() {
        // (x - 0.1)(x - 0.5)(x - 0.9)
        let p = &(&Poly::new(vec![-0.1, 1.0]) * &Poly::new(vec![-0.5, 1.0])) * &Poly::new(vec![-0.9, 1.0]);
        let r = p.roots_in(0.0, 1.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([0.1, 0.5, 0.9]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert_eq!(p.roots_in(0.2, 0.4).len(), 0);
    }

    #[test]
    fn double_root_at_vertex() {
        // (x - 1/2)^2 touches zero at its critical point.
        let p = Poly::new(vec![0.25, -1.0, 1.0]);
        assert_eq!(p.roots_in(0.0, 1.0), vec![0.5]);
        assert_eq!(p.extrema_on(0.0, 1.0), (0.0, 0.25));
    }
}
