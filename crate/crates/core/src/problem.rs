//! Coefficient functions, boundary angles and the spectral problem they define.
//!
//! Coefficients are piecewise polynomials on a closed interval. At an interior
//! breakpoint the value is taken from the segment starting there (right
//! continuity); extrema are essential extrema, so one-sided limits at jumps
//! count.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::sampled::SampledFn;

/// Default lower bound a density or weight must stay above.
pub const POSITIVITY_FLOOR: f64 = 1e-12;

/// Relative tolerance when matching `pw:` segment ends to the problem interval.
const TILING_TOL: f64 = 1e-9;

/// A real piecewise polynomial on `[breakpoints[0], breakpoints[m]]`.
///
/// Segment `i` holds the polynomial (in the global variable `x`) valid on
/// `[breakpoints[i], breakpoints[i + 1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFn {
    breakpoints: Vec<f64>,
    segments: Vec<Poly>,
}

impl CoefficientFn {
    pub fn new(breakpoints: Vec<f64>, segments: Vec<Poly>) -> Result<Self> {
        if breakpoints.len() != segments.len() + 1 || segments.is_empty() {
            return Err(Error::domain(format!(
                "{} breakpoints cannot delimit {} segments",
                breakpoints.len(),
                segments.len()
            )));
        }
        if breakpoints.iter().any(|x| !x.is_finite())
            || segments.iter().any(|p| p.coeffs().iter().any(|c| !c.is_finite()))
        {
            return Err(Error::domain("coefficient data must be finite"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("breakpoints must be strictly increasing"));
        }
        Ok(CoefficientFn { breakpoints, segments })
    }

    pub fn constant(c: f64, a: f64, b: f64) -> Result<Self> {
        CoefficientFn::new(vec![a, b], vec![Poly::constant(c)])
    }

    pub fn polynomial(coeffs: Vec<f64>, a: f64, b: f64) -> Result<Self> {
        CoefficientFn::new(vec![a, b], vec![Poly::new(coeffs)])
    }

    pub fn zero(a: f64, b: f64) -> Self {
        CoefficientFn { breakpoints: vec![a, b], segments: vec![Poly::zero()] }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[Poly] {
        &self.segments
    }

    pub fn start(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn end(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.start(), self.end())
    }

    /// Index of the segment whose half-open span `[x_i, x_{i+1})` holds `x`;
    /// the right end of the interval belongs to the last segment.
    pub fn segment_index(&self, x: f64) -> usize {
        let k = self.breakpoints.partition_point(|&b| b <= x);
        k.saturating_sub(1).min(self.segments.len() - 1)
    }

    /// Value at `x`, right-continuous at interior breakpoints.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= self.start() && x <= self.end()) {
            return Err(Error::domain(format!("x = {x} lies outside [{}, {}]", self.start(), self.end())));
        }
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        self.segments[self.segment_index(x)].eval(x)
    }

    /// Essential (min, max) over the closed interval, from per-segment
    /// endpoint values and the real roots of each segment's derivative.
    pub fn extremum(&self) -> (f64, f64) {
        self.pieces()
            .map(|(a, b, p)| p.extrema_on(a, b))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (l, h)| (lo.min(l), hi.max(h)))
    }

    /// Fails with a domain error naming the first segment that dips below `floor`.
    pub fn check_positive(&self, floor: f64) -> Result<()> {
        for (i, (a, b, p)) in self.pieces().enumerate() {
            let (lo, _) = p.extrema_on(a, b);
            if !(lo >= floor) {
                return Err(Error::domain(format!(
                    "segment {i} on [{a}, {b}] has minimum {lo}, below the positivity floor {floor}"
                )));
            }
        }
        Ok(())
    }

    pub fn is_constant(&self) -> bool {
        let first = self.segments[0].eval(0.0);
        self.segments.iter().all(|p| p.degree() == 0 && p.eval(0.0) == first)
    }

    /// `(a, b, poly)` for every segment.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, &Poly)> + '_ {
        self.breakpoints.windows(2).zip(&self.segments).map(|(w, p)| (w[0], w[1], p))
    }

    pub fn derivative(&self) -> CoefficientFn {
        CoefficientFn {
            breakpoints: self.breakpoints.clone(),
            segments: self.segments.iter().map(Poly::derivative).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> CoefficientFn {
        self.map(|p| p.scale(s))
    }

    pub fn add_constant(&self, c: f64) -> CoefficientFn {
        self.map(|p| p + &Poly::constant(c))
    }

    /// `x -> f(start + end - x)`, the mirror image on the same interval.
    pub fn reflect(&self) -> CoefficientFn {
        let total = self.start() + self.end();
        CoefficientFn {
            breakpoints: self.breakpoints.iter().rev().map(|b| total - b).collect(),
            segments: self.segments.iter().rev().map(|p| p.compose_affine(total, -1.0)).collect(),
        }
    }

    pub(crate) fn map(&self, f: impl Fn(&Poly) -> Poly) -> CoefficientFn {
        CoefficientFn { breakpoints: self.breakpoints.clone(), segments: self.segments.iter().map(f).collect() }
    }

    /// Combines two coefficient functions on a common refinement of their breakpoints.
    pub fn zip_with(&self, other: &CoefficientFn, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<CoefficientFn> {
        check_same_interval(self, other)?;
        let breakpoints = merged_breakpoints(self, other);
        let segments = breakpoints
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                f(&self.segments[self.segment_index(mid)], &other.segments[other.segment_index(mid)])
            })
            .collect();
        Ok(CoefficientFn { breakpoints, segments })
    }

    pub fn sub(&self, other: &CoefficientFn) -> Result<CoefficientFn> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Samples at `len` uniform nodes.
    pub fn sample(&self, len: usize) -> Result<SampledFn> {
        SampledFn::from_fn(self.start(), self.end(), len, |x| self.eval_unchecked(x))
    }

    /// Parses the coefficient grammar on the interval `[a, b]`.
    ///
    /// ```text
    /// const:<num>
    /// poly:<c0>,<c1>,...
    /// pw: [<a>,<b>] poly:<...> ; [<b>,<c>] poly:<...> ; ...
    /// ```
    pub fn parse(text: &str, interval: (f64, f64)) -> Result<CoefficientFn> {
        Parser::new(text).coefficient(interval)
    }

    /// Parses and then checks the positivity floor, as required for densities and weights.
    pub fn parse_density(text: &str, interval: (f64, f64), floor: f64) -> Result<CoefficientFn> {
        let f = CoefficientFn::parse(text, interval)?;
        f.check_positive(floor)?;
        Ok(f)
    }
}

impl fmt::Display for CoefficientFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, p: &Poly) -> fmt::Result {
            if p.is_zero() {
                return write!(f, "0");
            }
            for (i, c) in p.coeffs().iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            Ok(())
        }
        if self.segments.len() == 1 {
            let p = &self.segments[0];
            if p.degree() == 0 {
                return write!(f, "const:{}", p.eval(0.0));
            }
            write!(f, "poly:")?;
            return list(f, p);
        }
        write!(f, "pw:")?;
        for (i, (a, b, p)) in self.pieces().enumerate() {
            if i > 0 {
                write!(f, " ;")?;
            }
            write!(f, " [{a},{b}] poly:")?;
            list(f, p)?;
        }
        Ok(())
    }
}

fn check_same_interval(a: &CoefficientFn, b: &CoefficientFn) -> Result<()> {
    if a.interval() != b.interval() {
        return Err(Error::domain(format!(
            "coefficients live on different intervals {:?} and {:?}",
            a.interval(),
            b.interval()
        )));
    }
    Ok(())
}

fn merged_breakpoints(a: &CoefficientFn, b: &CoefficientFn) -> Vec<f64> {
    let mut all: Vec<f64> = a.breakpoints.iter().chain(&b.breakpoints).copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    all
}

/// `fa / fb` sampled on a uniform grid, together with its essential extrema.
#[derive(Debug, Clone)]
pub struct Ratio {
    pub samples: SampledFn,
    pub min: f64,
    pub max: f64,
}

/// Pointwise ratio `fa / fb` of two coefficient functions on a shared interval.
///
/// On each merged segment the ratio of two polynomials is extremal at the
/// segment ends or at real roots of `fa' fb - fa fb'`, so the extrema are
/// located exactly rather than by grid search.
pub fn ratio(fa: &CoefficientFn, fb: &CoefficientFn, grid_points: usize) -> Result<Ratio> {
    check_same_interval(fa, fb)?;
    fb.check_positive(POSITIVITY_FLOOR)?;
    let breakpoints = merged_breakpoints(fa, fb);
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let num = &fa.segments[fa.segment_index(mid)];
        let den = &fb.segments[fb.segment_index(mid)];
        let critical = &(&num.derivative() * den) - &(num * &den.derivative());
        let candidates = [a, b].into_iter().chain(critical.roots_in(a, b));
        for x in candidates {
            let r = num.eval(x) / den.eval(x);
            min = min.min(r);
            max = max.max(r);
        }
    }
    let samples =
        SampledFn::from_fn(fa.start(), fa.end(), grid_points, |x| fa.eval_unchecked(x) / fb.eval_unchecked(x))?;
    Ok(Ratio { samples, min, max })
}

/// Boundary angles of the separated conditions
/// `u(a) cos(left) + u'(a) sin(left) = 0`, `u(b) cos(right) + u'(b) sin(right) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryAngles {
    left: f64,
    right: f64,
}

impl BoundaryAngles {
    /// `left` must lie in `(0, pi]`, `right` in `[0, pi)`.
    pub fn new(left: f64, right: f64) -> Result<Self> {
        if !(left > 0.0 && left <= PI) {
            return Err(Error::domain(format!("left boundary angle {left} is outside (0, pi]")));
        }
        if !(0.0..PI).contains(&right) {
            return Err(Error::domain(format!("right boundary angle {right} is outside [0, pi)")));
        }
        Ok(BoundaryAngles { left, right })
    }

    pub fn dirichlet() -> Self {
        BoundaryAngles { left: PI, right: 0.0 }
    }

    pub fn neumann() -> Self {
        BoundaryAngles { left: PI / 2.0, right: PI / 2.0 }
    }

    pub fn left(&self) -> f64 {
        self.left
    }

    pub fn right(&self) -> f64 {
        self.right
    }
}

/// One piece of a problem on which both coefficients are single polynomials.
#[derive(Debug, Clone)]
pub(crate) struct Piece {
    pub a: f64,
    pub b: f64,
    pub potential: Poly,
    pub weight: Poly,
}

/// `-u'' + q(x) u = lambda w(x) u` on `[0, length]` with separated boundary conditions.
///
/// A string problem has `q = 0`, `w = p` on `[0, 1]`; a Sturm-Liouville
/// problem has `w = 1`, usually on `[0, pi]`.
#[derive(Debug, Clone)]
pub struct SpectralProblem {
    potential: CoefficientFn,
    weight: CoefficientFn,
    angles: BoundaryAngles,
    pieces: Vec<Piece>,
}

impl SpectralProblem {
    pub fn new(potential: CoefficientFn, weight: CoefficientFn, angles: BoundaryAngles) -> Result<Self> {
        check_same_interval(&potential, &weight)?;
        if potential.start() != 0.0 {
            return Err(Error::domain("problems are posed on intervals starting at 0"));
        }
        weight.check_positive(POSITIVITY_FLOOR)?;
        let pieces = merged_breakpoints(&potential, &weight)
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                Piece {
                    a: w[0],
                    b: w[1],
                    potential: potential.segments[potential.segment_index(mid)].clone(),
                    weight: weight.segments[weight.segment_index(mid)].clone(),
                }
            })
            .collect();
        Ok(SpectralProblem { potential, weight, angles, pieces })
    }

    /// The string problem `-u'' = lambda p(x) u` on `[0, 1]`.
    pub fn string(density: CoefficientFn, alpha: f64, beta: f64) -> Result<Self> {
        if density.interval() != (0.0, 1.0) {
            return Err(Error::domain("string densities live on [0, 1]"));
        }
        let angles = BoundaryAngles::new(alpha, beta)?;
        SpectralProblem::new(CoefficientFn::zero(0.0, 1.0), density, angles)
    }

    /// The Sturm-Liouville problem `-y'' + q(s) y = mu y` on `[0, pi]`.
    pub fn sturm_liouville(potential: CoefficientFn, gamma: f64, delta: f64) -> Result<Self> {
        if potential.interval() != (0.0, PI) {
            return Err(Error::domain("Sturm-Liouville potentials live on [0, pi]"));
        }
        let angles = BoundaryAngles::new(gamma, delta)?;
        SpectralProblem::new(potential, CoefficientFn::constant(1.0, 0.0, PI)?, angles)
    }

    pub fn potential(&self) -> &CoefficientFn {
        &self.potential
    }

    pub fn weight(&self) -> &CoefficientFn {
        &self.weight
    }

    pub fn angles(&self) -> BoundaryAngles {
        self.angles
    }

    pub fn length(&self) -> f64 {
        self.potential.end()
    }

    pub(crate) fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn with_angles(&self, angles: BoundaryAngles) -> SpectralProblem {
        SpectralProblem { angles, ..self.clone() }
    }

    /// The same problem in the variable `length - x`; the spectrum is unchanged.
    pub fn reflected(&self) -> SpectralProblem {
        let angles =
            BoundaryAngles::new(PI - self.angles.right, PI - self.angles.left).expect("mirrored angles stay in range");
        SpectralProblem::new(self.potential.reflect(), self.weight.reflect(), angles)
            .expect("mirrored coefficients stay valid")
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = self.pos;
        if matches!(bytes.get(i), Some(b'+' | b'-')) {
            i += 1;
        }
        let digits = |i: &mut usize| {
            let s = *i;
            while bytes.get(*i).is_some_and(u8::is_ascii_digit) {
                *i += 1;
            }
            *i - s
        };
        let mut mantissa = digits(&mut i);
        if bytes.get(i) == Some(&b'.') {
            i += 1;
            mantissa += digits(&mut i);
        }
        if mantissa == 0 {
            return self.err("expected a decimal number");
        }
        if matches!(bytes.get(i), Some(b'e' | b'E')) {
            let mut j = i + 1;
            if matches!(bytes.get(j), Some(b'+' | b'-')) {
                j += 1;
            }
            if digits(&mut j) == 0 {
                self.pos = j;
                return self.err("malformed exponent");
            }
            i = j;
        }
        let value: f64 = match self.src[start..i].parse() {
            Ok(v) => v,
            Err(_) => return self.err("malformed number"),
        };
        if !value.is_finite() {
            return self.err("number out of range");
        }
        self.pos = i;
        Ok(value)
    }

    fn number_list(&mut self) -> Result<Vec<f64>> {
        let mut out = vec![self.number()?];
        while self.eat(",") {
            out.push(self.number()?);
        }
        Ok(out)
    }

    fn end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    fn coefficient(&mut self, (a, b): (f64, f64)) -> Result<CoefficientFn> {
        if !(a < b) {
            return Err(Error::domain(format!("degenerate interval [{a}, {b}]")));
        }
        let f = if self.eat("const") {
            self.expect(":")?;
            let c = self.number()?;
            CoefficientFn::constant(c, a, b)?
        } else if self.eat("poly") {
            self.expect(":")?;
            CoefficientFn::polynomial(self.number_list()?, a, b)?
        } else if self.eat("pw") {
            self.expect(":")?;
            self.piecewise(a, b)?
        } else {
            return self.err("expected `const:`, `poly:` or `pw:`");
        };
        self.end()?;
        Ok(f)
    }

    fn piecewise(&mut self, a: f64, b: f64) -> Result<CoefficientFn> {
        let close = |x: f64, y: f64| (x - y).abs() <= TILING_TOL * x.abs().max(y.abs()).max(1.0);
        let mut breakpoints = vec![a];
        let mut segments = Vec::new();
        loop {
            self.expect("[")?;
            let at = self.pos;
            let lo = self.number()?;
            self.expect(",")?;
            let hi = self.number()?;
            self.expect("]")?;
            let expected_lo = *breakpoints.last().unwrap();
            if !close(lo, expected_lo) {
                return Err(Error::Parse {
                    offset: at,
                    message: format!("segment starts at {lo} but the previous one ended at {expected_lo}"),
                });
            }
            if !(hi > expected_lo) {
                return Err(Error::Parse { offset: at, message: format!("empty segment [{lo}, {hi}]") });
            }
            self.expect("poly")?;
            self.expect(":")?;
            segments.push(Poly::new(self.number_list()?));
            breakpoints.push(hi);
            if !self.eat(";") {
                break;
            }
        }
        let last = breakpoints.last_mut().unwrap();
        if !close(*last, b) {
            return self.err(format!("segments end at {last} but the interval ends at {b}"));
        }
        *last = b;
        CoefficientFn::new(breakpoints, segments)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(text: &str) -> CoefficientFn {
        CoefficientFn::parse(text, (0.0, 1.0)).unwrap()
    }

    #[test]
    fn parses_grammar_examples() {
        assert_eq!(unit("const:1").eval(0.3).unwrap(), 1.0);
        let p = unit("poly:1,0,1");
        assert_eq!(p.eval(0.0).unwrap(), 1.0);
        assert_eq!(p.eval(1.0).unwrap(), 2.0);
        let step = unit("pw: [0,0.5] poly:1 ; [0.5,1] poly:2");
        assert_eq!(step.eval(0.25).unwrap(), 1.0);
        assert_eq!(step.eval(0.5).unwrap(), 2.0);
        assert_eq!(step.eval(1.0).unwrap(), 2.0);
        assert_eq!(unit("  poly : 1.5e0 , -2E-1 ").segments()[0].coeffs(), &[1.5, -0.2]);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match CoefficientFn::parse("poly:1,,2", (0.0, 1.0)) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 7),
            other => panic!("{other:?}"),
        }
        match CoefficientFn::parse("cnst:1", (0.0, 1.0)) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{other:?}"),
        }
        assert!(matches!(CoefficientFn::parse("const:1 x", (0.0, 1.0)), Err(Error::Parse { offset: 8, .. })));
        assert!(matches!(CoefficientFn::parse("const:1e", (0.0, 1.0)), Err(Error::Parse { .. })));
        // gap between segments
        assert!(matches!(
            CoefficientFn::parse("pw: [0,0.4] poly:1 ; [0.5,1] poly:2", (0.0, 1.0)),
            Err(Error::Parse { .. })
        ));
        // does not reach the end of the interval
        assert!(matches!(CoefficientFn::parse("pw: [0,0.5] poly:1", (0.0, 1.0)), Err(Error::Parse { .. })));
    }

    #[test]
    fn tiling_snaps_to_interval_end() {
        let q = CoefficientFn::parse("pw: [0,1.5] poly:1 ; [1.5,3.14159265359] poly:0", (0.0, PI)).unwrap();
        assert_eq!(q.end(), PI);
    }

    #[test]
    fn density_positivity_names_segment() {
        let err =
            CoefficientFn::parse_density("pw: [0,0.5] poly:1 ; [0.5,1] poly:1,-2", (0.0, 1.0), 1e-12).unwrap_err();
        match err {
            Error::Domain(msg) => assert!(msg.contains("segment 1"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(CoefficientFn::parse_density("poly:0,2", (0.0, 1.0), POSITIVITY_FLOOR).is_err());
    }

    #[test]
    fn eval_outside_interval_is_domain_error() {
        assert!(matches!(unit("const:1").eval(1.5), Err(Error::Domain(_))));
        assert!(matches!(unit("const:1").eval(-1e-9), Err(Error::Domain(_))));
    }

    #[test]
    fn extremum_examples() {
        assert_eq!(unit("poly:1,1").extremum(), (1.0, 2.0));
        assert_eq!(unit("poly:1,0,1").extremum(), (1.0, 2.0));
        assert_eq!(unit("poly:0.25,-1,1").extremum(), (0.0, 0.25));
        // jump: the left limit 3 at x = 0.5 counts toward the essential sup
        assert_eq!(unit("pw: [0,0.5] poly:2,2 ; [0.5,1] poly:1").extremum(), (1.0, 3.0));
    }

    #[test]
    fn ratio_examples() {
        let r = ratio(&unit("const:1"), &unit("poly:1,1"), 101).unwrap();
        assert_eq!((r.min, r.max), (0.5, 1.0));
        let p = unit("poly:1,0.3,-0.2");
        let r = ratio(&p.scale(2.0), &p, 101).unwrap();
        assert!((r.min - 2.0).abs() < 1e-15 && (r.max - 2.0).abs() < 1e-15);
        let r = ratio(&unit("const:1"), &unit("poly:1,0,1"), 101).unwrap();
        assert_eq!((r.min, r.max), (0.5, 1.0));
        assert_eq!(r.samples.values[0], 1.0);
    }

    #[test]
    fn ratio_interior_extremum() {
        // (1 + x) / (1 + x^2) peaks at x = sqrt(2) - 1 with value (1 + sqrt 2) / 2
        let r = ratio(&unit("poly:1,1"), &unit("poly:1,0,1"), 11).unwrap();
        let want = (1.0 + 2f64.sqrt()) / 2.0;
        assert!((r.max - want).abs() < 1e-15);
        assert_eq!(r.min, 1.0);
    }

    #[test]
    fn ratio_rejects_nonpositive_denominator() {
        assert!(matches!(ratio(&unit("const:1"), &unit("poly:-0.5,1"), 11), Err(Error::Domain(_))));
    }

    #[test]
    fn display_round_trips_examples() {
        for text in ["const:1", "poly:1,0,1", "pw: [0,0.5] poly:1 ; [0.5,1] poly:2,-0.125"] {
            let f = unit(text);
            assert_eq!(f.to_string(), text);
            assert_eq!(unit(&f.to_string()), f);
        }
    }

    #[test]
    fn boundary_angle_ranges() {
        assert!(BoundaryAngles::new(0.0, 0.0).is_err());
        assert!(BoundaryAngles::new(PI, PI).is_err());
        assert!(BoundaryAngles::new(PI, 0.0).is_ok());
        assert!(BoundaryAngles::new(1e-9, 3.0).is_ok());
    }

    #[test]
    fn subtraction_merges_breakpoints() {
        let a = unit("pw: [0,0.5] poly:1 ; [0.5,1] poly:2");
        let b = unit("pw: [0,0.25] poly:0,1 ; [0.25,1] poly:3");
        let d = a.sub(&b).unwrap();
        assert_eq!(d.breakpoints(), &[0.0, 0.25, 0.5, 1.0]);
        assert_eq!(d.eval(0.1).unwrap(), 0.9);
        assert_eq!(d.eval(0.3).unwrap(), -2.0);
        assert_eq!(d.eval(0.7).unwrap(), -1.0);
    }
}
