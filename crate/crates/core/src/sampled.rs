//! Functions sampled on a uniform grid and composite quadrature over them.

use crate::error::{Error, Result};

/// Values of a real function at `len` equally spaced nodes spanning `[start, end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFn {
    pub start: f64,
    pub end: f64,
    pub values: Vec<f64>,
}

impl SampledFn {
    pub fn new(start: f64, end: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || !(end > start) {
            return Err(Error::Usage(format!(
                "a sampled function needs at least two nodes on a nondegenerate interval, got {} on [{start}, {end}]",
                values.len()
            )));
        }
        Ok(SampledFn { start, end, values })
    }

    /// Samples `f` at `len` uniform nodes.
    pub fn from_fn(start: f64, end: f64, len: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = uniform_grid(start, end, len).map(f).collect();
        SampledFn::new(start, end, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.end - self.start) / (self.values.len() - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        node(self.start, self.end, self.values.len(), i)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        uniform_grid(self.start, self.end, self.values.len())
    }

    pub fn same_grid(&self, other: &SampledFn) -> bool {
        self.values.len() == other.values.len() && self.start == other.start && self.end == other.end
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Composite Simpson integral of the samples.
    pub fn integrate(&self) -> f64 {
        simpson(&self.values, self.step())
    }
}

/// i-th node of the `len`-point uniform grid on `[start, end]`; the last node is `end` exactly.
#[inline]
pub fn node(start: f64, end: f64, len: usize, i: usize) -> f64 {
    if i + 1 == len {
        end
    } else {
        start + (end - start) * (i as f64) / ((len - 1) as f64)
    }
}

pub fn uniform_grid(start: f64, end: f64, len: usize) -> impl Iterator<Item = f64> {
    (0..len).map(move |i| node(start, end, len, i))
}

/// Composite Simpson rule over uniformly spaced samples.
///
/// An odd number of intervals closes with Simpson's 3/8 rule on the last three;
/// a single interval falls back to the trapezoid.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let intervals = values.len().saturating_sub(1);
    match intervals {
        0 => 0.0,
        1 => 0.5 * h * (values[0] + values[1]),
        2 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        3 => 3.0 * h / 8.0 * (values[0] + 3.0 * values[1] + 3.0 * values[2] + values[3]),
        _ => {
            let even_part = if intervals.is_multiple_of(2) { intervals } else { intervals - 3 };
            let mut acc = values[0] + values[even_part];
            for (i, v) in values[1..even_part].iter().enumerate() {
                acc += if i % 2 == 0 { 4.0 * v } else { 2.0 * v };
            }
            let mut total = h / 3.0 * acc;
            if even_part < intervals {
                let t = &values[even_part..];
                total += 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3]);
            }
            total
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_for_cubics() {
        for len in [3usize, 4, 5, 8, 11] {
            let f = SampledFn::from_fn(0.0, 2.0, len, |x| x * x * x - x + 1.0).unwrap();
            assert!((f.integrate() - 4.0).abs() < 1e-13, "len {len}");
        }
    }

    #[test]
    fn last_node_is_exact() {
        let grid: Vec<f64> = uniform_grid(0.0, std::f64::consts::PI, 7).collect();
        assert_eq!(grid[6], std::f64::consts::PI);
        assert_eq!(grid[0], 0.0);
    }
}
