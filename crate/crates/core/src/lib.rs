//! Direct and inverse first-eigenvalue tools for the vibrating string
//! `-u'' = lambda p(x) u` on `[0, 1]` and the Sturm-Liouville operator
//! `-y'' + q(s) y = mu y` on `[0, pi]`, both under separated boundary
//! conditions `u(0) cos(alpha) + u'(0) sin(alpha) = 0`,
//! `u(1) cos(beta) + u'(1) sin(beta) = 0`.
//!
//! * [`problem`]: piecewise-polynomial coefficients and problem definitions.
//! * [`ivp`]: Cartesian and Prüfer shooting.
//! * [`eigen`]: eigenvalues, eigenfunctions and inner products.
//! * [`analysis`]: the zero curve, sign classification of the ground state,
//!   eigenvalue bounds and the potential-homotopy formula.
//! * [`ambarzumyan`]: first-eigenvalue uniqueness checks with reconstruction.
//! * [`liouville`]: the Liouville transformation from string to Sturm-Liouville form.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ambarzumyan;
pub mod analysis;
pub mod eigen;
pub mod error;
pub mod export;
pub mod ivp;
pub mod liouville;
pub mod poly;
pub mod problem;
pub mod quad;
pub mod sampled;

pub use error::{Error, Result};
pub use problem::{BoundaryAngles, CoefficientFn, SpectralProblem};
