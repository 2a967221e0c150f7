//! Spectral solver and structural verifier for periodic Bernoulli
//! free-boundary problems in strip-like domains.
//!
//! The free surface is computed on the fixed strip `-C < y < C` in conformal
//! variables: the map `W = U + iV` is holomorphic, real on the axis, and its
//! top trace `w = u + iv` satisfies `|w'|·h(v) = 1` for a prescribed speed law
//! `h`. The crate is organised as
//!
//! * [`strip`]: Poisson integrals, the top-line conjugation operator,
//!   spectral differentiation and the disc/strip maps;
//! * [`profile`]: speed laws `h` and an audit of the structural hypotheses
//!   (h vanishing at the top of its interval, strictly decreasing, log-concave);
//! * [`solver`]: uniform streams, linear bifurcation analysis, Newton
//!   continuation of periodic waves and reconstruction of the physical curve;
//! * [`verifier`]: certificates on a solution or an imported curve (Bernoulli
//!   residual, graph property, differential inequality, the subharmonic
//!   barrier `Q`, stagnation points, self-intersection and turning angle).
//!
//! All numerics are generic over [`Real`]; the aliases at the crate root fix
//! the working precision to `f64`, against which every tolerance is quoted.

// Comparisons are written so that NaN fails the check: `!(x > 0)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod profile;
pub mod scalar;
pub mod solver;
pub mod strip;
pub mod verifier;

pub use error::{Error, Result};
pub use scalar::Real;
pub use strip::Parity;

/// Working-precision aliases.
pub type StripDomain = strip::StripDomain<f64>;
pub type PeriodicFunction = strip::PeriodicFunction<f64>;
pub type HarmonicField = strip::HarmonicField<f64>;
pub type Grid = strip::Grid<f64>;
pub type Profile = profile::Profile<f64>;
pub type HypothesisReport = profile::HypothesisReport<f64>;
pub type Solution = solver::Solution<f64>;
pub type FreeCurve = solver::FreeCurve<f64>;
pub type ContinuationOptions = solver::ContinuationOptions<f64>;
pub type DiagnosticsReport = verifier::DiagnosticsReport<f64>;
