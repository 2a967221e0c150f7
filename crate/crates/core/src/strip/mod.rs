//! Harmonic analysis on the strip `-C < y < C`.
//!
//! Boundary data live on the lines `y = ±C` as [`PeriodicFunction`]s. Interior
//! values come either from the literal Poisson integral ([`poisson_extend`]) or
//! from modal extension of a top-line spectrum ([`ModalExtension`]); the two
//! routes are kept independent so each can check the other.

mod conformal;
mod field;
mod periodic;
mod poisson;

pub use conformal::{disc_to_strip, strip_to_disc};
pub use field::{Grid, HarmonicField, ModalExtension};
pub use periodic::{conjugate_top, spectral_derivative, PeriodicFunction, SpectralDerivative};
pub use poisson::{poisson_extend, symmetric_extend, Parity, TAIL_TOLERANCE};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// The fixed strip `Π_{-C,C}` together with the conformal period `P` imposed
/// on periodic runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripDomain<T> {
    half_width: T,
    period: T,
}

impl<T: Real> StripDomain<T> {
    pub fn new(half_width: T, period: T) -> Result<Self> {
        if !(half_width > T::zero() && half_width.is_finite()) {
            return Err(Error::Parameter {
                name: "half_width",
                value: half_width.as_f64(),
                reason: "must be positive and finite",
            });
        }
        if !(period > T::zero() && period.is_finite()) {
            return Err(Error::Parameter {
                name: "period",
                value: period.as_f64(),
                reason: "must be positive and finite",
            });
        }
        Ok(Self { half_width, period })
    }

    /// `C`: the stream-function value on the free surface.
    #[inline]
    pub fn half_width(&self) -> T {
        self.half_width
    }

    #[inline]
    pub fn period(&self) -> T {
        self.period
    }

    /// Angular wavenumber `2πk/P` of integer mode `k`.
    #[inline]
    pub fn wavenumber(&self, k: i64) -> T {
        T::lit(k as f64) * T::TAU() / self.period
    }

    /// True when `|y| < C`.
    #[inline]
    pub fn contains(&self, x: T, y: T) -> bool {
        x.is_finite() && y.is_finite() && y.abs() < self.half_width
    }

    pub(crate) fn check_interior(&self, x: T, y: T) -> Result<()> {
        if self.contains(x, y) {
            Ok(())
        } else {
            Err(Error::OutsideStrip {
                x: x.as_f64(),
                y: y.as_f64(),
                half_width: self.half_width.as_f64(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_strips() {
        assert!(StripDomain::new(0.0, 1.0).is_err());
        assert!(StripDomain::new(1.0, -2.0).is_err());
        assert!(StripDomain::new(f64::INFINITY, 1.0).is_err());
        assert!(StripDomain::new(0.5f32, 1.0).is_ok());
    }

    #[test]
    fn interior_test_is_strict() {
        let d = StripDomain::new(1.0, 2.0).unwrap();
        assert!(d.contains(0.3, 0.999));
        assert!(!d.contains(0.3, 1.0));
        assert!(!d.contains(0.3, -1.0));
        assert!(d.check_interior(0.0, 1.5).is_err());
    }
}
