use num_complex::Complex;

use super::StripDomain;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Conformal map of the unit disc onto the strip,
/// `β(ξ) = (2C/π)·log((1+ξ)/(1-ξ))`.
pub fn disc_to_strip<T: Real>(xi: Complex<T>, domain: &StripDomain<T>) -> Result<Complex<T>> {
    if !(xi.norm() < T::one()) {
        return Err(Error::OutsideDisc {
            re: xi.re.as_f64(),
            im: xi.im.as_f64(),
        });
    }
    let one = Complex::new(T::one(), T::zero());
    let ratio = (one + xi) / (one - xi);
    Ok(ratio.ln() * (T::lit(2.0) * domain.half_width() / T::PI()))
}

/// Inverse of [`disc_to_strip`]: `ξ = tanh(πz / 4C)`.
pub fn strip_to_disc<T: Real>(z: Complex<T>, domain: &StripDomain<T>) -> Result<Complex<T>> {
    domain.check_interior(z.re, z.im)?;
    Ok((z * (T::PI() / (T::lit(4.0) * domain.half_width()))).tanh())
}
