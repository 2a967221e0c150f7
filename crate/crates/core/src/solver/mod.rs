//! Periodic waves in conformal variables.
//!
//! Uniform streams `W = az`, their linearisation, Newton continuation of the
//! top-line system `v' = sin θ / h(v)`, `θ = conjugate_top(-log h(v))`, and the
//! way back to the physical plane (curve and interior field).

mod curve;
mod flat;
mod interior;
mod newton;
mod residual;

pub use curve::{reconstruct_curve, Closure, FreeCurve};
pub use flat::{
    bifurcation_parameter, bifurcation_wavenumbers, dispersion_relation, flat_state, physical_mode, Branch,
    ModeMargin, PhysicalMode,
};
pub use interior::interior_field;
pub use newton::{continue_branch, solve_periodic, ContinuationOptions};
pub use residual::{residual, residual_jacobian, Residual};

use crate::error::Result;
use crate::profile::Profile;
use crate::scalar::Real;
use crate::strip::{PeriodicFunction, StripDomain};

/// Converged top-line fields of a periodic wave.
///
/// `u(t) = mean_slope·t + u_periodic(t)` with `u(0) = 0`; the period shift of
/// the physical curve is `Λ = mean_slope·P`.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    domain: StripDomain<T>,
    profile: Profile<T>,
    v: PeriodicFunction<T>,
    theta: PeriodicFunction<T>,
    u_periodic: PeriodicFunction<T>,
    mean_slope: T,
    abs_wp: PeriodicFunction<T>,
    residual_norm: T,
    amplitude: T,
    branch: Branch,
    newton_iterations: usize,
}

impl<T: Real> Solution<T> {
    pub(crate) fn assemble(
        domain: StripDomain<T>,
        profile: Profile<T>,
        v: PeriodicFunction<T>,
        res: Residual<T>,
        branch: Branch,
        newton_iterations: usize,
    ) -> Result<Self> {
        let period = domain.period();
        let abs_wp = res.speed.map(|h| T::one() / h);
        let u_prime = res.theta.zip_with(&res.speed, |th, h| th.cos() / h)?;
        let mean_slope = u_prime.mean();
        let u_periodic = u_prime.antiderivative();
        let closure = (v.mean() - domain.half_width() * mean_slope).abs();
        let bernoulli = abs_wp
            .samples()
            .iter()
            .zip(res.speed.samples())
            .map(|(&w, &h)| (w * h - T::one()).abs())
            .fold(T::zero(), T::max);
        let residual_norm = res.r.max_abs().max(closure).max(bernoulli);
        let amplitude = (v.samples()[0] - v.eval(period * T::lit(0.5))) * T::lit(0.5);
        Ok(Self {
            domain,
            profile,
            v,
            theta: res.theta,
            u_periodic,
            mean_slope,
            abs_wp,
            residual_norm,
            amplitude,
            branch,
            newton_iterations,
        })
    }

    pub fn domain(&self) -> &StripDomain<T> {
        &self.domain
    }

    /// The profile with the released parameter at its converged value.
    pub fn profile(&self) -> &Profile<T> {
        &self.profile
    }

    pub fn v(&self) -> &PeriodicFunction<T> {
        &self.v
    }

    pub fn theta(&self) -> &PeriodicFunction<T> {
        &self.theta
    }

    pub fn u_periodic(&self) -> &PeriodicFunction<T> {
        &self.u_periodic
    }

    /// `Λ/P`.
    pub fn mean_slope(&self) -> T {
        self.mean_slope
    }

    /// `Λ = u(t + P) - u(t)`.
    pub fn period_shift(&self) -> T {
        self.mean_slope * self.domain.period()
    }

    /// `u` at the sample nodes.
    pub fn u(&self) -> Vec<T> {
        self.u_periodic
            .nodes()
            .zip(self.u_periodic.samples())
            .map(|(t, &p)| self.mean_slope * t + p)
            .collect()
    }

    pub fn abs_wp(&self) -> &PeriodicFunction<T> {
        &self.abs_wp
    }

    pub fn residual_norm(&self) -> T {
        self.residual_norm
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn newton_iterations(&self) -> usize {
        self.newton_iterations
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }
}
