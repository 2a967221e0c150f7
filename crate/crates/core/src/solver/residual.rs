use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::scalar::Real;
use crate::strip::{conjugate_top, spectral_derivative, PeriodicFunction, StripDomain};

/// Kinematic residual of a candidate surface trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual<T> {
    /// `v' - sin θ / h(v)`.
    pub r: PeriodicFunction<T>,
    /// `θ = conjugate_top(-log h(v))`.
    pub theta: PeriodicFunction<T>,
    /// `h(v)` at the samples.
    pub speed: PeriodicFunction<T>,
}

/// Evaluates the top-line system for a candidate `v`.
///
/// Fails with [`Error::Range`] listing every sample where `v` leaves the
/// interior of the profile domain or `h(v)` vanishes.
pub fn residual<T: Real>(v: &PeriodicFunction<T>, profile: &Profile<T>, domain: &StripDomain<T>) -> Result<Residual<T>> {
    let mut bad = Vec::new();
    let mut speeds = Vec::with_capacity(v.len());
    let mut logs = Vec::with_capacity(v.len());
    for (j, &y) in v.samples().iter().enumerate() {
        match profile.eval(y) {
            Ok(p) if p.h.is_finite() && p.h > T::zero() => {
                speeds.push(p.h);
                logs.push(-p.log_h);
            }
            _ => {
                bad.push(j);
                speeds.push(T::nan());
                logs.push(T::nan());
            }
        }
    }
    if !bad.is_empty() {
        return Err(Error::Range { indices: bad });
    }
    let speed = PeriodicFunction::from_samples(v.period(), speeds)?;
    let rho = PeriodicFunction::from_samples(v.period(), logs)?;
    let theta = conjugate_top(&rho, domain)?;
    let dv = spectral_derivative(v).value;
    let r = PeriodicFunction::from_samples(
        v.period(),
        dv.samples()
            .iter()
            .zip(theta.samples())
            .zip(speed.samples())
            .map(|((&d, &th), &h)| d - th.sin() / h)
            .collect(),
    )?;
    Ok(Residual { r, theta, speed })
}

/// Central-difference Jacobian of the residual's sine projections with respect
/// to the cosine coefficients of `v`, modes `1..=modes`, row-major.
///
/// Row `k` holds `(2/N) Σ_j ∂r_j sin(κ_k t_j)`; column `m` perturbs `v` by
/// `cos(κ_m t)`.
pub fn residual_jacobian<T: Real>(
    v: &PeriodicFunction<T>,
    profile: &Profile<T>,
    domain: &StripDomain<T>,
    modes: usize,
    step: T,
) -> Result<Vec<T>> {
    let n = v.len();
    if modes == 0 || modes >= n / 2 {
        return Err(Error::Parameter {
            name: "modes",
            value: modes as f64,
            reason: "must lie in 1..N/2",
        });
    }
    let mut jac = vec![T::zero(); modes * modes];
    for m in 1..=modes {
        let kappa = domain.wavenumber(m as i64);
        let shifted = |s: T| {
            let samples = v
                .samples()
                .iter()
                .zip(v.nodes())
                .map(|(&y, t)| y + s * (kappa * t).cos())
                .collect();
            PeriodicFunction::from_samples(v.period(), samples)
        };
        let plus = residual(&shifted(step)?, profile, domain)?.r;
        let minus = residual(&shifted(-step)?, profile, domain)?.r;
        let (sp, sm) = (sine_projections(&plus, modes), sine_projections(&minus, modes));
        for k in 0..modes {
            jac[k * modes + (m - 1)] = (sp[k] - sm[k]) / (T::lit(2.0) * step);
        }
    }
    Ok(jac)
}

/// `(2/N) Σ_j r_j sin(κ_k t_j)` for `k = 1..=modes`.
pub(crate) fn sine_projections<T: Real>(r: &PeriodicFunction<T>, modes: usize) -> Vec<T> {
    let spec = r.spectrum();
    (1..=modes).map(|k| -T::lit(2.0) * spec[k].im).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{flat_state, Branch};
    use std::f64::consts::TAU;

    fn setup(lambda: f64) -> (Profile<f64>, StripDomain<f64>) {
        (Profile::water_wave(1.0, lambda).unwrap(), StripDomain::new(1.0, TAU).unwrap())
    }

    #[test]
    fn flat_state_has_zero_residual() {
        let (p, d) = setup(4.0);
        for branch in [Branch::Lower, Branch::Upper] {
            let a = flat_state(&p, &d, branch).unwrap();
            let v = PeriodicFunction::constant(TAU, 64, a).unwrap();
            let res = residual(&v, &p, &d).unwrap();
            assert!(res.r.max_abs() < 1e-12);
            assert!(res.theta.max_abs() < 1e-15);
        }
    }

    fn perturbed_norm(p: &Profile<f64>, d: &StripDomain<f64>, v0: f64, eps: f64) -> f64 {
        let v = PeriodicFunction::from_fn(TAU, 64, |t| v0 + eps * t.cos()).unwrap();
        residual(&v, p, d).unwrap().r.max_abs()
    }

    #[test]
    fn neutral_mode_residual_is_quadratic() {
        let a = (1.0 / 1f64.tanh()).cbrt();
        let (p, d) = setup(1.0 / (a * a) + 2.0 * a);
        let r1 = perturbed_norm(&p, &d, a, 1e-3);
        let r2 = perturbed_norm(&p, &d, a, 5e-4);
        assert!(r1 < 1e-5);
        let ratio = r1 / r2;
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn off_neutral_residual_slope_is_the_margin() {
        let (p, d) = setup(4.0);
        let a = flat_state(&p, &d, Branch::Upper).unwrap();
        let margin = crate::solver::bifurcation_wavenumbers(&p, &d, a, 1).unwrap()[0].margin;
        let eps = 1e-7;
        let slope = perturbed_norm(&p, &d, a, eps) / eps;
        assert!((slope - margin.abs()).abs() < 1e-5 * margin.abs().max(1.0), "{slope} vs {margin}");
    }

    #[test]
    fn leaving_the_domain_lists_samples() {
        let (p, d) = setup(4.0);
        let v = PeriodicFunction::from_fn(TAU, 16, |t| 1.5 + t.cos()).unwrap();
        match residual(&v, &p, &d) {
            Err(Error::Range { indices }) => {
                assert!(indices.contains(&0));
                assert!(!indices.contains(&4));
            }
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn translation_equivariance() {
        let (p, d) = setup(4.0);
        let n = 64;
        let f = |t: f64| 1.6 + 0.05 * t.cos() + 0.01 * (2.0 * t).sin();
        let v = PeriodicFunction::from_fn(TAU, n, f).unwrap();
        let shift = 5;
        let h = TAU / n as f64;
        let w = PeriodicFunction::from_fn(TAU, n, |t| f(t - shift as f64 * h)).unwrap();
        let (ra, rb) = (residual(&v, &p, &d).unwrap().r, residual(&w, &p, &d).unwrap().r);
        for j in 0..n {
            assert!((rb.samples()[(j + shift) % n] - ra.samples()[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobian_is_diagonal_at_flat_state() {
        let (p, d) = setup(4.0);
        let a = flat_state(&p, &d, Branch::Upper).unwrap();
        let v = PeriodicFunction::constant(TAU, 32, a).unwrap();
        let jac = residual_jacobian(&v, &p, &d, 6, 1e-6).unwrap();
        let margins = crate::solver::bifurcation_wavenumbers(&p, &d, a, 6).unwrap();
        for k in 0..6 {
            for m in 0..6 {
                let expected = if k == m { -margins[k].margin } else { 0.0 };
                assert!((jac[k * 6 + m] - expected).abs() < 1e-7, "{k},{m}");
            }
        }
    }
}
