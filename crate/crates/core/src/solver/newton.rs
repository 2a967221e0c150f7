//! Newton continuation of even periodic waves in the cosine coefficients of
//! the surface trace.

use num_complex::Complex;

use super::flat::{bifurcation_parameter, flat_state, Branch};
use super::residual::{residual, sine_projections, Residual};
use super::Solution;
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::scalar::Real;
use crate::strip::{PeriodicFunction, StripDomain};

/// Knobs for [`solve_periodic`] and [`continue_branch`].
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationOptions<T> {
    /// Number of equal amplitude increments from 0 to the target.
    pub steps: usize,
    /// Convergence threshold on the sup-norm of the residual.
    pub tolerance: T,
    pub max_newton: usize,
    /// Relative forward-difference step for Jacobian columns.
    pub fd_step: T,
    /// Abort when `min h(v) < stagnation_clamp · h(mean v)`.
    pub stagnation_clamp: T,
    pub branch: Branch,
    /// Bifurcating mode used to seed the first step.
    pub mode: usize,
}

impl<T: Real> Default for ContinuationOptions<T> {
    fn default() -> Self {
        Self {
            steps: 10,
            tolerance: T::lit(1e-10),
            max_newton: 20,
            fd_step: T::lit(1e-7),
            stagnation_clamp: T::lit(1e-4),
            branch: Branch::Upper,
            mode: 1,
        }
    }
}

struct System<'a, T: Real> {
    profile: &'a Profile<T>,
    domain: &'a StripDomain<T>,
    n: usize,
    amplitude: T,
}

/// Unknowns: `[c_0, c_1, .., c_M, p]` with `v = Σ c_k cos(κ_k t)` and `p` the
/// released profile parameter.
struct Evaluation<T> {
    equations: Vec<T>,
    norm: T,
    v: PeriodicFunction<T>,
    profile: Profile<T>,
    residual: Residual<T>,
}

impl<T: Real> System<'_, T> {
    fn modes(&self) -> usize {
        self.n / 2 - 1
    }

    fn surface(&self, x: &[T]) -> Result<PeriodicFunction<T>> {
        let n = self.n;
        let zero = Complex::new(T::zero(), T::zero());
        let mut spec = vec![zero; n];
        spec[0] = Complex::new(x[0], T::zero());
        let half = T::lit(0.5);
        for k in 1..=self.modes() {
            spec[k] = Complex::new(x[k] * half, T::zero());
            spec[n - k] = spec[k];
        }
        PeriodicFunction::from_spectrum(self.domain.period(), spec)
    }

    fn evaluate(&self, x: &[T]) -> Result<Evaluation<T>> {
        let m = self.modes();
        let profile = self.profile.with_released_parameter(x[m + 1])?;
        let v = self.surface(x)?;
        let res = residual(&v, &profile, self.domain)?;
        let mut eq = sine_projections(&res.r, m);
        let slope_mean = res
            .theta
            .samples()
            .iter()
            .zip(res.speed.samples())
            .map(|(&th, &h)| th.cos() / h)
            .sum::<T>()
            / T::from_count(self.n);
        let closure = v.mean() - self.domain.half_width() * slope_mean;
        let odd_sum: T = (1..=m).step_by(2).map(|k| x[k]).sum();
        let pin = T::lit(2.0) * odd_sum - T::lit(2.0) * self.amplitude;
        eq.push(closure);
        eq.push(pin);
        let norm = res.r.max_abs().max(closure.abs()).max(pin.abs());
        if !norm.is_finite() {
            return Err(Error::Input("non-finite residual".into()));
        }
        Ok(Evaluation {
            equations: eq,
            norm,
            v,
            profile,
            residual: res,
        })
    }

    fn jacobian(&self, x: &[T], base: &[T], rel_step: T) -> Result<Vec<T>> {
        let dim = x.len();
        let mut jac = vec![T::zero(); dim * dim];
        let mut probe = x.to_vec();
        for col in 0..dim {
            let step = rel_step * x[col].abs().max(T::one());
            probe[col] = x[col] + step;
            let shifted = self.evaluate(&probe)?;
            probe[col] = x[col];
            for row in 0..dim {
                jac[row * dim + col] = (shifted.equations[row] - base[row]) / step;
            }
        }
        Ok(jac)
    }
}

fn check_sample_count(n: usize) -> Result<()> {
    if n >= 64 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::SampleCount(n))
    }
}

fn check_stagnation<T: Real>(ev: &Evaluation<T>, clamp: T) -> Result<()> {
    let min_h = ev.residual.speed.min();
    let reference = ev.profile.speed(ev.v.mean()).unwrap_or(T::zero());
    if min_h < clamp * reference {
        return Err(Error::NearStagnation {
            min_h: min_h.as_f64(),
            clamp: (clamp * reference).as_f64(),
        });
    }
    Ok(())
}

fn newton<T: Real>(
    system: &System<'_, T>,
    mut x: Vec<T>,
    options: &ContinuationOptions<T>,
) -> Result<(Vec<T>, Evaluation<T>, usize)> {
    let fail = |iterations: usize, residual: T, v: &PeriodicFunction<T>| Error::NonConvergence {
        iterations,
        residual: residual.as_f64(),
        amplitude: system.amplitude.as_f64(),
        last_iterate: v.samples().iter().map(|s| s.as_f64()).collect(),
    };
    let mut current = system.evaluate(&x)?;
    for iteration in 0..=options.max_newton {
        check_stagnation(&current, options.stagnation_clamp)?;
        if current.norm < options.tolerance {
            return Ok((x, current, iteration));
        }
        if iteration == options.max_newton {
            break;
        }
        let dim = x.len();
        let jac = system
            .jacobian(&x, &current.equations, options.fd_step)
            .map_err(|_| fail(iteration, current.norm, &current.v))?;
        let rhs: Vec<T> = current.equations.iter().map(|&f| -f).collect();
        let delta = T::solve_dense(&jac, dim, &rhs).ok_or_else(|| fail(iteration, current.norm, &current.v))?;
        // Halve the step while the trial leaves the admissible range.
        let mut scale = T::one();
        let mut accepted = None;
        for _ in 0..12 {
            let trial: Vec<T> = x.iter().zip(&delta).map(|(&xi, &di)| xi + scale * di).collect();
            if let Ok(ev) = system.evaluate(&trial) {
                accepted = Some((trial, ev));
                break;
            }
            scale = scale * T::lit(0.5);
        }
        let (trial, ev) = accepted.ok_or_else(|| fail(iteration + 1, current.norm, &current.v))?;
        x = trial;
        current = ev;
    }
    Err(fail(options.max_newton, current.norm, &current.v))
}

/// Coefficient vector of a solution, for seeding the next step.
fn unknowns<T: Real>(sol: &Solution<T>) -> Vec<T> {
    let n = sol.v().len();
    let spec = sol.v().spectrum();
    let mut x = Vec::with_capacity(n / 2 + 1);
    x.push(spec[0].re);
    for k in 1..n / 2 {
        x.push(spec[k].re + spec[n - k].re);
    }
    x.push(sol.profile().released_parameter());
    x
}

fn flat_solution<T: Real>(profile: &Profile<T>, domain: &StripDomain<T>, n: usize, branch: Branch) -> Result<Solution<T>> {
    let a = flat_state(profile, domain, branch)?;
    let v = PeriodicFunction::constant(domain.period(), n, a * domain.half_width())?;
    let res = residual(&v, profile, domain)?;
    Solution::assemble(*domain, profile.clone(), v, res, branch, 0)
}

/// First-step seed: the neutral stream for `options.mode` plus a cosine of
/// the requested amplitude. Falls back to the given profile's own stream when
/// no neutral parameter is found nearby.
fn bifurcation_seed<T: Real>(
    profile: &Profile<T>,
    domain: &StripDomain<T>,
    n: usize,
    amplitude: T,
    options: &ContinuationOptions<T>,
) -> Result<Vec<T>> {
    let p = bifurcation_parameter(profile, domain, options.branch, options.mode)
        .unwrap_or_else(|| profile.released_parameter());
    let seeded = profile.with_released_parameter(p)?;
    let a = flat_state(&seeded, domain, options.branch)?;
    let mut x = vec![T::zero(); n / 2 + 1];
    x[0] = a * domain.half_width();
    if options.mode < n / 2 {
        x[options.mode] = amplitude;
    }
    x[n / 2] = p;
    Ok(x)
}

/// Continues from the uniform stream to `amplitude_target` in
/// `options.steps` equal increments and returns every converged step
/// (the amplitude-zero stream itself is not included).
pub fn continue_branch<T: Real>(
    profile: &Profile<T>,
    domain: &StripDomain<T>,
    n: usize,
    amplitude_target: T,
    options: &ContinuationOptions<T>,
) -> Result<Vec<Solution<T>>> {
    check_sample_count(n)?;
    if !(amplitude_target >= T::zero() && amplitude_target.is_finite()) {
        return Err(Error::Parameter {
            name: "amplitude",
            value: amplitude_target.as_f64(),
            reason: "must be finite and non-negative",
        });
    }
    if options.steps == 0 {
        return Err(Error::Parameter {
            name: "steps",
            value: 0.0,
            reason: "need at least one continuation step",
        });
    }
    // The requested stream must exist even though the branch may move away
    // from its parameter.
    flat_state(profile, domain, options.branch)?;
    if amplitude_target == T::zero() {
        return Ok(vec![flat_solution(profile, domain, n, options.branch)?]);
    }
    let mut out: Vec<Solution<T>> = Vec::with_capacity(options.steps);
    for step in 1..=options.steps {
        let amplitude = amplitude_target * T::from_count(step) / T::from_count(options.steps);
        let seed = match out.last() {
            None => bifurcation_seed(profile, domain, n, amplitude, options)?,
            Some(prev) => unknowns(prev),
        };
        let system = System {
            profile,
            domain,
            n,
            amplitude,
        };
        let (_, ev, iterations) = newton(&system, seed, options)?;
        out.push(Solution::assemble(*domain, ev.profile, ev.v, ev.residual, options.branch, iterations)?);
    }
    Ok(out)
}

/// Even periodic wave of crest-to-trough half-height `amplitude_target` on
/// `N` samples, reached by continuation from the uniform stream.
pub fn solve_periodic<T: Real>(
    profile: &Profile<T>,
    domain: &StripDomain<T>,
    n: usize,
    amplitude_target: T,
    options: &ContinuationOptions<T>,
) -> Result<Solution<T>> {
    let mut branch = continue_branch(profile, domain, n, amplitude_target, options)?;
    Ok(branch.pop().expect("at least one step"))
}
