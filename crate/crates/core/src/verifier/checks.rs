//! Pointwise boundary certificates on a solution or an imported curve.

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::scalar::Real;
use crate::solver::{FreeCurve, Solution};
use crate::strip::spectral_derivative;

/// `sup | |w'|·h(v) - 1 |` with `|w'| = sqrt(u'² + v'²)`, `u' = cosθ/h(v)` and
/// `v'` the spectral derivative of the trace.
pub fn bernoulli_residual<T: Real>(solution: &Solution<T>) -> Result<T> {
    let profile = solution.profile();
    let dv = spectral_derivative(solution.v()).value;
    let mut worst = T::zero();
    for ((&v, &th), &d) in solution.v().samples().iter().zip(solution.theta().samples()).zip(dv.samples()) {
        let h = profile.speed(v)?;
        let du = th.cos() / h;
        let speed = (du * du + d * d).sqrt();
        worst = worst.max((speed * h - T::one()).abs());
    }
    Ok(worst)
}

/// Bernoulli residual of a sampled curve against `profile`, with `|w'|` from
/// centred differences of chord length against the parameter.
pub fn bernoulli_residual_curve<T: Real>(curve: &FreeCurve<T>, profile: &Profile<T>) -> Result<T> {
    let mut worst = T::zero();
    for (&v, s) in curve.heights().iter().zip(curve.speeds()) {
        let h = profile.speed(v)?;
        worst = worst.max((s * h - T::one()).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphCheck<T> {
    pub min_cos_theta: T,
    /// Parameter value where the minimum of `cos θ` is attained.
    pub witness: T,
    pub min_u_prime: T,
    /// `min cos θ > 0` at every sample.
    pub graph_property: bool,
}

fn graph_from<T: Real>(params: &[T], angles: &[T], u_prime: impl Iterator<Item = T>) -> GraphCheck<T> {
    let mut min_cos = T::infinity();
    let mut witness = T::zero();
    for (&t, &th) in params.iter().zip(angles) {
        let c = th.cos();
        if c < min_cos {
            min_cos = c;
            witness = t;
        }
    }
    GraphCheck {
        min_cos_theta: min_cos,
        witness,
        min_u_prime: u_prime.fold(T::infinity(), T::min),
        graph_property: min_cos > T::zero(),
    }
}

pub fn graph_check<T: Real>(solution: &Solution<T>) -> GraphCheck<T> {
    let params: Vec<T> = solution.v().nodes().collect();
    let profile = solution.profile();
    let u_prime = solution
        .theta()
        .samples()
        .iter()
        .zip(solution.v().samples())
        .map(|(&th, &v)| th.cos() / profile.speed(v).unwrap_or(T::nan()));
    graph_from(&params, solution.theta().samples(), u_prime)
}

/// Graph check on a curve; `u'` from centred differences.
pub fn graph_check_curve<T: Real>(curve: &FreeCurve<T>) -> GraphCheck<T> {
    let angles = curve.angles();
    let speeds = curve.speeds();
    let u_prime = angles.iter().zip(&speeds).map(|(&th, &s)| s * th.cos());
    graph_from(curve.sample_params(), &angles, u_prime.collect::<Vec<_>>().into_iter())
}

/// The differential inequality `θ' - h'(v)·cosθ/h(v)² > 0` off stagnation
/// points; the report calls its infimum `czam_margin`.
#[derive(Debug, Clone, PartialEq)]
pub struct CzamCheck<T> {
    /// Infimum of the margin over the retained samples.
    pub margin: T,
    /// `θ' - h'(v)·cosθ/h(v)²` per sample (NaN where excluded).
    pub margins: Vec<T>,
    /// Samples left out: stagnation-adjacent or without a finite `h'`.
    pub excluded: Vec<usize>,
}

fn czam_from<T: Real>(
    profile: &Profile<T>,
    heights: &[T],
    angles: &[T],
    dtheta: &[T],
    stagnant: &[bool],
) -> Result<CzamCheck<T>> {
    let mut margins = Vec::with_capacity(heights.len());
    let mut excluded = Vec::new();
    let mut inf = T::infinity();
    for (j, ((&v, &th), &dth)) in heights.iter().zip(angles).zip(dtheta).enumerate() {
        let near_stagnation = stagnant[j] || stagnant[(j + 1) % stagnant.len()] || stagnant[(j + stagnant.len() - 1) % stagnant.len()];
        let (h, dh) = profile.speed_and_slope(v)?;
        if near_stagnation || !(h > T::zero() && dh.is_finite()) {
            excluded.push(j);
            margins.push(T::nan());
            continue;
        }
        let m = dth - dh / (h * h) * th.cos();
        inf = inf.min(m);
        margins.push(m);
    }
    Ok(CzamCheck {
        margin: inf,
        margins,
        excluded,
    })
}

/// Differential inequality `θ' - h'(v)·cosθ/h(v)² > 0` with spectral `θ'`.
pub fn czam_check<T: Real>(solution: &Solution<T>, stagnation_tol: T) -> Result<CzamCheck<T>> {
    let profile = solution.profile();
    let dtheta = spectral_derivative(solution.theta()).value;
    let stagnant = stagnation_mask(profile, solution.v().samples(), stagnation_tol);
    czam_from(
        profile,
        solution.v().samples(),
        solution.theta().samples(),
        dtheta.samples(),
        &stagnant,
    )
}

/// The same inequality on a curve parametrised by the conformal variable,
/// with `θ'` from centred differences of the unwrapped angle.
pub fn czam_check_curve<T: Real>(curve: &FreeCurve<T>, profile: &Profile<T>, stagnation_tol: T) -> Result<CzamCheck<T>> {
    let angles = curve.angles();
    let params = curve.sample_params();
    let n = angles.len();
    let period = match curve.closure() {
        crate::solver::Closure::Periodic { param_period, .. } => Some(param_period),
        crate::solver::Closure::Closed => Some(curve.params()[n] - curve.params()[0]),
        crate::solver::Closure::Open => None,
    };
    let wrap = |d: T| {
        let tau = T::TAU();
        d - tau * (d / tau).round()
    };
    let dtheta: Vec<T> = (0..n)
        .map(|i| {
            let (ib, tb) = match (i, period) {
                (0, Some(p)) => (n - 1, params[n - 1] - p),
                (0, None) => (0, params[0]),
                _ => (i - 1, params[i - 1]),
            };
            let (ifw, tf) = match (i + 1 == n, period) {
                (true, Some(p)) => (0, params[0] + p),
                (true, None) => (i, params[i]),
                _ => (i + 1, params[i + 1]),
            };
            wrap(angles[ifw] - angles[ib]) / (tf - tb)
        })
        .collect();
    let heights = curve.heights();
    let stagnant = stagnation_mask(profile, &heights, stagnation_tol);
    czam_from(profile, &heights, &angles, &dtheta, &stagnant)
}

fn stagnation_mask<T: Real>(profile: &Profile<T>, heights: &[T], tol: T) -> Vec<bool> {
    match profile.stagnation_height() {
        Some(d) => heights.iter().map(|&v| d - v < tol).collect(),
        None => vec![false; heights.len()],
    }
}

/// Maximal runs of samples with `d - v < tol`, as `(t_first, t_last)` pairs.
/// A run crossing the end of a periodic sampling is reported once, starting
/// near the end. Empty when `h` has no zero at the top of its domain.
pub fn stagnation_detect<T: Real>(profile: &Profile<T>, params: &[T], heights: &[T], tol: T) -> Result<Vec<(T, T)>> {
    if params.len() != heights.len() {
        return Err(Error::LengthMismatch {
            expected: heights.len(),
            got: params.len(),
        });
    }
    let mask = stagnation_mask(profile, heights, tol);
    let n = mask.len();
    if n == 0 || !mask.iter().any(|&m| m) {
        return Ok(Vec::new());
    }
    if mask.iter().all(|&m| m) {
        return Ok(vec![(params[0], params[n - 1])]);
    }
    // Start scanning just after a non-stagnant sample so wrapped runs stay whole.
    let start = (0..n).find(|&i| !mask[i]).expect("some sample is not stagnant");
    let mut out = Vec::new();
    let mut run: Option<(usize, usize)> = None;
    for step in 1..=n {
        let i = (start + step) % n;
        if mask[i] {
            run = Some(match run {
                None => (i, i),
                Some((a, _)) => (a, i),
            });
        } else if let Some((a, b)) = run.take() {
            out.push((params[a], params[b]));
        }
    }
    if let Some((a, b)) = run {
        out.push((params[a], params[b]));
    }
    Ok(out)
}
