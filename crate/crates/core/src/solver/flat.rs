//! Uniform streams `W = az` and their linear stability under periodic modes.

use std::fmt;

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::scalar::Real;
use crate::strip::StripDomain;

/// Which root of `a·h(aC) = 1` to take.
///
/// `Lower` is the fast (supercritical) stream, `Upper` the slow (subcritical)
/// one; periodic waves bifurcate from the upper branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Lower,
    Upper,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Lower => "lower",
            Branch::Upper => "upper",
        }
    }

    pub fn regime(self) -> &'static str {
        match self {
            Branch::Lower => "supercritical",
            Branch::Upper => "subcritical",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" | "supercritical" => Ok(Branch::Lower),
            "upper" | "subcritical" => Ok(Branch::Upper),
            other => Err(Error::Input(format!("unknown branch `{other}`"))),
        }
    }
}

/// Relative gap below which the maximum of `a·h(aC)` counts as touching 1.
const CRITICAL_TOLERANCE: f64 = 1e-12;

fn stream_flux<T: Real>(profile: &Profile<T>, c: T, a: T) -> T {
    profile.speed(a * c).map(|h| a * h).unwrap_or(T::zero())
}

/// Maximiser of `φ(a) = a·h(aC)` over the admissible speeds `aC ∈ J`.
fn flux_peak<T: Real>(profile: &Profile<T>, c: T) -> (T, T) {
    let (lo, hi) = profile.domain();
    let (a_lo, a_hi) = (lo / c, hi / c);
    let samples = 512;
    let at = |i: usize| a_lo + (a_hi - a_lo) * T::from_count(i) / T::from_count(samples);
    let mut best = 1;
    for i in 1..=samples {
        if stream_flux(profile, c, at(i)) > stream_flux(profile, c, at(best)) {
            best = i;
        }
    }
    // Golden-section refinement on the neighbouring cells.
    let (mut l, mut r) = (at(best - 1), at((best + 1).min(samples)));
    let ratio = T::lit(0.618_033_988_749_894_8);
    let mut x1 = r - ratio * (r - l);
    let mut x2 = l + ratio * (r - l);
    let (mut f1, mut f2) = (stream_flux(profile, c, x1), stream_flux(profile, c, x2));
    for _ in 0..200 {
        if f1 < f2 {
            l = x1;
            x1 = x2;
            f1 = f2;
            x2 = l + ratio * (r - l);
            f2 = stream_flux(profile, c, x2);
        } else {
            r = x2;
            x2 = x1;
            f2 = f1;
            x1 = r - ratio * (r - l);
            f1 = stream_flux(profile, c, x1);
        }
        if r - l <= T::epsilon() * r.abs() {
            break;
        }
    }
    let a = (l + r) * T::lit(0.5);
    (a, stream_flux(profile, c, a))
}

/// Speed `a` of the uniform stream `W(z) = az` on the requested branch,
/// i.e. a root of `a·h(aC) = 1`, bisected to machine precision.
pub fn flat_state<T: Real>(profile: &Profile<T>, domain: &StripDomain<T>, branch: Branch) -> Result<T> {
    let c = domain.half_width();
    let (lo, hi) = profile.domain();
    let (a_peak, peak) = flux_peak(profile, c);
    if (peak - T::one()).abs() <= T::lit(CRITICAL_TOLERANCE) {
        return Err(Error::CriticalStream { a: a_peak.as_f64() });
    }
    if peak < T::one() {
        return Err(Error::NoStream {
            branch: branch.name(),
            peak: peak.as_f64(),
        });
    }
    let g = |a: T| stream_flux(profile, c, a) - T::one();
    let (mut l, mut r) = match branch {
        Branch::Lower => (lo / c, a_peak),
        Branch::Upper => (a_peak, hi / c),
    };
    let (gl, gr) = (g(l), g(r));
    if gl.signum() == gr.signum() {
        return Err(Error::NoStream {
            branch: branch.name(),
            peak: peak.as_f64(),
        });
    }
    for _ in 0..400 {
        let m = (l + r) * T::lit(0.5);
        if m <= l || m >= r {
            break;
        }
        if g(m).signum() == gl.signum() {
            l = m;
        } else {
            r = m;
        }
    }
    // Return whichever bracket end has the smaller residual.
    Ok(if g(l).abs() <= g(r).abs() { l } else { r })
}

/// Signed linearisation margin of one Fourier mode about a uniform stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMargin<T> {
    pub mode: usize,
    /// Conformal wavenumber `2πk/P`.
    pub wavenumber: T,
    /// `κ + h'(v₀)·tanh(κC)/h(v₀)²`; zero at a bifurcation.
    pub margin: T,
}

/// Margins for modes `1..=k_max` about the stream of speed `a`.
pub fn bifurcation_wavenumbers<T: Real>(
    profile: &Profile<T>,
    domain: &StripDomain<T>,
    a: T,
    k_max: usize,
) -> Result<Vec<ModeMargin<T>>> {
    let v0 = a * domain.half_width();
    let value = profile.eval(v0)?;
    let (lo, hi) = profile.domain();
    if !(v0 > lo && v0 < hi) {
        return Err(Error::OutsideProfile {
            y: v0.as_f64(),
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    Ok((1..=k_max)
        .map(|k| {
            let kappa = domain.wavenumber(k as i64);
            ModeMargin {
                mode: k,
                wavenumber: kappa,
                margin: kappa + value.dh * (kappa * domain.half_width()).tanh() / (value.h * value.h),
            }
        })
        .collect())
}

/// Physical reading of a conformal mode on a water-wave stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalMode<T> {
    /// Surface speed `c = h(v₀)`.
    pub speed: T,
    /// Undisturbed depth `d = v₀ = aC`.
    pub depth: T,
    /// Physical wavenumber `κ·c` (one conformal unit spans `1/c` physically... scaled by `a = 1/c`).
    pub wavenumber: T,
}

/// Converts the conformal mode `κ` on the stream of speed `a` to physical
/// variables: horizontal lengths scale by `u' = a`, so `k_phys = κ/a = κc`.
pub fn physical_mode<T: Real>(profile: &Profile<T>, domain: &StripDomain<T>, a: T, kappa: T) -> Result<PhysicalMode<T>> {
    let depth = a * domain.half_width();
    let speed = profile.speed(depth)?;
    Ok(PhysicalMode {
        speed,
        depth,
        wavenumber: kappa * speed,
    })
}

/// Residual of the linear dispersion relation `c² = (g/k)·tanh(kd)`, as
/// `(c², (g/k)·tanh(kd))`.
pub fn dispersion_relation<T: Real>(g: T, mode: &PhysicalMode<T>) -> (T, T) {
    (
        mode.speed * mode.speed,
        g / mode.wavenumber * (mode.wavenumber * mode.depth).tanh(),
    )
}

/// Value of the released profile parameter at which mode `mode` of the
/// uniform stream on `branch` becomes neutral. `None` when no sign change of
/// the margin is found near the current parameter.
pub fn bifurcation_parameter<T: Real>(
    profile: &Profile<T>,
    domain: &StripDomain<T>,
    branch: Branch,
    mode: usize,
) -> Option<T> {
    let margin_at = |p: T| -> Option<T> {
        let q = profile.with_released_parameter(p).ok()?;
        let a = flat_state(&q, domain, branch).ok()?;
        let m = bifurcation_wavenumbers(&q, domain, a, mode).ok()?;
        m.last().map(|m| m.margin)
    };
    let p0 = profile.released_parameter();
    let f0 = margin_at(p0)?;
    if f0 == T::zero() {
        return Some(p0);
    }
    let (lo, hi) = profile.domain();
    let initial = T::lit(0.02) * p0.abs().max(hi - lo);
    // March away from p0 in each direction with growing steps, shrinking
    // the step instead whenever the stream ceases to exist; neutral points
    // often sit just above the critical (no-stream) threshold.
    let mut bracket: Option<(T, T)> = None;
    for dir in [T::one(), -T::one()] {
        let (mut last, mut step) = (p0, initial);
        for _ in 0..400 {
            let p = last + dir * step;
            match margin_at(p) {
                Some(f) if f.signum() != f0.signum() => {
                    let found = if dir > T::zero() { (last, p) } else { (p, last) };
                    let closer = bracket.is_none_or(|(l, r)| {
                        (found.0 - p0).abs().min((found.1 - p0).abs()) < (l - p0).abs().min((r - p0).abs())
                    });
                    if closer {
                        bracket = Some(found);
                    }
                    break;
                }
                Some(_) => {
                    last = p;
                    step = step * T::lit(1.5);
                }
                None => {
                    step = step * T::lit(0.5);
                    if step <= T::epsilon() * p0.abs().max(T::one()) {
                        break;
                    }
                }
            }
        }
    }
    let (mut l, mut r) = bracket?;
    // The bracket may straddle a region where no stream exists; bisection
    // only keeps points where the margin is defined.
    let mut fl = margin_at(l)?;
    for _ in 0..200 {
        let m = (l + r) * T::lit(0.5);
        if m <= l || m >= r {
            break;
        }
        match margin_at(m) {
            Some(fm) if fm.signum() == fl.signum() => {
                l = m;
                fl = fm;
            }
            Some(_) => r = m,
            None => return None,
        }
    }
    Some((l + r) * T::lit(0.5))
}
