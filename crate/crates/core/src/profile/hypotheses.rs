use super::Profile;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `h(d) = 0` at the top of the domain and `h > 0` below it.
#[derive(Debug, Clone, PartialEq)]
pub struct ClauseA<T> {
    pub pass: bool,
    pub endpoint_value: T,
    pub min_interior_speed: T,
}

/// Continuity and C¹ consistency of the evaluators on the sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ClauseB<T> {
    pub pass: bool,
    /// Largest relative mismatch between `h'` and a centred difference of `h`.
    pub max_slope_mismatch: T,
}

/// Strict decrease and log-concavity.
#[derive(Debug, Clone, PartialEq)]
pub struct ClauseC<T> {
    pub pass: bool,
    /// `inf(-h')` over the samples; must be positive.
    pub decrease_margin: T,
    /// `sup (log h)''` over the samples; must not be positive.
    pub log_concavity_margin: T,
    pub strictly_decreasing: bool,
    pub log_concave: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport<T> {
    pub sample_count: usize,
    pub clause_a: ClauseA<T>,
    pub clause_b: ClauseB<T>,
    pub clause_c: ClauseC<T>,
    pub overall: bool,
}

impl<T> HypothesisReport<T> {
    /// Identifiers of failed clauses: `a`, `b`, `c.decreasing`, `c.log_concave`.
    pub fn failed_clauses(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.clause_a.pass {
            out.push("a");
        }
        if !self.clause_b.pass {
            out.push("b");
        }
        if !self.clause_c.strictly_decreasing {
            out.push("c.decreasing");
        }
        if !self.clause_c.log_concave {
            out.push("c.log_concave");
        }
        out
    }
}

const SLOPE_TOLERANCE: f64 = 1e-3;

/// Nested Chebyshev–Lobatto interior nodes of `(lo, hi)`: doubling `count`
/// keeps every previous node, so margins can only sharpen under refinement.
fn sample_heights<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    let mid = (lo + hi) * T::lit(0.5);
    let half = (hi - lo) * T::lit(0.5);
    (1..count)
        .map(|i| mid - half * (T::PI() * T::from_count(i) / T::from_count(count)).cos())
        .filter(|&y| y > lo && y < hi)
        .collect()
}

/// Audits the structural hypotheses on `sample_count` nodes clustered toward
/// both ends of the domain.
pub fn check_hypotheses<T: Real>(profile: &Profile<T>, sample_count: usize) -> Result<HypothesisReport<T>> {
    if sample_count < 64 {
        return Err(Error::Parameter {
            name: "sample_count",
            value: sample_count as f64,
            reason: "at least 64 samples are required",
        });
    }
    let (lo, hi) = profile.domain();
    let heights = sample_heights(lo, hi, sample_count);
    let eps = T::epsilon();

    let endpoint_value = profile.speed(hi)?;
    let mut min_speed = T::infinity();
    let mut max_speed = T::zero();
    let mut mismatch = T::zero();
    let mut decrease = T::infinity();
    let mut concavity = T::neg_infinity();
    let mut finite = true;
    let mut log_concave = true;

    let speeds: Vec<(T, T)> = heights
        .iter()
        .map(|&y| profile.speed_and_slope(y))
        .collect::<Result<_>>()?;
    for &(h, _) in &speeds {
        max_speed = max_speed.max(h);
    }
    let slope_scale = max_speed / (hi - lo);

    for (&y, &(h, dh)) in heights.iter().zip(&speeds) {
        min_speed = min_speed.min(h);
        if !(h.is_finite() && dh.is_finite()) {
            finite = false;
            continue;
        }
        decrease = decrease.min(-dh);

        let dist = (y - lo).min(hi - y);
        let step = T::lit(1e-4) * dist;
        let (hp, hm) = (profile.speed(y + step)?, profile.speed(y - step)?);
        let fd = (hp - hm) / (T::lit(2.0) * step);
        mismatch = mismatch.max((fd - dh).abs() / (dh.abs() + slope_scale));

        if h > T::zero() {
            let step = T::lit(2e-4) * dist;
            let (fp, fm) = (profile.speed(y + step)?, profile.speed(y - step)?);
            if fp > T::zero() && fm > T::zero() {
                let (lp, l0, lm) = (fp.ln(), h.ln(), fm.ln());
                let second = (lp - T::lit(2.0) * l0 + lm) / (step * step);
                let roundoff = T::lit(64.0) * eps * lp.abs().max(l0.abs()).max(lm.abs()).max(T::one())
                    / (step * step);
                concavity = concavity.max(second);
                if second > roundoff {
                    log_concave = false;
                }
            } else {
                log_concave = false;
            }
        }
    }

    let clause_a = ClauseA {
        pass: endpoint_value <= T::lit(1e-12) * max_speed.max(T::one()) && min_speed > T::zero(),
        endpoint_value,
        min_interior_speed: min_speed,
    };
    let clause_b = ClauseB {
        pass: finite && mismatch < T::lit(SLOPE_TOLERANCE),
        max_slope_mismatch: mismatch,
    };
    let strictly_decreasing = finite && decrease > T::zero();
    let clause_c = ClauseC {
        pass: strictly_decreasing && log_concave,
        decrease_margin: decrease,
        log_concavity_margin: concavity,
        strictly_decreasing,
        log_concave,
    };
    let overall = clause_a.pass && clause_b.pass && clause_c.pass;
    Ok(HypothesisReport {
        sample_count,
        clause_a,
        clause_b,
        clause_c,
        overall,
    })
}
