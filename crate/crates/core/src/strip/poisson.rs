use std::collections::BTreeMap;

use super::{PeriodicFunction, StripDomain};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Kernel tail tolerance used to size the summation window.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// Target trapezoid error, as `exp(-QUADRATURE_EXPONENT)`; the rule converges
/// like `exp(-2π δ / Δs)` for a point at distance `δ` from the boundary.
const QUADRATURE_EXPONENT: f64 = 32.0;

/// Largest quadrature lattice accepted before reporting a resolution error.
pub(crate) const MAX_QUADRATURE_NODES: usize = 1 << 16;

/// Parity of a symmetric extension across `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// `P[F, F]`
    Even,
    /// `P[F, -F]`
    Odd,
}

/// Bounded harmonic function on the strip with traces `top` on `y = C` and
/// `bottom` on `y = -C`, evaluated at interior `points` by trapezoid
/// quadrature of the two-kernel Poisson integral.
///
/// Periodic data are integrated over the real line by summing translates of
/// the kernel across a window of half-width `(2C/π)·ln(1/ε) + P`. Quadrature
/// nodes are refined (band-limited resampling of the data) until the rule is
/// accurate for the row closest to the boundary.
pub fn poisson_extend<T: Real>(
    top: &PeriodicFunction<T>,
    bottom: &PeriodicFunction<T>,
    domain: &StripDomain<T>,
    points: &[(T, T)],
) -> Result<Vec<T>> {
    top.same_shape(bottom)?;
    for f in [top, bottom] {
        let tol = T::lit(1e-12) * domain.period();
        if (f.period() - domain.period()).abs() > tol {
            return Err(Error::Input(format!(
                "boundary period {} does not match domain period {}",
                f.period(),
                domain.period()
            )));
        }
    }
    for &(x, y) in points {
        domain.check_interior(x, y)?;
    }

    let c = domain.half_width();
    let period = domain.period();
    let n = top.len();

    // Rows sharing a height share the kernel table; BTreeMap keeps the
    // evaluation order deterministic.
    let mut rows: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, &(_, y)) in points.iter().enumerate() {
        rows.entry(y.as_f64().to_bits()).or_default().push(i);
    }

    let mut lattices: BTreeMap<usize, (Vec<T>, Vec<T>)> = BTreeMap::new();
    let mut out = vec![T::zero(); points.len()];
    let window = T::lit(2.0) * c / T::PI() * T::lit(1.0 / TAIL_TOLERANCE).ln() + period;
    let translates = (window / period).ceil().to_i64().unwrap_or(1) + 1;

    for members in rows.values() {
        let y = points[members[0]].1;
        let m = nodes_for(n, period, c - y.abs())?;
        if let std::collections::btree_map::Entry::Vacant(slot) = lattices.entry(m) {
            let t = top.resample(m)?.samples().to_vec();
            let b = bottom.resample(m)?.samples().to_vec();
            slot.insert((t, b));
        }
        let (t_data, b_data) = &lattices[&m];
        let h = period / T::from_count(m);

        // Cluster the row by sub-lattice offset of x.
        let mut pending: Vec<(usize, i64, T)> = members
            .iter()
            .map(|&i| {
                let x = points[i].0;
                let q = (x / h).round();
                (i, q.to_i64().unwrap_or(0), x - q * h)
            })
            .collect();
        pending.sort_by(|a, b| a.2.partial_cmp(&b.2).unwrap().then(a.0.cmp(&b.0)));
        let merge = T::lit(1e-12) * h;
        let mut start = 0;
        while start < pending.len() {
            let frac = pending[start].2;
            let mut end = start + 1;
            while end < pending.len() && pending[end].2 - frac <= merge {
                end += 1;
            }
            let (upper, lower) = kernel_table(c, y, frac, h, m, period, translates);
            for &(i, q, _) in &pending[start..end] {
                let base = q.rem_euclid(m as i64) as usize;
                let mut acc = T::zero();
                for j in 0..m {
                    let d = (base + m - j) % m;
                    acc = acc + upper[d] * t_data[j] + lower[d] * b_data[j];
                }
                out[i] = acc * h;
            }
            start = end;
        }
    }
    Ok(out)
}

/// Smallest power-of-two lattice (≥ `n`) meeting the trapezoid target at
/// boundary distance `distance`.
fn nodes_for<T: Real>(n: usize, period: T, distance: T) -> Result<usize> {
    let spacing = T::TAU() * distance / T::lit(QUADRATURE_EXPONENT);
    let needed = (period / spacing).ceil().to_f64().unwrap_or(f64::INFINITY);
    if !(needed <= MAX_QUADRATURE_NODES as f64) {
        return Err(Error::Resolution {
            distance: distance.as_f64(),
            needed: needed.min(usize::MAX as f64) as usize,
            limit: MAX_QUADRATURE_NODES,
        });
    }
    Ok((needed as usize).max(n).next_power_of_two())
}

/// Periodised kernels on the offsets `frac + d·h`, `d = 0..m`, for the top
/// (`cosh - sin`) and bottom (`cosh + sin`) lines, including the `1/4C` factor.
fn kernel_table<T: Real>(
    c: T,
    y: T,
    frac: T,
    h: T,
    m: usize,
    period: T,
    translates: i64,
) -> (Vec<T>, Vec<T>) {
    let a = T::PI() / (T::lit(2.0) * c);
    let (sy, cy) = (a * y).sin_cos();
    let scale = cy / (T::lit(4.0) * c);
    let mut upper = vec![T::zero(); m];
    let mut lower = vec![T::zero(); m];
    for d in 0..m {
        let base = frac + T::from_count(d) * h;
        let (mut u, mut l) = (T::zero(), T::zero());
        for shift in -translates..=translates {
            let s = base - T::lit(shift as f64) * period;
            let ch = (a * s).cosh();
            u = u + T::one() / (ch - sy);
            l = l + T::one() / (ch + sy);
        }
        upper[d] = u * scale;
        lower[d] = l * scale;
    }
    (upper, lower)
}

/// `P_e[F] = P[F, F]` or `P_o[F] = P[F, -F]`.
pub fn symmetric_extend<T: Real>(
    f: &PeriodicFunction<T>,
    parity: Parity,
    domain: &StripDomain<T>,
    points: &[(T, T)],
) -> Result<Vec<T>> {
    match parity {
        Parity::Even => poisson_extend(f, f, domain, points),
        Parity::Odd => {
            let neg = f.map(|s| -s);
            poisson_extend(f, &neg, domain, points)
        }
    }
}
