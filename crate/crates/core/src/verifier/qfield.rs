//! The barrier `Q = -log|W'| - log h(V)` on the upper half strip.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solver::{interior_field, Solution};
use crate::strip::{symmetric_extend, Grid, Parity, PeriodicFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct QFieldCheck<T> {
    /// `max Q` over the retained grid points (path A).
    pub q_max_interior: T,
    /// `max |Q(x, C)|` off the stagnation set, by Richardson extrapolation.
    pub q_boundary_dev: T,
    /// `max |Q_A - Q_B|` over the retained grid points.
    pub path_difference: T,
    /// Path-A values on the grid, row-major (NaN where excluded).
    pub values: Vec<T>,
    pub excluded: usize,
}

fn q_from_field<T: Real>(solution: &Solution<T>, grid: &Grid<T>) -> Result<Vec<T>> {
    let field = interior_field(solution, grid)?;
    let profile = solution.profile();
    field
        .log_abs_wp
        .iter()
        .zip(&field.v)
        .map(|(&l, &v)| Ok(-l - profile.eval(v)?.log_h))
        .collect()
}

fn near_interval<T: Real>(x: T, (a, b): (T, T), pad: T, period: T) -> bool {
    let wrap = |d: T| d - period * (d / period).floor();
    // Offset of x past a, modulo the period, against the run length.
    let len = wrap(b - a);
    let off = wrap(x - a + pad);
    off <= len + pad + pad
}

/// Evaluates `Q` on `grid` (which must lie in `0 < y < C`) two ways:
/// path A from the interior field, path B as `P_e[log h(v)] - log h(P_o[v])`.
///
/// Top-row points within one cell of a stagnation interval are excluded;
/// `boundary_offset` (relative to `C`) is the smallest of the three offsets
/// used to extrapolate `Q` to `y = C`.
pub fn q_field_check<T: Real>(
    solution: &Solution<T>,
    grid: &Grid<T>,
    stagnation: &[(T, T)],
    boundary_offset: T,
) -> Result<QFieldCheck<T>> {
    let domain = solution.domain();
    grid.check_inside(domain)?;
    if grid.ys().iter().any(|&y| !(y > T::zero())) {
        return Err(Error::Input("the Q grid must lie in 0 < y < C".into()));
    }
    let c = domain.half_width();
    let period = domain.period();
    let profile = solution.profile();

    let path_a = q_from_field(solution, grid)?;
    let points = grid.points();
    let log_h = PeriodicFunction::from_samples(
        period,
        solution.abs_wp().samples().iter().map(|w| -w.ln()).collect(),
    )?;
    let even = symmetric_extend(&log_h, Parity::Even, domain, &points)?;
    let odd = symmetric_extend(solution.v(), Parity::Odd, domain, &points)?;

    let dx = period / T::from_count(grid.xs().len().max(1));
    let top = grid.ys().iter().copied().fold(T::zero(), T::max);
    let dy = if grid.ys().len() > 1 { c / T::from_count(grid.ys().len() + 1) } else { c - top };
    let mut q_max = T::neg_infinity();
    let mut diff = T::zero();
    let mut excluded = 0;
    let mut values = path_a.clone();
    for (k, &(x, y)) in points.iter().enumerate() {
        let blocked = y >= c - dy - dy * T::lit(1e-9)
            && stagnation.iter().any(|&iv| near_interval(x, iv, dx, period));
        if blocked {
            excluded += 1;
            values[k] = T::nan();
            continue;
        }
        q_max = q_max.max(path_a[k]);
        let q_b = even[k] - profile.eval(odd[k])?.log_h;
        diff = diff.max((path_a[k] - q_b).abs());
    }

    // Extrapolate to the top line along the solution nodes.
    let delta = boundary_offset * c;
    let xs: Vec<T> = solution
        .v()
        .nodes()
        .zip(solution.v().samples())
        .filter(|&(t, _)| !stagnation.iter().any(|&iv| near_interval(t, iv, solution.v().spacing(), period)))
        .map(|(t, _)| t)
        .collect();
    let mut boundary = T::zero();
    if !xs.is_empty() {
        let three = T::lit(3.0);
        let near = Grid::new(xs.clone(), vec![c - three * delta, c - delta - delta, c - delta])?;
        let q = q_from_field(solution, &near)?;
        let n = xs.len();
        for i in 0..n {
            // Quadratic extrapolation from offsets δ, 2δ, 3δ.
            let extrapolated = three * q[2 * n + i] - three * q[n + i] + q[i];
            boundary = boundary.max(extrapolated.abs());
        }
    }

    Ok(QFieldCheck {
        q_max_interior: q_max,
        q_boundary_dev: boundary,
        path_difference: diff,
        values,
        excluded,
    })
}
