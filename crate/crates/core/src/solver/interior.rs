use num_complex::Complex;
use rustfft::FftPlanner;

use super::Solution;
use crate::error::Result;
use crate::scalar::Real;
use crate::strip::{Grid, HarmonicField, ModalExtension, PeriodicFunction};

/// Fourier coefficients of `W' = exp(G)` along the line `Im z = y`, sampled on
/// `m` nodes. The Nyquist coefficient is dropped.
fn row_spectrum<T: Real>(g: &ModalExtension<T>, period: T, y: T, m: usize) -> Vec<Complex<T>> {
    let mut buf: Vec<Complex<T>> = (0..m)
        .map(|j| g.eval(period * T::from_count(j) / T::from_count(m), y).exp())
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = T::one() / T::from_count(m);
    buf.iter_mut().for_each(|c| *c = *c * scale);
    buf[m / 2] = Complex::new(T::zero(), T::zero());
    buf
}

/// Periodic part `H(x + iy) = Σ_{k≠0} ŵ_k(y)/(iκ) e^{iκx}` of `W`.
fn periodic_part<T: Real>(spec: &[Complex<T>], period: T, x: T) -> Complex<T> {
    let m = spec.len();
    let mut acc = Complex::new(T::zero(), T::zero());
    for (j, &c) in spec.iter().enumerate().skip(1) {
        let k = if j <= m / 2 { j as i64 } else { j as i64 - m as i64 };
        let kappa = T::lit(k as f64) * T::TAU() / period;
        acc = acc + c / Complex::new(T::zero(), kappa) * Complex::from_polar(T::one(), kappa * x);
    }
    acc
}

/// Interior fields of the conformal map of a solution.
///
/// `log W' = G` is the modal extension of the top trace `-log h(v) + iθ`;
/// `W` is recovered line by line from `W'` as `ŵ₀·z + H(z) - H(0)`, which
/// fixes `W(0) = 0`.
pub fn interior_field<T: Real>(solution: &Solution<T>, grid: &Grid<T>) -> Result<HarmonicField<T>> {
    let domain = solution.domain();
    grid.check_inside(domain)?;
    let period = domain.period();
    let rho = PeriodicFunction::from_samples(
        period,
        solution.abs_wp().samples().iter().map(|w| w.ln()).collect(),
    )?;
    let g = ModalExtension::new(&rho, domain);
    let m = 2 * rho.len();
    let axis = row_spectrum(&g, period, T::zero(), m);
    let h0 = periodic_part(&axis, period, T::zero());

    let (nx, ny) = (grid.xs().len(), grid.ys().len());
    let size = nx * ny;
    let mut field = HarmonicField {
        grid: grid.clone(),
        u: vec![T::zero(); size],
        v: vec![T::zero(); size],
        log_abs_wp: vec![T::zero(); size],
        theta: vec![T::zero(); size],
    };
    for (j, &y) in grid.ys().iter().enumerate() {
        let spec = row_spectrum(&g, period, y, m);
        for (i, &x) in grid.xs().iter().enumerate() {
            let idx = grid.index(i, j);
            let log_wp = g.eval(x, y);
            let w = spec[0] * Complex::new(x, y) + periodic_part(&spec, period, x) - h0;
            field.u[idx] = w.re;
            field.v[idx] = w.im;
            field.log_abs_wp[idx] = log_wp.re;
            field.theta[idx] = log_wp.im;
        }
    }
    Ok(field)
}
