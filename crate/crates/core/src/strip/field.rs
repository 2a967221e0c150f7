use num_complex::Complex;

use super::periodic::mode_index;
use super::{PeriodicFunction, StripDomain};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tensor-product lattice of evaluation points, stored row-major with `x`
/// varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    xs: Vec<T>,
    ys: Vec<T>,
}

impl<T: Real> Grid<T> {
    pub fn new(xs: Vec<T>, ys: Vec<T>) -> Result<Self> {
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::Input("grid needs at least one abscissa and one ordinate".into()));
        }
        Ok(Self { xs, ys })
    }

    /// `nx` columns over one period and `ny` rows strictly inside `0 < y < C`.
    pub fn upper_half(domain: &StripDomain<T>, nx: usize, ny: usize) -> Result<Self> {
        let dx = domain.period() / T::from_count(nx.max(1));
        let dy = domain.half_width() / T::from_count(ny + 1);
        Self::new(
            (0..nx).map(|i| T::from_count(i) * dx).collect(),
            (1..=ny).map(|j| T::from_count(j) * dy).collect(),
        )
    }

    /// `nx` columns over one period and `ny` rows strictly inside `-C < y < C`.
    pub fn full_strip(domain: &StripDomain<T>, nx: usize, ny: usize) -> Result<Self> {
        let dx = domain.period() / T::from_count(nx.max(1));
        let c = domain.half_width();
        let dy = T::lit(2.0) * c / T::from_count(ny + 1);
        Self::new(
            (0..nx).map(|i| T::from_count(i) * dx).collect(),
            (1..=ny).map(|j| T::from_count(j) * dy - c).collect(),
        )
    }

    pub fn xs(&self) -> &[T] {
        &self.xs
    }

    pub fn ys(&self) -> &[T] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.xs.len() + i
    }

    pub fn points(&self) -> Vec<(T, T)> {
        self.ys
            .iter()
            .flat_map(|&y| self.xs.iter().map(move |&x| (x, y)))
            .collect()
    }

    pub fn check_inside(&self, domain: &StripDomain<T>) -> Result<()> {
        for &y in &self.ys {
            domain.check_interior(self.xs[0], y)?;
        }
        for &x in &self.xs {
            domain.check_interior(x, self.ys[0])?;
        }
        Ok(())
    }

    /// Maximum of the five-point Laplacian of `values` over nodes with four
    /// neighbours. Requires uniform spacing in each direction.
    pub fn laplacian_max(&self, values: &[T]) -> T {
        let (nx, ny) = (self.xs.len(), self.ys.len());
        if nx < 3 || ny < 3 {
            return T::zero();
        }
        let hx = self.xs[1] - self.xs[0];
        let hy = self.ys[1] - self.ys[0];
        let mut worst = T::zero();
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let c = values[self.index(i, j)];
                let lap = (values[self.index(i + 1, j)] - T::lit(2.0) * c + values[self.index(i - 1, j)])
                    / (hx * hx)
                    + (values[self.index(i, j + 1)] - T::lit(2.0) * c + values[self.index(i, j - 1)])
                        / (hy * hy);
                worst = worst.max(lap.abs());
            }
        }
        worst
    }
}

/// Interior representation of the conformal map `W = U + iV`:
/// `log|W'|`, `Θ = arg W'`, and `U`, `V` on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicField<T> {
    pub grid: Grid<T>,
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub log_abs_wp: Vec<T>,
    pub theta: Vec<T>,
}

impl<T: Real> HarmonicField<T> {
    #[inline]
    pub fn at(&self, values: &[T], i: usize, j: usize) -> T {
        values[self.grid.index(i, j)]
    }
}

/// Holomorphic function `G` on the strip whose real part is even in `y` and
/// equals a given periodic trace on `y = C`; `Im G` vanishes on `y = 0`.
///
/// Each mode `e^{iκt}` of the trace extends as `e^{iκz}/cosh(κC)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalExtension<T> {
    half_width: T,
    period: T,
    spectrum: Vec<Complex<T>>,
}

impl<T: Real> ModalExtension<T> {
    pub fn new(trace: &PeriodicFunction<T>, domain: &StripDomain<T>) -> Self {
        Self {
            half_width: domain.half_width(),
            period: domain.period(),
            spectrum: trace.spectrum().to_vec(),
        }
    }

    /// `(G(z), G'(z))` at `z = x + iy`, `|y| ≤ C`.
    pub fn eval_with_derivative(&self, x: T, y: T) -> (Complex<T>, Complex<T>) {
        let n = self.spectrum.len();
        let c = self.half_width;
        let two = T::lit(2.0);
        let mut g = Complex::new(self.spectrum[0].re, T::zero());
        let mut dg = Complex::new(T::zero(), T::zero());
        for j in 1..=n / 2 {
            let kappa = T::lit(mode_index(j, n) as f64) * T::TAU() / self.period;
            let mut coeff = self.spectrum[j];
            if j == n / 2 {
                coeff = Complex::new(coeff.re * T::lit(0.5), T::zero());
            }
            // e^{∓κy}/cosh(κC) without overflow.
            let damp = T::one() + (-two * kappa * c).exp();
            let e_minus = two * (-kappa * (y + c)).exp() / damp;
            let e_plus = two * (kappa * (y - c)).exp() / damp;
            let rot = Complex::from_polar(T::one(), kappa * x);
            let fwd = coeff * rot * e_minus;
            let bwd = coeff.conj() * rot.conj() * e_plus;
            g = g + fwd + bwd;
            dg = dg + (fwd - bwd) * Complex::new(T::zero(), kappa);
        }
        (g, dg)
    }

    pub fn eval(&self, x: T, y: T) -> Complex<T> {
        self.eval_with_derivative(x, y).0
    }
}
