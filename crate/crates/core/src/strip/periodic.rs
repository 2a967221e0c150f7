use num_complex::Complex;
use rustfft::FftPlanner;

use super::StripDomain;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A real `P`-periodic function held as `N` uniform samples `t_j = jP/N`
/// together with its discrete Fourier coefficients.
///
/// Coefficients are normalised so that `f(t_j) = Σ_k ĉ_k e^{iκ_k t_j}` with
/// `κ_k = 2πk/P`, `k` running over `-N/2..N/2` in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFunction<T> {
    period: T,
    samples: Vec<T>,
    spectrum: Vec<Complex<T>>,
}

fn check_len(n: usize) -> Result<()> {
    if n >= 2 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::SampleCount(n))
    }
}

fn forward<T: Real>(samples: &[T]) -> Vec<Complex<T>> {
    let n = samples.len();
    let mut buf: Vec<Complex<T>> = samples.iter().map(|&s| Complex::new(s, T::zero())).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = T::one() / T::from_count(n);
    buf.iter_mut().for_each(|c| *c = *c * scale);
    buf
}

fn inverse<T: Real>(spectrum: &[Complex<T>]) -> Vec<T> {
    let mut buf = spectrum.to_vec();
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Signed mode index of FFT slot `j` for length `n`.
#[inline]
pub(crate) fn mode_index(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

impl<T: Real> PeriodicFunction<T> {
    pub fn from_samples(period: T, samples: Vec<T>) -> Result<Self> {
        check_len(samples.len())?;
        if !(period > T::zero() && period.is_finite()) {
            return Err(Error::Parameter {
                name: "period",
                value: period.as_f64(),
                reason: "must be positive and finite",
            });
        }
        let spectrum = forward(&samples);
        Ok(Self {
            period,
            samples,
            spectrum,
        })
    }

    /// Samples `f` at the `n` uniform nodes of one period.
    pub fn from_fn(period: T, n: usize, f: impl Fn(T) -> T) -> Result<Self> {
        check_len(n)?;
        let dt = period / T::from_count(n);
        let samples = (0..n).map(|j| f(T::from_count(j) * dt)).collect();
        Self::from_samples(period, samples)
    }

    /// Builds a function from coefficients; the imaginary part of the inverse
    /// transform (non-conjugate-symmetric residue) is discarded.
    pub fn from_spectrum(period: T, spectrum: Vec<Complex<T>>) -> Result<Self> {
        check_len(spectrum.len())?;
        let samples = inverse(&spectrum);
        Self::from_samples(period, samples)
    }

    pub fn constant(period: T, n: usize, value: T) -> Result<Self> {
        Self::from_fn(period, n, |_| value)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    #[inline]
    pub fn period(&self) -> T {
        self.period
    }

    #[inline]
    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    #[inline]
    pub fn spectrum(&self) -> &[Complex<T>] {
        &self.spectrum
    }

    #[inline]
    pub fn spacing(&self) -> T {
        self.period / T::from_count(self.len())
    }

    pub fn nodes(&self) -> impl Iterator<Item = T> + '_ {
        let dt = self.spacing();
        (0..self.len()).map(move |j| T::from_count(j) * dt)
    }

    /// Signed angular wavenumber of FFT slot `j`.
    #[inline]
    pub fn wavenumber(&self, j: usize) -> T {
        T::lit(mode_index(j, self.len()) as f64) * T::TAU() / self.period
    }

    pub fn mean(&self) -> T {
        self.spectrum[0].re
    }

    pub fn max_abs(&self) -> T {
        self.samples.iter().fold(T::zero(), |m, &s| m.max(s.abs()))
    }

    pub fn min(&self) -> T {
        self.samples.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.samples.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// Pointwise image under `f`, re-transformed.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        let samples = self.samples.iter().map(|&s| f(s)).collect();
        Self::from_samples(self.period, samples).expect("length already validated")
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.same_shape(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::from_samples(self.period, samples)
    }

    pub(crate) fn same_shape(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(())
    }

    /// Applies a Fourier multiplier `m(κ)` that is odd-symmetric in the sense
    /// that the result stays real; the Nyquist coefficient is dropped.
    pub fn apply_odd_multiplier(&self, m: impl Fn(T) -> Complex<T>) -> Self {
        let n = self.len();
        let spectrum: Vec<Complex<T>> = self
            .spectrum
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                if j == n / 2 {
                    Complex::new(T::zero(), T::zero())
                } else {
                    c * m(self.wavenumber(j))
                }
            })
            .collect();
        Self::from_spectrum(self.period, spectrum).expect("length already validated")
    }

    /// Trigonometric interpolant at an arbitrary `t`.
    pub fn eval(&self, t: T) -> T {
        let n = self.len();
        let mut acc = self.spectrum[0].re;
        for j in 1..n / 2 {
            let c = self.spectrum[j];
            let phase = self.wavenumber(j) * t;
            acc = acc + T::lit(2.0) * (c.re * phase.cos() - c.im * phase.sin());
        }
        let nyq = self.spectrum[n / 2];
        acc + nyq.re * (self.wavenumber(n / 2) * t).cos()
    }

    /// Band-limited resampling onto `m` nodes (`m` a power of two ≥ `N`).
    pub fn resample(&self, m: usize) -> Result<Self> {
        check_len(m)?;
        let n = self.len();
        if m == n {
            return Ok(self.clone());
        }
        if m < n {
            return Err(Error::SampleCount(m));
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut padded = vec![zero; m];
        let half = T::lit(0.5);
        for j in 0..n {
            let k = mode_index(j, n);
            let c = self.spectrum[j];
            if j == n / 2 {
                padded[n / 2] = c * half;
                padded[m - n / 2] = c * half;
            } else {
                let slot = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
                padded[slot] = c;
            }
        }
        Self::from_spectrum(self.period, padded)
    }

    /// Fraction of spectral energy carried by modes with `|k| > N/4`.
    pub fn tail_energy_fraction(&self) -> T {
        let n = self.len();
        let (mut total, mut tail) = (T::zero(), T::zero());
        for (j, c) in self.spectrum.iter().enumerate() {
            let e = c.norm_sqr();
            total = total + e;
            if mode_index(j, n).unsigned_abs() as usize > n / 4 {
                tail = tail + e;
            }
        }
        if total > T::zero() {
            tail / total
        } else {
            T::zero()
        }
    }

    /// Periodic antiderivative of the zero-mean part, pinned to vanish at `t = 0`.
    pub fn antiderivative(&self) -> Self {
        let n = self.len();
        let zero = Complex::new(T::zero(), T::zero());
        let spectrum: Vec<Complex<T>> = self
            .spectrum
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                if j == 0 || j == n / 2 {
                    zero
                } else {
                    c / Complex::new(T::zero(), self.wavenumber(j))
                }
            })
            .collect();
        let g = Self::from_spectrum(self.period, spectrum).expect("length already validated");
        let g0 = g.samples[0];
        g.map(|s| s - g0)
    }

    /// Largest deviation from evenness `f(t) = f(-t)` over the sample lattice.
    pub fn odd_part_max(&self) -> T {
        let n = self.len();
        (0..n)
            .map(|j| (self.samples[j] - self.samples[(n - j) % n]).abs() * T::lit(0.5))
            .fold(T::zero(), T::max)
    }

    /// Largest deviation from oddness `f(t) = -f(-t)`.
    pub fn even_part_max(&self) -> T {
        let n = self.len();
        (0..n)
            .map(|j| (self.samples[j] + self.samples[(n - j) % n]).abs() * T::lit(0.5))
            .fold(T::zero(), T::max)
    }
}

/// Boundary trace on `y = C` of the harmonic conjugate of the even-in-`y`
/// extension of `rho`, normalised to vanish on `y = 0`.
///
/// Realised as the Fourier multiplier `i·tanh(κC)`; the mean of `rho` is
/// annihilated and the result is zero-mean.
pub fn conjugate_top<T: Real>(
    rho: &PeriodicFunction<T>,
    domain: &StripDomain<T>,
) -> Result<PeriodicFunction<T>> {
    check_period(rho, domain)?;
    let c = domain.half_width();
    Ok(rho.apply_odd_multiplier(|kappa| Complex::new(T::zero(), (kappa * c).tanh())))
}

fn check_period<T: Real>(f: &PeriodicFunction<T>, domain: &StripDomain<T>) -> Result<()> {
    let tol = T::lit(1e-12) * domain.period();
    if (f.period() - domain.period()).abs() > tol {
        return Err(Error::Input(format!(
            "function period {} does not match domain period {}",
            f.period(),
            domain.period()
        )));
    }
    Ok(())
}

/// Output of [`spectral_derivative`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDerivative<T> {
    pub value: PeriodicFunction<T>,
    /// Set when more than `1e-8` of the input energy sits in the top quarter
    /// of the spectrum; the derivative is then not trustworthy.
    pub under_resolved: bool,
}

/// Fourier differentiation, exact on resolved modes.
pub fn spectral_derivative<T: Real>(f: &PeriodicFunction<T>) -> SpectralDerivative<T> {
    let under_resolved = f.tail_energy_fraction() > T::lit(1e-8);
    let value = f.apply_odd_multiplier(|kappa| Complex::new(T::zero(), kappa));
    SpectralDerivative {
        value,
        under_resolved,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn max_err(a: &[f64], b: impl Fn(usize) -> f64) -> f64 {
        a.iter().enumerate().map(|(j, &x)| (x - b(j)).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(PeriodicFunction::from_samples(1.0, vec![0.0; 12]).is_err());
        assert!(PeriodicFunction::from_samples(1.0, vec![0.0; 1]).is_err());
        assert!(PeriodicFunction::from_samples(0.0, vec![0.0; 8]).is_err());
    }

    #[test]
    fn round_trip_through_spectrum() {
        let f = PeriodicFunction::from_fn(3.0, 64, |t: f64| (t * 1.7).sin().exp() + 0.1 * t).unwrap();
        let g = PeriodicFunction::from_spectrum(3.0, f.spectrum().to_vec()).unwrap();
        let scale = f.max_abs();
        assert!(max_err(g.samples(), |j| f.samples()[j]) <= 1e-12 * scale);
    }

    #[test]
    fn spectrum_is_conjugate_symmetric() {
        let f = PeriodicFunction::from_fn(TAU, 32, |t| (2.0 * t).cos() + (t - 1.0).sin().powi(3)).unwrap();
        let n = f.len();
        for j in 1..n {
            let d = f.spectrum()[j] - f.spectrum()[n - j].conj();
            assert!(d.norm() < 1e-15);
        }
    }

    #[test]
    fn derivative_examples() {
        let p = 5.0;
        let w = TAU / p;
        let f = PeriodicFunction::from_fn(p, 64, |t| (w * t).sin()).unwrap();
        let d = spectral_derivative(&f);
        assert!(!d.under_resolved);
        let nodes: Vec<f64> = f.nodes().collect();
        assert!(max_err(d.value.samples(), |j| w * (w * nodes[j]).cos()) < 1e-13);

        let c = PeriodicFunction::constant(p, 16, 4.2).unwrap();
        assert!(spectral_derivative(&c).value.max_abs() < 1e-15);
    }

    #[test]
    fn derivative_of_cos_squared_matches_finite_differences() {
        // Oracle: fourth-order central differences of the closed form.
        let p = 2.5;
        let w = TAU / p;
        let f = |t: f64| (w * t).cos().powi(2);
        let g = PeriodicFunction::from_fn(p, 64, f).unwrap();
        let d = spectral_derivative(&g);
        let h = 1e-3;
        for (j, t) in g.nodes().enumerate() {
            let fd = (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h);
            assert!((d.value.samples()[j] - fd).abs() < 1e-6);
            assert!((d.value.samples()[j] + w * (2.0 * w * t).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn rough_input_is_flagged() {
        let f = PeriodicFunction::from_fn(1.0, 32, |t| if t < 0.5 { 1.0 } else { -1.0 }).unwrap();
        assert!(spectral_derivative(&f).under_resolved);
    }

    #[test]
    fn conjugation_examples() {
        let d = StripDomain::new(0.7, TAU).unwrap();
        let k = 3.0;
        let gain = (k * 0.7f64).tanh();
        let cos = PeriodicFunction::from_fn(TAU, 64, |t| (k * t).cos()).unwrap();
        let sin = PeriodicFunction::from_fn(TAU, 64, |t| (k * t).sin()).unwrap();
        let nodes: Vec<f64> = cos.nodes().collect();
        let a = conjugate_top(&cos, &d).unwrap();
        let b = conjugate_top(&sin, &d).unwrap();
        assert!(max_err(a.samples(), |j| -gain * (k * nodes[j]).sin()) < 1e-14);
        assert!(max_err(b.samples(), |j| gain * (k * nodes[j]).cos()) < 1e-14);
        let c = conjugate_top(&PeriodicFunction::constant(TAU, 64, 2.0).unwrap(), &d).unwrap();
        assert!(c.max_abs() < 1e-15);
    }

    #[test]
    fn conjugation_rejects_period_mismatch() {
        let d = StripDomain::new(1.0, PI).unwrap();
        let f = PeriodicFunction::constant(TAU, 8, 1.0).unwrap();
        assert!(conjugate_top(&f, &d).is_err());
    }

    #[test]
    fn resample_preserves_trig_polynomial() {
        let f = PeriodicFunction::from_fn(2.0, 16, |t| (PI * t).cos() + 0.3 * (3.0 * PI * t).sin()).unwrap();
        let g = f.resample(64).unwrap();
        for (j, t) in g.nodes().enumerate() {
            assert!((g.samples()[j] - f.eval(t)).abs() < 1e-14);
            assert!((g.samples()[j] - ((PI * t).cos() + 0.3 * (3.0 * PI * t).sin())).abs() < 1e-13);
        }
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let f = PeriodicFunction::from_fn(TAU, 64, |t| (t.sin()).exp()).unwrap();
        let d = spectral_derivative(&f).value;
        let back = d.antiderivative();
        let f0 = f.samples()[0];
        assert!(max_err(back.samples(), |j| f.samples()[j] - f0) < 1e-13);
    }

    #[test]
    fn parity_helpers() {
        let even = PeriodicFunction::from_fn(TAU, 32, |t| t.cos()).unwrap();
        assert!(even.odd_part_max() < 1e-15);
        assert!(even.even_part_max() > 0.5);
    }
}
