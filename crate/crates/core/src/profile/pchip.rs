//! Shape-preserving piecewise cubic Hermite interpolation (Fritsch–Carlson
//! slopes with the weighted harmonic mean and three-point end conditions).

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic<T> {
    xs: Vec<T>,
    ys: Vec<T>,
    slopes: Vec<T>,
}

impl<T: Real> MonotoneCubic<T> {
    pub fn new(xs: Vec<T>, ys: Vec<T>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                expected: xs.len(),
                got: ys.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::Input("a table needs at least two knots".into()));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::Input("table entries must be finite".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Input("table abscissae must be strictly increasing".into()));
        }
        let slopes = fritsch_carlson(&xs, &ys);
        Ok(Self { xs, ys, slopes })
    }

    pub fn first(&self) -> T {
        self.xs[0]
    }

    pub fn last(&self) -> T {
        self.xs[self.xs.len() - 1]
    }

    pub fn knots(&self) -> &[T] {
        &self.xs
    }

    pub fn values(&self) -> &[T] {
        &self.ys
    }

    /// Value and derivative at `x` (clamped to the table range).
    pub fn eval(&self, x: T) -> (T, T) {
        let n = self.xs.len();
        let i = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let s = (x - x0) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = -two * s3 + three * s2;
        let h11 = s3 - s2;
        let value = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
        let d00 = T::lit(6.0) * (s2 - s);
        let d10 = three * s2 - T::lit(4.0) * s + T::one();
        let d11 = three * s2 - two * s;
        let deriv = (d00 * y0 + d10 * m0 - d00 * y1 + d11 * m1) / h;
        (value, deriv)
    }
}

fn fritsch_carlson<T: Real>(xs: &[T], ys: &[T]) -> Vec<T> {
    let n = xs.len();
    let h: Vec<T> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<T> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut m = vec![T::zero(); n];
    for k in 1..n - 1 {
        let (d0, d1) = (delta[k - 1], delta[k]);
        if d0 * d1 > T::zero() {
            let w1 = T::lit(2.0) * h[k] + h[k - 1];
            let w2 = h[k] + T::lit(2.0) * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
    m[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

fn edge_slope<T: Real>(h0: T, h1: T, d0: T, d1: T) -> T {
    let d = ((T::lit(2.0) * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        T::zero()
    } else if d0.signum() != d1.signum() && d.abs() > T::lit(3.0) * d0.abs() {
        T::lit(3.0) * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_knots_and_linear_data() {
        let xs = vec![0.0, 0.5, 1.5, 2.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x).collect();
        let p = MonotoneCubic::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((p.eval(*x).0 - y).abs() < 1e-14);
        }
        let (v, d) = p.eval(1.1);
        assert!((v - 0.8).abs() < 1e-14 && (d + 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_malformed_tables() {
        assert!(MonotoneCubic::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(MonotoneCubic::new(vec![0.0], vec![1.0]).is_err());
        assert!(MonotoneCubic::new(vec![0.0, 1.0], vec![1.0, f64::INFINITY]).is_err());
    }

    proptest! {
        #[test]
        fn monotone_data_give_monotone_interpolant(
            steps in proptest::collection::vec((0.05f64..1.0, 0.0f64..1.0), 3..12),
            probe in 0.0f64..1.0,
        ) {
            let mut xs = vec![0.0];
            let mut ys = vec![10.0];
            for (dx, dy) in &steps {
                xs.push(xs.last().unwrap() + dx);
                ys.push(ys.last().unwrap() - dy);
            }
            let p = MonotoneCubic::new(xs.clone(), ys).unwrap();
            let x = probe * p.last();
            let (_, d) = p.eval(x);
            prop_assert!(d <= 1e-12);
        }
    }
}
