//! Scalar abstraction shared by every numerical module.
//!
//! The math is written once against [`Real`]; `f64` is the working precision
//! (all documented tolerances refer to it) and `f32` is available for cheap
//! exploratory evaluation of the linear operators.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use nalgebra::DMatrix;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating-point scalar usable by the strip solver.
pub trait Real:
    Float + FloatConst + FftNum + FromPrimitive + ToPrimitive + Display + Debug + Default + Sum
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("representable literal")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("representable count")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// Solves the dense square system `matrix * x = rhs` (row-major `matrix`).
    /// Returns `None` when the matrix is numerically singular.
    fn solve_dense(matrix: &[Self], n: usize, rhs: &[Self]) -> Option<Vec<Self>>;

    /// Singular values of a row-major `rows x cols` matrix, descending.
    fn singular_values(matrix: &[Self], rows: usize, cols: usize) -> Vec<Self>;
}

macro_rules! impl_real {
    ($f:ty) => {
        impl Real for $f {
            fn solve_dense(matrix: &[Self], n: usize, rhs: &[Self]) -> Option<Vec<Self>> {
                assert_eq!(matrix.len(), n * n);
                assert_eq!(rhs.len(), n);
                let a = DMatrix::<$f>::from_row_slice(n, n, matrix);
                let b = DMatrix::<$f>::from_column_slice(n, 1, rhs);
                let x = a.lu().solve(&b)?;
                if x.iter().all(|v| v.is_finite()) {
                    Some(x.iter().copied().collect())
                } else {
                    None
                }
            }

            fn singular_values(matrix: &[Self], rows: usize, cols: usize) -> Vec<Self> {
                assert_eq!(matrix.len(), rows * cols);
                let a = DMatrix::<$f>::from_row_slice(rows, cols, matrix);
                let mut s: Vec<$f> = a.singular_values().iter().copied().collect();
                s.sort_by(|x, y| y.total_cmp(x));
                s
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);
