//! Matrix-valued functions of one real variable.

use crate::error::{Error, Result};
use crate::matcore::Matrix;

/// A p×p matrix-valued function on the real line.
pub trait MatrixFunction {
    fn size(&self) -> usize;

    fn eval(&self, x: f64) -> Matrix;

    /// Taylor coefficients `F^{(l)}(x) / l!` for `l = 0..=order`.
    ///
    /// Only value evaluation is available by default; polynomials override
    /// this with exact derivatives.
    fn taylor(&self, x: f64, order: usize) -> Result<Vec<Matrix>> {
        if order == 0 {
            Ok(vec![self.eval(x)])
        } else {
            Err(Error::DerivativesUnavailable(order))
        }
    }
}

impl<T: MatrixFunction + ?Sized> MatrixFunction for &T {
    fn size(&self) -> usize {
        (**self).size()
    }
    fn eval(&self, x: f64) -> Matrix {
        (**self).eval(x)
    }
    fn taylor(&self, x: f64, order: usize) -> Result<Vec<Matrix>> {
        (**self).taylor(x, order)
    }
}

/// Wraps a closure as a [`MatrixFunction`].
pub struct FnMatrix<F> {
    size: usize,
    f: F,
}

impl<F: Fn(f64) -> Matrix> FnMatrix<F> {
    pub fn new(size: usize, f: F) -> Self {
        FnMatrix { size, f }
    }
}

impl<F: Fn(f64) -> Matrix> MatrixFunction for FnMatrix<F> {
    fn size(&self) -> usize {
        self.size
    }
    fn eval(&self, x: f64) -> Matrix {
        (self.f)(x)
    }
}

/// `f(x) · I` for a scalar function `f`.
pub struct ScalarTimesIdentity<F> {
    size: usize,
    f: F,
}

impl<F: Fn(f64) -> f64> ScalarTimesIdentity<F> {
    pub fn new(size: usize, f: F) -> Self {
        ScalarTimesIdentity { size, f }
    }
}

impl<F: Fn(f64) -> f64> MatrixFunction for ScalarTimesIdentity<F> {
    fn size(&self) -> usize {
        self.size
    }
    fn eval(&self, x: f64) -> Matrix {
        Matrix::identity(self.size, self.size) * (self.f)(x)
    }
}
