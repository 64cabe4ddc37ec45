//! Dense real linear algebra used by the higher modules.
//!
//! Everything here works on [`Matrix`] (an alias for `nalgebra::DMatrix<f64>`)
//! and carries its tolerance explicitly.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Relative tolerance used by [`symmetry_tolerance`].
pub const SYMMETRY_RTOL: f64 = 1e-10;
/// Default relative singular-value threshold for [`nullspace`].
pub const NULLSPACE_TOL: f64 = 1e-8;
/// Eigenvalues below this fraction of the largest one make a matrix "not SPD".
pub const SPD_RTOL: f64 = 1e-13;

/// Absolute symmetry tolerance `1e-10 * max(1, ‖A‖_F)`.
pub fn symmetry_tolerance(a: &Matrix) -> f64 {
    SYMMETRY_RTOL * a.norm().max(1.0)
}

pub fn asymmetry(a: &Matrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    (a - a.transpose()).amax()
}

pub fn is_symmetric(a: &Matrix, atol: f64) -> bool {
    asymmetry(a) <= atol
}

pub fn symmetrize(a: &Matrix) -> Matrix {
    (a + a.transpose()) * 0.5
}

pub fn check_finite(a: &Matrix, what: &str) -> Result<()> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

fn check_symmetric(a: &Matrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    let tolerance = symmetry_tolerance(a);
    let deviation = asymmetry(a);
    if deviation > tolerance {
        return Err(Error::NotSymmetric {
            deviation,
            tolerance,
        });
    }
    Ok(())
}

/// Eigendecomposition of a symmetric matrix with eigenvalues in ascending order.
///
/// Returns `(λ, Q)` with `A = Q diag(λ) Qᵀ` and orthonormal `Q`; column `k` of
/// `Q` belongs to `λ[k]`.
pub fn sym_eig(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    check_symmetric(a)?;
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), Matrix::zeros(0, 0)));
    }
    let eig = SymmetricEigen::new(symmetrize(a));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut q = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        q.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, q))
}

pub fn min_eigenvalue(a: &Matrix) -> Result<f64> {
    let (values, _) = sym_eig(a)?;
    Ok(values.first().copied().unwrap_or(0.0))
}

/// PSD test: symmetric within tolerance and `λ_min >= -atol`.
pub fn is_psd(a: &Matrix, atol: f64) -> bool {
    match min_eigenvalue(a) {
        Ok(l) => l >= -atol,
        Err(_) => false,
    }
}

/// Unique symmetric positive definite square root.
pub fn spd_sqrt(a: &Matrix) -> Result<Matrix> {
    let (values, q) = sym_eig(a)?;
    let largest = values.last().copied().unwrap_or(0.0).abs();
    let threshold = SPD_RTOL * largest.max(f64::MIN_POSITIVE);
    let smallest = values.first().copied().unwrap_or(0.0);
    if smallest <= threshold {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: smallest,
            threshold,
        });
    }
    let roots = Vector::from_iterator(values.len(), values.iter().map(|v| v.sqrt()));
    let s = &q * Matrix::from_diagonal(&roots) * q.transpose();
    Ok(symmetrize(&s))
}

/// Orthonormal basis (as columns) of the numerical null space of `a`.
///
/// A right singular vector belongs to the basis when its singular value is
/// at most `tol * σ_max`. A zero matrix therefore has a full basis and a
/// full-rank matrix an empty one (zero columns).
pub fn nullspace(a: &Matrix, tol: f64) -> Matrix {
    nullspace_scaled(a, tol, None)
}

/// Like [`nullspace`], with the threshold `tol * scale` for an external
/// reference scale (e.g. the size of a polynomial over an interval).
pub fn nullspace_scaled(a: &Matrix, tol: f64, scale: Option<f64>) -> Matrix {
    let cols = a.ncols();
    if cols == 0 {
        return Matrix::zeros(0, 0);
    }
    // pad to at least square so the SVD returns a complete V
    let rows = a.nrows().max(cols);
    let mut padded = Matrix::zeros(rows, cols);
    padded.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("V requested");
    let reference = scale.unwrap_or_else(|| svd.singular_values.max());
    let picked: Vec<usize> = (0..cols)
        .filter(|&k| svd.singular_values[k] <= tol * reference)
        .collect();
    let mut basis = Matrix::zeros(cols, picked.len());
    for (dst, &k) in picked.iter().enumerate() {
        basis.set_column(dst, &v_t.row(k).transpose());
    }
    basis
}

/// Singular values in descending order.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Spectral norm ‖A‖₂.
pub fn spectral_norm(a: &Matrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// 2-norm condition number; infinite for singular input.
pub fn condition_number(a: &Matrix) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    let inv = a
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Singular("inverse".into()))?;
    check_finite(&inv, "inverse").map_err(|_| Error::Singular("inverse".into()))?;
    Ok(inv)
}

pub fn determinant(a: &Matrix) -> f64 {
    if a.is_empty() {
        return 1.0;
    }
    a.clone().lu().determinant()
}

/// Solves `A X = B` by LU with partial pivoting.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() || a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: format!("square system with {} rows", b.nrows()),
            found: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    let x = a
        .clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Singular("linear solve".into()))?;
    check_finite(&x, "linear solve").map_err(|_| Error::Singular("linear solve".into()))?;
    Ok(x)
}
