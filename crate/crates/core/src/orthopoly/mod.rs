//! Orthonormal matrix polynomials for a matrix weight.
//!
//! The family satisfies `x Pₙ = Dₙ₊₁ Pₙ₊₁ + Eₙ Pₙ + Dₙ Pₙ₋₁` with `P₋₁ = 0`,
//! `P₀ = I`, symmetric `Eₙ` and SPD `Dₙ`. Generation runs on the normalized
//! weight (`∫W = I`); the congruence factor is kept as the normalizer.

mod weight;

pub(crate) use weight::inner_product_with;
pub use weight::{BaseWeight, WeightSpec, WeightTerm};

use crate::error::{Error, Result};
use crate::matcore::{self, Matrix};
use crate::matpoly::MatrixPolynomial;

/// Recurrence depth beyond which moment-based generation loses accuracy.
pub const SUPPORTED_DEPTH: usize = 40;

/// Coefficients of the block three-term recurrence and the polynomials they define.
#[derive(Debug, Clone)]
pub struct Recurrence {
    p: usize,
    e: Vec<Matrix>,
    d: Vec<Matrix>,
    d_inv: Vec<Matrix>,
    normalizer: Matrix,
    weight: Option<WeightSpec>,
    polys: Vec<MatrixPolynomial>,
}

impl Recurrence {
    /// Builds the family from `E₀..E_{N−1}` and `D₁..D_N`.
    pub fn from_coefficients(e: Vec<Matrix>, d: Vec<Matrix>, normalizer: Matrix) -> Result<Self> {
        let p = normalizer.nrows();
        if e.is_empty() || e.len() != d.len() {
            return Err(Error::InvalidArgument(format!(
                "need equally many E and D blocks, got {} and {}",
                e.len(),
                d.len()
            )));
        }
        for m in e.iter().chain(d.iter()).chain(std::iter::once(&normalizer)) {
            if m.nrows() != p || m.ncols() != p {
                return Err(Error::DimensionMismatch {
                    expected: format!("{p}x{p}"),
                    found: format!("{}x{}", m.nrows(), m.ncols()),
                });
            }
            matcore::check_finite(m, "recurrence coefficient")?;
        }
        for ek in &e {
            let tol = matcore::symmetry_tolerance(ek);
            if !matcore::is_symmetric(ek, tol) {
                return Err(Error::NotSymmetric {
                    deviation: matcore::asymmetry(ek),
                    tolerance: tol,
                });
            }
        }
        let mut d_inv = Vec::with_capacity(d.len());
        for (k, dk) in d.iter().enumerate() {
            let tol = matcore::symmetry_tolerance(dk);
            if !matcore::is_symmetric(dk, tol) {
                return Err(Error::NotSymmetric {
                    deviation: matcore::asymmetry(dk),
                    tolerance: tol,
                });
            }
            let min = matcore::min_eigenvalue(dk)?;
            if min <= 0.0 {
                return Err(Error::RankDeficiency { index: k + 1 });
            }
            d_inv.push(matcore::inverse(dk)?);
        }
        let mut polys = vec![MatrixPolynomial::identity(p)];
        let x = MatrixPolynomial::x(p);
        for n in 0..e.len() {
            let mut r = &(&x * &polys[n]) - &polys[n].left_mul(&e[n]);
            if n > 0 {
                r = &r - &polys[n - 1].left_mul(&d[n - 1]);
            }
            polys.push(r.left_mul(&d_inv[n]));
        }
        Ok(Recurrence {
            p,
            e,
            d,
            d_inv,
            normalizer,
            weight: None,
            polys,
        })
    }

    pub fn size(&self) -> usize {
        self.p
    }

    /// Depth `N`: the family holds `P₀..P_N`.
    pub fn depth(&self) -> usize {
        self.e.len()
    }

    /// `E₀..E_{N−1}`.
    pub fn e(&self) -> &[Matrix] {
        &self.e
    }

    /// `D₁..D_N`; `d()[k]` is `D_{k+1}`.
    pub fn d(&self) -> &[Matrix] {
        &self.d
    }

    /// `D_k` for `1 ≤ k ≤ N`.
    pub fn d_at(&self, k: usize) -> Result<&Matrix> {
        if k == 0 || k > self.d.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.d.len(),
            });
        }
        Ok(&self.d[k - 1])
    }

    /// `M₀^{1/2}` of the original weight.
    pub fn normalizer(&self) -> &Matrix {
        &self.normalizer
    }

    /// Normalized weight the family is orthonormal for, when generated from one.
    pub fn weight(&self) -> Option<&WeightSpec> {
        self.weight.as_ref()
    }

    pub fn polynomial(&self, n: usize) -> Result<&MatrixPolynomial> {
        self.polys.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            max: self.depth(),
        })
    }

    /// `P₀(x)..P_n(x)` by forward recurrence.
    pub fn eval_all(&self, n: usize, x: f64) -> Result<Vec<Matrix>> {
        if n > self.depth() {
            return Err(Error::IndexOutOfRange {
                index: n,
                max: self.depth(),
            });
        }
        let mut out = Vec::with_capacity(n + 1);
        out.push(Matrix::identity(self.p, self.p));
        for k in 0..n {
            let mut r = &out[k] * x - &self.e[k] * &out[k];
            if k > 0 {
                r -= &self.d[k - 1] * &out[k - 1];
            }
            out.push(&self.d_inv[k] * r);
        }
        Ok(out)
    }

    pub fn eval_orthonormal(&self, n: usize, x: f64) -> Result<Matrix> {
        Ok(self.eval_all(n, x)?.pop().expect("nonempty"))
    }

    /// `K_n(x, y) = Σ_{i≤n} P_i(y)ᵀ P_i(x)`.
    pub fn kernel(&self, n: usize, x: f64, y: f64) -> Result<Matrix> {
        let px = self.eval_all(n, x)?;
        let py = if x == y {
            px.clone()
        } else {
            self.eval_all(n, y)?
        };
        let mut k = Matrix::zeros(self.p, self.p);
        for (a, b) in px.iter().zip(&py) {
            k += b.transpose() * a;
        }
        Ok(k)
    }

    /// `x ↦ K_n(x, y)` as a matrix polynomial in `x`.
    pub fn kernel_polynomial(&self, n: usize, y: f64) -> Result<MatrixPolynomial> {
        let py = self.eval_all(n, y)?;
        let mut k = MatrixPolynomial::zero(self.p);
        for (i, pyi) in py.iter().enumerate() {
            k = &k + &self.polys[i].left_mul(&pyi.transpose());
        }
        Ok(k)
    }
}

/// Block Stieltjes procedure on exact moment expansions.
///
/// Returns `E₀..E_{N−1}`, `D₁..D_N` for the normalized version of `w`.
pub fn stieltjes_recurrence(w: &WeightSpec, depth: usize) -> Result<Recurrence> {
    if depth == 0 {
        return Err(Error::InvalidArgument(
            "recurrence depth must be at least 1".into(),
        ));
    }
    if depth > SUPPORTED_DEPTH {
        log::warn!(
            "recurrence depth {depth} exceeds {SUPPORTED_DEPTH}; moment-based generation is ill-conditioned"
        );
    }
    let (wn, normalizer) = w.normalize()?;
    let p = wn.size();
    let moments = wn.moments_dd(2 * depth + 1)?;
    let x = MatrixPolynomial::x(p);

    let mut e = Vec::with_capacity(depth);
    let mut d: Vec<Matrix> = Vec::with_capacity(depth);
    let mut prev = MatrixPolynomial::zero(p);
    let mut cur = MatrixPolynomial::identity(p);
    for n in 0..depth {
        let xp = &x * &cur;
        let en = matcore::symmetrize(&inner_product_with(&xp, &cur, &moments));
        let mut r = &xp - &cur.left_mul(&en);
        if n > 0 {
            r = &r - &prev.left_mul(&d[n - 1]);
        }
        let gram = matcore::symmetrize(&inner_product_with(&r, &r, &moments));
        let dn = matcore::spd_sqrt(&gram).map_err(|_| Error::RankDeficiency { index: n + 1 })?;
        let next = r.left_mul(&matcore::inverse(&dn)?);
        e.push(en);
        d.push(dn);
        prev = std::mem::replace(&mut cur, next);
    }
    let mut rec = Recurrence::from_coefficients(e, d, normalizer)?;
    rec.weight = Some(wn);
    Ok(rec)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::SQRT_2;

    pub(crate) fn diag(v: &[f64]) -> Matrix {
        Matrix::from_diagonal(&nalgebra::DVector::from_row_slice(v))
    }

    pub(crate) fn mixed_weight() -> WeightSpec {
        WeightSpec::new(
            (-1.0, 1.0),
            vec![
                WeightTerm {
                    c: diag(&[1.0, 0.0]),
                    base: BaseWeight::Chebyshev1,
                },
                WeightTerm {
                    c: diag(&[0.0, 1.0]),
                    base: BaseWeight::Chebyshev2,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn mixed_recurrence_coefficients() {
        let rec = stieltjes_recurrence(&mixed_weight(), 10).unwrap();
        for en in rec.e() {
            assert!(en.amax() <= 1e-12);
        }
        assert_abs_diff_eq!(rec.d()[0], diag(&[1.0 / SQRT_2, 0.5]), epsilon = 1e-14);
        for dn in &rec.d()[1..] {
            assert_abs_diff_eq!(*dn, diag(&[0.5, 0.5]), epsilon = 1e-14);
        }
    }

    #[test]
    fn mixed_polynomials() {
        let rec = stieltjes_recurrence(&mixed_weight(), 3).unwrap();
        let p2 = MatrixPolynomial::new(
            2,
            vec![
                diag(&[-SQRT_2, -1.0]),
                Matrix::zeros(2, 2),
                diag(&[2.0 * SQRT_2, 4.0]),
            ],
        )
        .unwrap();
        assert!(rec.polynomial(2).unwrap().max_abs_diff(&p2) < 1e-13);
        assert_abs_diff_eq!(
            rec.eval_orthonormal(0, 0.7).unwrap(),
            Matrix::identity(2, 2)
        );
        assert_abs_diff_eq!(
            rec.eval_orthonormal(3, 1.0).unwrap(),
            diag(&[SQRT_2, 4.0]),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            rec.eval_orthonormal(2, 0.5).unwrap(),
            diag(&[-SQRT_2 / 2.0, 0.0]),
            epsilon = 1e-13
        );
        assert!(matches!(
            rec.eval_orthonormal(4, 0.0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn scalar_chebyshev_recurrence() {
        let w = WeightSpec::new(
            (-1.0, 1.0),
            vec![WeightTerm {
                c: Matrix::identity(1, 1),
                base: BaseWeight::Chebyshev1,
            }],
        )
        .unwrap();
        let rec = stieltjes_recurrence(&w, 6).unwrap();
        assert_abs_diff_eq!(rec.d()[0][(0, 0)], 1.0 / SQRT_2, epsilon = 1e-14);
        for k in 1..6 {
            assert_abs_diff_eq!(rec.d()[k][(0, 0)], 0.5, epsilon = 1e-14);
            assert!(rec.e()[k][(0, 0)].abs() < 1e-14);
        }
    }

    #[test]
    fn kernel_values() {
        let rec = stieltjes_recurrence(&mixed_weight(), 5).unwrap();
        assert_eq!(rec.kernel(0, 0.3, -0.2).unwrap(), Matrix::identity(2, 2));
        let r = 1.0 / SQRT_2;
        assert_abs_diff_eq!(
            rec.kernel(1, r, r).unwrap(),
            diag(&[2.0, 3.0]),
            epsilon = 1e-13
        );
        let kp = rec.kernel_polynomial(3, -0.4).unwrap();
        assert_abs_diff_eq!(
            kp.eval(0.25),
            rec.kernel(3, 0.25, -0.4).unwrap(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn christoffel_darboux_at_sample_point() {
        let rec = stieltjes_recurrence(&mixed_weight(), 5).unwrap();
        let (x, y, n) = (0.3, -0.7, 4);
        let px = rec.eval_all(n + 1, x).unwrap();
        let py = rec.eval_all(n + 1, y).unwrap();
        let dn1 = rec.d_at(n + 1).unwrap();
        let lhs = py[n].transpose() * dn1 * &px[n + 1] - py[n + 1].transpose() * dn1 * &px[n];
        let rhs = rec.kernel(n, x, y).unwrap() * (x - y);
        assert!((lhs - rhs).amax() < 1e-12);
    }

    #[test]
    fn from_coefficients_rejects_bad_blocks() {
        let bad = Recurrence::from_coefficients(
            vec![Matrix::zeros(2, 2)],
            vec![diag(&[1.0, -1.0])],
            Matrix::identity(2, 2),
        );
        assert!(matches!(bad, Err(Error::RankDeficiency { index: 1 })));
        let uneven = Recurrence::from_coefficients(vec![], vec![], Matrix::identity(2, 2));
        assert!(uneven.is_err());
    }

    #[test]
    fn depth_zero_rejected() {
        assert!(stieltjes_recurrence(&mixed_weight(), 0).is_err());
    }
}
