//! Matrix polynomials `P(x) = A_0 + A_1 x + … + A_m x^m` with p×p coefficients,
//! their division, Jordan chains, Jordan pairs and standard triples.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::function::MatrixFunction;
use crate::matcore::{self, Matrix, Vector};

/// Default relative tolerance for the residual tests in this module.
pub const RESIDUAL_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    size: usize,
    /// `coeffs[k]` multiplies `x^k`; trailing zero coefficients are removed.
    coeffs: Vec<Matrix>,
}

impl MatrixPolynomial {
    pub fn new(size: usize, coeffs: Vec<Matrix>) -> Result<Self> {
        for (k, c) in coeffs.iter().enumerate() {
            if c.nrows() != size || c.ncols() != size {
                return Err(Error::DimensionMismatch {
                    expected: format!("{size}x{size} coefficient"),
                    found: format!("{}x{} at index {k}", c.nrows(), c.ncols()),
                });
            }
            matcore::check_finite(c, "polynomial coefficient")?;
        }
        Ok(Self::from_parts(size, coeffs))
    }

    fn from_parts(size: usize, mut coeffs: Vec<Matrix>) -> Self {
        while coeffs.last().is_some_and(|c| c.iter().all(|&v| v == 0.0)) {
            coeffs.pop();
        }
        MatrixPolynomial { size, coeffs }
    }

    pub fn zero(size: usize) -> Self {
        MatrixPolynomial {
            size,
            coeffs: Vec::new(),
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::constant(Matrix::identity(size, size))
    }

    pub fn constant(a: Matrix) -> Self {
        let size = a.nrows();
        Self::from_parts(size, vec![a])
    }

    /// `Σ c_k x^k · I`.
    pub fn from_scalar(size: usize, coeffs: &[f64]) -> Self {
        let id = Matrix::identity(size, size);
        Self::from_parts(size, coeffs.iter().map(|&c| &id * c).collect())
    }

    /// `x · I`.
    pub fn x(size: usize) -> Self {
        Self::from_scalar(size, &[0.0, 1.0])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Matrix {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.size, self.size))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Matrix> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, atol: f64) -> bool {
        self.leading()
            .is_some_and(|a| (a - Matrix::identity(self.size, self.size)).amax() <= atol)
    }

    /// `det P(t) ≠ 0` at some sample point.
    pub fn is_regular(&self) -> bool {
        (0..16).any(|k| {
            let t = -1.0 + 2.0 * (k as f64 + 0.37) / 16.0;
            matcore::determinant(&self.eval(t)).abs() > 1e-300
        })
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> Matrix {
        let mut acc = Matrix::zeros(self.size, self.size);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Entrywise `order`-th derivative.
    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(order)
            .map(|(k, c)| {
                let falling: f64 = (k + 1 - order..=k).map(|j| j as f64).product();
                c * falling
            })
            .collect();
        Self::from_parts(self.size, coeffs)
    }

    pub fn transpose(&self) -> Self {
        Self::from_parts(
            self.size,
            self.coeffs.iter().map(|c| c.transpose()).collect(),
        )
    }

    /// `A · P(x)`.
    pub fn left_mul(&self, a: &Matrix) -> Self {
        Self::from_parts(self.size, self.coeffs.iter().map(|c| a * c).collect())
    }

    /// `P(x) · A`.
    pub fn right_mul(&self, a: &Matrix) -> Self {
        Self::from_parts(self.size, self.coeffs.iter().map(|c| c * a).collect())
    }

    /// `x^k · P(x)`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Matrix::zeros(self.size, self.size); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_parts(self.size, coeffs)
    }

    /// Root of the summed squared Frobenius norms of the coefficients.
    pub fn norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest coefficientwise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).amax())
            .fold(0.0, f64::max)
    }

    /// Right division `P = Q·D + R` with `deg R < deg D`.
    ///
    /// A nonsingular constant divisor is allowed and gives `R = 0`.
    pub fn right_divide(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_size(divisor)?;
        let n = divisor.degree().ok_or(Error::DivisionUndefined)?;
        let lead_inv =
            matcore::inverse(divisor.leading().unwrap()).map_err(|_| Error::DivisionUndefined)?;
        let p = self.size;
        let mut rem: Vec<Matrix> = self.coeffs.clone();
        let mut quot = vec![Matrix::zeros(p, p); rem.len().saturating_sub(n)];
        while rem.len() > n {
            let top = rem.len() - 1;
            let k = top - n;
            let t = &rem[top] * &lead_inv;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &t * b;
            }
            quot[k] = t;
            // the leading term cancels by construction
            rem.pop();
        }
        Ok((Self::from_parts(p, quot), Self::from_parts(p, rem)))
    }

    /// `Σ A_k X J^k` for a pair `(X, J)`.
    pub fn apply_to_pair(&self, pair: &JordanPair) -> Matrix {
        self.divisor_residual(pair).0
    }

    /// Residual `Σ A_k X J^k` and the scale `Σ ‖A_k‖·‖X J^k‖` it is judged against.
    pub fn divisor_residual(&self, pair: &JordanPair) -> (Matrix, f64) {
        let j = pair.j();
        let mut xj = pair.x().clone();
        let mut acc = Matrix::zeros(self.size, pair.order());
        let mut scale = 0.0;
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                xj = &xj * &j;
            }
            acc += a * &xj;
            scale += a.norm() * xj.norm();
        }
        (acc, scale)
    }

    /// Divisibility test: `D` (with Jordan pair `pair`) right-divides `self`
    /// iff `A_m X J^m + … + A_0 X = 0`.
    pub fn is_right_divisor(&self, pair: &JordanPair, rtol: f64) -> bool {
        let (res, scale) = self.divisor_residual(pair);
        res.norm() <= rtol * scale.max(f64::MIN_POSITIVE)
    }

    /// Checks `Σ_{i≤l} P^{(i)}(x0)/i! · v_{l−i} = 0` for `l = 0..k`.
    pub fn jordan_chain_check(&self, x0: f64, chain: &[Vector], rtol: f64) -> Result<bool> {
        let v0 = chain.first().ok_or(Error::InvalidChain)?;
        if v0.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidChain);
        }
        if chain.iter().any(|v| v.len() != self.size) {
            return Err(Error::DimensionMismatch {
                expected: format!("vectors of length {}", self.size),
                found: "chain vector of another length".into(),
            });
        }
        let taylor = self.taylor_coefficients(x0, chain.len() - 1);
        let vnorm = chain.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let scale = taylor.iter().map(|t| t.norm()).sum::<f64>().max(1.0) * vnorm;
        for l in 0..chain.len() {
            let mut s = Vector::zeros(self.size);
            for i in 0..=l {
                s += &taylor[i] * &chain[l - i];
            }
            if s.norm() > rtol * scale {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `P^{(i)}(x0) / i!` for `i = 0..=order`.
    pub fn taylor_coefficients(&self, x0: f64, order: usize) -> Vec<Matrix> {
        let mut fact = 1.0;
        (0..=order)
            .map(|i| {
                if i > 0 {
                    fact *= i as f64;
                }
                self.derivative(i).eval(x0) / fact
            })
            .collect()
    }

    /// Block companion standard triple `(X′, C₁, Y′)` of a monic polynomial.
    pub fn companion_triple(&self) -> Result<StandardTriple> {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return Err(Error::NotMonic),
        };
        let p = self.size;
        let atol = matcore::SYMMETRY_RTOL * self.norm().max(1.0);
        if !self.is_monic(atol) {
            return Err(Error::NotMonic);
        }
        let np = n * p;
        let mut x = Matrix::zeros(p, np);
        x.view_mut((0, 0), (p, p)).fill_with_identity();
        let mut c = Matrix::zeros(np, np);
        for b in 0..n - 1 {
            c.view_mut((b * p, (b + 1) * p), (p, p))
                .fill_with_identity();
        }
        for (k, a) in self.coeffs.iter().take(n).enumerate() {
            c.view_mut(((n - 1) * p, k * p), (p, p)).copy_from(&(-a));
        }
        let mut y = Matrix::zeros(np, p);
        y.view_mut(((n - 1) * p, 0), (p, p)).fill_with_identity();
        Ok(StandardTriple { x, t: c, y })
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.size != other.size {
            return Err(Error::DimensionMismatch {
                expected: format!("size {}", self.size),
                found: format!("size {}", other.size),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> Self {
        assert_eq!(self.size, other.size, "matrix polynomial size mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| f(&self.coeff(k), &other.coeff(k))).collect();
        Self::from_parts(self.size, coeffs)
    }
}

impl MatrixFunction for MatrixPolynomial {
    fn size(&self) -> usize {
        self.size
    }
    fn eval(&self, x: f64) -> Matrix {
        MatrixPolynomial::eval(self, x)
    }
    fn taylor(&self, x: f64, order: usize) -> Result<Vec<Matrix>> {
        Ok(self.taylor_coefficients(x, order))
    }
}

impl Add for &MatrixPolynomial {
    type Output = MatrixPolynomial;
    fn add(self, o: &MatrixPolynomial) -> MatrixPolynomial {
        self.zip_with(o, |a, b| a + b)
    }
}

impl Sub for &MatrixPolynomial {
    type Output = MatrixPolynomial;
    fn sub(self, o: &MatrixPolynomial) -> MatrixPolynomial {
        self.zip_with(o, |a, b| a - b)
    }
}

impl Neg for &MatrixPolynomial {
    type Output = MatrixPolynomial;
    fn neg(self) -> MatrixPolynomial {
        MatrixPolynomial::from_parts(self.size, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &MatrixPolynomial {
    type Output = MatrixPolynomial;
    fn mul(self, o: &MatrixPolynomial) -> MatrixPolynomial {
        assert_eq!(self.size, o.size, "matrix polynomial size mismatch");
        let p = self.size;
        if self.is_zero() || o.is_zero() {
            return MatrixPolynomial::zero(p);
        }
        let mut coeffs = vec![Matrix::zeros(p, p); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        MatrixPolynomial::from_parts(p, coeffs)
    }
}

/// One Jordan block: a node value and the length of its chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanBlock {
    pub node: f64,
    pub len: usize,
}

/// Jordan pair `(X, J)`: chain vectors as columns of `X` and the block
/// structure of the Jordan matrix `J`, grouped by node.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanPair {
    x: Matrix,
    blocks: Vec<JordanBlock>,
}

impl JordanPair {
    pub fn new(x: Matrix, blocks: Vec<JordanBlock>) -> Result<Self> {
        let total: usize = blocks.iter().map(|b| b.len).sum();
        if total != x.ncols() {
            return Err(Error::InvalidPair(format!(
                "blocks cover {total} columns but X has {}",
                x.ncols()
            )));
        }
        if blocks.iter().any(|b| b.len == 0 || !b.node.is_finite()) {
            return Err(Error::InvalidPair("empty block or non-finite node".into()));
        }
        matcore::check_finite(&x, "Jordan pair X")?;
        Ok(JordanPair { x, blocks })
    }

    /// Pair with diagonal `J`: node `i` contributes the columns of `vectors[i]`,
    /// each a chain of length one.
    pub fn lagrange(nodes: &[f64], vectors: &[Matrix]) -> Result<Self> {
        if nodes.len() != vectors.len() || nodes.is_empty() {
            return Err(Error::InvalidPair(
                "one vector block per node is required".into(),
            ));
        }
        let p = vectors[0].nrows();
        let total: usize = vectors.iter().map(|v| v.ncols()).sum();
        let mut x = Matrix::zeros(p, total);
        let mut blocks = Vec::with_capacity(total);
        let mut col = 0;
        for (&node, v) in nodes.iter().zip(vectors) {
            if v.nrows() != p {
                return Err(Error::InvalidPair("rootvectors of differing length".into()));
            }
            x.view_mut((0, col), (p, v.ncols())).copy_from(v);
            col += v.ncols();
            blocks.extend((0..v.ncols()).map(|_| JordanBlock { node, len: 1 }));
        }
        Self::new(x, blocks)
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    /// Size p of the vectors.
    pub fn size(&self) -> usize {
        self.x.nrows()
    }

    /// Number of columns N of `X`.
    pub fn order(&self) -> usize {
        self.x.ncols()
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks.iter().all(|b| b.len == 1)
    }

    /// `N / p`, the degree of the monic polynomial this pair can belong to.
    pub fn degree(&self) -> Result<usize> {
        let p = self.size();
        if p == 0 || !self.order().is_multiple_of(p) || self.order() == 0 {
            return Err(Error::InvalidPair(format!(
                "{} columns is not a positive multiple of p = {p}",
                self.order()
            )));
        }
        Ok(self.order() / p)
    }

    pub fn j(&self) -> Matrix {
        let n = self.order();
        let mut j = Matrix::zeros(n, n);
        let mut at = 0;
        for b in &self.blocks {
            for k in 0..b.len {
                j[(at + k, at + k)] = b.node;
                if k + 1 < b.len {
                    j[(at + k, at + k + 1)] = 1.0;
                }
            }
            at += b.len;
        }
        j
    }

    /// `col(X J^l)_{l=0}^{n−1}`.
    pub fn col_power(&self, n: usize) -> Matrix {
        block_col(&self.x, &self.j(), n)
    }
}

/// `col(X T^l)_{l=0}^{n−1}` stacked vertically.
pub fn block_col(x: &Matrix, t: &Matrix, n: usize) -> Matrix {
    let p = x.nrows();
    let mut out = Matrix::zeros(n * p, x.ncols());
    let mut xt = x.clone();
    for l in 0..n {
        if l > 0 {
            xt = &xt * t;
        }
        out.view_mut((l * p, 0), (p, x.ncols())).copy_from(&xt);
    }
    out
}

/// Standard triple `(X, T, Y)` of a monic matrix polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardTriple {
    pub x: Matrix,
    pub t: Matrix,
    pub y: Matrix,
}

impl StandardTriple {
    /// Checks that `col(X T^l)` is nonsingular and `Σ A_k X T^k = 0` for `poly`.
    pub fn is_standard_for(&self, poly: &MatrixPolynomial, rtol: f64) -> bool {
        let Some(n) = poly.degree() else {
            return false;
        };
        let col = block_col(&self.x, &self.t, n);
        if !col.is_square() || matcore::condition_number(&col) > 1e12 {
            return false;
        }
        let mut xt = self.x.clone();
        let mut acc = Matrix::zeros(self.x.nrows(), self.x.ncols());
        let mut scale = 0.0;
        for (k, a) in poly.coeffs().iter().enumerate() {
            if k > 0 {
                xt = &xt * &self.t;
            }
            acc += a * &xt;
            scale += a.norm() * xt.norm();
        }
        acc.norm() <= rtol * scale.max(f64::MIN_POSITIVE)
    }
}

/// Monic polynomial with Jordan pair `pair`:
/// `Q̂(x) = x^n I − X J^n (V_1 + V_2 x + … + V_n x^{n−1})` where
/// `(V_1 … V_n) = col(X J^l)^{−1}`.
pub fn monic_from_jordan_pair(pair: &JordanPair, n: usize) -> Result<MatrixPolynomial> {
    let p = pair.size();
    if pair.order() != n * p {
        return Err(Error::InvalidPair(format!(
            "pair has {} columns, degree {n} needs {}",
            pair.order(),
            n * p
        )));
    }
    let v = pair_inverse(pair, n)?;
    let j = pair.j();
    let mut xjn = pair.x().clone();
    for _ in 0..n {
        xjn = &xjn * &j;
    }
    let mut coeffs: Vec<Matrix> = (0..n).map(|k| -(&xjn * v.columns(k * p, p))).collect();
    coeffs.push(Matrix::identity(p, p));
    MatrixPolynomial::new(p, coeffs)
}

/// `col(X J^l)^{−1}`, rejecting pairs whose block column is singular.
pub(crate) fn pair_inverse(pair: &JordanPair, n: usize) -> Result<Matrix> {
    let col = pair.col_power(n);
    if !col.is_square() {
        return Err(Error::InvalidPair("col(XJ^l) is not square".into()));
    }
    let cond = matcore::condition_number(&col);
    if !cond.is_finite() || cond > 1e14 {
        return Err(Error::InvalidPair(format!(
            "col(XJ^l) is singular (condition number {cond:.3e})"
        )));
    }
    matcore::inverse(&col).map_err(|_| Error::InvalidPair("col(XJ^l) is singular".into()))
}
