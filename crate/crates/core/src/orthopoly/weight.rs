//! Matrix weights `W(x) = Σ C_k w_k(x)` built from classical scalar weights,
//! their moments, and the matricial inner product `⟨P, Q⟩ = ∫ P W Qᵀ dx`.

use std::f64::consts::PI;

use statrs::function::beta::ln_beta;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::matcore::{self, Matrix};
use crate::matpoly::MatrixPolynomial;
use crate::oracle::{self, EndpointTag, EndpointTags, OracleOptions};

/// Classical scalar weight, normalized to unit mass on its interval.
///
/// In the reference variable `t ∈ [−1, 1]`:
/// - `Chebyshev1`: `(1/π)(1 − t²)^{−1/2}`
/// - `Chebyshev2`: `(2/π)(1 − t²)^{1/2}`
/// - `Legendre`: `1/2`
/// - `Jacobi(α, β)`: `(1 − t)^α (1 + t)^β / (2^{α+β+1} B(α+1, β+1))`
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseWeight {
    Chebyshev1,
    Chebyshev2,
    Legendre,
    Jacobi(f64, f64),
}

impl BaseWeight {
    pub fn name(&self) -> String {
        match self {
            BaseWeight::Chebyshev1 => "chebyshev1".into(),
            BaseWeight::Chebyshev2 => "chebyshev2".into(),
            BaseWeight::Legendre => "legendre".into(),
            BaseWeight::Jacobi(a, b) => format!("jacobi({a},{b})"),
        }
    }

    fn validate(&self) -> Result<()> {
        if let BaseWeight::Jacobi(a, b) = *self {
            if !(a > -1.0 && b > -1.0 && a.is_finite() && b.is_finite()) {
                return Err(Error::DegenerateWeight(format!(
                    "jacobi exponents must exceed -1, got ({a}, {b})"
                )));
            }
        }
        Ok(())
    }

    /// Density in the reference variable `t`.
    pub fn density(&self, t: f64) -> f64 {
        if !(-1.0..=1.0).contains(&t) {
            return 0.0;
        }
        match *self {
            BaseWeight::Chebyshev1 => 1.0 / (PI * (1.0 - t * t).sqrt()),
            BaseWeight::Chebyshev2 => 2.0 / PI * (1.0 - t * t).sqrt(),
            BaseWeight::Legendre => 0.5,
            BaseWeight::Jacobi(a, b) => {
                let log_norm = (a + b + 1.0) * std::f64::consts::LN_2 + ln_beta(a + 1.0, b + 1.0);
                ((1.0 - t).powf(a) * (1.0 + t).powf(b)) * (-log_norm).exp()
            }
        }
    }

    /// Endpoint behaviour (left end `t = −1`, right end `t = 1`).
    pub fn endpoint_tags(&self) -> EndpointTags {
        match *self {
            BaseWeight::Chebyshev1 => EndpointTags::INVERSE_SQRT,
            BaseWeight::Chebyshev2 => EndpointTags {
                left: EndpointTag::Algebraic(0.5),
                right: EndpointTag::Algebraic(0.5),
            },
            BaseWeight::Legendre => EndpointTags::REGULAR,
            BaseWeight::Jacobi(a, b) => EndpointTags {
                left: EndpointTag::Algebraic(b),
                right: EndpointTag::Algebraic(a),
            },
        }
    }

    /// Moments `∫ t^k w(t) dt`, `k = 0..=kmax`, on the reference interval.
    fn reference_moments(&self, kmax: usize) -> Result<Vec<Dd>> {
        let mut m = vec![Dd::ZERO; kmax + 1];
        match *self {
            BaseWeight::Chebyshev1 | BaseWeight::Chebyshev2 => {
                // (2k−1)!!/(2k)!! for the first kind, divided by k+1 for the second
                let mut even = Dd::ONE;
                for k in (0..=kmax).step_by(2) {
                    let half = k / 2;
                    if half > 0 {
                        even =
                            even.mul_f64((2 * half - 1) as f64) / Dd::from_f64((2 * half) as f64);
                    }
                    m[k] = match self {
                        BaseWeight::Chebyshev1 => even,
                        _ => even / Dd::from_f64((half + 1) as f64),
                    };
                }
            }
            BaseWeight::Legendre => {
                for k in (0..=kmax).step_by(2) {
                    m[k] = Dd::ONE / Dd::from_f64((k + 1) as f64);
                }
            }
            BaseWeight::Jacobi(..) => {
                let opts = OracleOptions {
                    rel_tol: 1e-13,
                    abs_tol: 1e-15,
                    ..OracleOptions::default()
                };
                let tags = self.endpoint_tags();
                for (k, slot) in m.iter_mut().enumerate() {
                    let v = oracle::integrate_scalar(
                        |t| t.powi(k as i32) * self.density(t),
                        -1.0,
                        1.0,
                        tags,
                        &opts,
                    )?;
                    *slot = Dd::from_f64(v);
                }
            }
        }
        Ok(m)
    }
}

/// One term `C · w(x)` of a matrix weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTerm {
    pub c: Matrix,
    pub base: BaseWeight,
}

/// Square matrix of double-double entries.
#[derive(Debug, Clone)]
pub(crate) struct DdMatrix {
    n: usize,
    data: Vec<Dd>,
}

impl DdMatrix {
    fn zeros(n: usize) -> Self {
        DdMatrix {
            n,
            data: vec![Dd::ZERO; n * n],
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Dd {
        self.data[i * self.n + j]
    }

    pub(crate) fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| self.at(i, j).to_f64())
    }
}

/// Symmetric PSD matrix weight on a finite interval.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    a: f64,
    b: f64,
    size: usize,
    terms: Vec<WeightTerm>,
}

impl WeightSpec {
    pub fn new(interval: (f64, f64), terms: Vec<WeightTerm>) -> Result<Self> {
        let (a, b) = interval;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::DegenerateWeight(format!(
                "interval [{a}, {b}] must be finite with a < b"
            )));
        }
        let size = terms
            .first()
            .map(|t| t.c.nrows())
            .ok_or_else(|| Error::DegenerateWeight("no terms".into()))?;
        for term in &terms {
            term.base.validate()?;
            if term.c.nrows() != size || term.c.ncols() != size {
                return Err(Error::DimensionMismatch {
                    expected: format!("{size}x{size} term matrix"),
                    found: format!("{}x{}", term.c.nrows(), term.c.ncols()),
                });
            }
            matcore::check_finite(&term.c, "weight term")?;
            let tol = matcore::symmetry_tolerance(&term.c);
            if !matcore::is_symmetric(&term.c, tol) {
                return Err(Error::NotSymmetric {
                    deviation: matcore::asymmetry(&term.c),
                    tolerance: tol,
                });
            }
            let min = matcore::min_eigenvalue(&term.c)?;
            if min < -tol {
                return Err(Error::NotPositiveSemidefinite {
                    min_eigenvalue: min,
                });
            }
        }
        let w = WeightSpec {
            a,
            b,
            size,
            terms: terms
                .into_iter()
                .map(|t| WeightTerm {
                    c: matcore::symmetrize(&t.c),
                    base: t.base,
                })
                .collect(),
        };
        w.check_nondegenerate()?;
        Ok(w)
    }

    /// `det W(x) ≢ 0`, tested on interior sample points.
    fn check_nondegenerate(&self) -> Result<()> {
        let ok = (1..16).any(|k| {
            let x = self.a + (self.b - self.a) * (k as f64 - 0.31) / 15.0;
            let w = self.eval(x);
            let scale = w.norm().max(f64::MIN_POSITIVE);
            matcore::min_eigenvalue(&w).is_ok_and(|l| l > 1e-12 * scale)
        });
        if ok {
            Ok(())
        } else {
            Err(Error::DegenerateWeight(
                "det W(x) vanishes at every sample point".into(),
            ))
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn terms(&self) -> &[WeightTerm] {
        &self.terms
    }

    fn to_reference(&self, x: f64) -> f64 {
        (2.0 * x - self.a - self.b) / (self.b - self.a)
    }

    /// Pointwise value `W(x)`; zero outside the interval.
    pub fn eval(&self, x: f64) -> Matrix {
        let t = self.to_reference(x);
        let jac = 2.0 / (self.b - self.a);
        let mut w = Matrix::zeros(self.size, self.size);
        for term in &self.terms {
            w += &term.c * (term.base.density(t) * jac);
        }
        w
    }

    /// Most singular endpoint behaviour among the terms.
    pub fn endpoint_tags(&self) -> EndpointTags {
        fn exponent(tag: EndpointTag) -> f64 {
            match tag {
                EndpointTag::Regular => 0.0,
                EndpointTag::InverseSqrt => -0.5,
                EndpointTag::Algebraic(a) => a,
            }
        }
        let pick = |side: fn(&EndpointTags) -> EndpointTag| {
            self.terms
                .iter()
                .filter(|t| t.c.amax() > 0.0)
                .map(|t| side(&t.base.endpoint_tags()))
                .min_by(|x, y| exponent(*x).total_cmp(&exponent(*y)))
                .unwrap_or(EndpointTag::Regular)
        };
        let left = pick(|t| t.left);
        let right = pick(|t| t.right);
        let canon = |tag: EndpointTag| match tag {
            EndpointTag::Algebraic(-0.5) => EndpointTag::InverseSqrt,
            other => other,
        };
        EndpointTags {
            left: canon(left),
            right: canon(right),
        }
    }

    /// Matrix moments `∫ x^k W(x) dx` for `k = 0..=kmax` in double-double.
    pub(crate) fn moments_dd(&self, kmax: usize) -> Result<Vec<DdMatrix>> {
        let c = Dd::from_f64(self.a) + Dd::from_f64(self.b);
        let c = c.mul_f64(0.5);
        let h = (Dd::from_f64(self.b) - Dd::from_f64(self.a)).mul_f64(0.5);
        let affine = !(self.a == -1.0 && self.b == 1.0);

        // binomials and powers of the affine map
        let mut binom = vec![vec![Dd::ZERO; kmax + 1]; kmax + 1];
        for k in 0..=kmax {
            binom[k][0] = Dd::ONE;
            for j in 1..=k {
                binom[k][j] = binom[k - 1][j - 1] + if j < k { binom[k - 1][j] } else { Dd::ZERO };
            }
        }
        let mut cpow = vec![Dd::ONE; kmax + 1];
        let mut hpow = vec![Dd::ONE; kmax + 1];
        for k in 1..=kmax {
            cpow[k] = cpow[k - 1] * c;
            hpow[k] = hpow[k - 1] * h;
        }

        let p = self.size;
        let mut out = vec![DdMatrix::zeros(p); kmax + 1];
        for term in &self.terms {
            let reference = term.base.reference_moments(kmax)?;
            let scalar: Vec<Dd> = if affine {
                (0..=kmax)
                    .map(|k| {
                        let mut s = Dd::ZERO;
                        for j in 0..=k {
                            s += binom[k][j] * cpow[k - j] * hpow[j] * reference[j];
                        }
                        s
                    })
                    .collect()
            } else {
                reference
            };
            for (k, mk) in scalar.iter().enumerate() {
                for i in 0..p {
                    for j in 0..p {
                        let cij = term.c[(i, j)];
                        if cij != 0.0 {
                            out[k].data[i * p + j] += mk.mul_f64(cij);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `∫ x^k W(x) dx`, from closed-form scalar moments where available.
    pub fn moment(&self, k: usize) -> Result<Matrix> {
        let m = self.moments_dd(k)?;
        Ok(m[k].to_matrix())
    }

    /// Congruence `M₀^{−1/2} W M₀^{−1/2}` giving unit mass, together with `M₀^{1/2}`.
    pub fn normalize(&self) -> Result<(WeightSpec, Matrix)> {
        let m0 = self.moment(0)?;
        let root = matcore::spd_sqrt(&m0)
            .map_err(|e| Error::DegenerateWeight(format!("zeroth moment: {e}")))?;
        let root_inv = matcore::inverse(&root)?;
        let terms = self
            .terms
            .iter()
            .map(|t| WeightTerm {
                c: matcore::symmetrize(&(&root_inv * &t.c * &root_inv)),
                base: t.base,
            })
            .collect();
        let normalized = WeightSpec {
            a: self.a,
            b: self.b,
            size: self.size,
            terms,
        };
        Ok((normalized, root))
    }

    /// `⟨P, Q⟩ = ∫ P(x) W(x) Q(x)ᵀ dx` by exact moment expansion.
    pub fn inner_product(&self, p: &MatrixPolynomial, q: &MatrixPolynomial) -> Result<Matrix> {
        if p.size() != self.size || q.size() != self.size {
            return Err(Error::DimensionMismatch {
                expected: format!("size {}", self.size),
                found: format!("sizes {} and {}", p.size(), q.size()),
            });
        }
        let (Some(dp), Some(dq)) = (p.degree(), q.degree()) else {
            return Ok(Matrix::zeros(self.size, self.size));
        };
        let moments = self.moments_dd(dp + dq)?;
        Ok(inner_product_with(p, q, &moments))
    }
}

/// `Σ_{j,k} A_j M_{j+k} B_kᵀ` accumulated in double-double.
pub(crate) fn inner_product_with(
    p: &MatrixPolynomial,
    q: &MatrixPolynomial,
    moments: &[DdMatrix],
) -> Matrix {
    let n = p.size();
    let pc = p.coeffs();
    let qc = q.coeffs();
    if pc.is_empty() || qc.is_empty() {
        return Matrix::zeros(n, n);
    }
    let mut out = vec![Dd::ZERO; n * n];
    let mut h = vec![Dd::ZERO; n * n];
    for (k, b) in qc.iter().enumerate() {
        // H_k = Σ_j A_j M_{j+k}
        h.iter_mut().for_each(|v| *v = Dd::ZERO);
        for (j, a) in pc.iter().enumerate() {
            let m = &moments[j + k];
            for r in 0..n {
                for u in 0..n {
                    let aru = a[(r, u)];
                    if aru == 0.0 {
                        continue;
                    }
                    for v in 0..n {
                        h[r * n + v] += m.at(u, v).mul_f64(aru);
                    }
                }
            }
        }
        // out += H_k B_kᵀ
        for r in 0..n {
            for s in 0..n {
                let mut acc = Dd::ZERO;
                for v in 0..n {
                    let bsv = b[(s, v)];
                    if bsv != 0.0 {
                        acc += h[r * n + v].mul_f64(bsv);
                    }
                }
                out[r * n + s] += acc;
            }
        }
    }
    Matrix::from_fn(n, n, |r, s| out[r * n + s].to_f64())
}
