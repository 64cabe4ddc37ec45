//! Gaussian quadrature with matrix weights:
//! `∫ F W Gᵀ dx ≈ Σᵢ F(xᵢ) Λᵢ G(xᵢ)ᵀ`, exact when `deg F + deg G ≤ 2n−1`.

use crate::error::{Error, Result};
use crate::function::MatrixFunction;
use crate::matcore::{self, Matrix};
use crate::oracle::{self, IntegrandSpec, OracleOptions};
use crate::orthopoly::{stieltjes_recurrence, Recurrence, WeightSpec};
use crate::rootfind::{zeros_and_rootvectors, SpectralData, CLUSTER_RTOL};

/// Nodes and symmetric PSD weight matrices of a quadrature rule.
///
/// The weights belong to the normalized weight; `denormalizer`, when set,
/// is `M₀^{1/2}` and is applied to `F` and `G` in [`apply`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    n: usize,
    nodes: Vec<f64>,
    weights: Vec<Matrix>,
    mults: Vec<usize>,
    weight_id: String,
    denormalizer: Option<Matrix>,
}

impl QuadratureRule {
    pub fn new(
        n: usize,
        nodes: Vec<f64>,
        weights: Vec<Matrix>,
        weight_id: String,
        denormalizer: Option<Matrix>,
    ) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "{} nodes but {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        let p = weights[0].nrows();
        let mut mults = Vec::with_capacity(weights.len());
        for w in &weights {
            if w.nrows() != p || w.ncols() != p {
                return Err(Error::DimensionMismatch {
                    expected: format!("{p}x{p} weight"),
                    found: format!("{}x{}", w.nrows(), w.ncols()),
                });
            }
            matcore::check_finite(w, "quadrature weight")?;
            let tol = matcore::symmetry_tolerance(w);
            if !matcore::is_symmetric(w, tol) {
                return Err(Error::NotSymmetric {
                    deviation: matcore::asymmetry(w),
                    tolerance: tol,
                });
            }
            let min = matcore::min_eigenvalue(w)?;
            if min < -tol {
                return Err(Error::NotPositiveSemidefinite {
                    min_eigenvalue: min,
                });
            }
            let s = matcore::singular_values(w);
            mults.push(s.iter().filter(|&&v| v > 1e-10 * s[0]).count());
        }
        if let Some(d) = &denormalizer {
            if d.nrows() != p || d.ncols() != p {
                return Err(Error::DimensionMismatch {
                    expected: format!("{p}x{p} denormalizer"),
                    found: format!("{}x{}", d.nrows(), d.ncols()),
                });
            }
            matcore::check_finite(d, "denormalizer")?;
        }
        Ok(QuadratureRule {
            n,
            nodes,
            weights,
            mults,
            weight_id,
            denormalizer,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Matrix] {
        &self.weights
    }

    /// Numerical rank of each weight.
    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    pub fn weight_id(&self) -> &str {
        &self.weight_id
    }

    pub fn denormalizer(&self) -> Option<&Matrix> {
        self.denormalizer.as_ref()
    }

    pub fn size(&self) -> usize {
        self.weights[0].nrows()
    }

    pub fn with_weight_id(mut self, id: impl Into<String>) -> Self {
        self.weight_id = id.into();
        self
    }
}

/// `Λᵢ = Vᵢ Lᵢ⁻¹ Vᵢᵀ` with `Lᵢ = Vᵢᵀ K_{n−1}(xᵢ, xᵢ) Vᵢ`.
pub fn gauss_rule(rec: &Recurrence, spec: &SpectralData) -> Result<QuadratureRule> {
    let n = spec.n();
    let p = spec.size();
    if rec.size() != p {
        return Err(Error::DimensionMismatch {
            expected: format!("recurrence of size {p}"),
            found: format!("size {}", rec.size()),
        });
    }
    let mut weights = Vec::with_capacity(spec.nodes().len());
    for (&x, v) in spec.nodes().iter().zip(spec.rootvecs()) {
        let k = rec.kernel(n - 1, x, x)?;
        let l = matcore::symmetrize(&(v.transpose() * k * v));
        let min = matcore::min_eigenvalue(&l)?;
        if min <= 1e-12 * l.amax() {
            return Err(Error::DegenerateKernel { node: x });
        }
        let l_inv = matcore::inverse(&l).map_err(|_| Error::DegenerateKernel { node: x })?;
        weights.push(matcore::symmetrize(&(v * l_inv * v.transpose())));
    }
    let s = rec.normalizer();
    let denormalizer = (s != &Matrix::identity(p, p)).then(|| s.clone());
    let mut rule = QuadratureRule::new(
        n,
        spec.nodes().to_vec(),
        weights,
        String::new(),
        denormalizer,
    )?;
    rule.mults = spec.mults().to_vec();
    Ok(rule)
}

/// Recurrence, spectral data and rule of degree `n` for `w`.
pub fn build_rule(w: &WeightSpec, n: usize) -> Result<(Recurrence, SpectralData, QuadratureRule)> {
    let rec = stieltjes_recurrence(w, n)?;
    let spec = zeros_and_rootvectors(&rec, n, CLUSTER_RTOL)?;
    let rule = gauss_rule(&rec, &spec)?;
    Ok((rec, spec, rule))
}

/// `Σᵢ F̃(xᵢ) Λᵢ G̃(xᵢ)ᵀ` with `F̃ = F·M₀^{1/2}`, `G̃ = G·M₀^{1/2}` when a
/// denormalizer is present.
pub fn apply(
    rule: &QuadratureRule,
    f: &dyn MatrixFunction,
    g: &dyn MatrixFunction,
) -> Result<Matrix> {
    let p = rule.size();
    for size in [f.size(), g.size()] {
        if size != p {
            return Err(Error::DimensionMismatch {
                expected: format!("function of size {p}"),
                found: format!("size {size}"),
            });
        }
    }
    let mut acc = Matrix::zeros(p, p);
    for (&x, lam) in rule.nodes.iter().zip(&rule.weights) {
        let (fx, gx) = match &rule.denormalizer {
            Some(s) => (f.eval(x) * s, g.eval(x) * s),
            None => (f.eval(x), g.eval(x)),
        };
        acc += fx * lam * gx.transpose();
    }
    Ok(acc)
}

/// Moment residuals of a rule against a weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionReport {
    /// Largest `m` with all residuals `l ≤ m` within tolerance; `None` if `l = 0` fails.
    pub degree: Option<usize>,
    /// `‖∫ xˡ W dx − Σ xᵢˡ Λᵢ‖₂` for `l = 0..=l_max`.
    pub residuals: Vec<f64>,
}

impl PrecisionReport {
    /// Residual just beyond the reported degree.
    pub fn next_residual(&self) -> Option<f64> {
        let next = self.degree.map_or(0, |m| m + 1);
        self.residuals.get(next).copied()
    }
}

/// Checks the moment conditions `∫ xˡ W dx = Σ xᵢˡ Λᵢ` for `l = 0..=l_max`.
///
/// `w` is the weight the rule was built from; the rule's denormalizer is applied.
pub fn degree_of_precision(
    rule: &QuadratureRule,
    w: &WeightSpec,
    l_max: usize,
    tol: f64,
) -> Result<PrecisionReport> {
    if l_max < 2 * rule.n {
        return Err(Error::InvalidArgument(format!(
            "l_max = {l_max} must be at least 2n = {}",
            2 * rule.n
        )));
    }
    if w.size() != rule.size() {
        return Err(Error::DimensionMismatch {
            expected: format!("weight of size {}", rule.size()),
            found: format!("size {}", w.size()),
        });
    }
    let p = rule.size();
    let mut residuals = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        let xl = crate::function::ScalarTimesIdentity::new(p, |x: f64| x.powi(l as i32));
        let id = crate::function::ScalarTimesIdentity::new(p, |_| 1.0);
        let approx = apply(rule, &xl, &id)?;
        residuals.push(matcore::spectral_norm(&(w.moment(l)? - approx)));
    }
    let passing = residuals.iter().take_while(|&&r| r <= tol).count();
    Ok(PrecisionReport {
        degree: passing.checked_sub(1),
        residuals,
    })
}

/// `‖apply(rule_n, F, G) − ∫ F W Gᵀ dx‖₂` for each `n`, with the reference
/// integral from the oracle.
pub fn convergence_scan(
    w: &WeightSpec,
    f: &dyn MatrixFunction,
    g: &dyn MatrixFunction,
    n_list: &[usize],
) -> Result<Vec<(usize, f64)>> {
    let Some(&n_max) = n_list.iter().max() else {
        return Ok(Vec::new());
    };
    let (a, b) = w.interval();
    let integrand = |x: f64| f.eval(x) * w.eval(x) * g.eval(x).transpose();
    let reference = oracle::integrate_matrix(
        &IntegrandSpec {
            a,
            b,
            tags: w.endpoint_tags(),
            integrand: &integrand,
            symmetric: false,
        },
        &OracleOptions::default(),
    )?;
    let rec = stieltjes_recurrence(w, n_max)?;
    n_list
        .iter()
        .map(|&n| {
            let spec = zeros_and_rootvectors(&rec, n, CLUSTER_RTOL)?;
            let rule = gauss_rule(&rec, &spec)?;
            let err = matcore::spectral_norm(&(apply(&rule, f, g)? - &reference));
            Ok((n, err))
        })
        .collect()
}

/// `Σ ‖Aᵢ‖₂ ≤ p ‖Σ Aᵢ‖₂` for symmetric PSD `Aᵢ`.
pub fn psd_norm_check(weights: &[Matrix]) -> Result<bool> {
    let Some(first) = weights.first() else {
        return Ok(true);
    };
    let p = first.nrows();
    let mut total = Matrix::zeros(p, p);
    let mut sum_norms = 0.0;
    for a in weights {
        if a.nrows() != p || a.ncols() != p {
            return Err(Error::DimensionMismatch {
                expected: format!("{p}x{p}"),
                found: format!("{}x{}", a.nrows(), a.ncols()),
            });
        }
        let tol = matcore::symmetry_tolerance(a);
        if !matcore::is_symmetric(a, tol) {
            return Err(Error::NotSymmetric {
                deviation: matcore::asymmetry(a),
                tolerance: tol,
            });
        }
        let min = matcore::min_eigenvalue(a)?;
        if min < -tol {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
        sum_norms += matcore::spectral_norm(a);
        total += a;
    }
    let bound = p as f64 * matcore::spectral_norm(&total);
    Ok(sum_norms <= bound * (1.0 + 1e-12) + f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::ScalarTimesIdentity;
    use crate::matpoly::{monic_from_jordan_pair, MatrixPolynomial};
    use crate::orthopoly::tests::{diag, mixed_weight};
    use crate::orthopoly::{BaseWeight, WeightTerm};
    use approx::assert_abs_diff_eq;

    fn poly(coeffs: &[[f64; 4]]) -> MatrixPolynomial {
        MatrixPolynomial::new(
            2,
            coeffs
                .iter()
                .map(|c| Matrix::from_row_slice(2, 2, c))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn mixed_rule_weights() {
        let (_, _, rule) = build_rule(&mixed_weight(), 2).unwrap();
        let want = [
            diag(&[0.5, 0.0]),
            diag(&[0.0, 0.5]),
            diag(&[0.0, 0.5]),
            diag(&[0.5, 0.0]),
        ];
        for (l, w) in rule.weights().iter().zip(&want) {
            assert_abs_diff_eq!(*l, *w, epsilon = 1e-14);
        }
        assert!(rule.denormalizer().is_none());
        assert_eq!(rule.mults(), &[1, 1, 1, 1]);
        assert!(psd_norm_check(rule.weights()).unwrap());
    }

    #[test]
    fn mixed_integral() {
        let (_, _, rule) = build_rule(&mixed_weight(), 2).unwrap();
        let f = poly(&[
            [1.0, 0.0, 1.0, -1.0],
            [0.0, 6.0, 7.0, 0.0],
            [1.0, 0.0, 0.0, 5.0],
        ]);
        let g = poly(&[[5.0, 0.0, 7.0, -3.0], [2.0, 6.0, 0.0, 4.0]]);
        let got = apply(&rule, &f, &g).unwrap();
        let want = Matrix::from_row_slice(2, 2, &[16.5, 16.5, 12.0, 6.25]);
        assert_abs_diff_eq!(got, want, epsilon = 1e-13);
    }

    #[test]
    fn sharpness_of_monic_polynomial() {
        let (_, spec, rule) = build_rule(&mixed_weight(), 2).unwrap();
        let q = monic_from_jordan_pair(spec.pair(), 2).unwrap();
        assert!(apply(&rule, &q, &q).unwrap().amax() < 1e-14);
        let exact = mixed_weight().inner_product(&q, &q).unwrap();
        assert!(matcore::min_eigenvalue(&exact).unwrap() > 0.01);
    }

    #[test]
    fn precision_ladder() {
        let w = mixed_weight();
        for n in 1..=5 {
            let (_, _, rule) = build_rule(&w, n).unwrap();
            let rep = degree_of_precision(&rule, &w, 2 * n + 2, 1e-8).unwrap();
            assert_eq!(rep.degree, Some(2 * n - 1));
            assert!(rep.next_residual().unwrap() > 1e-8);
        }
        let (_, _, rule) = build_rule(&w, 2).unwrap();
        assert!(degree_of_precision(&rule, &w, 3, 1e-8).is_err());
    }

    #[test]
    fn denormalized_rule_integrates_original_weight() {
        let c = Matrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 2.0]);
        let w = WeightSpec::new(
            (0.0, 2.0),
            vec![
                WeightTerm {
                    c,
                    base: BaseWeight::Legendre,
                },
                WeightTerm {
                    c: diag(&[0.0, 1.5]),
                    base: BaseWeight::Chebyshev2,
                },
            ],
        )
        .unwrap();
        let (_, _, rule) = build_rule(&w, 3).unwrap();
        assert!(rule.denormalizer().is_some());
        let rep = degree_of_precision(&rule, &w, 6, 1e-10).unwrap();
        assert_eq!(rep.degree, Some(5));
    }

    #[test]
    fn single_node_rule_has_identity_weight() {
        let (_, spec, rule) = build_rule(&mixed_weight(), 1).unwrap();
        assert_eq!(spec.mults(), &[2]);
        assert_abs_diff_eq!(rule.weights()[0], Matrix::identity(2, 2), epsilon = 1e-14);
    }

    #[test]
    fn psd_norm_examples() {
        let a = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert!(psd_norm_check(std::slice::from_ref(&a)).unwrap());
        assert!(matches!(
            psd_norm_check(&[diag(&[1.0, -1.0])]),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn polynomial_convergence_is_exact() {
        let f = ScalarTimesIdentity::new(2, |x: f64| 1.0 + x - 2.0 * x * x);
        let scan = convergence_scan(&mixed_weight(), &f, &f, &[3, 4, 6]).unwrap();
        for (_, e) in scan {
            assert!(e < 1e-9);
        }
    }
}
