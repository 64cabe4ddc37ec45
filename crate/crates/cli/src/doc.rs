//! JSON documents read and written by the command-line tool.
//!
//! Numbers are written with 17 significant digits so that every document
//! parses back to bitwise-identical values.

use matgauss::{
    BaseWeight, Matrix, MatrixFunction, MatrixPolynomial, QuadratureRule, Recurrence,
    ScalarTimesIdentity, WeightSpec, WeightTerm,
};
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

/// A finite number serialized as `{:.16e}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("non-finite number {}", self.0)));
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(S::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        if v.is_finite() {
            Ok(Num(v))
        } else {
            Err(D::Error::custom("non-finite number"))
        }
    }
}

/// Matrix as nested rows.
pub type Rows = Vec<Vec<Num>>;

pub fn rows(m: &Matrix) -> Rows {
    m.row_iter()
        .map(|r| r.iter().map(|&v| Num(v)).collect())
        .collect()
}

pub fn matrix(r: &Rows) -> Result<Matrix, String> {
    let nrows = r.len();
    let ncols = r.first().map_or(0, |row| row.len());
    if r.iter().any(|row| row.len() != ncols) {
        return Err("ragged matrix rows".into());
    }
    Ok(Matrix::from_fn(nrows, ncols, |i, j| r[i][j].0))
}

fn flat(m: &Matrix) -> Vec<Num> {
    m.row_iter()
        .flat_map(|r| r.iter().map(|&v| Num(v)).collect::<Vec<_>>())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseDoc {
    Chebyshev1,
    Chebyshev2,
    Legendre,
    Jacobi([Num; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    #[serde(rename = "C")]
    pub c: Rows,
    pub base: BaseDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightDoc {
    pub interval: [Num; 2],
    pub terms: Vec<TermDoc>,
}

impl WeightDoc {
    pub fn from_spec(w: &WeightSpec) -> Self {
        let (a, b) = w.interval();
        WeightDoc {
            interval: [Num(a), Num(b)],
            terms: w
                .terms()
                .iter()
                .map(|t| TermDoc {
                    c: rows(&t.c),
                    base: match t.base {
                        BaseWeight::Chebyshev1 => BaseDoc::Chebyshev1,
                        BaseWeight::Chebyshev2 => BaseDoc::Chebyshev2,
                        BaseWeight::Legendre => BaseDoc::Legendre,
                        BaseWeight::Jacobi(al, be) => BaseDoc::Jacobi([Num(al), Num(be)]),
                    },
                })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> Result<WeightSpec, String> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(WeightTerm {
                    c: matrix(&t.c)?,
                    base: match &t.base {
                        BaseDoc::Chebyshev1 => BaseWeight::Chebyshev1,
                        BaseDoc::Chebyshev2 => BaseWeight::Chebyshev2,
                        BaseDoc::Legendre => BaseWeight::Legendre,
                        BaseDoc::Jacobi([al, be]) => BaseWeight::Jacobi(al.0, be.0),
                    },
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        WeightSpec::new((self.interval[0].0, self.interval[1].0), terms).map_err(|e| e.to_string())
    }
}

/// Polynomial: `coeffs[k]` lists the coefficient of `x^k` row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDoc {
    pub p: usize,
    pub coeffs: Vec<Vec<Num>>,
}

impl PolyDoc {
    pub fn from_poly(poly: &MatrixPolynomial) -> Self {
        PolyDoc {
            p: poly.size(),
            coeffs: poly.coeffs().iter().map(flat).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<MatrixPolynomial, String> {
        let p = self.p;
        if p == 0 {
            return Err("p must be positive".into());
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if c.len() != p * p {
                    return Err(format!(
                        "coefficient {k} has {} entries, expected {}",
                        c.len(),
                        p * p
                    ));
                }
                Ok(Matrix::from_row_iterator(p, p, c.iter().map(|v| v.0)))
            })
            .collect::<Result<Vec<_>, String>>()?;
        MatrixPolynomial::new(p, coeffs).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarFn {
    Exp,
    Abs,
    Sin,
    Cos,
}

/// `f(x)·I` for a named scalar function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarDoc {
    pub p: usize,
    pub scalar: ScalarFn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionDoc {
    Poly(PolyDoc),
    Scalar(ScalarDoc),
}

impl FunctionDoc {
    pub fn size(&self) -> usize {
        match self {
            FunctionDoc::Poly(d) => d.p,
            FunctionDoc::Scalar(d) => d.p,
        }
    }

    pub fn to_function(&self) -> Result<Box<dyn MatrixFunction>, String> {
        match self {
            FunctionDoc::Poly(d) => Ok(Box::new(d.to_poly()?)),
            FunctionDoc::Scalar(d) => {
                if d.p == 0 {
                    return Err("p must be positive".into());
                }
                let f: fn(f64) -> f64 = match d.scalar {
                    ScalarFn::Exp => f64::exp,
                    ScalarFn::Abs => f64::abs,
                    ScalarFn::Sin => f64::sin,
                    ScalarFn::Cos => f64::cos,
                };
                Ok(Box::new(ScalarTimesIdentity::new(d.p, f)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceDoc {
    pub weight_id: String,
    pub p: usize,
    pub n: usize,
    #[serde(rename = "E")]
    pub e: Vec<Rows>,
    #[serde(rename = "D")]
    pub d: Vec<Rows>,
    pub normalizer: Rows,
}

impl RecurrenceDoc {
    pub fn from_recurrence(weight_id: &str, rec: &Recurrence) -> Self {
        RecurrenceDoc {
            weight_id: weight_id.to_string(),
            p: rec.size(),
            n: rec.depth(),
            e: rec.e().iter().map(rows).collect(),
            d: rec.d().iter().map(rows).collect(),
            normalizer: rows(rec.normalizer()),
        }
    }

    pub fn to_recurrence(&self) -> Result<Recurrence, String> {
        let e = self.e.iter().map(matrix).collect::<Result<Vec<_>, _>>()?;
        let d = self.d.iter().map(matrix).collect::<Result<Vec<_>, _>>()?;
        Recurrence::from_coefficients(e, d, matrix(&self.normalizer)?).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub weight_id: String,
    pub n: usize,
    pub p: usize,
    pub nodes: Vec<Num>,
    pub weights: Vec<Rows>,
    pub mults: Vec<usize>,
    pub rootvectors: Vec<Rows>,
    pub denormalizer: Option<Rows>,
}

impl RuleDoc {
    pub fn from_rule(rule: &QuadratureRule, rootvectors: &[Matrix]) -> Self {
        RuleDoc {
            weight_id: rule.weight_id().to_string(),
            n: rule.n(),
            p: rule.size(),
            nodes: rule.nodes().iter().map(|&x| Num(x)).collect(),
            weights: rule.weights().iter().map(rows).collect(),
            mults: rule.mults().to_vec(),
            rootvectors: rootvectors.iter().map(rows).collect(),
            denormalizer: rule.denormalizer().map(rows),
        }
    }

    pub fn to_rule(&self) -> Result<QuadratureRule, String> {
        let weights = self
            .weights
            .iter()
            .map(matrix)
            .collect::<Result<Vec<_>, _>>()?;
        let denormalizer = self.denormalizer.as_ref().map(matrix).transpose()?;
        QuadratureRule::new(
            self.n,
            self.nodes.iter().map(|x| x.0).collect(),
            weights,
            self.weight_id.clone(),
            denormalizer,
        )
        .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Agreement {
    pub via_v: Num,
    pub cardinals: Num,
    pub orthonormal: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpolateDoc {
    pub weight_id: String,
    pub n: usize,
    pub interpolant: PolyDoc,
    #[serde(rename = "K")]
    pub k: Vec<Rows>,
    /// Largest coefficient difference of each closed form from the dense solve.
    pub agreement: Agreement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrateDoc {
    pub weight_id: String,
    pub n: usize,
    pub result: Rows,
    pub oracle: Option<Rows>,
    pub oracle_diff: Option<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecisionDoc {
    pub weight_id: String,
    pub n: usize,
    pub tol: Num,
    pub degree: Option<usize>,
    pub residuals: Vec<Num>,
    pub next_residual: Option<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeRow {
    pub n: usize,
    pub error: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeDoc {
    pub weight_id: String,
    pub rows: Vec<ConvergeRow>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_seventeen_digits_and_round_trip() {
        for v in [
            0.1,
            -1.0 / 3.0,
            std::f64::consts::FRAC_1_SQRT_2,
            1e-300,
            12.0,
            0.0,
        ] {
            let text = serde_json::to_string(&Num(v)).unwrap();
            let mantissa = text.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.replace('.', "").len(), 17, "{text}");
            let back: Num = serde_json::from_str(&text).unwrap();
            assert_eq!(back.0.to_bits(), v.to_bits());
        }
        assert!(serde_json::to_string(&Num(f64::NAN)).is_err());
    }

    #[test]
    fn base_tags() {
        assert_eq!(
            serde_json::to_string(&BaseDoc::Chebyshev1).unwrap(),
            "\"chebyshev1\""
        );
        let j: BaseDoc = serde_json::from_str("{\"jacobi\":[0.5,-0.5]}").unwrap();
        assert_eq!(j, BaseDoc::Jacobi([Num(0.5), Num(-0.5)]));
    }

    #[test]
    fn function_docs() {
        let poly: FunctionDoc = serde_json::from_str("{\"p\":1,\"coeffs\":[[1],[2]]}").unwrap();
        assert!(matches!(poly, FunctionDoc::Poly(_)));
        let f = poly.to_function().unwrap();
        assert_eq!(f.eval(3.0)[(0, 0)], 7.0);
        let exp: FunctionDoc = serde_json::from_str("{\"p\":2,\"scalar\":\"exp\"}").unwrap();
        assert_eq!(exp.to_function().unwrap().eval(0.0), Matrix::identity(2, 2));
        let bad = FunctionDoc::Poly(PolyDoc {
            p: 2,
            coeffs: vec![vec![Num(1.0)]],
        });
        assert!(bad.to_function().is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        let r = vec![vec![Num(1.0), Num(2.0)], vec![Num(3.0)]];
        assert!(matrix(&r).is_err());
    }
}
