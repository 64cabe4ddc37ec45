#![allow(dead_code)]

use matgauss::oracle::{self, IntegrandSpec, OracleOptions};
use matgauss::{
    BaseWeight, Matrix, MatrixFunction, MatrixPolynomial, Vector, WeightSpec, WeightTerm,
};
use rand::Rng;

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

pub fn diag(v: &[f64]) -> Matrix {
    Matrix::from_diagonal(&Vector::from_row_slice(v))
}

pub fn poly(coeffs: &[[f64; 4]]) -> MatrixPolynomial {
    MatrixPolynomial::new(
        2,
        coeffs
            .iter()
            .map(|c| Matrix::from_row_slice(2, 2, c))
            .collect(),
    )
    .unwrap()
}

/// diag((1/π)(1−x²)^{−1/2}, (2/π)(1−x²)^{1/2}) on [−1, 1].
pub fn mixed_weight() -> WeightSpec {
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

/// [[x²+1, 6x],[7x+1, 5x²−1]]
pub fn sample_f() -> MatrixPolynomial {
    poly(&[
        [1.0, 0.0, 1.0, -1.0],
        [0.0, 6.0, 7.0, 0.0],
        [1.0, 0.0, 0.0, 5.0],
    ])
}

/// [[2x+5, 6x],[7, 4x−3]]
pub fn sample_g() -> MatrixPolynomial {
    poly(&[[5.0, 0.0, 7.0, -3.0], [2.0, 6.0, 0.0, 4.0]])
}

pub fn scalar_weight(base: BaseWeight) -> WeightSpec {
    WeightSpec::new(
        (-1.0, 1.0),
        vec![WeightTerm {
            c: Matrix::identity(1, 1),
            base,
        }],
    )
    .unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

/// `B Bᵀ + shift·I`.
pub fn random_psd<R: Rng>(rng: &mut R, p: usize, shift: f64) -> Matrix {
    let b = random_matrix(rng, p, p);
    &b * b.transpose() + Matrix::identity(p, p) * shift
}

pub fn random_poly<R: Rng>(rng: &mut R, p: usize, degree: usize) -> MatrixPolynomial {
    MatrixPolynomial::new(p, (0..=degree).map(|_| random_matrix(rng, p, p)).collect()).unwrap()
}

pub fn random_monic<R: Rng>(rng: &mut R, p: usize, degree: usize) -> MatrixPolynomial {
    let mut c: Vec<Matrix> = (0..degree).map(|_| random_matrix(rng, p, p)).collect();
    c.push(Matrix::identity(p, p));
    MatrixPolynomial::new(p, c).unwrap()
}

/// Two-term weight `C₁ w₁ + C₂ w₂` with random PSD `Cₖ` and classical bases,
/// on an interval that is `[−1, 1]` unless `shifted`.
pub fn random_weight<R: Rng>(rng: &mut R, p: usize, shifted: bool) -> WeightSpec {
    let bases = [
        BaseWeight::Chebyshev1,
        BaseWeight::Chebyshev2,
        BaseWeight::Legendre,
        BaseWeight::Jacobi(0.5, -0.5),
    ];
    let b1 = bases[rng.random_range(0..bases.len())];
    let b2 = bases[rng.random_range(0..bases.len())];
    let interval = if shifted {
        let a = rng.random_range(-2.0..0.5);
        (a, a + rng.random_range(0.5..3.0))
    } else {
        (-1.0, 1.0)
    };
    WeightSpec::new(
        interval,
        vec![
            WeightTerm {
                c: random_psd(rng, p, 0.1),
                base: b1,
            },
            WeightTerm {
                c: random_psd(rng, p, 0.0),
                base: b2,
            },
        ],
    )
    .unwrap()
}

/// `∫ F W Gᵀ dx` by the adaptive oracle.
pub fn oracle_integral(
    w: &WeightSpec,
    f: &dyn MatrixFunction,
    g: &dyn MatrixFunction,
    symmetric: bool,
) -> Matrix {
    let (a, b) = w.interval();
    let integrand = |x: f64| f.eval(x) * w.eval(x) * g.eval(x).transpose();
    oracle::integrate_matrix(
        &IntegrandSpec {
            a,
            b,
            tags: w.endpoint_tags(),
            integrand: &integrand,
            symmetric,
        },
        &OracleOptions::default(),
    )
    .unwrap()
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.amax()
}
