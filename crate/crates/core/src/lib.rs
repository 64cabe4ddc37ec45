//! Orthonormal matrix polynomials, matrix Lagrange interpolation and
//! Gaussian quadrature with matrix weights.

mod dd;
pub mod error;
pub mod function;
pub mod interp;
pub mod matcore;
pub mod matpoly;
pub mod oracle;
pub mod orthopoly;
pub mod quad;
pub mod rootfind;

pub use error::{Error, Result};
pub use function::{FnMatrix, MatrixFunction, ScalarTimesIdentity};
pub use interp::{
    interpolate_general, lagrange_cardinals, lagrange_orthonormal, lagrange_via_v,
    InterpolationProblem, NodeChains, OrthonormalLagrange,
};
pub use matcore::{Matrix, Vector};
pub use matpoly::{JordanBlock, JordanPair, MatrixPolynomial, StandardTriple};
pub use orthopoly::{stieltjes_recurrence, BaseWeight, Recurrence, WeightSpec, WeightTerm};
pub use quad::{
    apply, build_rule, convergence_scan, degree_of_precision, gauss_rule, psd_norm_check,
    PrecisionReport, QuadratureRule,
};
pub use rootfind::{block_jacobi, zeros_and_rootvectors, SpectralData};
