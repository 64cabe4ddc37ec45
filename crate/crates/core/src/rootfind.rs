//! Zeros, multiplicities and rootvectors of orthonormal matrix polynomials.
//!
//! Zeros of `det Pₙ` are the eigenvalues of the symmetric block Jacobi matrix,
//! so they are computed by a symmetric eigensolver and grouped into nodes.

use crate::error::{Error, Result};
use crate::matcore::{self, Matrix, NULLSPACE_TOL};
use crate::matpoly::{pair_inverse, JordanPair};
use crate::orthopoly::Recurrence;

/// Default clustering tolerance, relative to the spectral width.
pub const CLUSTER_RTOL: f64 = 1e-8;
/// `|det Pₙ(xᵢ)|` bound relative to its maximum over a sample grid.
pub const DET_RTOL: f64 = 1e-8;
/// Gaps in `(tol, AMBIGUITY_FACTOR·tol]` are neither clearly equal nor distinct.
const AMBIGUITY_FACTOR: f64 = 100.0;
const GRID_POINTS: usize = 65;

/// Symmetric block tridiagonal matrix with `E₀..E_{n−1}` on the diagonal and
/// `D₁..D_{n−1}` off the diagonal.
pub fn block_jacobi(rec: &Recurrence, n: usize) -> Result<Matrix> {
    if n == 0 || n > rec.depth() {
        return Err(Error::IndexOutOfRange {
            index: n,
            max: rec.depth(),
        });
    }
    let p = rec.size();
    let mut j = Matrix::zeros(n * p, n * p);
    for k in 0..n {
        j.view_mut((k * p, k * p), (p, p)).copy_from(&rec.e()[k]);
        if k + 1 < n {
            let d = &rec.d()[k];
            j.view_mut((k * p, (k + 1) * p), (p, p)).copy_from(d);
            j.view_mut(((k + 1) * p, k * p), (p, p))
                .copy_from(&d.transpose());
        }
    }
    Ok(matcore::symmetrize(&j))
}

/// Distinct zeros of `Pₙ`, their multiplicities and rootvectors, and the
/// resulting Jordan pair with diagonal `J`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    n: usize,
    nodes: Vec<f64>,
    mults: Vec<usize>,
    rootvecs: Vec<Matrix>,
    pair: JordanPair,
}

impl SpectralData {
    /// Assembles node data; `rootvecs[i]` holds the rootvectors at `nodes[i]` as columns.
    pub fn new(n: usize, nodes: Vec<f64>, rootvecs: Vec<Matrix>) -> Result<Self> {
        if nodes.len() != rootvecs.len() || nodes.is_empty() {
            return Err(Error::InvalidNodeData(format!(
                "{} nodes but {} rootvector blocks",
                nodes.len(),
                rootvecs.len()
            )));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidNodeData(
                "nodes must be strictly ascending".into(),
            ));
        }
        let p = rootvecs[0].nrows();
        for (node, v) in nodes.iter().zip(&rootvecs) {
            if v.nrows() != p || v.ncols() == 0 || v.ncols() > p {
                return Err(Error::InvalidNodeData(format!(
                    "rootvector block at {node} is {}x{}",
                    v.nrows(),
                    v.ncols()
                )));
            }
            matcore::check_finite(v, "rootvectors")?;
            let s = matcore::singular_values(v);
            if s.last().copied().unwrap_or(0.0) <= 1e-12 * s[0] {
                return Err(Error::InvalidNodeData(format!(
                    "rootvectors at {node} are linearly dependent"
                )));
            }
        }
        let mults: Vec<usize> = rootvecs.iter().map(|v| v.ncols()).collect();
        if mults.iter().sum::<usize>() != n * p {
            return Err(Error::InvalidNodeData(format!(
                "multiplicities sum to {}, expected n·p = {}",
                mults.iter().sum::<usize>(),
                n * p
            )));
        }
        let pair = JordanPair::lagrange(&nodes, &rootvecs)?;
        let col = pair.col_power(n);
        log::debug!(
            "col(XJ^l) condition number {:.3e}",
            matcore::condition_number(&col)
        );
        pair_inverse(&pair, n)?;
        Ok(SpectralData {
            n,
            nodes,
            mults,
            rootvecs,
            pair,
        })
    }

    /// Same nodes with other rootvector bases.
    pub fn with_rootvectors(&self, rootvecs: Vec<Matrix>) -> Result<Self> {
        Self::new(self.n, self.nodes.clone(), rootvecs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    pub fn rootvecs(&self) -> &[Matrix] {
        &self.rootvecs
    }

    pub fn pair(&self) -> &JordanPair {
        &self.pair
    }

    pub fn size(&self) -> usize {
        self.pair.size()
    }
}

/// Groups ascending eigenvalues into nodes by single linkage.
fn cluster(values: &[f64], tol: f64) -> Result<Vec<Vec<f64>>> {
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for &v in values {
        match groups.last_mut() {
            Some(g) => {
                let last = *g.last().expect("nonempty group");
                let gap = v - last;
                if gap <= tol {
                    g.push(v);
                } else if gap <= AMBIGUITY_FACTOR * tol {
                    return Err(Error::AmbiguousCluster { node: last, gap });
                } else {
                    groups.push(vec![v]);
                }
            }
            None => groups.push(vec![v]),
        }
    }
    Ok(groups)
}

/// Zeros and rootvectors of `Pₙ` from the block Jacobi eigenproblem.
///
/// Eigenvalues closer than `cluster_tol` times the spectral width form one
/// node; its rootvectors are the null space of `Pₙ(xᵢ)`, whose dimension must
/// match the cluster size.
pub fn zeros_and_rootvectors(rec: &Recurrence, n: usize, cluster_tol: f64) -> Result<SpectralData> {
    if !(cluster_tol > 0.0 && cluster_tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "cluster tolerance {cluster_tol} outside (0, 1)"
        )));
    }
    let jac = block_jacobi(rec, n)?;
    let (eigs, _) = matcore::sym_eig(&jac)?;
    let lo = eigs[0];
    let hi = *eigs.last().expect("nonempty spectrum");
    let width = hi - lo;
    // a spectrum narrower than the clustering tolerance is a single point
    let magnitude = lo.abs().max(hi.abs()).max(1.0);
    let scale = if width > cluster_tol * magnitude {
        width
    } else {
        magnitude
    };
    let groups = cluster(&eigs, cluster_tol * scale)?;

    // reference size of Pₙ around its zeros
    let pad = 0.05 * scale;
    let pn = rec.polynomial(n)?;
    let mut norm_max: f64 = 0.0;
    let mut det_max: f64 = 0.0;
    for k in 0..GRID_POINTS {
        let t = (lo - pad) + (width + 2.0 * pad) * k as f64 / (GRID_POINTS - 1) as f64;
        let v = pn.eval(t);
        norm_max = norm_max.max(matcore::spectral_norm(&v));
        det_max = det_max.max(matcore::determinant(&v).abs());
    }

    let interval = rec.weight().map(|w| w.interval());
    let mut nodes = Vec::with_capacity(groups.len());
    let mut rootvecs = Vec::with_capacity(groups.len());
    for g in &groups {
        let node = g.iter().sum::<f64>() / g.len() as f64;
        let value = rec.eval_orthonormal(n, node)?;
        let det = matcore::determinant(&value).abs();
        let bound = DET_RTOL * det_max;
        if det > bound {
            return Err(Error::NotAZero { node, det, bound });
        }
        let v = matcore::nullspace_scaled(&value, NULLSPACE_TOL, Some(norm_max));
        if v.ncols() != g.len() {
            return Err(Error::InconsistentMultiplicity {
                node,
                expected: g.len(),
                found: v.ncols(),
            });
        }
        if let Some((a, b)) = interval {
            if node < a || node > b {
                log::warn!("zero {node} of P_{n} lies outside [{a}, {b}]");
            }
        }
        nodes.push(node);
        rootvecs.push(v);
    }
    SpectralData::new(n, nodes, rootvecs)
}
