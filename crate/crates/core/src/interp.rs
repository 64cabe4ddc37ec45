//! Matrix polynomial interpolation on Jordan chain data.
//!
//! The general problem asks for `P` of degree `≤ n−1` with
//! `Σ_{l≤q} (1/l!) P^{(l)}(xᵢ) v_{q−l} = z_q` along every chain. The Lagrange
//! case (all chains of length one) also has three closed forms here: through
//! the inverse block column `(V₁ … Vₙ)`, through cardinal polynomials built
//! from the monic polynomial of the pair, and through the reproducing kernel
//! of an orthonormal family.

use crate::error::{Error, Result};
use crate::function::MatrixFunction;
use crate::matcore::{self, Matrix, Vector};
use crate::matpoly::{
    monic_from_jordan_pair, pair_inverse, JordanBlock, JordanPair, MatrixPolynomial,
};
use crate::orthopoly::Recurrence;
use crate::rootfind::SpectralData;

/// Remainder bound for the synthetic division in [`lagrange_cardinals`].
pub const DIVISION_RTOL: f64 = 1e-8;
/// Largest accepted condition number of `col(XJˡ)`.
const MAX_CONDITION: f64 = 1e14;

/// Jordan chains at one node, each chain listed from its leading vector.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeChains {
    pub node: f64,
    pub chains: Vec<Vec<Vector>>,
}

/// Interpolation data: chains per node and the right-hand vectors `z`,
/// stored chain by chain in the same layout.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationProblem {
    n: usize,
    nodes: Vec<NodeChains>,
    targets: Vec<Vec<Vec<Vector>>>,
    pair: JordanPair,
}

impl InterpolationProblem {
    /// Explicit right-hand vectors `targets[i][t][q] = z_{t,q}^{(i)}`.
    pub fn from_vectors(
        n: usize,
        nodes: Vec<NodeChains>,
        targets: Vec<Vec<Vec<Vector>>>,
    ) -> Result<Self> {
        let pair = validate(n, &nodes)?;
        let p = pair.size();
        let same_shape = targets.len() == nodes.len()
            && nodes.iter().zip(&targets).all(|(nc, tz)| {
                nc.chains.len() == tz.len()
                    && nc
                        .chains
                        .iter()
                        .zip(tz)
                        .all(|(c, z)| c.len() == z.len() && z.iter().all(|v| v.len() == p))
            });
        if !same_shape {
            return Err(Error::InvalidNodeData(
                "target vectors do not match the chain layout".into(),
            ));
        }
        Ok(InterpolationProblem {
            n,
            nodes,
            targets,
            pair,
        })
    }

    /// Targets taken from `f`: `z_q = Σ_{l≤q} (1/l!) F^{(l)}(xᵢ) v_{q−l}`.
    pub fn from_function(n: usize, nodes: Vec<NodeChains>, f: &dyn MatrixFunction) -> Result<Self> {
        let pair = validate(n, &nodes)?;
        if f.size() != pair.size() {
            return Err(Error::DimensionMismatch {
                expected: format!("function of size {}", pair.size()),
                found: format!("size {}", f.size()),
            });
        }
        let mut targets = Vec::with_capacity(nodes.len());
        for nc in &nodes {
            let longest = nc.chains.iter().map(|c| c.len()).max().unwrap_or(1);
            let taylor = f.taylor(nc.node, longest - 1)?;
            targets.push(
                nc.chains
                    .iter()
                    .map(|chain| {
                        (0..chain.len())
                            .map(|q| (0..=q).map(|l| &taylor[l] * &chain[q - l]).sum())
                            .collect()
                    })
                    .collect(),
            );
        }
        Ok(InterpolationProblem {
            n,
            nodes,
            targets,
            pair,
        })
    }

    /// Lagrange data from spectral data: every rootvector is a chain of length one.
    pub fn lagrange(spec: &SpectralData, f: &dyn MatrixFunction) -> Result<Self> {
        Self::from_function(spec.n(), lagrange_chains(spec.nodes(), spec.rootvecs()), f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[NodeChains] {
        &self.nodes
    }

    pub fn pair(&self) -> &JordanPair {
        &self.pair
    }
}

fn lagrange_chains(nodes: &[f64], rootvecs: &[Matrix]) -> Vec<NodeChains> {
    nodes
        .iter()
        .zip(rootvecs)
        .map(|(&node, v)| NodeChains {
            node,
            chains: v.column_iter().map(|c| vec![c.into_owned()]).collect(),
        })
        .collect()
}

fn validate(n: usize, nodes: &[NodeChains]) -> Result<JordanPair> {
    let p = nodes
        .first()
        .and_then(|nc| nc.chains.first())
        .and_then(|c| c.first())
        .map(|v| v.len())
        .ok_or_else(|| Error::InvalidNodeData("no chains".into()))?;
    let mut columns = Vec::new();
    let mut blocks = Vec::new();
    for nc in nodes {
        if nc
            .chains
            .iter()
            .any(|c| c.is_empty() || c.iter().any(|v| v.len() != p))
        {
            return Err(Error::InvalidNodeData(format!(
                "empty chain or wrong vector length at {}",
                nc.node
            )));
        }
        let leading =
            Matrix::from_columns(&nc.chains.iter().map(|c| c[0].clone()).collect::<Vec<_>>());
        let s = matcore::singular_values(&leading);
        if leading.ncols() > p
            || s.last().copied().unwrap_or(0.0) <= 1e-12 * s[0].max(f64::MIN_POSITIVE)
        {
            return Err(Error::InvalidNodeData(format!(
                "leading chain vectors at {} are zero or linearly dependent",
                nc.node
            )));
        }
        for c in &nc.chains {
            columns.extend(c.iter().cloned());
            blocks.push(JordanBlock {
                node: nc.node,
                len: c.len(),
            });
        }
    }
    if columns.len() != n * p {
        return Err(Error::InvalidNodeData(format!(
            "total chain length {} differs from n·p = {}",
            columns.len(),
            n * p
        )));
    }
    JordanPair::new(Matrix::from_columns(&columns), blocks)
}

/// Binomial coefficient as a float.
fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Unique solution of the general problem by one dense solve.
///
/// Column `(i,t,q)` of the system holds `u_j = Σ_l C(j,l) xᵢ^{j−l} v_{t,q−l}`
/// for `j = 0..n−1`, so that `(A₀ … A_{n−1}) U = Z`.
pub fn interpolate_general(prob: &InterpolationProblem) -> Result<MatrixPolynomial> {
    let n = prob.n;
    let p = prob.pair.size();
    let mut u = Matrix::zeros(n * p, n * p);
    let mut z = Matrix::zeros(p, n * p);
    let mut col = 0;
    for (nc, tz) in prob.nodes.iter().zip(&prob.targets) {
        let x = nc.node;
        for (chain, zs) in nc.chains.iter().zip(tz) {
            for q in 0..chain.len() {
                for j in 0..n {
                    let mut acc = Vector::zeros(p);
                    for l in 0..=q.min(j) {
                        acc += &chain[q - l] * (binomial(j, l) * x.powi((j - l) as i32));
                    }
                    u.view_mut((j * p, col), (p, 1)).copy_from(&acc);
                }
                z.set_column(col, &zs[q]);
                col += 1;
            }
        }
    }
    let cond = matcore::condition_number(&u);
    if !cond.is_finite() || cond > MAX_CONDITION {
        return Err(Error::InvalidNodeData(format!(
            "interpolation system is singular (condition number {cond:.3e})"
        )));
    }
    let at = matcore::solve(&u.transpose(), &z.transpose())?;
    let coeffs = (0..n).map(|j| at.rows(j * p, p).transpose()).collect();
    MatrixPolynomial::new(p, coeffs)
}

/// Column ranges of a diagonal pair grouped by distinct node.
fn node_groups(pair: &JordanPair) -> Result<Vec<(f64, usize, usize)>> {
    if !pair.is_diagonal() {
        return Err(Error::InvalidPair(
            "Lagrange forms need a pair with diagonal J".into(),
        ));
    }
    let mut groups: Vec<(f64, usize, usize)> = Vec::new();
    for (col, b) in pair.blocks().iter().enumerate() {
        match groups.last_mut() {
            Some(g) if g.0 == b.node => g.2 += 1,
            _ => groups.push((b.node, col, 1)),
        }
    }
    Ok(groups)
}

fn check_values(groups: &[(f64, usize, usize)], values: &[Matrix], p: usize) -> Result<()> {
    if values.len() != groups.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} node values", groups.len()),
            found: format!("{}", values.len()),
        });
    }
    for v in values {
        if v.nrows() != p || v.ncols() != p {
            return Err(Error::DimensionMismatch {
                expected: format!("{p}x{p} value"),
                found: format!("{}x{}", v.nrows(), v.ncols()),
            });
        }
    }
    Ok(())
}

/// `P(x) = Σᵢ F(xᵢ)(0 … v_{i,1} … v_{i,mᵢ} … 0)(V₁ + V₂x + … + Vₙx^{n−1})`.
///
/// `values[i]` is `F` at the i-th distinct node of the pair.
pub fn lagrange_via_v(pair: &JordanPair, values: &[Matrix]) -> Result<MatrixPolynomial> {
    let groups = node_groups(pair)?;
    let p = pair.size();
    check_values(&groups, values, p)?;
    let n = pair.degree()?;
    let v = pair_inverse(pair, n)?;
    let mut z = Matrix::zeros(p, n * p);
    for (&(_, start, len), f) in groups.iter().zip(values) {
        let block = f * pair.x().columns(start, len);
        z.columns_mut(start, len).copy_from(&block);
    }
    let coeffs = (0..n).map(|j| &z * v.columns(j * p, p)).collect();
    MatrixPolynomial::new(p, coeffs)
}

/// Synthetic division by `x − x0`; returns the quotient and the remainder.
fn divide_linear(num: &MatrixPolynomial, x0: f64) -> (Vec<Matrix>, Matrix) {
    let c = num.coeffs();
    let p = num.size();
    if c.is_empty() {
        return (Vec::new(), Matrix::zeros(p, p));
    }
    let m = c.len() - 1;
    let mut q = vec![Matrix::zeros(p, p); m];
    let mut carry = Matrix::zeros(p, p);
    for k in (1..=m).rev() {
        carry = &c[k] + carry * x0;
        q[k - 1] = carry.clone();
    }
    let rem = &c[0] + carry * x0;
    (q, rem)
}

/// Cardinal polynomials `Wᵢ(x) = (x−xᵢ)^{−1} (v_{i,1} … v_{i,mᵢ})(w_{i,1}ᵀ; …) Q̂ₙ(x)`,
/// where the `w` are the matching rows of the last block `Vₙ`.
pub fn lagrange_cardinals(pair: &JordanPair) -> Result<Vec<MatrixPolynomial>> {
    let groups = node_groups(pair)?;
    let p = pair.size();
    let n = pair.degree()?;
    let v = pair_inverse(pair, n)?;
    let vn = v.columns((n - 1) * p, p);
    let qhat = monic_from_jordan_pair(pair, n)?;
    groups
        .iter()
        .map(|&(node, start, len)| {
            let b = pair.x().columns(start, len) * vn.rows(start, len);
            let num = qhat.left_mul(&b);
            let (q, rem) = divide_linear(&num, node);
            let scale = num.norm();
            let residual = rem.norm();
            if residual > DIVISION_RTOL * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::InconsistentPair { node, residual });
            }
            MatrixPolynomial::new(p, q)
        })
        .collect()
}

/// Lagrange interpolant from the kernel of an orthonormal family.
#[derive(Debug, Clone)]
pub struct OrthonormalLagrange {
    pub interpolant: MatrixPolynomial,
    /// `Kᵢ = −Vᵢᵀ K_{n−1}(xᵢ, xᵢ) Vᵢ`, negative definite.
    pub k: Vec<Matrix>,
    pub cardinals: Vec<MatrixPolynomial>,
}

/// `Wᵢ(x) = Vᵢ Lᵢ⁻¹ Vᵢᵀ K_{n−1}(x, xᵢ)` with `Lᵢ = −Kᵢ`, and `P = Σ F(xᵢ) Wᵢ`.
pub fn lagrange_orthonormal(
    spec: &SpectralData,
    rec: &Recurrence,
    values: &[Matrix],
) -> Result<OrthonormalLagrange> {
    let p = spec.size();
    if rec.size() != p {
        return Err(Error::DimensionMismatch {
            expected: format!("recurrence of size {p}"),
            found: format!("size {}", rec.size()),
        });
    }
    let n = spec.n();
    let groups: Vec<(f64, usize, usize)> = node_groups(spec.pair())?;
    check_values(&groups, values, p)?;
    let mut interpolant = MatrixPolynomial::zero(p);
    let mut ks = Vec::with_capacity(groups.len());
    let mut cardinals = Vec::with_capacity(groups.len());
    for ((&node, v), f) in spec.nodes().iter().zip(spec.rootvecs()).zip(values) {
        let kern = rec.kernel_polynomial(n - 1, node)?;
        let l = matcore::symmetrize(&(v.transpose() * kern.eval(node) * v));
        let min = matcore::min_eigenvalue(&l)?;
        if min <= 1e-12 * l.amax() {
            return Err(Error::DegenerateKernel { node });
        }
        let l_inv = matcore::inverse(&l).map_err(|_| Error::DegenerateKernel { node })?;
        let w = kern.left_mul(&(v * l_inv * v.transpose()));
        interpolant = &interpolant + &w.left_mul(f);
        ks.push(-l);
        cardinals.push(w);
    }
    Ok(OrthonormalLagrange {
        interpolant,
        k: ks,
        cardinals,
    })
}

/// `F` at each node of the spectral data.
pub fn node_values(spec: &SpectralData, f: &dyn MatrixFunction) -> Vec<Matrix> {
    spec.nodes().iter().map(|&x| f.eval(x)).collect()
}
