use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A dense real symmetric `n × n` operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator {
    matrix: DMatrix<f64>,
}

impl SymmetricOperator {
    /// Wraps `matrix`, rejecting anything that is not square and exactly symmetric.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let n = matrix.nrows();
        for i in 0..n {
            for j in 0..i {
                if matrix[(i, j)] != matrix[(j, i)] {
                    return Err(Error::Domain(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(SymmetricOperator { matrix })
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(v)).as_slice().to_vec()
    }

    /// Row-major nested arrays, for JSON embedding.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        matrix_rows(&self.matrix)
    }
}

pub(crate) fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// `A_ij = 1/d` when `{i, j}` is an edge, else 0.
pub fn normalized_adjacency(g: &Graph) -> SymmetricOperator {
    let n = g.n();
    let w = 1.0 / g.d() as f64;
    let mut matrix = DMatrix::zeros(n, n);
    for u in 0..n {
        for &v in g.neighbors(u) {
            matrix[(u, v)] = w;
        }
    }
    SymmetricOperator { matrix }
}

/// Full eigendecomposition with eigenvalues sorted in descending order.
///
/// Eigenvectors are the columns of `eigenvectors`, normalized so that
/// `(1/n) Σ_k u_i[k] u_j[k] = δ_ij`; each is sign-fixed so its first entry
/// of magnitude above `1e-9` is positive.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    #[serde(serialize_with = "serialize_columns")]
    pub eigenvectors: DMatrix<f64>,
    pub residual: f64,
}

fn serialize_columns<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.ncols()))?;
    for c in m.column_iter() {
        seq.serialize_element(c.as_slice())?;
    }
    seq.end()
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, i: usize) -> Vec<f64> {
        self.eigenvectors.column(i).iter().copied().collect()
    }

    /// `(1/n) Σ λ_i u_i u_iᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.n() as f64;
        let scaled = DMatrix::from_fn(self.n(), self.n(), |r, c| self.eigenvectors[(r, c)] * self.eigenvalues[c]);
        scaled * self.eigenvectors.transpose() / n
    }

    /// Largest deviation of the expectation Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.n() as f64;
        let gram = self.eigenvectors.transpose() * &self.eigenvectors / n;
        let id = DMatrix::<f64>::identity(self.n(), self.n());
        (gram - id).amax()
    }
}

const MAX_SWEEPS_PER_DIM: usize = 200;
const MAX_JACOBI_SWEEPS: usize = 10;

/// Rayleigh-Ritz clean-up: diagonalize `QᵀAQ` (already nearly diagonal) by
/// cyclic Jacobi rotations and fold them back into `Q`.
fn refine(a: &DMatrix<f64>, eig: &mut SymmetricEigen<f64, nalgebra::Dyn>) {
    let n = a.nrows();
    let q = &eig.eigenvectors;
    let mut b = q.transpose() * a * q;
    let mut v = DMatrix::<f64>::identity(n, n);
    let tiny = 1e-17 * b.amax().max(f64::MIN_POSITIVE);
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for r in p + 1..n {
                let bpr = b[(p, r)];
                if bpr.abs() <= tiny {
                    continue;
                }
                rotated = true;
                let theta = (b[(r, r)] - b[(p, p)]) / (2.0 * bpr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for m in [&mut b, &mut v] {
                    for k in 0..n {
                        let (x, y) = (m[(k, p)], m[(k, r)]);
                        m[(k, p)] = c * x - s * y;
                        m[(k, r)] = s * x + c * y;
                    }
                }
                for k in 0..n {
                    let (x, y) = (b[(p, k)], b[(r, k)]);
                    b[(p, k)] = c * x - s * y;
                    b[(r, k)] = s * x + c * y;
                }
                b[(p, r)] = 0.0;
                b[(r, p)] = 0.0;
            }
        }
        if !rotated {
            break;
        }
    }
    eig.eigenvectors = q * v;
    eig.eigenvalues = b.diagonal();
}
const RESIDUAL_TOL: f64 = 1e-9;

pub fn eigendecompose(a: &SymmetricOperator) -> Result<Spectrum> {
    let n = a.n();
    let cap = MAX_SWEEPS_PER_DIM * n.max(1);
    let mut eig = SymmetricEigen::try_new(a.matrix.clone(), f64::EPSILON, cap)
        .ok_or(Error::Numerical { residual: f64::NAN })?;
    refine(&a.matrix, &mut eig);

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps ties in solver order, so the result is deterministic.
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let scale = (n as f64).sqrt();
    let mut eigenvectors = DMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let lead = col.iter().find(|x| x.abs() > 1e-9).copied().unwrap_or(1.0);
        let sign = if lead < 0.0 { -scale } else { scale };
        eigenvectors.set_column(dst, &(col * sign));
        eigenvalues.push(eig.eigenvalues[src]);
    }

    let av = &a.matrix * &eigenvectors;
    let residual = (0..n)
        .map(|i| {
            let r = av.column(i) - eigenvectors.column(i) * eigenvalues[i];
            (r.norm_squared() / n as f64).sqrt()
        })
        .fold(0.0f64, f64::max);
    if !(residual <= RESIDUAL_TOL) {
        return Err(Error::Numerical { residual });
    }
    Ok(Spectrum { eigenvalues, eigenvectors, residual })
}
