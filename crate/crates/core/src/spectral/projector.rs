use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::operator::{matrix_rows, Spectrum};
use super::THRESHOLD_SLACK;

/// Orthogonal projector `P_λ` onto the span of eigenvectors with eigenvalue `>= λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    threshold: f64,
    matrix: DMatrix<f64>,
    dimension: usize,
}

impl Projector {
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Rank of the projector, i.e. `dim V_λ`.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().copied().collect()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(v)).as_slice().to_vec()
    }

    /// Expectation-`L_2` distance from `v` to the range of `P`.
    pub fn distance_to_range(&self, v: &[f64]) -> f64 {
        let pv = self.apply(v);
        let ss: f64 = pv.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
        (ss / v.len() as f64).sqrt()
    }

    /// Frobenius norm of `P² − P`.
    pub fn idempotency_error(&self) -> f64 {
        (&self.matrix * &self.matrix - &self.matrix).norm()
    }

    /// Frobenius norm of `P − Pᵀ`.
    pub fn symmetry_error(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).norm()
    }

    /// Largest distance of a matrix eigenvalue of `P` from `{0, 1}`.
    pub fn spectrum_error(&self) -> f64 {
        let eig = SymmetricEigen::new(self.matrix.clone());
        eig.eigenvalues.iter().map(|l| l.abs().min((l - 1.0).abs())).fold(0.0, f64::max)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        matrix_rows(&self.matrix)
    }
}

/// `P_λ = (1/n) Σ_{λ_i >= λ - 1e-9} u_i u_iᵀ`. A zero-dimensional result is legal.
pub fn top_eigenspace(spectrum: &Spectrum, lambda: f64) -> Projector {
    let n = spectrum.n();
    let dimension = spectrum.eigenvalues.iter().filter(|&&l| l >= lambda - THRESHOLD_SLACK).count();
    let basis = spectrum.eigenvectors.columns(0, dimension);
    let raw = basis * basis.transpose() / n as f64;
    // Averaging with the transpose makes the result bitwise symmetric.
    let matrix = (&raw + raw.transpose()) * 0.5;
    Projector { threshold: lambda, matrix, dimension }
}

/// `‖P‖_{2→∞} = sqrt(n · max_i P_ii)` for an orthogonal projector under expectation norms.
pub fn two_to_inf_norm(p: &Projector) -> f64 {
    let max_diag = p.matrix.diagonal().iter().fold(0.0f64, |m, &x| m.max(x));
    (p.n() as f64 * max_diag).sqrt()
}
