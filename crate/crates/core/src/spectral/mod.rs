//! Hermitian linear-algebra substrate: eigendecomposition, Gibbs states and
//! parameter derivatives of finite-dimensional Hamiltonians.

mod model;
mod operator;

use std::cmp::Ordering;

use nalgebra::DVector;
use num_complex::Complex64;
use thiserror::Error;

pub use model::{derivatives, numeric_derivatives, FnModel, LinearModel, ParametrizedModel};
pub use operator::{
    complex_rows, matrix_from_complex_rows, real_rows, ComplexMatrix, HermitianOperator,
    RealMatrix, HERMITIAN_TOL,
};

/// Relative scale of the degeneracy cutoff: `gap_tol = 1e-10 * max(1, ||H||)`.
pub const GAP_TOL_SCALE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix is not Hermitian (max |A_ij - conj A_ji| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is empty")]
    Empty,
    #[error("rows have different lengths")]
    Ragged,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("inverse temperature must be finite and non-negative, got {0}")]
    InvalidBeta(f64),
    #[error("parameter point leaves the model domain: {0}")]
    DomainError(String),
    #[error("finite-difference step must be positive, got {0}")]
    InvalidStep(f64),
}

/// Eigenvalues ascending with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: DVector<f64>,
    eigenvectors: ComplexMatrix,
    gap_tol: f64,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Two eigenvalues closer than this are treated as degenerate.
    pub fn gap_tol(&self) -> f64 {
        self.gap_tol
    }

    pub fn is_degenerate(&self, i: usize, j: usize) -> bool {
        (self.eigenvalues[i] - self.eigenvalues[j]).abs() <= self.gap_tol
    }

    /// Spectral norm `max |E_i|`.
    pub fn norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |a: f64, e| a.max(e.abs()))
    }

    /// `V† A V`: matrix elements `<i|A|j>` in the eigenbasis.
    pub fn to_eigenbasis(&self, op: &HermitianOperator) -> ComplexMatrix {
        self.eigenvectors.adjoint() * op.matrix() * &self.eigenvectors
    }

    /// `V A V†`: back to the original basis.
    pub fn from_eigenbasis(&self, m: &ComplexMatrix) -> HermitianOperator {
        HermitianOperator::symmetrized(&self.eigenvectors * m * self.eigenvectors.adjoint())
    }

    /// Decomposition of `c H` for `c >= 0`, keeping this eigenbasis (also for
    /// `c = 0`, where every level becomes degenerate).
    pub fn scaled(&self, c: f64) -> SpectralDecomposition {
        let eigenvalues = self.eigenvalues.scale(c);
        let norm = eigenvalues.iter().fold(0.0, |a: f64, e| a.max(e.abs()));
        SpectralDecomposition {
            eigenvalues,
            eigenvectors: self.eigenvectors.clone(),
            gap_tol: GAP_TOL_SCALE * norm.max(1.0),
        }
    }

    /// `V diag(E) V†`.
    pub fn reconstruct(&self) -> HermitianOperator {
        let diag = ComplexMatrix::from_diagonal(&self.eigenvalues.map(|e| Complex64::new(e, 0.0)));
        self.from_eigenbasis(&diag)
    }
}

/// Eigendecomposition with a reproducible eigenvector gauge: each column is
/// rotated so its first non-negligible component is real and positive, and
/// columns within a degenerate cluster are ordered lexicographically.
pub fn eig_hermitian(h: &HermitianOperator) -> SpectralDecomposition {
    let n = h.dim();
    let eig = h.matrix().clone().symmetric_eigen();
    let mut vectors = eig.eigenvectors;
    for c in 0..n {
        fix_phase(&mut vectors, c);
    }
    let norm = eig.eigenvalues.iter().fold(0.0, |a: f64, e| a.max(e.abs()));
    let gap_tol = GAP_TOL_SCALE * norm.max(1.0);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(Ordering::Equal)
    });
    // Reorder each degenerate run by the lexicographic order of its columns.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]] <= gap_tol
        {
            end += 1;
        }
        order[start..end].sort_by(|&a, &b| lexicographic(&vectors, a, b));
        start = end;
    }

    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        gap_tol,
    }
}

fn fix_phase(v: &mut ComplexMatrix, col: usize) {
    let n = v.nrows();
    let scale = v.column(col).iter().map(|z| z.norm()).fold(0.0, f64::max);
    for r in 0..n {
        let z = v[(r, col)];
        if z.norm() > 1e-10 * scale.max(f64::MIN_POSITIVE) {
            let phase = z.conj() / z.norm();
            for rr in 0..n {
                v[(rr, col)] *= phase;
            }
            v[(r, col)] = Complex64::new(v[(r, col)].norm(), 0.0);
            return;
        }
    }
}

fn lexicographic(v: &ComplexMatrix, a: usize, b: usize) -> Ordering {
    for r in 0..v.nrows() {
        let (x, y) = (v[(r, a)], v[(r, b)]);
        match x.re.partial_cmp(&y.re).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            o => return o,
        }
        match x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

/// Gibbs state `exp(-beta H)/Z` stored in the eigenbasis of `H`.
#[derive(Debug, Clone)]
pub struct ThermalEnsemble {
    decomposition: SpectralDecomposition,
    beta: f64,
    probabilities: DVector<f64>,
    partition: f64,
}

impl ThermalEnsemble {
    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn probabilities(&self) -> &DVector<f64> {
        &self.probabilities
    }

    /// Partition function of the ground-state-shifted Hamiltonian,
    /// `sum_i exp(-beta (E_i - E_min))`.
    pub fn partition(&self) -> f64 {
        self.partition
    }

    /// `ln Z` of the unshifted Hamiltonian.
    pub fn log_partition(&self) -> f64 {
        -self.beta * self.decomposition.eigenvalues.min() + self.partition.ln()
    }

    pub fn dim(&self) -> usize {
        self.probabilities.len()
    }

    /// Thermal expectation value `Tr(rho A)`.
    pub fn expectation(&self, op: &HermitianOperator) -> f64 {
        let a = self.decomposition.to_eigenbasis(op);
        (0..self.dim()).map(|i| self.probabilities[i] * a[(i, i)].re).sum()
    }

    /// The density matrix in the original basis.
    pub fn density_matrix(&self) -> HermitianOperator {
        let diag = ComplexMatrix::from_diagonal(
            &self.probabilities.map(|p| Complex64::new(p, 0.0)),
        );
        self.decomposition.from_eigenbasis(&diag)
    }
}

pub fn thermal_state(h: &HermitianOperator, beta: f64) -> Result<ThermalEnsemble, SpectralError> {
    let decomposition = eig_hermitian(h);
    thermal_state_from(decomposition, beta)
}

pub fn thermal_state_from(
    decomposition: SpectralDecomposition,
    beta: f64,
) -> Result<ThermalEnsemble, SpectralError> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(SpectralError::InvalidBeta(beta));
    }
    let e_min = decomposition.eigenvalues.min();
    let weights = decomposition.eigenvalues.map(|e| (-beta * (e - e_min)).exp());
    let partition = weights.sum();
    let probabilities = weights / partition;
    Ok(ThermalEnsemble {
        decomposition,
        beta,
        probabilities,
        partition,
    })
}
