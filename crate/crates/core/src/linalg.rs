//! Small dense real-matrix helpers used by the estimation bounds.

use nalgebra::{DMatrix, DVector};

pub type RealMatrix = DMatrix<f64>;

/// Eigenvalues ascending with matching orthonormal columns.
pub fn sym_eigen(m: &RealMatrix) -> (DVector<f64>, RealMatrix) {
    let sym = (m + m.transpose()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = RealMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `f(M)` for a symmetric matrix through its eigendecomposition.
pub fn sym_function(m: &RealMatrix, f: impl Fn(f64) -> f64) -> RealMatrix {
    let (w, v) = sym_eigen(m);
    let fw = RealMatrix::from_diagonal(&w.map(f));
    &v * fw * v.transpose()
}

/// Sum of singular values.
pub fn trace_norm(m: &RealMatrix) -> f64 {
    m.clone().singular_values().sum()
}

/// Largest singular value.
pub fn spectral_norm(m: &RealMatrix) -> f64 {
    m.clone().singular_values().max()
}

pub fn symmetry_defect(m: &RealMatrix) -> f64 {
    (m - m.transpose()).amax()
}

pub fn skew_defect(m: &RealMatrix) -> f64 {
    (m + m.transpose()).amax()
}

/// Copy of the rows and columns listed in `keep`, in that order.
pub fn submatrix(m: &RealMatrix, keep: &[usize]) -> RealMatrix {
    RealMatrix::from_fn(keep.len(), keep.len(), |i, j| m[(keep[i], keep[j])])
}
