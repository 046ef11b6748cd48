use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SpectralError;

/// Absolute tolerance on `|A_ij - conj(A_ji)|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type RealMatrix = DMatrix<f64>;

/// Dense complex self-adjoint matrix.
///
/// Construction checks Hermiticity; the stored matrix is then symmetrized
/// exactly, so downstream code can rely on `A == A†` bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, SpectralError> {
        if !matrix.is_square() {
            return Err(SpectralError::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(SpectralError::Empty);
        }
        let deviation = hermiticity_defect(&matrix);
        if deviation > HERMITIAN_TOL {
            return Err(SpectralError::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(matrix))
    }

    /// Builds `(A + A†)/2` without checking how far `A` was from Hermitian.
    pub fn symmetrized(matrix: ComplexMatrix) -> Self {
        let adjoint = matrix.adjoint();
        Self {
            matrix: (matrix + adjoint).scale(0.5),
        }
    }

    pub fn from_real(matrix: &RealMatrix) -> Result<Self, SpectralError> {
        Self::new(matrix.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        Self { matrix: m }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            matrix: self.matrix.scale(factor),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix - &other.matrix,
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

pub(crate) fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Row-major nested arrays of `[re, im]` pairs.
impl Serialize for HermitianOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        complex_rows(&self.matrix).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        let m = matrix_from_complex_rows(&rows).map_err(serde::de::Error::custom)?;
        HermitianOperator::new(m).map_err(serde::de::Error::custom)
    }
}

pub fn complex_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_complex_rows(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix, SpectralError> {
    let n = rows.len();
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(SpectralError::Ragged);
    }
    Ok(ComplexMatrix::from_fn(n, cols, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

pub fn real_rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}
