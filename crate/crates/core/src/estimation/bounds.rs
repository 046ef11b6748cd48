//! `R`, the two-parameter determinant form, Robertson's inequality, the
//! `Z~` matrix and the discrepancy bound chain.

use num_complex::Complex64;

use super::EstimationError;
use crate::linalg::{spectral_norm, sym_eigen, sym_function, trace_norm, RealMatrix};
use crate::spectral::{eig_hermitian, ComplexMatrix, HermitianOperator};

/// Eigen-directions of `J` below `RANK_TOL * ||J||` are projected out.
pub const RANK_TOL: f64 = 1e-10;

const POSITIVITY_TOL: f64 = 1e-10;

fn check_square_pair(j: &RealMatrix, u: &RealMatrix) -> Result<usize, EstimationError> {
    let n = j.nrows();
    if j.ncols() != n || u.nrows() != n || u.ncols() != n {
        return Err(EstimationError::DimensionError {
            expected: n,
            got: u.nrows(),
        });
    }
    Ok(n)
}

/// `R = 2 ||J^-1/2 U J^-1/2||_inf` on the support of `J`, with the
/// effective rank used.
pub fn r_measure_ranked(j: &RealMatrix, u: &RealMatrix) -> Result<(f64, usize), EstimationError> {
    check_square_pair(j, u)?;
    let (w, v) = sym_eigen(j);
    let scale = w.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let cutoff = RANK_TOL * scale;
    let keep: Vec<usize> = (0..w.len()).filter(|&i| w[i] > cutoff && w[i] > 0.0).collect();
    if keep.is_empty() {
        return Err(EstimationError::SingularFisher);
    }
    let k = keep.len();
    let n = j.nrows();
    // M = 2 D^-1/2 V_k^T U V_k D^-1/2
    let vk = RealMatrix::from_fn(n, k, |r, c| v[(r, keep[c])]);
    let inv_sqrt: Vec<f64> = keep.iter().map(|&i| w[i].sqrt().recip()).collect();
    let uk = vk.transpose() * u * &vk;
    let m = RealMatrix::from_fn(k, k, |a, b| 2.0 * inv_sqrt[a] * uk[(a, b)] * inv_sqrt[b]);
    Ok((spectral_norm(&m), k))
}

pub fn r_measure(j: &RealMatrix, u: &RealMatrix) -> Result<f64, EstimationError> {
    r_measure_ranked(j, u).map(|(r, _)| r)
}

/// `sqrt(Det 2U / Det J)` for two parameters.
pub fn r_two_param(j: &RealMatrix, u: &RealMatrix) -> Result<f64, EstimationError> {
    if j.nrows() != 2 || j.ncols() != 2 || u.nrows() != 2 || u.ncols() != 2 {
        return Err(EstimationError::DimensionError {
            expected: 2,
            got: j.nrows(),
        });
    }
    let det_j = j[(0, 0)] * j[(1, 1)] - j[(0, 1)] * j[(1, 0)];
    if !(det_j > 0.0) {
        return Err(EstimationError::SingularFisher);
    }
    // Det 2U = 4 u12^2 for a 2x2 skew matrix.
    Ok(2.0 * u[(0, 1)].abs() / det_j.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobertsonCheck {
    pub det_j: f64,
    pub det_2u: f64,
    /// `Det J - Det 2U`.
    pub margin: f64,
    pub passed: bool,
}

/// `Det J >= Det 2U`, accepted down to `-1e-10 * max(1, Det J)`.
pub fn robertson_check(j: &RealMatrix, u: &RealMatrix) -> Result<RobertsonCheck, EstimationError> {
    check_square_pair(j, u)?;
    let det_j = j.determinant();
    let det_2u = u.scale(2.0).determinant();
    let margin = det_j - det_2u;
    Ok(RobertsonCheck {
        det_j,
        det_2u,
        margin,
        passed: margin >= -1e-10 * det_j.abs().max(1.0),
    })
}

#[derive(Debug, Clone)]
pub struct TildeZ {
    /// `J^-1 - 2i J^-1 U J^-1`.
    pub z: ComplexMatrix,
    /// Ascending eigenvalues of `1 - 2i J^-1/2 U J^-1/2`.
    pub positivity_eigenvalues: Vec<f64>,
    pub positive: bool,
}

fn require_full_rank(j: &RealMatrix) -> Result<(), EstimationError> {
    let (w, _) = sym_eigen(j);
    let scale = w.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if w.is_empty() || !(w[0] > RANK_TOL * scale) {
        return Err(EstimationError::SingularFisher);
    }
    Ok(())
}

pub fn tilde_z(j: &RealMatrix, u: &RealMatrix) -> Result<TildeZ, EstimationError> {
    let n = check_square_pair(j, u)?;
    require_full_rank(j)?;
    let j_inv = sym_function(j, f64::recip);
    let j_isqrt = sym_function(j, |x| x.sqrt().recip());
    let curv = &j_inv * u * &j_inv;
    let z = ComplexMatrix::from_fn(n, n, |a, b| Complex64::new(j_inv[(a, b)], -2.0 * curv[(a, b)]));
    let s = &j_isqrt * u * &j_isqrt;
    let p = ComplexMatrix::from_fn(n, n, |a, b| {
        let one = if a == b { 1.0 } else { 0.0 };
        Complex64::new(one, -2.0 * s[(a, b)])
    });
    let eig = eig_hermitian(&HermitianOperator::symmetrized(p));
    let positivity_eigenvalues: Vec<f64> = eig.eigenvalues().iter().copied().collect();
    let positive = positivity_eigenvalues.iter().all(|&x| x >= -POSITIVITY_TOL);
    Ok(TildeZ {
        z,
        positivity_eigenvalues,
        positive,
    })
}

/// The chain `t1 <= t2 <= bound` bounding the Holevo/SLD discrepancy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyBound {
    /// `2 ||sqrt(W) J^-1 U J^-1 sqrt(W)||_1`.
    pub t1: f64,
    /// `2 ||J^-1/2 W J^-1 U J^-1/2||_1`.
    pub t2: f64,
    /// `tr(W J^-1) R`.
    pub bound: f64,
    pub chain_holds: bool,
}

pub fn discrepancy_bound(
    j: &RealMatrix,
    u: &RealMatrix,
    w: &RealMatrix,
) -> Result<DiscrepancyBound, EstimationError> {
    let n = check_square_pair(j, u)?;
    if w.nrows() != n || w.ncols() != n {
        return Err(EstimationError::DimensionError {
            expected: n,
            got: w.nrows(),
        });
    }
    let scale_w = w.amax().max(f64::MIN_POSITIVE);
    if crate::linalg::symmetry_defect(w) > 1e-12 * scale_w {
        return Err(EstimationError::InvalidWeight);
    }
    let (ww, _) = sym_eigen(w);
    if !(ww[0] > 0.0) {
        return Err(EstimationError::InvalidWeight);
    }
    require_full_rank(j)?;
    let j_inv = sym_function(j, f64::recip);
    let j_isqrt = sym_function(j, |x| x.sqrt().recip());
    let w_sqrt = sym_function(w, f64::sqrt);
    let t1 = 2.0 * trace_norm(&(&w_sqrt * &j_inv * u * &j_inv * &w_sqrt));
    let t2 = 2.0 * trace_norm(&(&j_isqrt * w * &j_inv * u * &j_isqrt));
    let r = super::r_measure(j, u)?;
    let bound = (w * &j_inv).trace() * r;
    let slack = 1e-10 * bound.abs().max(1e-300);
    Ok(DiscrepancyBound {
        t1,
        t2,
        bound,
        chain_holds: t1 <= t2 + slack && t2 <= bound + slack,
    })
}
