//! Metrology on Gibbs states: SLDs, QFIM, mean Uhlmann curvature and the
//! incompatibility measure `R`, with the bound diagnostics that go with them.
//!
//! Sign convention: `U_mu,nu = (i/4) Tr rho [L_mu, L_nu]`, which coincides
//! with the spectral sum carrying `i (p_i - p_j)^3 / (p_i + p_j)^2`. `R`,
//! `Det 2U` and all bounds are independent of this sign.

mod bounds;
mod sld;
mod spectral_sums;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bounds::{
    discrepancy_bound, r_measure, r_measure_ranked, r_two_param, robertson_check, tilde_z,
    DiscrepancyBound, RobertsonCheck, TildeZ, RANK_TOL,
};
pub use sld::{density_derivative_eigenbasis, lyapunov_residual, muc, muc_with_residue, qfim, sld};
pub use spectral_sums::{
    high_t_approximation, muc_thermal_spectral, qfim_thermal_spectral, structure_factor_paths,
    HighTemperatureEstimate, Transition, TransitionTable,
};

use crate::linalg::RealMatrix;
use crate::spectral::{ComplexMatrix, HermitianOperator, SpectralError, ThermalEnsemble};

/// Degenerate pairs whose coupling exceeds this (relative to `max(1, |dH|)`)
/// make the perturbative off-diagonal formulas ill-defined.
pub const DEGENERATE_COUPLING_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimationError {
    #[error("degenerate levels {i} and {j} are coupled by parameter {param} (|dH_ij| = {coupling:e})")]
    DegenerateBlockError {
        param: usize,
        i: usize,
        j: usize,
        coupling: f64,
    },
    #[error("Fisher matrix is singular (effective rank 0)")]
    SingularFisher,
    #[error("operator of dimension {got} does not match ensemble dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation needs {expected} parameters, got {got}")]
    DimensionError { expected: usize, got: usize },
    #[error("weight matrix is not symmetric positive definite")]
    InvalidWeight,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// `dH_mu` in the eigenbasis of the ensemble, checking that no degenerate
/// pair is coupled.
pub(crate) fn eigenbasis_derivatives(
    ensemble: &ThermalEnsemble,
    dh: &[HermitianOperator],
) -> Result<Vec<ComplexMatrix>, EstimationError> {
    let dec = ensemble.decomposition();
    let n = ensemble.dim();
    let mut out = Vec::with_capacity(dh.len());
    for (mu, op) in dh.iter().enumerate() {
        if op.dim() != n {
            return Err(EstimationError::DimensionMismatch {
                expected: n,
                got: op.dim(),
            });
        }
        let a = dec.to_eigenbasis(op);
        let tol = DEGENERATE_COUPLING_TOL * op.max_abs().max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if dec.is_degenerate(i, j) && a[(i, j)].norm() > tol {
                    return Err(EstimationError::DegenerateBlockError {
                        param: mu,
                        i,
                        j,
                        coupling: a[(i, j)].norm(),
                    });
                }
            }
        }
        out.push(a);
    }
    Ok(out)
}

/// `J = Jc + Jq`, `U` and `R` for one model point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub labels: Vec<String>,
    #[serde(with = "matrix_rows")]
    pub jc: RealMatrix,
    #[serde(with = "matrix_rows")]
    pub jq: RealMatrix,
    #[serde(with = "matrix_rows")]
    pub j: RealMatrix,
    #[serde(with = "matrix_rows")]
    pub u: RealMatrix,
    /// `None` when `J` has effective rank 0.
    pub r: Option<f64>,
    pub effective_rank: usize,
}

impl EstimationResult {
    /// Assemble from the parts; `R` uses the rank-projected definition.
    pub fn from_parts(labels: Vec<String>, jc: RealMatrix, jq: RealMatrix, u: RealMatrix) -> Self {
        let j = &jc + &jq;
        let (r, effective_rank) = match r_measure_ranked(&j, &u) {
            Ok((r, k)) => (Some(r), k),
            Err(_) => (None, 0),
        };
        Self {
            labels,
            jc,
            jq,
            j,
            u,
            r,
            effective_rank,
        }
    }

    pub fn n_params(&self) -> usize {
        self.labels.len()
    }

    /// Copy restricted to the listed parameters (rows/columns deleted before
    /// anything is inverted).
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let sub = |m: &RealMatrix| crate::linalg::submatrix(m, keep);
        Self::from_parts(
            keep.iter().map(|&i| self.labels[i].clone()).collect(),
            sub(&self.jc),
            sub(&self.jq),
            sub(&self.u),
        )
    }

    /// Column names of the flattened CSV form: upper triangles of `Jc`, `Jq`,
    /// `J`, strict upper triangle of `U`, then `R` and the rank.
    pub fn csv_header(labels: &[String]) -> Vec<String> {
        let n = labels.len();
        let mut cols = Vec::new();
        for name in ["Jc", "Jq", "J"] {
            for a in 0..n {
                for b in a..n {
                    cols.push(format!("{name}_{}_{}", labels[a], labels[b]));
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                cols.push(format!("U_{}_{}", labels[a], labels[b]));
            }
        }
        cols.push("R".into());
        cols.push("rank".into());
        cols
    }

    /// Values matching [`EstimationResult::csv_header`]; a missing `R` is NaN.
    pub fn csv_values(&self) -> Vec<f64> {
        let n = self.n_params();
        let mut vals = Vec::new();
        for m in [&self.jc, &self.jq, &self.j] {
            for a in 0..n {
                for b in a..n {
                    vals.push(m[(a, b)]);
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                vals.push(self.u[(a, b)]);
            }
        }
        vals.push(self.r.unwrap_or(f64::NAN));
        vals.push(self.effective_rank as f64);
        vals
    }
}

/// Full estimation of a Gibbs state from the spectral sums.
pub fn estimate(
    ensemble: &ThermalEnsemble,
    dh: &[HermitianOperator],
    labels: Vec<String>,
) -> Result<EstimationResult, EstimationError> {
    if labels.len() != dh.len() {
        return Err(EstimationError::DimensionError {
            expected: dh.len(),
            got: labels.len(),
        });
    }
    let (jc, jq) = qfim_thermal_spectral(ensemble, dh)?;
    let u = muc_thermal_spectral(ensemble, dh)?;
    Ok(EstimationResult::from_parts(labels, jc, jq, u))
}

/// Serde adapter: real matrices as row-major nested arrays.
pub mod matrix_rows {
    use super::RealMatrix;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &RealMatrix, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(crate::spectral::real_rows(m))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RealMatrix, D::Error> {
        let rows: Vec<Vec<f64>> = Vec::deserialize(d)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(D::Error::custom("matrix must be square"));
        }
        Ok(RealMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }
}

#[cfg(test)]
mod tests;
