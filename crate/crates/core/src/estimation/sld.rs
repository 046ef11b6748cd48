//! Symmetric logarithmic derivatives and the operator route to `J` and `U`.

use num_complex::Complex64;

use super::{eigenbasis_derivatives, EstimationError};
use crate::linalg::RealMatrix;
use crate::spectral::{ComplexMatrix, HermitianOperator, ThermalEnsemble};

/// `(p_i - p_j) / (p_i + p_j)` written without the probabilities, so it stays
/// finite when both Boltzmann weights underflow.
pub(crate) fn population_contrast(beta: f64, e_i: f64, e_j: f64) -> f64 {
    (0.5 * beta * (e_j - e_i)).tanh()
}

/// `d rho / d lambda_mu` in the eigenbasis of `H`.
///
/// Diagonal: `-beta p_i (dH_ii - <dH>)`; off-diagonal:
/// `dH_ij (p_i - p_j) / (E_i - E_j)`, zero on (uncoupled) degenerate pairs.
pub fn density_derivative_eigenbasis(ensemble: &ThermalEnsemble, dh: &ComplexMatrix) -> ComplexMatrix {
    let n = ensemble.dim();
    let e = ensemble.decomposition().eigenvalues();
    let p = ensemble.probabilities();
    let beta = ensemble.beta();
    let mean: f64 = (0..n).map(|m| p[m] * dh[(m, m)].re).sum();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(-beta * p[i] * (dh[(i, i)].re - mean), 0.0)
        } else if ensemble.decomposition().is_degenerate(i, j) {
            Complex64::new(0.0, 0.0)
        } else {
            dh[(i, j)] * ((p[i] - p[j]) / (e[i] - e[j]))
        }
    })
}

/// SLDs `L_mu` solving `d_mu rho = (rho L_mu + L_mu rho) / 2`, returned in
/// the original basis.
pub fn sld(
    ensemble: &ThermalEnsemble,
    dh: &[HermitianOperator],
) -> Result<Vec<HermitianOperator>, EstimationError> {
    let local = eigenbasis_derivatives(ensemble, dh)?;
    Ok(local
        .iter()
        .map(|a| ensemble.decomposition().from_eigenbasis(&sld_eigenbasis(ensemble, a)))
        .collect())
}

pub(crate) fn sld_eigenbasis(ensemble: &ThermalEnsemble, a: &ComplexMatrix) -> ComplexMatrix {
    let n = ensemble.dim();
    let e = ensemble.decomposition().eigenvalues();
    let p = ensemble.probabilities();
    let beta = ensemble.beta();
    let mean: f64 = (0..n).map(|m| p[m] * a[(m, m)].re).sum();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(-beta * (a[(i, i)].re - mean), 0.0)
        } else if ensemble.decomposition().is_degenerate(i, j) {
            Complex64::new(0.0, 0.0)
        } else {
            // 2 (d rho)_ij / (p_i + p_j)
            a[(i, j)] * (2.0 * population_contrast(beta, e[i], e[j]) / (e[i] - e[j]))
        }
    })
}

/// `Tr(rho A B)` for operators given in the eigenbasis of `rho`.
fn weighted_trace(p: &[f64], a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = p.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        if p[i] == 0.0 {
            continue;
        }
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += a[(i, j)] * b[(j, i)];
        }
        acc += row * p[i];
    }
    acc
}

fn slds_in_eigenbasis(ensemble: &ThermalEnsemble, slds: &[HermitianOperator]) -> Result<Vec<ComplexMatrix>, EstimationError> {
    for l in slds {
        if l.dim() != ensemble.dim() {
            return Err(EstimationError::DimensionMismatch {
                expected: ensemble.dim(),
                got: l.dim(),
            });
        }
    }
    Ok(slds
        .iter()
        .map(|l| ensemble.decomposition().to_eigenbasis(l))
        .collect())
}

/// `J_mu,nu = Tr rho {L_mu, L_nu} / 2`.
pub fn qfim(ensemble: &ThermalEnsemble, slds: &[HermitianOperator]) -> Result<RealMatrix, EstimationError> {
    let local = slds_in_eigenbasis(ensemble, slds)?;
    let p = ensemble.probabilities().as_slice();
    let n = local.len();
    let mut j = RealMatrix::zeros(n, n);
    for mu in 0..n {
        for nu in mu..n {
            let t = weighted_trace(p, &local[mu], &local[nu]) + weighted_trace(p, &local[nu], &local[mu]);
            j[(mu, nu)] = 0.5 * t.re;
            j[(nu, mu)] = j[(mu, nu)];
        }
    }
    Ok(j)
}

/// Mean Uhlmann curvature `U_mu,nu = (i/4) Tr rho [L_mu, L_nu]`, together
/// with the largest imaginary residue dropped when taking the real part.
pub fn muc_with_residue(
    ensemble: &ThermalEnsemble,
    slds: &[HermitianOperator],
) -> Result<(RealMatrix, f64), EstimationError> {
    let local = slds_in_eigenbasis(ensemble, slds)?;
    let p = ensemble.probabilities().as_slice();
    let n = local.len();
    let mut u = RealMatrix::zeros(n, n);
    let mut residue: f64 = 0.0;
    for mu in 0..n {
        for nu in (mu + 1)..n {
            let comm = weighted_trace(p, &local[mu], &local[nu]) - weighted_trace(p, &local[nu], &local[mu]);
            let value = Complex64::new(0.0, 0.25) * comm;
            residue = residue.max(value.im.abs());
            u[(mu, nu)] = value.re;
            u[(nu, mu)] = -value.re;
        }
    }
    Ok((u, residue))
}

pub fn muc(ensemble: &ThermalEnsemble, slds: &[HermitianOperator]) -> Result<RealMatrix, EstimationError> {
    muc_with_residue(ensemble, slds).map(|(u, _)| u)
}

/// Largest entry of `(rho L + L rho)/2 - d rho` over all parameters,
/// evaluated in the eigenbasis.
pub fn lyapunov_residual(
    ensemble: &ThermalEnsemble,
    dh: &[HermitianOperator],
    slds: &[HermitianOperator],
) -> Result<f64, EstimationError> {
    let derivs = eigenbasis_derivatives(ensemble, dh)?;
    let local = slds_in_eigenbasis(ensemble, slds)?;
    let p = ensemble.probabilities();
    let n = ensemble.dim();
    let mut worst: f64 = 0.0;
    for (a, l) in derivs.iter().zip(&local) {
        let drho = density_derivative_eigenbasis(ensemble, a);
        for i in 0..n {
            for j in 0..n {
                let anti = l[(i, j)] * (0.5 * (p[i] + p[j]));
                worst = worst.max((anti - drho[(i, j)]).norm());
            }
        }
    }
    Ok(worst)
}
