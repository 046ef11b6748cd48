//! Brute-force check of the per-mode blocks on the 4-dimensional Fock
//! space of the `(k, -k)` fermion pair.

use num_complex::Complex64;

use super::{dispersion, sld_mode, IsingError, Param, LABELS};
use crate::estimation::{estimate, EstimationResult};
use crate::spectral::{eig_hermitian, thermal_state_from, ComplexMatrix, HermitianOperator};

fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Annihilators `d1 = a ⊗ 1`, `d2 = Z ⊗ a` (Jordan-Wigner ordering).
fn pair_modes() -> (ComplexMatrix, ComplexMatrix) {
    let a = ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let z = ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    let one = ComplexMatrix::identity(2, 2);
    (kron(&a, &one), kron(&z, &a))
}

/// `Psi^† sigma_a Psi` for `Psi = (d1, d2^†)`: `(d1^† d2^† + d2 d1,
/// -i d1^† d2^† + i d2 d1, n1 + n2 - 1)`.
pub fn bloch_operators() -> [HermitianOperator; 3] {
    let (d1, d2) = pair_modes();
    let pair = d1.adjoint() * d2.adjoint();
    let pair_dag = pair.adjoint();
    let number = d1.adjoint() * &d1 + d2.adjoint() * &d2 - ComplexMatrix::identity(4, 4);
    [
        HermitianOperator::symmetrized(&pair + &pair_dag),
        HermitianOperator::symmetrized(pair.map(|x| x * c(0.0, -1.0)) + pair_dag.map(|x| x * c(0.0, 1.0))),
        HermitianOperator::symmetrized(number),
    ]
}

/// `H = eps (n1 + n2 - 1) + i Delta e^{i phi} d1^† d2^† + h.c.` and its
/// `h` and `phi` derivatives.
pub fn pair_hamiltonian(k: f64, h: f64, phi: f64) -> [HermitianOperator; 3] {
    let m = dispersion(k, h);
    let (d1, d2) = pair_modes();
    let pair = d1.adjoint() * d2.adjoint();
    let number = d1.adjoint() * &d1 + d2.adjoint() * &d2 - ComplexMatrix::identity(4, 4);
    let phase = Complex64::from_polar(1.0, phi);
    let coupling = pair.map(|x| x * c(0.0, m.delta) * phase);
    let d_coupling = pair.map(|x| x * (-m.delta) * phase);
    let h_op = number.scale(m.eps) + &coupling + coupling.adjoint();
    let dh_op = number.scale(-1.0);
    let dphi_op = &d_coupling + d_coupling.adjoint();
    [
        HermitianOperator::symmetrized(h_op),
        HermitianOperator::symmetrized(dh_op),
        HermitianOperator::symmetrized(dphi_op),
    ]
}

/// Generic-path `(Jc, Jq, U)` of `exp(-beta H_pair)` over `(beta, h, phi)`,
/// to be compared with `mode_matrices(k) + mode_matrices(-k)`.
///
/// The state is treated as `exp(-K)` with `K = beta H`, so the beta
/// direction is the ordinary derivative `dK/dbeta = H`.
pub fn pair_space_oracle(k: f64, h: f64, phi: f64, beta: f64) -> Result<EstimationResult, IsingError> {
    if k.sin().abs() < 1e-12 {
        return Err(IsingError::DomainError(format!("pair oracle needs sin k != 0, got k = {k}")));
    }
    if !beta.is_finite() || beta < 0.0 {
        return Err(IsingError::InvalidBeta(beta));
    }
    let [h_op, dh, dphi] = pair_hamiltonian(k, h, phi);
    let dec = eig_hermitian(&h_op).scaled(beta);
    let ens = thermal_state_from(dec, 1.0).map_err(crate::estimation::EstimationError::from)?;
    let dk = [h_op, dh.scale(beta), dphi.scale(beta)];
    Ok(estimate(&ens, &dk, LABELS.iter().map(|s| s.to_string()).collect())?)
}

/// Pair-space SLD `m.S - eta` assembled from [`sld_mode`]; `S` are the
/// [`bloch_operators`].
pub fn pair_sld(k: f64, h: f64, phi: f64, beta: f64, mu: Param) -> Result<HermitianOperator, IsingError> {
    let (m, eta) = sld_mode(k, h, phi, beta, mu)?;
    let s = bloch_operators();
    Ok(s[0]
        .scale(m[0])
        .add(&s[1].scale(m[1]))
        .add(&s[2].scale(m[2]))
        .sub(&HermitianOperator::identity(4).scale(eta)))
}
