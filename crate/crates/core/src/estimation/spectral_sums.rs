//! Closed spectral sums for Gibbs states: classical/quantum QFIM parts, the
//! curvature, the structure-factor representation and the high-temperature
//! expansion.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{eigenbasis_derivatives, EstimationError};
use crate::linalg::RealMatrix;
use crate::spectral::{ComplexMatrix, HermitianOperator, ThermalEnsemble};

/// `d_mu p_i` for every parameter: `-beta p_i (dH_ii - <dH>)`.
fn population_derivatives(ensemble: &ThermalEnsemble, local: &[ComplexMatrix]) -> Vec<Vec<f64>> {
    let n = ensemble.dim();
    let p = ensemble.probabilities();
    let beta = ensemble.beta();
    local
        .iter()
        .map(|a| {
            let mean: f64 = (0..n).map(|m| p[m] * a[(m, m)].re).sum();
            (0..n).map(|i| -beta * p[i] * (a[(i, i)].re - mean)).collect()
        })
        .collect()
}

/// Classical part `Jc_mu,nu = sum_i d_mu p_i d_nu p_i / p_i`.
fn classical_part(ensemble: &ThermalEnsemble, local: &[ComplexMatrix]) -> RealMatrix {
    let dp = population_derivatives(ensemble, local);
    let p = ensemble.probabilities();
    let n = local.len();
    let mut jc = RealMatrix::zeros(n, n);
    for mu in 0..n {
        for nu in mu..n {
            let v: f64 = (0..ensemble.dim())
                .filter(|&i| p[i] > 0.0)
                .map(|i| dp[mu][i] * dp[nu][i] / p[i])
                .sum();
            jc[(mu, nu)] = v;
            jc[(nu, mu)] = v;
        }
    }
    jc
}

/// Sum over non-degenerate ordered pairs of `kernel(i, j) a_ij b_ji / (E_j - E_i)^2`.
fn pair_sum(
    ensemble: &ThermalEnsemble,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    kernel: impl Fn(f64, f64) -> f64,
) -> Complex64 {
    let n = ensemble.dim();
    let e = ensemble.decomposition().eigenvalues();
    let p = ensemble.probabilities();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            if i == j || ensemble.decomposition().is_degenerate(i, j) {
                continue;
            }
            let w = kernel(p[i], p[j]);
            if w == 0.0 {
                continue;
            }
            let gap = e[j] - e[i];
            acc += a[(i, j)] * b[(j, i)] * (w / (gap * gap));
        }
    }
    acc
}

fn quantum_kernel(pi: f64, pj: f64) -> f64 {
    let s = pi + pj;
    if s == 0.0 {
        0.0
    } else {
        2.0 * (pi - pj).powi(2) / s
    }
}

fn curvature_kernel(pi: f64, pj: f64) -> f64 {
    let s = pi + pj;
    if s == 0.0 {
        0.0
    } else {
        (pi - pj).powi(3) / (s * s)
    }
}

/// `(Jc, Jq)` from the eigenvalue/eigenvector sums.
pub fn qfim_thermal_spectral(
    ensemble: &ThermalEnsemble,
    dh: &[HermitianOperator],
) -> Result<(RealMatrix, RealMatrix), EstimationError> {
    let local = eigenbasis_derivatives(ensemble, dh)?;
    let jc = classical_part(ensemble, &local);
    let n = local.len();
    let mut jq = RealMatrix::zeros(n, n);
    for mu in 0..n {
        for nu in mu..n {
            let v = pair_sum(ensemble, &local[mu], &local[nu], quantum_kernel).re;
            jq[(mu, nu)] = v;
            jq[(nu, mu)] = v;
        }
    }
    Ok((jc, jq))
}

/// `U_mu,nu = i sum (p_i - p_j)^3/(p_i + p_j)^2 dH_ij dH_ji / (E_j - E_i)^2`.
pub fn muc_thermal_spectral(
    ensemble: &ThermalEnsemble,
    dh: &[HermitianOperator],
) -> Result<RealMatrix, EstimationError> {
    let local = eigenbasis_derivatives(ensemble, dh)?;
    let n = local.len();
    let mut u = RealMatrix::zeros(n, n);
    for mu in 0..n {
        for nu in (mu + 1)..n {
            let s = pair_sum(ensemble, &local[mu], &local[nu], curvature_kernel);
            let v = (Complex64::new(0.0, 1.0) * s).re;
            u[(mu, nu)] = v;
            u[(nu, mu)] = -v;
        }
    }
    Ok(u)
}

/// One delta peak of the dynamical structure factor: transition `i -> j`
/// at frequency `omega = E_j - E_i` with weights `p_i dH^mu_ij dH^nu_ji`.
#[derive(Debug, Clone)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub omega: f64,
    pub weights: ComplexMatrix,
}

/// All non-degenerate transitions of a Gibbs state.
#[derive(Debug, Clone)]
pub struct TransitionTable {
    pub beta: f64,
    pub transitions: Vec<Transition>,
}

impl TransitionTable {
    pub fn build(ensemble: &ThermalEnsemble, dh: &[HermitianOperator]) -> Result<Self, EstimationError> {
        let local = eigenbasis_derivatives(ensemble, dh)?;
        let dim = ensemble.dim();
        let np = local.len();
        let e = ensemble.decomposition().eigenvalues();
        let p = ensemble.probabilities();
        let mut transitions = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                if i == j || ensemble.decomposition().is_degenerate(i, j) {
                    continue;
                }
                let weights = ComplexMatrix::from_fn(np, np, |mu, nu| {
                    local[mu][(i, j)] * local[nu][(j, i)] * p[i]
                });
                transitions.push(Transition {
                    from: i,
                    to: j,
                    omega: e[j] - e[i],
                    weights,
                });
            }
        }
        Ok(Self {
            beta: ensemble.beta(),
            transitions,
        })
    }

    pub fn n_params(&self) -> usize {
        self.transitions.first().map_or(0, |t| t.weights.nrows())
    }

    /// Integrated weight of `S_mu,nu(omega) = 2 pi sum_t w_t delta(omega - omega_t)`
    /// against a test function `g(omega)`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.n_params();
        let mut acc = ComplexMatrix::zeros(n, n);
        for t in &self.transitions {
            acc += t.weights.scale(2.0 * PI * g(t.omega));
        }
        acc
    }
}

/// `(Jq, U)` from the tanh-weighted moments of the structure factor,
///
/// ```text
/// Jq = (2/pi) ∫ dω/ω² tanh²(βω/2) S⁺(ω)
/// U  = (i/pi) ∫ dω/ω² tanh²(βω/2) S⁻(ω)
/// ```
///
/// evaluated exactly on the delta peaks of the transition table.
pub fn structure_factor_paths(
    ensemble: &ThermalEnsemble,
    dh: &[HermitianOperator],
) -> Result<(RealMatrix, RealMatrix), EstimationError> {
    let table = TransitionTable::build(ensemble, dh)?;
    let n = dh.len();
    let beta = table.beta;
    let moment = table.integrate(|w| (0.5 * beta * w).tanh().powi(2) / (w * w));
    let mut jq = RealMatrix::zeros(n, n);
    let mut u = RealMatrix::zeros(n, n);
    for mu in 0..n {
        for nu in 0..n {
            let sym = 0.5 * (moment[(mu, nu)] + moment[(nu, mu)]);
            let skew = 0.5 * (moment[(mu, nu)] - moment[(nu, mu)]);
            jq[(mu, nu)] = (2.0 / PI) * sym.re;
            u[(mu, nu)] = (Complex64::new(0.0, 1.0 / PI) * skew).re;
        }
    }
    Ok((jq, u))
}

/// Leading high-temperature behaviour of `(Jc, Jq, U)` around the maximally
/// mixed state.
#[derive(Debug, Clone)]
pub struct HighTemperatureEstimate {
    pub jc: RealMatrix,
    pub jq: RealMatrix,
    pub u: RealMatrix,
    /// `R` of the approximated matrices; `None` when their `J` is singular.
    pub r: Option<f64>,
}

/// Expansion of the spectral sums to leading order in `beta` with
/// `p_i -> 1/d`:
///
/// ```text
/// Jc ≈ β² (Σ_i dH_ii dH'_ii / d - Tr dH Tr dH' / d²)
/// Jq ≈ (β²/d) Σ_{E_i≠E_j} dH_ij dH'_ji
/// U  ≈ Re[-(iβ³/4d) Σ_{E_i≠E_j} (E_i - E_j) dH_ij dH'_ji]
/// ```
pub fn high_t_approximation(
    ensemble: &ThermalEnsemble,
    dh: &[HermitianOperator],
) -> Result<HighTemperatureEstimate, EstimationError> {
    let local = eigenbasis_derivatives(ensemble, dh)?;
    let beta = ensemble.beta();
    let dim = ensemble.dim();
    let d = dim as f64;
    let e = ensemble.decomposition().eigenvalues();
    let range = e.max() - e.min();
    if beta * range >= 0.1 {
        log::warn!(
            "high-temperature expansion used at beta * spectral range = {:.3}",
            beta * range
        );
    }
    let n = local.len();
    let mut jc = RealMatrix::zeros(n, n);
    let mut jq = RealMatrix::zeros(n, n);
    let mut u = RealMatrix::zeros(n, n);
    for mu in 0..n {
        for nu in mu..n {
            let (a, b) = (&local[mu], &local[nu]);
            let diag: f64 = (0..dim).map(|i| a[(i, i)].re * b[(i, i)].re).sum();
            let ta: f64 = (0..dim).map(|i| a[(i, i)].re).sum();
            let tb: f64 = (0..dim).map(|i| b[(i, i)].re).sum();
            let c = beta * beta * (diag / d - ta * tb / (d * d));
            let mut q = Complex64::new(0.0, 0.0);
            let mut w = Complex64::new(0.0, 0.0);
            for i in 0..dim {
                for j in 0..dim {
                    if i == j || ensemble.decomposition().is_degenerate(i, j) {
                        continue;
                    }
                    let prod = a[(i, j)] * b[(j, i)];
                    q += prod;
                    w += prod * (e[i] - e[j]);
                }
            }
            jc[(mu, nu)] = c;
            jc[(nu, mu)] = c;
            jq[(mu, nu)] = beta * beta / d * q.re;
            jq[(nu, mu)] = jq[(mu, nu)];
            if nu > mu {
                let v = (Complex64::new(0.0, -beta.powi(3) / (4.0 * d)) * w).re;
                u[(mu, nu)] = v;
                u[(nu, mu)] = -v;
            }
        }
    }
    let r = super::r_measure(&(&jc + &jq), &u).ok();
    Ok(HighTemperatureEstimate { jc, jq, u, r })
}
