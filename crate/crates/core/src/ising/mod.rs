//! Transverse-field Ising chain with a global spin rotation `phi`:
//! per-momentum blocks, finite chains, the thermodynamic limit and
//! closed-form limits.
//!
//! Parameter order is always `(beta, h, phi)`.

mod chain;
mod limits;
mod oracle;

use thiserror::Error;

use crate::linalg::RealMatrix;
use crate::quadrature::QuadratureFailure;

pub use chain::{
    finite_sum, finite_sum_matrices, evaluate, mode_grid, thermo_limit, thermo_limit_matrices, IsingMatrices,
    IsingPoint, ParameterSet, QuadSettings, SystemSize, LABELS,
};
pub use limits::{
    elliptic_ke, elliptic_ke_complementary, g_q, f_q, high_t_closed_form, zero_t_analytic,
    zero_t_series, ZeroTemperature,
};
pub use oracle::{bloch_operators, pair_hamiltonian, pair_sld, pair_space_oracle};

/// Modes with `Lambda_k` below this are treated as gapless.
pub const GAPLESS_TOL: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsingError {
    #[error("gapless mode at k = {k} (h = {h})")]
    GaplessMode { k: f64, h: f64 },
    #[error("zero-temperature closed forms diverge at the critical field |h| = 1")]
    CriticalField,
    #[error("number of modes must be a positive even integer, got {0}")]
    InvalidSize(usize),
    #[error("inverse temperature must be finite and non-negative, got {0}")]
    InvalidBeta(f64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureFailure),
    #[error(transparent)]
    Estimation(#[from] crate::estimation::EstimationError),
}

/// Single-mode dispersion data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeData {
    pub k: f64,
    /// `cos k - h`
    pub eps: f64,
    /// `sin k`
    pub delta: f64,
    /// `sqrt(eps^2 + delta^2)`
    pub lambda: f64,
    /// `arccos(eps / lambda)`; NaN for a gapless mode.
    pub theta: f64,
    pub gapless: bool,
}

/// `cos k - h` without the cancellation near `k = 0, h = 1` or `k = pi, h = -1`.
fn epsilon(k: f64, h: f64) -> f64 {
    if k.abs() <= std::f64::consts::FRAC_PI_2 {
        (1.0 - h) - 2.0 * (0.5 * k).sin().powi(2)
    } else {
        2.0 * (0.5 * k).cos().powi(2) - (1.0 + h)
    }
}

pub fn dispersion(k: f64, h: f64) -> ModeData {
    let eps = epsilon(k, h);
    // Exact zero at the zone boundary.
    let delta = if k.abs() == std::f64::consts::PI { 0.0 } else { k.sin() };
    let lambda = eps.hypot(delta);
    let gapless = lambda < GAPLESS_TOL;
    let theta = if gapless {
        f64::NAN
    } else {
        (eps / lambda).clamp(-1.0, 1.0).acos()
    };
    ModeData {
        k,
        eps,
        delta,
        lambda,
        theta,
        gapless,
    }
}

/// Per-momentum `Jc_k`, `Jq_k`, `U_k` in the order `(beta, h, phi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMatrices {
    pub jc: RealMatrix,
    pub jq: RealMatrix,
    pub u: RealMatrix,
}

/// `1 - tanh^2(x/2)` without cancellation.
fn sech2_half(x: f64) -> f64 {
    let c = (0.5 * x).cosh();
    1.0 / (c * c)
}

/// The six independent entries `(Jc_bb, Jc_bh, Jc_hh, Jq_hh, Jq_pp, U_hp)`.
pub(crate) fn mode_entries(k: f64, h: f64, beta: f64) -> [f64; 6] {
    let m = dispersion(k, h);
    if m.gapless {
        // Lambda -> 0 with eps/Lambda -> +-1: only the (h, h) classical entry survives.
        return [0.0, 0.0, 0.25 * beta * beta, 0.0, 0.0, 0.0];
    }
    let (eps, lam, d2) = (m.eps, m.lambda, m.delta * m.delta);
    let x = beta * lam;
    let s = 0.25 * sech2_half(x);
    let t_half = (0.5 * x).tanh();
    let t_full = x.tanh();
    let q = d2 / lam.powi(3);
    [
        s * lam * lam,
        -s * beta * eps,
        s * beta * beta * eps * eps / (lam * lam),
        0.5 * t_half * t_full * q / lam,
        0.5 * t_half * t_full * q * lam,
        -0.25 * t_half * t_full * t_full * q,
    ]
}

pub(crate) fn matrices_from_entries(e: &[f64]) -> ModeMatrices {
    let jc = RealMatrix::from_row_slice(3, 3, &[e[0], e[1], 0.0, e[1], e[2], 0.0, 0.0, 0.0, 0.0]);
    let jq = RealMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, e[3], 0.0, 0.0, 0.0, e[4]]);
    let u = RealMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, e[5], 0.0, -e[5], 0.0]);
    ModeMatrices { jc, jq, u }
}

/// Closed-form per-mode blocks. The curvature carries the sign of the
/// `(i/4) Tr rho [L_mu, L_nu]` convention applied to the pair Hamiltonian of
/// [`pair_hamiltonian`]:
/// `U_k(h, phi) = -tanh(beta Lambda/2) tanh^2(beta Lambda) Delta^2 / (4 Lambda^3)`.
pub fn mode_matrices(k: f64, h: f64, beta: f64) -> ModeMatrices {
    matrices_from_entries(&mode_entries(k, h, beta))
}

/// Parameter selector for [`sld_mode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Beta,
    H,
    Phi,
}

impl Param {
    pub const ALL: [Param; 3] = [Param::Beta, Param::H, Param::Phi];
}

/// Bloch vector `m_k` and trace part `eta_k` of the single-mode SLD
/// `L = m.(Psi^† sigma Psi)/2 - eta/2`:
///
/// ```text
/// m   = -d(beta Lambda) h_hat - tanh(beta Lambda) d h_hat
/// eta =  d(beta Lambda) tanh(beta Lambda / 2)
/// h_hat = (sin theta cos phi, sin theta sin phi, cos theta)
/// ```
pub fn sld_mode(k: f64, h: f64, phi: f64, beta: f64, mu: Param) -> Result<([f64; 3], f64), IsingError> {
    let m = dispersion(k, h);
    if m.gapless {
        return Err(IsingError::GaplessMode { k, h });
    }
    let (st, ct) = m.theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let h_hat = [st * cp, st * sp, ct];
    let x = beta * m.lambda;
    let (d_bl, d_hat) = match mu {
        Param::Beta => (m.lambda, [0.0; 3]),
        Param::H => {
            // d Lambda/dh = -eps/Lambda; d theta/dh = |Delta| / Lambda^2.
            let dtheta = m.delta.abs() / (m.lambda * m.lambda);
            (-beta * m.eps / m.lambda, [dtheta * ct * cp, dtheta * ct * sp, -dtheta * st])
        }
        Param::Phi => (0.0, [-st * sp, st * cp, 0.0]),
    };
    let t = x.tanh();
    let mv = [
        -d_bl * h_hat[0] - t * d_hat[0],
        -d_bl * h_hat[1] - t * d_hat[1],
        -d_bl * h_hat[2] - t * d_hat[2],
    ];
    Ok((mv, d_bl * (0.5 * x).tanh()))
}

#[cfg(test)]
mod tests;
