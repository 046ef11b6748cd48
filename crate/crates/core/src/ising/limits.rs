//! Zero- and high-temperature closed forms in the thermodynamic limit.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::{IsingError, ParameterSet};
use crate::linalg::RealMatrix;

/// Arithmetic-geometric mean iteration for `K` and `E` given `m` and `1 - m`.
fn agm(m: f64, m1: f64) -> (f64, f64) {
    let mut a: f64 = 1.0;
    let mut b = m1.sqrt();
    let mut sum = 0.5 * m;
    let mut pow = 0.5;
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    let k = PI / (2.0 * a);
    (k, k * (1.0 - sum))
}

/// Complete elliptic integrals `K(m)`, `E(m)` in the parameter convention
/// (`m` is the squared modulus).
pub fn elliptic_ke(m: f64) -> Result<(f64, f64), IsingError> {
    if !(0.0..1.0).contains(&m) {
        return Err(IsingError::DomainError(format!("elliptic parameter m = {m} outside [0, 1)")));
    }
    Ok(agm(m, 1.0 - m))
}

/// Same as [`elliptic_ke`] but from the complementary parameter `m1 = 1 - m`,
/// which keeps full precision as `m -> 1`.
pub fn elliptic_ke_complementary(m1: f64) -> Result<(f64, f64), IsingError> {
    if !(m1 > 0.0 && m1 <= 1.0) {
        return Err(IsingError::DomainError(format!("complementary parameter {m1} outside (0, 1]")));
    }
    Ok(agm(1.0 - m1, m1))
}

/// `1` inside the ordered phase, `1/h^2` outside.
pub fn f_q(h: f64) -> f64 {
    if h.abs() < 1.0 {
        1.0
    } else {
        1.0 / (h * h)
    }
}

/// `[(1 + h^2) K(m) - (1 + h)^2 E(m)] / (pi h^2 (1 + h))` with
/// `m = 4h/(1 + h)^2`, `h -> |h|`. Infinite at `|h| = 1`.
pub fn g_q(h: f64) -> f64 {
    let a = h.abs();
    if a == 1.0 {
        return f64::INFINITY;
    }
    if a > 1.0 {
        // g(h) = g(1/h) / h^3
        return g_q(1.0 / a) / a.powi(3);
    }
    if a < 1e-3 {
        return 0.5 + 3.0 * a * a / 16.0;
    }
    let m1 = ((1.0 - a) / (1.0 + a)).powi(2);
    let (k, e) = agm(1.0 - m1, m1);
    ((1.0 + a * a) * k - (1.0 + a).powi(2) * e) / (PI * a * a * (1.0 + a))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTemperature {
    pub jq: RealMatrix,
    pub u: RealMatrix,
    pub f_q: f64,
    pub g_q: f64,
    /// `R` of the `(h, phi)` model, `2 sqrt|1 - h^2| g_q / f_q`.
    pub r0: f64,
}

/// `T = 0` thermodynamic-limit matrices (`Jc = 0`):
/// `Jq = f_q/4 diag(0, 1/|1 - h^2|, 1)`, `U_(h,phi) = -g_q/4`.
pub fn zero_t_analytic(h: f64) -> Result<ZeroTemperature, IsingError> {
    if (h.abs() - 1.0).abs() < 1e-15 {
        return Err(IsingError::CriticalField);
    }
    let f = f_q(h);
    let g = g_q(h);
    let gap = (1.0 - h * h).abs();
    let mut jq = RealMatrix::zeros(3, 3);
    jq[(1, 1)] = 0.25 * f / gap;
    jq[(2, 2)] = 0.25 * f;
    let mut u = RealMatrix::zeros(3, 3);
    u[(1, 2)] = -0.25 * g;
    u[(2, 1)] = 0.25 * g;
    Ok(ZeroTemperature {
        jq,
        u,
        f_q: f,
        g_q: g,
        r0: 2.0 * gap.sqrt() * g / f,
    })
}

/// Leading behaviour near the critical field,
/// `(2 sqrt 2 / pi) (ln(8/h~) - 2) sqrt(h~)` for `0 < h~ < 1`.
///
/// The exponents are `nu Delta_R = 1/2` and a first-power logarithm.
pub fn zero_t_series(h_tilde: f64) -> f64 {
    2.0 * 2f64.sqrt() / PI * ((8.0 / h_tilde).ln() - 2.0) * h_tilde.sqrt()
}

/// Coefficient `c` of `R ≈ c beta` at high temperature.
///
/// * `(h, phi)`: `1/sqrt 2`
/// * `(beta, h, phi)`: `sqrt((1 + h^2)/2)`
/// * quantum part only: `sqrt(<Delta^2> / <Delta^2/Lambda^2>)`, i.e. `1` for
///   `|h| <= 1` and `|h|` for `|h| > 1`
pub fn high_t_closed_form(h: f64, set: ParameterSet) -> f64 {
    match set {
        ParameterSet::HPhi => FRAC_1_SQRT_2,
        ParameterSet::BetaHPhi => ((1.0 + h * h) / 2.0).sqrt(),
        ParameterSet::HPhiQuantum => h.abs().max(1.0),
    }
}
