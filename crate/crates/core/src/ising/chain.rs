use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{matrices_from_entries, mode_entries, IsingError, ModeMatrices};
use crate::estimation::EstimationResult;
use crate::linalg::RealMatrix;
use crate::quadrature::{integrate, QuadOptions};

pub const LABELS: [&str; 3] = ["beta", "h", "phi"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemSize {
    /// Number of momentum modes (even).
    Modes(usize),
    Thermodynamic,
}

/// One point of the phase diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingPoint {
    pub h: f64,
    #[serde(default)]
    pub phi: f64,
    pub beta: f64,
    #[serde(default = "thermodynamic")]
    pub size: SystemSize,
}

fn thermodynamic() -> SystemSize {
    SystemSize::Thermodynamic
}

/// Which parameters form the estimation model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterSet {
    /// `(h, phi)` with the full QFIM.
    HPhi,
    /// `(beta, h, phi)`.
    BetaHPhi,
    /// `(h, phi)` with the quantum part of the QFIM only.
    HPhiQuantum,
}

impl ParameterSet {
    pub fn indices(self) -> &'static [usize] {
        match self {
            ParameterSet::HPhi | ParameterSet::HPhiQuantum => &[1, 2],
            ParameterSet::BetaHPhi => &[0, 1, 2],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ParameterSet::HPhi => "h_phi",
            ParameterSet::BetaHPhi => "beta_h_phi",
            ParameterSet::HPhiQuantum => "h_phi_quantum",
        }
    }
}

impl fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParameterSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "h_phi" | "h,phi" => Ok(ParameterSet::HPhi),
            "beta_h_phi" | "beta,h,phi" => Ok(ParameterSet::BetaHPhi),
            "h_phi_quantum" | "quantum" => Ok(ParameterSet::HPhiQuantum),
            other => Err(format!("unknown parameter set '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    /// Per-entry absolute and relative tolerance.
    pub tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

/// Intensive `(Jc, Jq, U)` of the chain in the order `(beta, h, phi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingMatrices {
    pub jc: RealMatrix,
    pub jq: RealMatrix,
    pub u: RealMatrix,
}

impl IsingMatrices {
    fn from_entries(e: &[f64]) -> Self {
        let ModeMatrices { jc, jq, u } = matrices_from_entries(e);
        Self { jc, jq, u }
    }

    /// The full three-parameter result.
    pub fn full(&self) -> EstimationResult {
        EstimationResult::from_parts(
            LABELS.iter().map(|s| s.to_string()).collect(),
            self.jc.clone(),
            self.jq.clone(),
            self.u.clone(),
        )
    }

    /// Sub-model: rows and columns are dropped before `J` is inverted.
    pub fn select(&self, set: ParameterSet) -> EstimationResult {
        let mut full = self.full();
        if set == ParameterSet::HPhiQuantum {
            full = EstimationResult::from_parts(full.labels, RealMatrix::zeros(3, 3), full.jq, full.u);
        }
        full.restrict(set.indices())
    }
}

/// Momenta `2 pi n / M`, `n = -M/2 + 1, ..., M/2`.
pub fn mode_grid(modes: usize) -> Result<Vec<f64>, IsingError> {
    if modes == 0 || modes % 2 != 0 {
        return Err(IsingError::InvalidSize(modes));
    }
    let half = (modes / 2) as i64;
    Ok(((-half + 1)..=half)
        .map(|n| PI * (2 * n) as f64 / modes as f64)
        .collect())
}

fn check_beta(beta: f64) -> Result<(), IsingError> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(IsingError::InvalidBeta(beta));
    }
    Ok(())
}

/// `(1/M) sum_k (Jc_k, Jq_k, U_k)` over [`mode_grid`].
pub fn finite_sum_matrices(h: f64, beta: f64, modes: usize) -> Result<IsingMatrices, IsingError> {
    check_beta(beta)?;
    let grid = mode_grid(modes)?;
    let mut acc = [0.0; 6];
    for &k in &grid {
        let e = mode_entries(k, h, beta);
        for (a, v) in acc.iter_mut().zip(e) {
            *a += v;
        }
    }
    let m = modes as f64;
    Ok(IsingMatrices::from_entries(&acc.map(|a| a / m)))
}

/// Geometric breakpoints toward the momentum where the gap is smallest.
fn breakpoints(h: f64) -> Vec<f64> {
    let near: Vec<f64> = (1..=8).rev().map(|e| 10f64.powi(-e)).collect();
    let mut bps = vec![0.0];
    if h >= 0.0 {
        bps.extend(&near);
        bps.push(PI);
    } else {
        bps.extend(near.iter().rev().map(|d| PI - d));
        bps.push(PI);
    }
    bps
}

/// `(1/2 pi) ∫ dk` over the Brillouin zone, evaluated as `(1/pi) ∫_0^pi`
/// since every entry is even in `k`.
pub fn thermo_limit_matrices(h: f64, beta: f64, settings: QuadSettings) -> Result<IsingMatrices, IsingError> {
    check_beta(beta)?;
    let opts = QuadOptions {
        abs_tol: settings.tol * PI,
        rel_tol: settings.tol,
        max_subdivisions: settings.max_subdivisions,
    };
    let integral = integrate(|k| mode_entries(k, h, beta).to_vec(), &breakpoints(h), 6, opts)?;
    let e: Vec<f64> = integral.iter().map(|v| v / PI).collect();
    Ok(IsingMatrices::from_entries(&e))
}

pub fn evaluate(point: &IsingPoint, settings: QuadSettings) -> Result<IsingMatrices, IsingError> {
    match point.size {
        SystemSize::Modes(m) => finite_sum_matrices(point.h, point.beta, m),
        SystemSize::Thermodynamic => thermo_limit_matrices(point.h, point.beta, settings),
    }
}

/// Finite chain; `point.size` must be `Modes(M)`.
pub fn finite_sum(point: &IsingPoint) -> Result<EstimationResult, IsingError> {
    match point.size {
        SystemSize::Modes(m) => Ok(finite_sum_matrices(point.h, point.beta, m)?.full()),
        SystemSize::Thermodynamic => Err(IsingError::DomainError(
            "finite_sum needs a finite number of modes".into(),
        )),
    }
}

pub fn thermo_limit(point: &IsingPoint, settings: QuadSettings) -> Result<EstimationResult, IsingError> {
    Ok(thermo_limit_matrices(point.h, point.beta, settings)?.full())
}
