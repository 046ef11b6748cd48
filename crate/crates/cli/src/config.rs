//! JSON run configuration.

use std::path::PathBuf;

use serde::Deserialize;

use qincompat::analysis::{lin_space, log_space};
use qincompat::ising::{ParameterSet, SystemSize};

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; must match the subcommand when present.
    pub command: Option<String>,
    pub model: Option<ModelSpec>,
    pub parameters: Option<ParamSelector>,
    pub grid: Option<GridSpec>,
    pub scaling: Option<ScalingSpec>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub oracle: Option<OracleSpec>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn check_command(&self, name: &str) -> Result<(), CliError> {
        match &self.command {
            Some(c) if c != name => Err(CliError::Config(format!(
                "config is for command '{c}' but '{name}' was requested"
            ))),
            _ => Ok(()),
        }
    }
}

/// Exactly one of `{"ising": {...}}` or `{"generic": {...}}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Ising(IsingSpec),
    Generic(GenericSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsingSpec {
    pub h: f64,
    #[serde(default)]
    pub phi: f64,
    /// Inverse temperature; give either this or `T`.
    pub beta: Option<f64>,
    /// Temperature; `0` selects the zero-temperature proxy.
    #[serde(rename = "T")]
    pub t: Option<f64>,
    #[serde(default = "thermodynamic")]
    pub size: SystemSize,
}

fn thermodynamic() -> SystemSize {
    SystemSize::Thermodynamic
}

impl IsingSpec {
    pub fn resolve_beta(&self, beta_zero_proxy: f64) -> Result<f64, CliError> {
        match (self.beta, self.t) {
            (Some(b), None) => Ok(b),
            (None, Some(0.0)) => Ok(beta_zero_proxy),
            (None, Some(t)) if t > 0.0 && t.is_finite() => Ok(1.0 / t),
            (None, Some(t)) => Err(CliError::Config(format!("T must be finite and >= 0, got {t}"))),
            (Some(_), Some(_)) => Err(CliError::Config("give either beta or T, not both".into())),
            (None, None) => Err(CliError::Config("ising model needs beta or T".into())),
        }
    }
}

/// A matrix entry: a real number or `[re, im]`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn parts(self) -> [f64; 2] {
        match self {
            Entry::Real(x) => [x, 0.0],
            Entry::Complex(z) => z,
        }
    }
}

pub type MatrixRows = Vec<Vec<Entry>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericSpec {
    pub hamiltonian: MatrixRows,
    /// One matrix per parameter.
    pub derivatives: Vec<MatrixRows>,
    pub beta: f64,
    pub labels: Option<Vec<String>>,
}

/// A named Ising parameter set, or a list of generic parameter labels.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ParamSelector {
    Set(ParameterSet),
    Labels(Vec<String>),
}

impl ParamSelector {
    pub fn ising_set(sel: Option<&Self>) -> Result<ParameterSet, CliError> {
        match sel {
            None => Ok(ParameterSet::HPhi),
            Some(ParamSelector::Set(s)) => Ok(*s),
            Some(ParamSelector::Labels(l)) => Err(CliError::Config(format!(
                "ising models take a named parameter set (h_phi, beta_h_phi, h_phi_quantum), got {l:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Axis {
    Values(Vec<f64>),
    Linear { from: f64, to: f64, n: usize },
    Log { from: f64, to: f64, n: usize },
}

impl Axis {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        match *self {
            Axis::Values(ref v) => Ok(v.clone()),
            Axis::Linear { from, to, n } => Ok(lin_space(from, to, n)),
            Axis::Log { from, to, n } => {
                if !(from > 0.0 && to > 0.0) {
                    return Err(CliError::Config("log axis bounds must be positive".into()));
                }
                Ok(log_space(from, to, n))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub h: Axis,
    #[serde(rename = "T")]
    pub t: Axis,
    #[serde(default = "thermodynamic")]
    pub size: SystemSize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scan {
    /// `R(T)` on the critical line `h = 1`.
    CriticalT,
    /// `R(h_tilde)` at zero temperature.
    Field,
    /// `(x, R)` read from a CSV file.
    Data,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitForm {
    Fixed,
    LogPower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    #[default]
    Below,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroT {
    /// Closed-form `T = 0` matrices.
    #[default]
    Analytic,
    /// Thermodynamic limit at `beta = beta_zero_proxy`.
    Proxy,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingSpec {
    pub scan: Scan,
    pub form: Option<FitForm>,
    pub window: Option<[f64; 2]>,
    pub points: Option<usize>,
    #[serde(default)]
    pub side: Side,
    #[serde(default)]
    pub zero_t: ZeroT,
    /// `c` of the log-power form; defaults to `8 e^-2`.
    pub c: Option<f64>,
    pub input: Option<PathBuf>,
    pub x_column: Option<String>,
    pub r_column: Option<String>,
    /// Keep only rows whose `h` column equals this value.
    pub select_h: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    /// File stem for the written artifacts.
    pub name: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub quad_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub beta_zero_proxy: Option<f64>,
    /// Relative tolerance of the cross-path oracle.
    pub oracle_rel: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    pub seed: Option<u64>,
    pub models: Option<usize>,
    pub pairs: Option<usize>,
}
