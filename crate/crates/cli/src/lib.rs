//! Library side of the `qincompat` command-line tool: configuration, CSV
//! tables, SVG figures and the subcommands themselves.

pub mod commands;
pub mod config;
pub mod svg;
pub mod table;

use std::path::PathBuf;

use thiserror::Error;

use qincompat::analysis::AnalysisError;
use qincompat::ising::{IsingError, QuadSettings};
use qincompat::EstimationError;

pub use commands::{cmd_oracle, cmd_point, cmd_scaling, cmd_sweep};
pub use config::RunConfig;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<EstimationError> for CliError {
    fn from(e: EstimationError) -> Self {
        match e {
            EstimationError::DimensionMismatch { .. }
            | EstimationError::DimensionError { .. }
            | EstimationError::Spectral(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<IsingError> for CliError {
    fn from(e: IsingError) -> Self {
        match e {
            IsingError::InvalidBeta(_) | IsingError::InvalidSize(_) | IsingError::DomainError(_) => {
                CliError::Config(e.to_string())
            }
            IsingError::Estimation(inner) => inner.into(),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::IllConditioned { .. } => CliError::Numerical(e.to_string()),
            AnalysisError::Ising(inner) => inner.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}

/// Settings shared by all subcommands after merging flags over the config.
#[derive(Debug, Clone)]
pub struct Settings {
    pub out: PathBuf,
    pub quad: QuadSettings,
    pub beta_zero_proxy: f64,
    pub oracle_rel: f64,
}

pub const DEFAULT_BETA_ZERO_PROXY: f64 = 1e4;
pub const DEFAULT_ORACLE_REL: f64 = 1e-8;

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub quad_tol: Option<f64>,
    pub beta_zero_proxy: Option<f64>,
}

impl Settings {
    pub fn resolve(cfg: &RunConfig, ov: &Overrides) -> Result<Self, CliError> {
        let t = &cfg.tolerances;
        let defaults = QuadSettings::default();
        let quad = QuadSettings {
            tol: ov.quad_tol.or(t.quad_tol).unwrap_or(defaults.tol),
            max_subdivisions: t.max_subdivisions.unwrap_or(defaults.max_subdivisions),
        };
        if !(quad.tol > 0.0 && quad.tol.is_finite()) {
            return Err(CliError::Config(format!("quadrature tolerance must be > 0, got {}", quad.tol)));
        }
        let beta_zero_proxy = ov.beta_zero_proxy.or(t.beta_zero_proxy).unwrap_or(DEFAULT_BETA_ZERO_PROXY);
        if !(beta_zero_proxy > 0.0 && beta_zero_proxy.is_finite()) {
            return Err(CliError::Config(format!("beta-zero-proxy must be > 0, got {beta_zero_proxy}")));
        }
        Ok(Self {
            out: ov.out.clone().or_else(|| cfg.output.dir.clone()).unwrap_or_else(|| PathBuf::from(".")),
            quad,
            beta_zero_proxy,
            oracle_rel: t.oracle_rel.unwrap_or(DEFAULT_ORACLE_REL),
        })
    }
}
