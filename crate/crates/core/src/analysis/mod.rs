//! Phase-diagram sweeps and critical-scaling fits.

mod fit;
mod sweep;

use thiserror::Error;

use crate::ising::IsingError;

pub use fit::{
    critical_t_scan, fit_fixed_form, fit_log_power, fixed_form, zero_t_scan, ScalingFit, FIXED_FORM_C,
    FIXED_FORM_MIN_POINTS, FIXED_FORM_SHIFT, LOG_POWER_MIN_DECADES, LOG_POWER_MIN_POINTS,
};
pub use sweep::{
    crossover_report, sweep, sweep_with_threads, CrossoverPoint, Regime, SweepGrid, SweepRow, SweepTable,
};

/// Default scaling window, both in `h_tilde = ||h| - 1|` and in `T`.
pub const FIT_WINDOW: (f64, f64) = (1e-4, 1e-2);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("data must span at least {needed} decades, spans {got:.3}")]
    InsufficientSpan { needed: f64, got: f64 },
    #[error("point {index} outside the fit domain: {reason}")]
    OutOfDomain { index: usize, reason: String },
    #[error("least-squares system is singular or ill-conditioned (condition {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Ising(#[from] IsingError),
}

/// `n` points from `a` to `b` inclusive, evenly spaced in `log10`.
pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => {
            let (la, lb) = (a.log10(), b.log10());
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        b
                    } else {
                        10f64.powf(la + (lb - la) * i as f64 / (n - 1) as f64)
                    }
                })
                .collect()
        }
    }
}

pub fn lin_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}
