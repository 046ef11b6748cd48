use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::estimation::EstimationResult;
use crate::ising::{evaluate, IsingPoint, ParameterSet, QuadSettings, SystemSize, LABELS};

/// Rectangular `(h, T)` grid over the Ising phase diagram, `T = 1/beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub h: Vec<f64>,
    pub t: Vec<f64>,
    pub set: ParameterSet,
    #[serde(default = "thermodynamic")]
    pub size: SystemSize,
}

fn thermodynamic() -> SystemSize {
    SystemSize::Thermodynamic
}

impl SweepGrid {
    pub fn new(h: Vec<f64>, t: Vec<f64>, set: ParameterSet, size: SystemSize) -> Result<Self, AnalysisError> {
        let grid = Self { h, t, set, size };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.h.is_empty() || self.t.is_empty() {
            return Err(AnalysisError::InvalidGrid("grid is empty".into()));
        }
        if let Some(t) = self.t.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(AnalysisError::InvalidGrid(format!("temperatures must be finite and > 0, got {t}")));
        }
        if self.h.iter().any(|h| !h.is_finite()) {
            return Err(AnalysisError::InvalidGrid("fields must be finite".into()));
        }
        for (name, v) in [("h", &self.h), ("T", &self.t)] {
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(AnalysisError::InvalidGrid(format!("{name} values must be strictly ascending")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.h.len() * self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in h-major order.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.h
            .iter()
            .flat_map(|&h| self.t.iter().map(move |&t| (h, t)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub h: f64,
    pub t: f64,
    pub result: Option<EstimationResult>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn r(&self) -> Option<f64> {
        self.result.as_ref().and_then(|r| r.r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub set: ParameterSet,
    pub labels: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Numeric columns after `h, T`; see [`EstimationResult::csv_header`].
    pub fn value_columns(&self) -> Vec<String> {
        EstimationResult::csv_header(&self.labels)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

fn sweep_point(grid: &SweepGrid, h: f64, t: f64, settings: QuadSettings) -> SweepRow {
    let point = IsingPoint {
        h,
        phi: 0.0,
        beta: 1.0 / t,
        size: grid.size,
    };
    match evaluate(&point, settings) {
        Ok(m) => SweepRow {
            h,
            t,
            result: Some(m.select(grid.set)),
            error: None,
        },
        Err(e) => SweepRow {
            h,
            t,
            result: None,
            error: Some(e.to_string()),
        },
    }
}

/// Evaluates every grid point on the current rayon pool. Rows come back in
/// h-major order whatever the scheduling; failed points carry an error
/// message and no result.
pub fn sweep(grid: &SweepGrid, settings: QuadSettings) -> Result<SweepTable, AnalysisError> {
    grid.validate()?;
    let rows = grid
        .points()
        .into_par_iter()
        .map(|(h, t)| sweep_point(grid, h, t, settings))
        .collect();
    let labels = grid.set.indices().iter().map(|&i| LABELS[i].to_string()).collect();
    Ok(SweepTable {
        set: grid.set,
        labels,
        rows,
    })
}

/// [`sweep`] on a dedicated pool of `threads` workers.
pub fn sweep_with_threads(
    grid: &SweepGrid,
    settings: QuadSettings,
    threads: usize,
) -> Result<SweepTable, AnalysisError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| AnalysisError::InvalidGrid(format!("cannot build thread pool: {e}")))?;
    pool.install(|| sweep(grid, settings))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    ThermalDominated,
    FieldDominated,
    HighT,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossoverPoint {
    pub h: f64,
    pub t: f64,
    pub h_tilde: f64,
    pub regime: Regime,
}

/// Labels each temperature at field `h`. With `nu = z = 1` the crossover sits
/// at `h_tilde ~ T`; above ten times the bandwidth `1 + |h|` the point is
/// high-temperature.
pub fn crossover_report(h: f64, t_range: &[f64]) -> Vec<CrossoverPoint> {
    let h_tilde = (h.abs() - 1.0).abs();
    let bandwidth = 1.0 + h.abs();
    t_range
        .iter()
        .map(|&t| {
            let regime = if t >= 10.0 * bandwidth {
                Regime::HighT
            } else if h_tilde > t {
                Regime::FieldDominated
            } else {
                Regime::ThermalDominated
            };
            CrossoverPoint { h, t, h_tilde, regime }
        })
        .collect()
}
