use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::ising::{thermo_limit_matrices, zero_t_analytic, ParameterSet, QuadSettings};

pub const FIXED_FORM_C: f64 = 8.0;
pub const FIXED_FORM_SHIFT: f64 = -2.0;
pub const FIXED_FORM_MIN_POINTS: usize = 5;
pub const LOG_POWER_MIN_POINTS: usize = 8;
pub const LOG_POWER_MIN_DECADES: f64 = 2.0;

/// Smallest singular value of the log-space design, relative to the largest,
/// accepted by [`fit_log_power`].
const RCOND: f64 = 1e-12;

/// Result of a scaling fit `R = A (log(c/x) + shift)^q x^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub form: String,
    pub amplitude: f64,
    pub power: f64,
    pub log_power: f64,
    /// Constants held fixed during the fit (`c`, `shift`).
    pub offsets: BTreeMap<String, f64>,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    /// `[min x, max x]` of the fitted data.
    pub window: [f64; 2],
    pub points: usize,
    /// Parameter covariance. Order `(A)` for the fixed form and
    /// `(log A, p, q)` for the log-power form.
    pub covariance: Vec<Vec<f64>>,
    /// Ratio of extreme singular values of the design matrix.
    pub condition: f64,
}

/// `A (log(8/T) - 2) sqrt(T)`.
pub fn fixed_form(a: f64, t: f64) -> f64 {
    a * ((FIXED_FORM_C / t).ln() + FIXED_FORM_SHIFT) * t.sqrt()
}

fn window(data: &[(f64, f64)]) -> [f64; 2] {
    data.iter()
        .fold([f64::INFINITY, f64::NEG_INFINITY], |w, &(x, _)| [w[0].min(x), w[1].max(x)])
}

/// Linear least squares in `A` for the fixed critical form.
///
/// Every `T` must satisfy `0 < T < 8 e^-2` so that the log factor is
/// positive. The residual is taken in log space when every `R` and the
/// fitted amplitude are positive, and in linear space otherwise.
pub fn fit_fixed_form(data: &[(f64, f64)]) -> Result<ScalingFit, AnalysisError> {
    if data.len() < FIXED_FORM_MIN_POINTS {
        return Err(AnalysisError::InsufficientData {
            needed: FIXED_FORM_MIN_POINTS,
            got: data.len(),
        });
    }
    let t_max = FIXED_FORM_C * FIXED_FORM_SHIFT.exp();
    let mut basis = Vec::with_capacity(data.len());
    for (i, &(t, r)) in data.iter().enumerate() {
        if !(t.is_finite() && t > 0.0 && t < t_max) {
            return Err(AnalysisError::OutOfDomain {
                index: i,
                reason: format!("T = {t} not in (0, {t_max})"),
            });
        }
        if !r.is_finite() {
            return Err(AnalysisError::OutOfDomain {
                index: i,
                reason: format!("R = {r} is not finite"),
            });
        }
        basis.push(fixed_form(1.0, t));
    }
    let ff: f64 = basis.iter().map(|f| f * f).sum();
    let rf: f64 = data.iter().zip(&basis).map(|(&(_, r), f)| r * f).sum();
    let a = rf / ff;

    let n = data.len() as f64;
    let linear_rss: f64 = data.iter().zip(&basis).map(|(&(_, r), f)| (r - a * f).powi(2)).sum();
    let residual = if a > 0.0 && data.iter().all(|&(_, r)| r > 0.0) {
        let s: f64 = data.iter().zip(&basis).map(|(&(_, r), f)| (r / (a * f)).ln().powi(2)).sum();
        (s / n).sqrt()
    } else {
        (linear_rss / n).sqrt()
    };
    let var_a = linear_rss / (n - 1.0) / ff;

    Ok(ScalingFit {
        form: "fixed".into(),
        amplitude: a,
        power: 0.5,
        log_power: 1.0,
        offsets: BTreeMap::from([("c".to_string(), FIXED_FORM_C), ("shift".to_string(), FIXED_FORM_SHIFT)]),
        residual,
        window: window(data),
        points: data.len(),
        covariance: vec![vec![var_a]],
        condition: 1.0,
    })
}

/// Fits `log R = log A + q log log(c/x) + p log x`.
///
/// The model is linear in `(log A, p, q)`, so the log-space least-squares
/// problem is solved directly by SVD; no iteration is involved. Needs at
/// least 8 points spanning 2 decades with `0 < x < c` and `R > 0`.
pub fn fit_log_power(data: &[(f64, f64)], c: f64) -> Result<ScalingFit, AnalysisError> {
    if data.len() < LOG_POWER_MIN_POINTS {
        return Err(AnalysisError::InsufficientData {
            needed: LOG_POWER_MIN_POINTS,
            got: data.len(),
        });
    }
    for (i, &(x, r)) in data.iter().enumerate() {
        if !(x.is_finite() && x > 0.0 && x < c) {
            return Err(AnalysisError::OutOfDomain {
                index: i,
                reason: format!("x = {x} not in (0, {c})"),
            });
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(AnalysisError::OutOfDomain {
                index: i,
                reason: format!("R = {r} must be finite and positive"),
            });
        }
    }
    let w = window(data);
    let decades = (w[1] / w[0]).log10();
    if decades < LOG_POWER_MIN_DECADES {
        return Err(AnalysisError::InsufficientSpan {
            needed: LOG_POWER_MIN_DECADES,
            got: decades,
        });
    }

    let n = data.len();
    let design = DMatrix::from_fn(n, 3, |i, j| {
        let x = data[i].0;
        match j {
            0 => 1.0,
            1 => x.ln(),
            _ => (c / x).ln().ln(),
        }
    });
    let y = DVector::from_iterator(n, data.iter().map(|&(_, r)| r.ln()));

    let svd = design.clone().svd(true, true);
    let s = &svd.singular_values;
    let (smax, smin) = (s.max(), s.min());
    let condition = smax / smin;
    if !(smin > RCOND * smax) {
        return Err(AnalysisError::IllConditioned { condition });
    }
    let coef = svd
        .solve(&y, 0.0)
        .map_err(|_| AnalysisError::IllConditioned { condition })?;

    let resid = &y - &design * &coef;
    let rss = resid.norm_squared();
    let residual = (rss / n as f64).sqrt();
    let sigma2 = if n > 3 { rss / (n - 3) as f64 } else { 0.0 };
    // (X^T X)^-1 = V S^-2 V^T
    let v_t = svd.v_t.as_ref().expect("V^T requested");
    let cov = DMatrix::from_fn(3, 3, |a, b| {
        (0..3).map(|k| v_t[(k, a)] * v_t[(k, b)] / (s[k] * s[k])).sum::<f64>() * sigma2
    });

    Ok(ScalingFit {
        form: "log_power".into(),
        amplitude: coef[0].exp(),
        power: coef[1],
        log_power: coef[2],
        offsets: BTreeMap::from([("c".to_string(), c)]),
        residual,
        window: w,
        points: n,
        covariance: (0..3).map(|a| (0..3).map(|b| cov[(a, b)]).collect()).collect(),
        condition,
    })
}

/// Zero-temperature `R` of the `(h, phi)` model at `h = 1 + h_tilde`
/// (`above`) or `h = 1 - h_tilde`.
pub fn zero_t_scan(h_tilde: &[f64], above: bool) -> Result<Vec<(f64, f64)>, AnalysisError> {
    h_tilde
        .iter()
        .map(|&x| {
            let h = if above { 1.0 + x } else { 1.0 - x };
            Ok((x, zero_t_analytic(h)?.r0))
        })
        .collect()
}

/// Thermodynamic-limit `R(T)` of the `(h, phi)` model on the critical line
/// `h = 1`, evaluated in parallel. Points keep the order of `t`.
pub fn critical_t_scan(t: &[f64], settings: QuadSettings) -> Result<Vec<(f64, f64)>, AnalysisError> {
    t.par_iter()
        .map(|&t| {
            let res = thermo_limit_matrices(1.0, 1.0 / t, settings)?.select(ParameterSet::HPhi);
            let r = res.r.ok_or_else(|| AnalysisError::OutOfDomain {
                index: 0,
                reason: format!("R undefined at T = {t}"),
            })?;
            Ok((t, r))
        })
        .collect()
}
