use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use qincompat::analysis::{
    critical_t_scan, fit_fixed_form, fit_log_power, fixed_form, log_space, sweep, zero_t_scan, ScalingFit,
    SweepGrid, FIT_WINDOW,
};
use qincompat::estimation::{estimate, robertson_check, tilde_z, RANK_TOL};
use qincompat::ising::{evaluate, thermo_limit_matrices, IsingPoint, ParameterSet, SystemSize};
use qincompat::linalg::sym_eigen;
use qincompat::spectral::{matrix_from_complex_rows, thermal_state, HermitianOperator};
use qincompat::verify::{bound_suite, cross_path_suite, labels, pair_space_suite};
use qincompat::EstimationResult;

use crate::config::{FitForm, GenericSpec, MatrixRows, ModelSpec, ParamSelector, RunConfig, Scan, Side, ZeroT};
use crate::{svg, table, CliError, Settings};

#[derive(Debug, Clone, Serialize)]
pub struct RobertsonReport {
    pub det_j: f64,
    pub det_2u: f64,
    pub margin: f64,
    pub passed: bool,
}

/// What `point` prints.
#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub model: &'static str,
    #[serde(flatten)]
    pub result: EstimationResult,
    /// The quantum part `Jq` of the selected model is rank deficient.
    pub quantum_singular: bool,
    pub robertson: Option<RobertsonReport>,
    /// Eigenvalues of `J + 2i U`; absent when `J` is singular.
    pub tilde_z_eigenvalues: Option<Vec<f64>>,
}

fn rank_deficient(m: &qincompat::linalg::RealMatrix) -> bool {
    let (w, _) = sym_eigen(m);
    let scale = w.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    scale == 0.0 || w.iter().any(|&x| x <= RANK_TOL * scale)
}

fn report(model: &'static str, result: EstimationResult) -> PointReport {
    let robertson = robertson_check(&result.j, &result.u).ok().map(|r| RobertsonReport {
        det_j: r.det_j,
        det_2u: r.det_2u,
        margin: r.margin,
        passed: r.passed,
    });
    let tilde_z_eigenvalues = if result.effective_rank == result.n_params() {
        tilde_z(&result.j, &result.u).ok().map(|t| t.positivity_eigenvalues)
    } else {
        None
    };
    PointReport {
        model,
        quantum_singular: rank_deficient(&result.jq),
        result,
        robertson,
        tilde_z_eigenvalues,
    }
}

fn operator(rows: &MatrixRows, what: &str) -> Result<HermitianOperator, CliError> {
    let parts: Vec<Vec<[f64; 2]>> = rows.iter().map(|r| r.iter().map(|e| e.parts()).collect()).collect();
    let m = matrix_from_complex_rows(&parts).map_err(|e| CliError::Config(format!("{what}: {e}")))?;
    HermitianOperator::new(m).map_err(|e| CliError::Config(format!("{what}: {e}")))
}

fn generic_result(spec: &GenericSpec, selector: Option<&ParamSelector>) -> Result<EstimationResult, CliError> {
    let h = operator(&spec.hamiltonian, "hamiltonian")?;
    let dh = spec
        .derivatives
        .iter()
        .enumerate()
        .map(|(i, m)| operator(m, &format!("derivative {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    if dh.is_empty() {
        return Err(CliError::Config("generic model needs at least one derivative".into()));
    }
    let names = spec.labels.clone().unwrap_or_else(|| labels(dh.len()));
    let ens = thermal_state(&h, spec.beta).map_err(|e| CliError::Config(e.to_string()))?;
    let full = estimate(&ens, &dh, names.clone())?;
    let res = match selector {
        None => full,
        Some(ParamSelector::Labels(keep)) => {
            let idx = keep
                .iter()
                .map(|k| {
                    names
                        .iter()
                        .position(|n| n == k)
                        .ok_or_else(|| CliError::Config(format!("unknown parameter '{k}'")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            full.restrict(&idx)
        }
        Some(ParamSelector::Set(s)) => {
            return Err(CliError::Config(format!(
                "named parameter set '{s}' only applies to ising models; list labels instead"
            )))
        }
    };
    Ok(res)
}

/// Evaluates one model point. A generic model whose Fisher matrix vanishes
/// is a numerical failure; an Ising point is always reported, with `R`
/// null when it is undefined.
pub fn cmd_point(cfg: &RunConfig, settings: &Settings) -> Result<PointReport, CliError> {
    cfg.check_command("point")?;
    match cfg.model.as_ref() {
        None => Err(CliError::Config("point needs a model".into())),
        Some(ModelSpec::Ising(spec)) => {
            let set = ParamSelector::ising_set(cfg.parameters.as_ref())?;
            let point = IsingPoint {
                h: spec.h,
                phi: spec.phi,
                beta: spec.resolve_beta(settings.beta_zero_proxy)?,
                size: spec.size,
            };
            let m = evaluate(&point, settings.quad)?;
            Ok(report("ising", m.select(set)))
        }
        Some(ModelSpec::Generic(spec)) => {
            let res = generic_result(spec, cfg.parameters.as_ref())?;
            if res.r.is_none() {
                return Err(qincompat::EstimationError::SingularFisher.into());
            }
            Ok(report("generic", res))
        }
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn size_name(size: SystemSize) -> String {
    match size {
        SystemSize::Modes(m) => format!("modes:{m}"),
        SystemSize::Thermodynamic => "thermodynamic".into(),
    }
}

/// Phase-diagram sweep; writes `<name>.csv` and `<name>.svg`. When some
/// points fail the files are still written and the error is returned
/// afterwards.
pub fn cmd_sweep(cfg: &RunConfig, settings: &Settings) -> Result<Value, CliError> {
    cfg.check_command("sweep")?;
    if matches!(cfg.model, Some(ModelSpec::Generic(_))) {
        return Err(CliError::Config("sweep supports the ising model only".into()));
    }
    let spec = cfg
        .grid
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep needs a grid".into()))?;
    let set = ParamSelector::ising_set(cfg.parameters.as_ref())?;
    let grid = SweepGrid::new(spec.h.values()?, spec.t.values()?, set, spec.size)?;
    ensure_dir(&settings.out)?;
    let name = cfg.output.name.clone().unwrap_or_else(|| format!("sweep_{set}"));
    let csv_path = settings.out.join(format!("{name}.csv"));
    let svg_path = settings.out.join(format!("{name}.svg"));

    let table = sweep(&grid, settings.quad)?;
    table::write_sweep(&csv_path, &table, &size_name(grid.size))?;
    let values: Vec<f64> = table.rows.iter().map(|r| r.r().unwrap_or(f64::NAN)).collect();
    let log_t = grid.t.len() > 1 && grid.t[grid.t.len() - 1] / grid.t[0] > 10.0;
    let fig = svg::heatmap(
        &grid.h,
        &grid.t,
        &values,
        log_t,
        &format!("R over (h, T), parameters {set}"),
        "h",
        "T",
    );
    write_file(&svg_path, &fig)?;

    let failures = table.failures();
    if failures > 0 {
        return Err(CliError::Numerical(format!(
            "{failures} of {} points failed; see the error column of {}",
            table.rows.len(),
            csv_path.display()
        )));
    }
    Ok(json!({
        "points": table.rows.len(),
        "failures": failures,
        "csv": csv_path,
        "svg": svg_path,
    }))
}

/// The default log-power constant `8 e^-2`, matching the fixed critical form.
pub fn default_log_c() -> f64 {
    8.0 * (-2.0f64).exp()
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub scan: &'static str,
    pub fit: ScalingFit,
    pub csv: PathBuf,
    pub svg: PathBuf,
    pub json: PathBuf,
}

/// Scaling fit. The data come from a critical-line `T` scan, a zero-`T`
/// field scan or a CSV file; writes `<name>.csv`, `<name>.svg` and
/// `<name>.json`.
pub fn cmd_scaling(cfg: &RunConfig, settings: &Settings) -> Result<ScalingReport, CliError> {
    cfg.check_command("scaling")?;
    let spec = cfg
        .scaling
        .as_ref()
        .ok_or_else(|| CliError::Config("scaling needs a 'scaling' section".into()))?;
    let window = spec.window.unwrap_or([FIT_WINDOW.0, FIT_WINDOW.1]);
    let points = spec.points.unwrap_or(21);
    let grid = || -> Result<Vec<f64>, CliError> {
        if !(window[0] > 0.0 && window[1] > window[0]) {
            return Err(CliError::Config(format!("invalid window {window:?}")));
        }
        Ok(log_space(window[0], window[1], points))
    };
    let (scan, x_name, data, default_form) = match spec.scan {
        Scan::CriticalT => ("critical_t", "T".to_string(), critical_t_scan(&grid()?, settings.quad)?, FitForm::Fixed),
        Scan::Field => {
            let x = grid()?;
            let above = spec.side == Side::Above;
            let data = match spec.zero_t {
                ZeroT::Analytic => zero_t_scan(&x, above)?,
                ZeroT::Proxy => x
                    .iter()
                    .map(|&x| {
                        let h = if above { 1.0 + x } else { 1.0 - x };
                        let r = thermo_limit_matrices(h, settings.beta_zero_proxy, settings.quad)?
                            .select(ParameterSet::HPhi)
                            .r
                            .ok_or_else(|| CliError::Numerical(format!("R undefined at h = {h}")))?;
                        Ok((x, r))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?,
            };
            ("field", "h_tilde".to_string(), data, FitForm::LogPower)
        }
        Scan::Data => {
            let input = spec
                .input
                .as_ref()
                .ok_or_else(|| CliError::Config("data scan needs 'input'".into()))?;
            let x_col = spec.x_column.clone().unwrap_or_else(|| "T".into());
            let r_col = spec.r_column.clone().unwrap_or_else(|| "R".into());
            let mut data = table::read_pairs(input, &x_col, &r_col, spec.select_h)?;
            if let Some(w) = spec.window {
                data.retain(|&(x, _)| x >= w[0] && x <= w[1]);
            }
            ("data", x_col, data, FitForm::LogPower)
        }
    };
    let form = spec.form.unwrap_or(default_form);
    let c = spec.c.unwrap_or_else(default_log_c);
    let fit = match form {
        FitForm::Fixed => fit_fixed_form(&data)?,
        FitForm::LogPower => fit_log_power(&data, c)?,
    };
    let model = |x: f64| match form {
        FitForm::Fixed => fixed_form(fit.amplitude, x),
        FitForm::LogPower => fit.amplitude * (c / x).ln().powf(fit.log_power) * x.powf(fit.power),
    };

    ensure_dir(&settings.out)?;
    let name = cfg.output.name.clone().unwrap_or_else(|| format!("scaling_{scan}"));
    let csv_path = settings.out.join(format!("{name}.csv"));
    let svg_path = settings.out.join(format!("{name}.svg"));
    let json_path = settings.out.join(format!("{name}.json"));
    table::write_scaling(&csv_path, &x_name, &data, model, &fit)?;

    let curve_x = log_space(fit.window[0], fit.window[1], 200);
    let curve: Vec<(f64, f64)> = curve_x.iter().map(|&x| (x, model(x))).collect();
    let fig = svg::loglog(
        &[
            svg::Series {
                label: "data",
                points: &data,
                color: "#1f77b4",
                markers: true,
            },
            svg::Series {
                label: "fit",
                points: &curve,
                color: "#d62728",
                markers: false,
            },
        ],
        &format!("{} fit: A = {:.4}, p = {:.4}, q = {:.4}", fit.form, fit.amplitude, fit.power, fit.log_power),
        &x_name,
        "R",
    );
    write_file(&svg_path, &fig)?;
    let report = ScalingReport {
        scan,
        fit,
        csv: csv_path,
        svg: svg_path,
        json: json_path.clone(),
    };
    let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Numerical(e.to_string()))?;
    write_file(&json_path, &text)?;
    Ok(report)
}

/// Randomized cross-path, bound and pair-space suites. Fails numerically
/// unless every suite passes.
pub fn cmd_oracle(cfg: &RunConfig, settings: &Settings) -> Result<Value, CliError> {
    cfg.check_command("oracle")?;
    let spec = cfg.oracle.clone().unwrap_or_default();
    let seed = spec.seed.unwrap_or(1);
    let models = spec.models.unwrap_or(1000);
    let pairs = spec.pairs.unwrap_or(50);
    let cross = cross_path_suite(seed, models, settings.oracle_rel);
    let bounds = bound_suite(seed, models);
    let pair = pair_space_suite(seed.wrapping_add(1), pairs);
    let cross_ok = cross.failures == 0;
    let bounds_ok = bounds.errors == 0
        && bounds.min_r >= 0.0
        && bounds.max_r <= 1.0 + 1e-9
        && bounds.robertson_failures == 0
        && bounds.positivity_failures == 0
        && bounds.max_reparam_deviation <= 1e-10;
    let pair_ok = pair.errors == 0 && pair.max_deviation <= 1e-9;
    let out = json!({
        "cross_path": cross,
        "bounds": bounds,
        "pair_space": pair,
        "passed": cross_ok && bounds_ok && pair_ok,
    });
    if cross_ok && bounds_ok && pair_ok {
        Ok(out)
    } else {
        Err(CliError::Numerical(format!("verification suites failed: {out}")))
    }
}
