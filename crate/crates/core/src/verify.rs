//! Randomized verification suites shared by the test targets and the
//! `oracle` subcommand.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::estimation::{
    self, muc, muc_thermal_spectral, qfim, qfim_thermal_spectral, r_measure, r_two_param,
    robertson_check, sld, structure_factor_paths, tilde_z, EstimationError,
};
use crate::linalg::RealMatrix;
use crate::spectral::{thermal_state, ComplexMatrix, HermitianOperator, ThermalEnsemble};

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> HermitianOperator {
    let m = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    HermitianOperator::symmetrized(m)
}

/// A Hamiltonian, its parameter derivatives and an inverse temperature.
#[derive(Debug, Clone)]
pub struct RandomModel {
    pub h: HermitianOperator,
    pub dh: Vec<HermitianOperator>,
    pub beta: f64,
}

impl RandomModel {
    /// `dim` in `2..=max_dim`, `N` in `1..=min(max_params, dim^2 - 1)`,
    /// `beta` log-uniform in `[0.01, 10]`.
    pub fn sample(rng: &mut impl Rng, max_dim: usize, max_params: usize) -> Self {
        let dim = rng.gen_range(2..=max_dim);
        let n = rng.gen_range(1..=max_params.min(dim * dim - 1));
        let h = random_hermitian(rng, dim);
        let dh = (0..n).map(|_| random_hermitian(rng, dim)).collect();
        let beta = 10f64.powf(rng.gen_range(-2.0..1.0));
        Self { h, dh, beta }
    }

    pub fn ensemble(&self) -> ThermalEnsemble {
        thermal_state(&self.h, self.beta).expect("random model has valid beta")
    }
}

/// `|a - b| <= rel * max(|a|, |b|) + 1e-12 * scale` entrywise, where `scale`
/// is the largest entry of either matrix. Returns the worst ratio of the
/// deviation to its allowance, so values `<= 1` pass.
pub fn agreement_ratio(a: &RealMatrix, b: &RealMatrix, rel: f64) -> f64 {
    let scale = a.amax().max(b.amax());
    let floor = 1e-12 * scale;
    a.iter().zip(b.iter()).fold(0.0_f64, |worst, (&x, &y)| {
        let allowance = rel * x.abs().max(y.abs()) + floor;
        let dev = (x - y).abs();
        let ratio = if allowance > 0.0 { dev / allowance } else if dev == 0.0 { 0.0 } else { f64::INFINITY };
        worst.max(ratio)
    })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CrossPathReport {
    pub models: usize,
    /// Worst allowance ratio over SLD vs spectral vs structure-factor paths.
    pub worst_ratio: f64,
    pub failures: usize,
}

/// SLD, spectral-sum and structure-factor evaluation of one model; returns
/// the worst agreement ratio at relative tolerance `rel`.
pub fn cross_path_ratio(model: &RandomModel, rel: f64) -> Result<f64, EstimationError> {
    let ens = model.ensemble();
    let slds = sld(&ens, &model.dh)?;
    let j_sld = qfim(&ens, &slds)?;
    let u_sld = muc(&ens, &slds)?;
    let (jc, jq) = qfim_thermal_spectral(&ens, &model.dh)?;
    let u_spec = muc_thermal_spectral(&ens, &model.dh)?;
    let (jq_sf, u_sf) = structure_factor_paths(&ens, &model.dh)?;
    let j_spec = &jc + &jq;
    Ok([
        agreement_ratio(&j_sld, &j_spec, rel),
        agreement_ratio(&u_sld, &u_spec, rel),
        agreement_ratio(&jq_sf, &jq, rel),
        agreement_ratio(&u_sf, &u_spec, rel),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

pub fn cross_path_suite(seed: u64, count: usize, rel: f64) -> CrossPathReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CrossPathReport {
        models: count,
        ..Default::default()
    };
    for _ in 0..count {
        let model = RandomModel::sample(&mut rng, 8, 4);
        match cross_path_ratio(&model, rel) {
            Ok(r) => {
                report.worst_ratio = report.worst_ratio.max(r);
                if r > 1.0 {
                    report.failures += 1;
                }
            }
            Err(_) => report.failures += 1,
        }
    }
    report
}

/// Random well-conditioned reparametrization `A = I + 0.5 X`, `X_ij` uniform in `[-1, 1]`.
fn random_reparametrization(rng: &mut impl Rng, n: usize) -> RealMatrix {
    loop {
        let a = RealMatrix::from_fn(n, n, |i, j| {
            (if i == j { 1.0 } else { 0.0 }) + 0.5 * rng.gen_range(-1.0..1.0)
        });
        if a.determinant().abs() > 0.1 {
            return a;
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BoundReport {
    pub models: usize,
    pub max_r: f64,
    pub min_r: f64,
    /// Most negative `Det J - Det 2U`, relative to `max(1, Det J)`.
    pub worst_robertson: f64,
    pub robertson_failures: usize,
    pub min_positivity_eigenvalue: f64,
    pub positivity_failures: usize,
    pub max_reparam_deviation: f64,
    pub max_two_param_deviation: f64,
    pub errors: usize,
}

/// Runs on the same models as [`cross_path_suite`] with the same seed; the
/// reparametrizations come from a separate stream.
pub fn bound_suite(seed: u64, count: usize) -> BoundReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reparam_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut rep = BoundReport {
        models: count,
        min_r: f64::INFINITY,
        min_positivity_eigenvalue: f64::INFINITY,
        ..Default::default()
    };
    for _ in 0..count {
        let model = RandomModel::sample(&mut rng, 8, 4);
        let a = random_reparametrization(&mut reparam_rng, model.dh.len());
        let outcome = (|| -> Result<(), EstimationError> {
            let ens = model.ensemble();
            let res = estimation::estimate(&ens, &model.dh, labels(model.dh.len()))?;
            let r = r_measure(&res.j, &res.u)?;
            rep.max_r = rep.max_r.max(r);
            rep.min_r = rep.min_r.min(r);
            let rob = robertson_check(&res.j, &res.u)?;
            rep.worst_robertson = rep.worst_robertson.min(rob.margin / rob.det_j.abs().max(1.0));
            if !rob.passed {
                rep.robertson_failures += 1;
            }
            let tz = tilde_z(&res.j, &res.u)?;
            rep.min_positivity_eigenvalue = rep.min_positivity_eigenvalue.min(tz.positivity_eigenvalues[0]);
            if !tz.positive {
                rep.positivity_failures += 1;
            }
            let j2 = a.transpose() * &res.j * &a;
            let u2 = a.transpose() * &res.u * &a;
            let r2 = r_measure(&j2, &u2)?;
            rep.max_reparam_deviation = rep.max_reparam_deviation.max((r2 - r).abs());
            if res.n_params() == 2 {
                let rt = r_two_param(&res.j, &res.u)?;
                rep.max_two_param_deviation = rep.max_two_param_deviation.max((rt - r).abs());
            }
            Ok(())
        })();
        if outcome.is_err() {
            rep.errors += 1;
        }
    }
    rep
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("l{i}")).collect()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct PairSpaceReport {
    pub tuples: usize,
    /// Largest entrywise `|mode(k) + mode(-k) - oracle|` over `Jc`, `Jq`, `U`.
    pub max_deviation: f64,
    pub errors: usize,
}

/// Random `(k, h, phi, beta)` with `|k|` in `[0.05, pi - 0.05]`, `h` in
/// `[-2, 2]`, `beta` log-uniform in `[0.01, 10]`.
pub fn pair_space_suite(seed: u64, count: usize) -> PairSpaceReport {
    use crate::ising::{mode_matrices, pair_space_oracle};
    use std::f64::consts::PI;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = PairSpaceReport {
        tuples: count,
        ..Default::default()
    };
    for _ in 0..count {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let k = sign * rng.gen_range(0.05..PI - 0.05);
        let h = rng.gen_range(-2.0..2.0);
        let phi = rng.gen_range(0.0..2.0 * PI);
        let beta = 10f64.powf(rng.gen_range(-2.0..1.0));
        match pair_space_oracle(k, h, phi, beta) {
            Ok(res) => {
                let a = mode_matrices(k, h, beta);
                let b = mode_matrices(-k, h, beta);
                let dev = [
                    (&res.jc - (&a.jc + &b.jc)).amax(),
                    (&res.jq - (&a.jq + &b.jq)).amax(),
                    (&res.u - (&a.u + &b.u)).amax(),
                ]
                .into_iter()
                .fold(0.0, f64::max);
                rep.max_deviation = rep.max_deviation.max(dev);
            }
            Err(_) => rep.errors += 1,
        }
    }
    rep
}
