use super::*;
use crate::spectral::{thermal_state, ComplexMatrix};
use crate::verify::{agreement_ratio, random_hermitian, RandomModel};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sigma_x() -> HermitianOperator {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = Complex64::new(1.0, 0.0);
    m[(1, 0)] = Complex64::new(1.0, 0.0);
    HermitianOperator::new(m).unwrap()
}

fn sigma_y() -> HermitianOperator {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = Complex64::new(0.0, -1.0);
    m[(1, 0)] = Complex64::new(0.0, 1.0);
    HermitianOperator::new(m).unwrap()
}

fn sigma_z() -> HermitianOperator {
    HermitianOperator::from_diagonal(&[1.0, -1.0])
}

fn mat(rows: &[&[f64]]) -> RealMatrix {
    let n = rows.len();
    RealMatrix::from_fn(n, n, |i, j| rows[i][j])
}

/// `(rho(H + d V) - rho(H - d V)) / 2d` computed from full Gibbs states.
fn finite_difference_rho(h: &HermitianOperator, v: &HermitianOperator, beta: f64) -> ComplexMatrix {
    let d = 1e-5;
    let plus = thermal_state(&h.add(&v.scale(d)), beta).unwrap().density_matrix();
    let minus = thermal_state(&h.sub(&v.scale(d)), beta).unwrap().density_matrix();
    (plus.matrix() - minus.matrix()).scale(0.5 / d)
}

fn anticommutator_half(rho: &ComplexMatrix, l: &ComplexMatrix) -> ComplexMatrix {
    (rho * l + l * rho).scale(0.5)
}

#[test]
fn constant_family_has_zero_sld() {
    let ens = thermal_state(&sigma_x(), 0.8).unwrap();
    let l = sld(&ens, &[HermitianOperator::zeros(2)]).unwrap();
    assert_eq!(l[0].max_abs(), 0.0);
    let j = qfim(&ens, &l).unwrap();
    assert_eq!(j[(0, 0)], 0.0);
}

#[test]
fn infinite_temperature_sld_has_no_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = random_hermitian(&mut rng, 4);
    let v = random_hermitian(&mut rng, 4);
    let ens = thermal_state(&h, 0.0).unwrap();
    let l = sld(&ens, &[v]).unwrap();
    let local = ens.decomposition().to_eigenbasis(&l[0]);
    for i in 0..4 {
        assert!(local[(i, i)].norm() < 1e-15);
    }
}

#[test]
fn qubit_sld_solves_lyapunov_equation() {
    // H = lambda sz at lambda = 1, plus a transverse direction for a non-commuting case.
    for (h, v) in [
        (sigma_z(), sigma_z()),
        (sigma_z(), sigma_x()),
        (sigma_z().add(&sigma_x().scale(0.3)), sigma_y()),
    ] {
        let ens = thermal_state(&h, 1.0).unwrap();
        let l = sld(&ens, &[v.clone()]).unwrap();
        let rho = ens.density_matrix();
        let lhs = anticommutator_half(rho.matrix(), l[0].matrix());
        let drho = finite_difference_rho(&h, &v, 1.0);
        assert!((lhs - drho).camax() < 1e-9);
        assert!(lyapunov_residual(&ens, &[v], &l).unwrap() <= 1e-10);
    }
}

#[test]
fn sld_matches_finite_difference_on_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let h = random_hermitian(&mut rng, 5);
        let v = random_hermitian(&mut rng, 5);
        let ens = thermal_state(&h, 0.7).unwrap();
        let l = sld(&ens, &[v.clone()]).unwrap();
        let lhs = anticommutator_half(ens.density_matrix().matrix(), l[0].matrix());
        assert!((lhs - finite_difference_rho(&h, &v, 0.7)).camax() < 1e-8);
    }
}

#[test]
fn qfim_diagonal_is_non_negative() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let m = RandomModel::sample(&mut rng, 6, 3);
        let ens = m.ensemble();
        let j = qfim(&ens, &sld(&ens, &m.dh).unwrap()).unwrap();
        for mu in 0..m.dh.len() {
            assert!(j[(mu, mu)] >= 0.0);
        }
    }
}

#[test]
fn sld_and_spectral_paths_agree_on_four_levels() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let h = random_hermitian(&mut rng, 4);
    let dh: Vec<_> = (0..3).map(|_| random_hermitian(&mut rng, 4)).collect();
    let ens = thermal_state(&h, 1.3).unwrap();
    let slds = sld(&ens, &dh).unwrap();
    let j = qfim(&ens, &slds[..2]).unwrap();
    let (jc, jq) = qfim_thermal_spectral(&ens, &dh[..2]).unwrap();
    assert!(agreement_ratio(&j, &(&jc + &jq), 1e-9) <= 1.0);
    let (u, residue) = muc_with_residue(&ens, &slds).unwrap();
    assert!(residue <= 1e-12);
    assert!(agreement_ratio(&u, &muc_thermal_spectral(&ens, &dh).unwrap(), 1e-9) <= 1.0);
    assert!(crate::linalg::skew_defect(&u) == 0.0);
}

#[test]
fn single_parameter_and_commuting_curvature_vanish() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let h = random_hermitian(&mut rng, 3);
    let v = random_hermitian(&mut rng, 3);
    let ens = thermal_state(&h, 1.0).unwrap();
    let u = muc(&ens, &sld(&ens, &[v.clone()]).unwrap()).unwrap();
    assert_eq!(u.shape(), (1, 1));
    assert_eq!(u[(0, 0)], 0.0);
    // Generators diagonal in the eigenbasis give commuting SLDs.
    let d1 = ens.decomposition().from_eigenbasis(&ComplexMatrix::from_diagonal(
        &nalgebra::DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(-0.5, 0.0), Complex64::new(0.2, 0.0)]),
    ));
    let d2 = ens.decomposition().from_eigenbasis(&ComplexMatrix::from_diagonal(
        &nalgebra::DVector::from_vec(vec![Complex64::new(0.3, 0.0), Complex64::new(0.9, 0.0), Complex64::new(-1.0, 0.0)]),
    ));
    let u = muc(&ens, &sld(&ens, &[d1.clone(), d2.clone()]).unwrap()).unwrap();
    assert!(u.amax() < 1e-14);
    let (_, jq) = qfim_thermal_spectral(&ens, &[d1, v]).unwrap();
    assert!(jq[(0, 0)].abs() < 1e-14 && jq[(0, 1)].abs() < 1e-14);
}

#[test]
fn proportional_generators_have_no_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let h = random_hermitian(&mut rng, 4);
    let v = random_hermitian(&mut rng, 4);
    let ens = thermal_state(&h, 2.0).unwrap();
    let u = muc_thermal_spectral(&ens, &[v.clone(), v.scale(-2.5)]).unwrap();
    assert!(u.amax() < 1e-14);
}

#[test]
fn infinite_temperature_spectral_sums_vanish() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let h = random_hermitian(&mut rng, 4);
    let dh: Vec<_> = (0..2).map(|_| random_hermitian(&mut rng, 4)).collect();
    let ens = thermal_state(&h, 0.0).unwrap();
    let (jc, jq) = qfim_thermal_spectral(&ens, &dh).unwrap();
    let u = muc_thermal_spectral(&ens, &dh).unwrap();
    let (jq_sf, u_sf) = structure_factor_paths(&ens, &dh).unwrap();
    for m in [jc, jq, u, jq_sf, u_sf] {
        assert_eq!(m.amax(), 0.0);
    }
    let ht = high_t_approximation(&ens, &dh).unwrap();
    assert_eq!(ht.jc.amax() + ht.jq.amax() + ht.u.amax(), 0.0);
}

#[test]
fn two_level_quantum_fisher_information() {
    // H = diag(0, 1), dH = sx, beta = 1. Both ordered pairs contribute
    // (p0 - p1)^2 / (p0 + p1) with weight 2, i.e. 4 (p0 - p1)^2 in total;
    // the same value is Tr(rho L^2) of the explicit SLD.
    let h = HermitianOperator::from_diagonal(&[0.0, 1.0]);
    let ens = thermal_state(&h, 1.0).unwrap();
    let p0 = 1.0 / (1.0 + (-1.0f64).exp());
    let p1 = 1.0 - p0;
    let (_, jq) = qfim_thermal_spectral(&ens, &[sigma_x()]).unwrap();
    let expected = 2.0 * 2.0 * (p0 - p1).powi(2) / (p0 + p1);
    assert!((jq[(0, 0)] - expected).abs() < 1e-14);
    let l01 = 2.0 * (p0 - p1) / ((0.0 - 1.0) * (p0 + p1));
    let by_hand = (p0 + p1) * l01 * l01;
    assert!((jq[(0, 0)] - by_hand).abs() < 1e-14);
}

#[test]
fn structure_factor_single_transition() {
    let h = HermitianOperator::from_diagonal(&[0.0, 1.3]);
    let beta = 0.9;
    let ens = thermal_state(&h, beta).unwrap();
    let (p0, p1) = (ens.probabilities()[0], ens.probabilities()[1]);
    let t = (0.5 * beta * 1.3f64).tanh();
    assert!((t * t * (p0 + p1).powi(2) - (p0 - p1).powi(2)).abs() < 1e-15);
    let table = TransitionTable::build(&ens, &[sigma_x(), sigma_y()]).unwrap();
    assert_eq!(table.transitions.len(), 2);
    let (jq, u) = structure_factor_paths(&ens, &[sigma_x(), sigma_y()]).unwrap();
    let (_, jq_s) = qfim_thermal_spectral(&ens, &[sigma_x(), sigma_y()]).unwrap();
    let u_s = muc_thermal_spectral(&ens, &[sigma_x(), sigma_y()]).unwrap();
    assert!(agreement_ratio(&jq, &jq_s, 1e-12) <= 1.0);
    assert!(agreement_ratio(&u, &u_s, 1e-12) <= 1.0);
    assert!(u[(0, 1)].abs() > 0.1);
}

#[test]
fn structure_factor_matches_spectral_on_five_levels() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let h = random_hermitian(&mut rng, 5);
    let dh: Vec<_> = (0..3).map(|_| random_hermitian(&mut rng, 5)).collect();
    let ens = thermal_state(&h, 3.0).unwrap();
    let (jq_sf, u_sf) = structure_factor_paths(&ens, &dh).unwrap();
    let (_, jq) = qfim_thermal_spectral(&ens, &dh).unwrap();
    let u = muc_thermal_spectral(&ens, &dh).unwrap();
    assert!(agreement_ratio(&jq_sf, &jq, 1e-10) <= 1.0);
    assert!(agreement_ratio(&u_sf, &u, 1e-10) <= 1.0);
}

#[test]
fn transition_table_excludes_degenerate_pairs() {
    let h = HermitianOperator::from_diagonal(&[0.0, 0.0, 1.0]);
    let ens = thermal_state(&h, 1.0).unwrap();
    let v = HermitianOperator::from_diagonal(&[1.0, 2.0, 3.0]);
    let table = TransitionTable::build(&ens, &[v]).unwrap();
    for t in &table.transitions {
        assert!(t.omega.abs() > ens.decomposition().gap_tol());
    }
    assert_eq!(table.transitions.len(), 4);
}

#[test]
fn coupled_degenerate_levels_are_rejected() {
    let h = HermitianOperator::identity(2);
    let ens = thermal_state(&h, 1.0).unwrap();
    assert!(matches!(
        sld(&ens, &[sigma_x()]),
        Err(EstimationError::DegenerateBlockError { .. })
    ));
    assert!(sld(&ens, &[sigma_z()]).is_ok());
    assert!(matches!(
        sld(&ens, &[HermitianOperator::identity(3)]),
        Err(EstimationError::DimensionMismatch { expected: 2, got: 3 })
    ));
}

#[test]
fn high_temperature_error_is_first_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let h = random_hermitian(&mut rng, 4);
    let dh: Vec<_> = (0..2).map(|_| random_hermitian(&mut rng, 4)).collect();
    let rel_err = |beta: f64| {
        let ens = thermal_state(&h, beta).unwrap();
        let (jc, jq) = qfim_thermal_spectral(&ens, &dh).unwrap();
        let u = muc_thermal_spectral(&ens, &dh).unwrap();
        let ht = high_t_approximation(&ens, &dh).unwrap();
        let ej = (&ht.jc + &ht.jq - (&jc + &jq)).amax() / (&jc + &jq).amax();
        let eu = (&ht.u - &u).amax() / u.amax();
        (ej, eu)
    };
    let (j1, u1) = rel_err(1e-3);
    let (j2, u2) = rel_err(5e-4);
    assert!(j1 < 1e-2 && u1 < 1e-2);
    assert!((j1 / j2 - 2.0).abs() < 0.05, "J ratio {}", j1 / j2);
    assert!((u1 / u2 - 2.0).abs() < 0.05, "U ratio {}", u1 / u2);
}

#[test]
fn high_temperature_commuting_family() {
    let h = HermitianOperator::from_diagonal(&[0.0, 0.4, 1.1]);
    let ens = thermal_state(&h, 0.01).unwrap();
    let dh = [
        HermitianOperator::from_diagonal(&[1.0, 0.0, -1.0]),
        HermitianOperator::from_diagonal(&[0.2, 0.5, 0.1]),
    ];
    let ht = high_t_approximation(&ens, &dh).unwrap();
    assert_eq!(ht.jq.amax(), 0.0);
    assert_eq!(ht.u.amax(), 0.0);
    assert!(ht.jc[(0, 0)] > 0.0);
}

#[test]
fn r_measure_examples() {
    let j = RealMatrix::identity(2, 2);
    assert_eq!(r_measure(&j, &RealMatrix::zeros(2, 2)).unwrap(), 0.0);
    let u = mat(&[&[0.0, 0.5], &[-0.5, 0.0]]);
    assert!((r_measure(&j, &u).unwrap() - 1.0).abs() < 1e-15);
    let (j1, j2, x) = (2.0, 0.3, 0.17);
    let jd = mat(&[&[j1, 0.0], &[0.0, j2]]);
    let ud = mat(&[&[0.0, x], &[-x, 0.0]]);
    let expected = 2.0 * x / (j1 * j2 as f64).sqrt();
    assert!((r_measure(&jd, &ud).unwrap() - expected).abs() < 1e-14);
    assert!((r_two_param(&jd, &ud).unwrap() - expected).abs() < 1e-14);
}

#[test]
fn r_measure_projects_out_null_directions() {
    let j = mat(&[&[1.0, 0.0, 0.0], &[0.0, 4.0, 0.0], &[0.0, 0.0, 0.0]]);
    let u = mat(&[&[0.0, 0.5, 0.0], &[-0.5, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
    let (r, rank) = r_measure_ranked(&j, &u).unwrap();
    assert_eq!(rank, 2);
    assert!((r - 0.5).abs() < 1e-14);
    assert_eq!(
        r_measure(&RealMatrix::zeros(2, 2), &RealMatrix::zeros(2, 2)),
        Err(EstimationError::SingularFisher)
    );
}

#[test]
fn two_parameter_form_rejects_other_sizes() {
    let j = RealMatrix::identity(3, 3);
    assert!(matches!(
        r_two_param(&j, &RealMatrix::zeros(3, 3)),
        Err(EstimationError::DimensionError { .. })
    ));
}

#[test]
fn robertson_margin() {
    let j = mat(&[&[2.0, 0.3], &[0.3, 1.0]]);
    let c = robertson_check(&j, &RealMatrix::zeros(2, 2)).unwrap();
    assert!((c.margin - j.determinant()).abs() < 1e-15);
    assert!(c.passed);
    let sat = robertson_check(&RealMatrix::identity(2, 2), &mat(&[&[0.0, 0.5], &[-0.5, 0.0]])).unwrap();
    assert!(sat.margin.abs() < 1e-10 && sat.passed);
    let bad = robertson_check(&RealMatrix::identity(2, 2), &mat(&[&[0.0, 0.6], &[-0.6, 0.0]])).unwrap();
    assert!(!bad.passed);
}

#[test]
fn tilde_z_examples() {
    let j = mat(&[&[2.0, 0.3], &[0.3, 1.0]]);
    let tz = tilde_z(&j, &RealMatrix::zeros(2, 2)).unwrap();
    let j_inv = j.clone().try_inverse().unwrap();
    for a in 0..2 {
        for b in 0..2 {
            assert!((tz.z[(a, b)].re - j_inv[(a, b)]).abs() < 1e-14);
            assert_eq!(tz.z[(a, b)].im, 0.0);
        }
    }
    let sat = tilde_z(&RealMatrix::identity(2, 2), &mat(&[&[0.0, 0.5], &[-0.5, 0.0]])).unwrap();
    assert!(sat.positivity_eigenvalues[0].abs() < 1e-14);
    assert!((sat.positivity_eigenvalues[1] - 2.0).abs() < 1e-14);
    assert!(sat.positive);
    assert_eq!(
        tilde_z(&mat(&[&[1.0, 0.0], &[0.0, 0.0]]), &RealMatrix::zeros(2, 2)).unwrap_err(),
        EstimationError::SingularFisher
    );
}

#[test]
fn discrepancy_bound_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let m = RandomModel::sample(&mut rng, 5, 3);
    let ens = m.ensemble();
    let res = estimate(&ens, &m.dh, crate::verify::labels(m.dh.len())).unwrap();
    let n = res.n_params() as f64;
    let r = res.r.unwrap();
    let d = discrepancy_bound(&res.j, &res.u, &res.j).unwrap();
    assert!((d.bound - n * r).abs() < 1e-10 * n.max(1.0));
    assert!(d.chain_holds);
    let zero = discrepancy_bound(&res.j, &RealMatrix::zeros(res.j.nrows(), res.j.nrows()), &res.j).unwrap();
    assert_eq!(zero.bound, 0.0);
    let bad_w = -RealMatrix::identity(res.j.nrows(), res.j.nrows());
    assert_eq!(discrepancy_bound(&res.j, &res.u, &bad_w).unwrap_err(), EstimationError::InvalidWeight);
}

#[test]
fn result_json_round_trip_and_csv_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let m = RandomModel::sample(&mut rng, 4, 3);
    let res = estimate(&m.ensemble(), &m.dh, crate::verify::labels(m.dh.len())).unwrap();
    let text = serde_json::to_string(&res).unwrap();
    let back: EstimationResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back, res);
    assert_eq!(EstimationResult::csv_header(&res.labels).len(), res.csv_values().len());
    let sub = res.restrict(&[0]);
    assert_eq!(sub.n_params(), 1);
    assert_eq!(sub.j[(0, 0)], res.j[(0, 0)]);
}
