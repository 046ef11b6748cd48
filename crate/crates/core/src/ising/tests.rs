use super::*;
use crate::estimation::{lyapunov_residual, muc, qfim};
use crate::quadrature::{integrate, QuadOptions};
use crate::spectral::{thermal_state, HermitianOperator};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

fn tl(h: f64, beta: f64) -> IsingMatrices {
    thermo_limit_matrices(h, beta, QuadSettings::default()).unwrap()
}

#[test]
fn dispersion_examples() {
    let m = dispersion(FRAC_PI_2, 0.0);
    assert!(m.eps.abs() < 1e-15 && (m.delta - 1.0).abs() < 1e-15 && (m.lambda - 1.0).abs() < 1e-15);
    let g = dispersion(0.0, 1.0);
    assert!(g.gapless && g.lambda == 0.0);
    let m = dispersion(FRAC_PI_3, 2.0);
    assert!((m.eps + 1.5).abs() < 1e-15);
    assert!((m.delta - 3f64.sqrt() / 2.0).abs() < 1e-15);
    assert!((m.lambda - 3f64.sqrt()).abs() < 1e-15);
}

#[test]
fn dispersion_invariants() {
    for i in 0..50 {
        let k = -PI + 2.0 * PI * (i as f64 + 0.5) / 50.0;
        for &h in &[-1.7, -1.0, 0.0, 0.3, 1.0, 2.5] {
            let m = dispersion(k, h);
            assert!(m.lambda >= m.eps.abs() && m.lambda >= m.delta.abs());
            assert!((m.lambda.powi(2) - m.eps.powi(2) - m.delta.powi(2)).abs() < 1e-14);
            assert!((m.eps - (k.cos() - h)).abs() < 1e-15);
        }
    }
}

#[test]
fn mode_matrices_structure() {
    for &k in &[0.0, PI] {
        let mm = mode_matrices(k, 0.4, 2.0);
        assert_eq!(mm.jq.amax(), 0.0);
        assert_eq!(mm.u.amax(), 0.0);
    }
    let mm = mode_matrices(0.8, 0.4, 1.3);
    for i in 0..3 {
        assert_eq!(mm.jc[(2, i)], 0.0);
        assert_eq!(mm.jc[(i, 2)], 0.0);
        assert_eq!(mm.jq[(0, i)], 0.0);
        assert_eq!(mm.u[(0, i)], 0.0);
    }
    assert_eq!(mm.jq[(1, 2)], 0.0);
    assert_eq!(mm.u[(1, 2)], -mm.u[(2, 1)]);
}

#[test]
fn mode_matrices_infinite_temperature() {
    let k = 1.1;
    let lam = dispersion(k, 0.6).lambda;
    let mm = mode_matrices(k, 0.6, 0.0);
    assert_eq!(mm.jq.amax(), 0.0);
    assert_eq!(mm.u.amax(), 0.0);
    assert!((mm.jc[(0, 0)] - 0.25 * lam * lam).abs() < 1e-15);
    assert_eq!(mm.jc[(0, 1)], 0.0);
    assert_eq!(mm.jc[(1, 1)], 0.0);
}

#[test]
fn mode_matrices_ground_state_at_zero_field() {
    let mm = mode_matrices(FRAC_PI_2, 0.0, 1e4);
    assert!((mm.jq[(1, 1)] - 0.5).abs() < 1e-15);
    assert!((mm.jq[(2, 2)] - 0.5).abs() < 1e-15);
    assert!((mm.u[(1, 2)].abs() - 0.25).abs() < 1e-15);
}

#[test]
fn gapless_mode_limits() {
    let mm = mode_matrices(0.0, 1.0, 3.0);
    assert_eq!(mm.jc[(0, 0)], 0.0);
    assert_eq!(mm.jc[(0, 1)], 0.0);
    assert_eq!(mm.jc[(1, 1)], 0.25 * 9.0);
    // Approaching h -> 1 on the k = 0 mode gives the same classical entries.
    for h in [1.0 - 1e-9, 1.0 + 1e-9] {
        let near = mode_matrices(0.0, h, 3.0);
        assert!((near.jc[(1, 1)] - 2.25).abs() < 1e-12);
        assert!(near.jc[(0, 1)].abs() < 1e-8 && near.jc[(0, 0)] < 1e-17);
    }
    assert!(sld_mode(0.0, 1.0, 0.0, 1.0, Param::H).is_err());
}

#[test]
fn sld_mode_examples() {
    let (k, h, phi, beta) = (0.9, 0.4, 0.7, 1.5);
    let m = dispersion(k, h);
    let (mv, eta) = sld_mode(k, h, phi, beta, Param::Phi).unwrap();
    let t = (beta * m.lambda).tanh();
    let st = m.theta.sin();
    let expected = [t * st * phi.sin(), -t * st * phi.cos(), 0.0];
    for i in 0..3 {
        assert!((mv[i] - expected[i]).abs() < 1e-15);
    }
    assert_eq!(eta, 0.0);
    let (mv, eta) = sld_mode(k, h, phi, 0.0, Param::H).unwrap();
    assert!(mv.iter().all(|&x| x == 0.0) && eta == 0.0);
}

/// `Lambda h_hat . S` with the same `h_hat` convention as `sld_mode`.
fn bloch_pair_hamiltonian(k: f64, h: f64, phi: f64) -> HermitianOperator {
    let m = dispersion(k, h);
    let s = bloch_operators();
    let (st, ct) = m.theta.sin_cos();
    s[0].scale(m.lambda * st * phi.cos())
        .add(&s[1].scale(m.lambda * st * phi.sin()))
        .add(&s[2].scale(m.lambda * ct))
}

#[test]
fn sld_mode_solves_lyapunov_and_reproduces_mode_blocks() {
    for &(k, h, phi, beta) in &[(0.9, 0.4, 0.7, 1.5), (2.3, 1.6, -0.2, 0.6), (0.3, 1.0, 1.1, 4.0)] {
        let rho = |b: f64, hh: f64, p: f64| {
            thermal_state(&bloch_pair_hamiltonian(k, hh, p), b).unwrap().density_matrix()
        };
        let d = 1e-5;
        let fd = [
            (rho(beta + d, h, phi).matrix() - rho(beta - d, h, phi).matrix()).scale(0.5 / d),
            (rho(beta, h + d, phi).matrix() - rho(beta, h - d, phi).matrix()).scale(0.5 / d),
            (rho(beta, h, phi + d).matrix() - rho(beta, h, phi - d).matrix()).scale(0.5 / d),
        ];
        let r0 = rho(beta, h, phi);
        let ens = thermal_state(&bloch_pair_hamiltonian(k, h, phi), beta).unwrap();
        let mut slds = Vec::new();
        for (mu, p) in Param::ALL.iter().enumerate() {
            let l = pair_sld(k, h, phi, beta, *p).unwrap();
            let anti = (r0.matrix() * l.matrix() + l.matrix() * r0.matrix()).scale(0.5);
            assert!((anti - &fd[mu]).camax() < 1e-8, "mu {mu}");
            slds.push(l);
        }
        let j = qfim(&ens, &slds).unwrap();
        let u = muc(&ens, &slds).unwrap();
        let mm = mode_matrices(k, h, beta);
        let two = (&mm.jc + &mm.jq).scale(2.0);
        assert!((j - two).amax() < 1e-10);
        assert!((u[(1, 2)].abs() - 2.0 * mm.u[(1, 2)].abs()).abs() < 1e-10);
    }
}

#[test]
fn pair_oracle_reference_point() {
    let res = pair_space_oracle(FRAC_PI_3, 0.7, 0.4, 2.0).unwrap();
    let expected_j = [
        [0.19542583, 0.09894979, 0.0],
        [0.09894979, 0.85684446, 0.0],
        [0.0, 0.0, 0.63732721],
    ];
    for a in 0..3 {
        for b in 0..3 {
            assert!((res.j[(a, b)] - expected_j[a][b]).abs() < 1e-8);
        }
    }
    assert!((res.u[(1, 2)] + 0.33860517).abs() < 1e-8);
    let mm = mode_matrices(FRAC_PI_3, 0.7, 2.0);
    let mm_neg = mode_matrices(-FRAC_PI_3, 0.7, 2.0);
    assert!((&res.jc - (&mm.jc + &mm_neg.jc)).amax() < 1e-9);
    assert!((&res.jq - (&mm.jq + &mm_neg.jq)).amax() < 1e-9);
    assert!((&res.u - (&mm.u + &mm_neg.u)).amax() < 1e-9);
}

#[test]
fn pair_oracle_limits() {
    let res = pair_space_oracle(1.2, 0.5, 0.3, 0.0).unwrap();
    assert!(res.jq.amax() < 1e-15 && res.u.amax() < 1e-15);
    let lam = dispersion(1.2, 0.5).lambda;
    assert!((res.jc[(0, 0)] - 0.5 * lam * lam).abs() < 1e-12);
    let a = pair_space_oracle(1.2, 0.5, 0.3, 1.7).unwrap();
    let b = pair_space_oracle(1.2, 0.5, 2.1, 1.7).unwrap();
    assert!((&a.j - &b.j).amax() < 1e-12);
    assert!((&a.u - &b.u).amax() < 1e-12);
    assert!(pair_space_oracle(0.0, 0.5, 0.0, 1.0).is_err());
}

#[test]
fn finite_sum_unrolled_two_modes() {
    let fs = finite_sum_matrices(0.0, 1.0, 2).unwrap();
    let grid = mode_grid(2).unwrap();
    assert_eq!(grid, vec![0.0, PI]);
    let a = mode_matrices(grid[0], 0.0, 1.0);
    let b = mode_matrices(grid[1], 0.0, 1.0);
    assert!((&fs.jc - (&a.jc + &b.jc).scale(0.5)).amax() < 1e-16);
    assert!((&fs.jq - (&a.jq + &b.jq).scale(0.5)).amax() < 1e-16);
    assert!(mode_grid(3).is_err() && mode_grid(0).is_err());
}

#[test]
fn finite_sum_converges_to_thermodynamic_limit() {
    let fs = finite_sum_matrices(0.5, 2.0, 512).unwrap();
    let th = tl(0.5, 2.0);
    assert!((&fs.jc - &th.jc).amax() < 1e-6);
    assert!((&fs.jq - &th.jq).amax() < 1e-6);
    assert!((&fs.u - &th.u).amax() < 1e-6);
    for &(h, beta) in &[(0.3, 10.0), (1.5, 5.0), (-0.4, 1.0)] {
        let fs = finite_sum_matrices(h, beta, 1024).unwrap();
        let th = tl(h, beta);
        let err = (&fs.jc - &th.jc).amax().max((&fs.jq - &th.jq).amax()).max((&fs.u - &th.u).amax());
        assert!(err < 1e-8, "h {h} beta {beta}: {err:e}");
        for m in [&fs.u, &th.u] {
            assert_eq!(m[(0, 1)], 0.0);
            assert_eq!(m[(0, 2)], 0.0);
        }
    }
}

#[test]
fn thermodynamic_limit_ground_state_at_zero_field() {
    let th = tl(0.0, 1e4);
    let r = th.select(ParameterSet::HPhi);
    assert!((r.j[(0, 0)] - 0.25).abs() < 1e-10);
    assert!((r.j[(1, 1)] - 0.25).abs() < 1e-10);
    assert!((r.u[(0, 1)].abs() - 0.125).abs() < 1e-10);
    assert!((r.r.unwrap() - 1.0).abs() < 1e-9);
    let hot = tl(0.7, 0.0);
    assert_eq!(hot.jq.amax(), 0.0);
    assert_eq!(hot.u.amax(), 0.0);
    assert!(hot.select(ParameterSet::HPhi).r.is_none());
    assert_eq!(hot.select(ParameterSet::BetaHPhi).r, Some(0.0));
    let para = tl(2.0, 1e4);
    assert!((para.jq[(2, 2)] - f_q(2.0) / 4.0).abs() < 1e-10);
    assert!((para.jq[(2, 2)] - 1.0 / 16.0).abs() < 1e-10);
}

#[test]
fn results_are_even_in_field() {
    for &beta in &[0.5, 3.0, 1e4] {
        let a = tl(0.6, beta).select(ParameterSet::HPhi).r.unwrap();
        let b = tl(-0.6, beta).select(ParameterSet::HPhi).r.unwrap();
        assert!((a - b).abs() < 1e-9, "beta {beta}: {a} vs {b}");
        let a = tl(1.4, beta).select(ParameterSet::BetaHPhi).r.unwrap();
        let b = tl(-1.4, beta).select(ParameterSet::BetaHPhi).r.unwrap();
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn elliptic_integrals() {
    let (k, e) = elliptic_ke(0.0).unwrap();
    assert!((k - FRAC_PI_2).abs() < 1e-15 && (e - FRAC_PI_2).abs() < 1e-15);
    let opts = QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-14,
        max_subdivisions: 500,
    };
    let m: f64 = 0.5;
    let direct = integrate(
        |t| {
            let s = 1.0 - m * t.sin().powi(2);
            vec![1.0 / s.sqrt(), s.sqrt()]
        },
        &[0.0, FRAC_PI_2],
        2,
        opts,
    )
    .unwrap();
    let (k, e) = elliptic_ke(m).unwrap();
    assert!((k - direct[0]).abs() < 1e-12 && (e - direct[1]).abs() < 1e-12);
    let (k1, e1) = elliptic_ke_complementary(1e-12).unwrap();
    assert!(k1 > 14.0 && (e1 - 1.0).abs() < 1e-10);
    // K ~ ln(4/sqrt(m1)) as m -> 1.
    assert!((k1 - (4.0 / 1e-6f64).ln()).abs() < 1e-9);
    assert!(elliptic_ke(1.0).is_err());
    assert!(elliptic_ke(-0.1).is_err());
}

/// `g_q` straight from the ground-state curvature integral,
/// `g = (1/pi) ∫_0^pi sin^2 k / Lambda^3 dk`.
fn g_by_quadrature(h: f64) -> f64 {
    let opts = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-13,
        max_subdivisions: 4000,
    };
    let bps = [0.0, 1e-3, 1e-2, 0.1, 1.0, PI];
    integrate(|k| vec![k.sin().powi(2) / dispersion(k, h).lambda.powi(3)], &bps, 1, opts).unwrap()[0] / PI
}

#[test]
fn elliptic_convention_is_the_parameter_one() {
    for &h in &[0.0, 1e-4, 0.3, 0.5, 0.9, 1.2, 1.7, 2.0, 5.0] {
        let g = g_q(h);
        assert!((g - g_by_quadrature(h)).abs() < 1e-10 * g.max(1.0), "h {h}: {g}");
    }
    // Reading 4h/(1+h)^2 as a modulus instead gives a different function.
    let h: f64 = 0.3;
    let kmod = 4.0 * h / (1.0 + h).powi(2);
    let (k, e) = elliptic_ke(kmod * kmod).unwrap();
    let wrong = ((1.0 + h * h) * k - (1.0 + h).powi(2) * e) / (PI * h * h * (1.0 + h));
    assert!((wrong - g_by_quadrature(h)).abs() > 1e-2);
    assert!((g_q(0.0) - 0.5).abs() < 1e-15);
    assert!((g_q(0.3) - 0.51789).abs() < 1e-5);
    assert!((g_q(1.7) - 0.118829).abs() < 1e-6);
    assert!((g_q(2.0) - 0.0694833).abs() < 1e-7);
}

#[test]
fn zero_temperature_closed_forms() {
    let z = zero_t_analytic(0.0).unwrap();
    assert_eq!(z.f_q, 1.0);
    assert!((z.r0 - 1.0).abs() < 1e-15);
    assert_eq!(zero_t_analytic(1.0), Err(IsingError::CriticalField));
    assert_eq!(zero_t_analytic(-1.0), Err(IsingError::CriticalField));
    for &h in &[0.0, 0.3, 0.5, 1.7, 2.0, -0.5] {
        let z = zero_t_analytic(h).unwrap();
        let th = tl(h, 1e4);
        assert!((&th.jq - &z.jq).amax() < 1e-6 * z.jq.amax());
        assert!((&th.u - &z.u).amax() < 1e-8);
        let r = th.select(ParameterSet::HPhi).r.unwrap();
        assert!((r - z.r0).abs() < 1e-4, "h {h}: {r} vs {}", z.r0);
    }
    // Large fields: R0 tends to 1, approached from below.
    let big = zero_t_analytic(1e3).unwrap();
    assert!(big.r0 < 1.0 && (big.r0 - 1.0).abs() < 1e-5);
    let r = tl(1e3, 1e4).select(ParameterSet::HPhi).r.unwrap();
    assert!((r - big.r0).abs() < 1e-6);
}

#[test]
fn zero_temperature_series() {
    assert_eq!(zero_t_series(0.0_f64.max(1e-300)) < 1e-140, true);
    let x: f64 = 1e-4;
    let direct = 2.0 * 2f64.sqrt() / PI * ((8.0 * 1e4f64).ln() - 2.0) * 1e-2;
    assert!((zero_t_series(x) - direct).abs() < 1e-15);
    for h in [1.0 + 1e-3, 1.0 - 1e-3] {
        let exact = zero_t_analytic(h).unwrap().r0;
        let series = zero_t_series(1e-3);
        assert!((exact / series - 1.0).abs() < 0.05, "h {h}: {exact} vs {series}");
    }
}

#[test]
fn high_temperature_closed_forms() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for &h in &[0.0, 0.5, 1.0, 2.0] {
        assert_eq!(high_t_closed_form(h, ParameterSet::HPhi), s);
    }
    assert!((high_t_closed_form(1.0, ParameterSet::BetaHPhi) - 1.0).abs() < 1e-15);
    assert_eq!(high_t_closed_form(0.5, ParameterSet::HPhiQuantum), 1.0);
    assert_eq!(high_t_closed_form(2.0, ParameterSet::HPhiQuantum), 2.0);
    let t = 1e3;
    for &h in &[0.0, 0.5, 2.0] {
        let th = tl(h, 1.0 / t);
        for set in [ParameterSet::HPhi, ParameterSet::BetaHPhi, ParameterSet::HPhiQuantum] {
            let r = th.select(set).r.unwrap();
            let c = high_t_closed_form(h, set);
            assert!((t * r / c - 1.0).abs() < 1e-2, "h {h} {set}: {} vs {c}", t * r);
        }
    }
}

#[test]
fn critical_point_incompatibility_vanishes_at_low_temperature() {
    let r_at = |beta: f64| tl(1.0, beta).select(ParameterSet::HPhi).r.unwrap();
    let (a, b, c) = (r_at(1e2), r_at(1e3), r_at(1e4));
    assert!(a > b && b > c && c < 0.08, "{a} {b} {c}");
}

#[test]
fn point_json_forms() {
    let p: IsingPoint = serde_json::from_str(r#"{"h": 0.5, "beta": 2.0}"#).unwrap();
    assert_eq!(p.size, SystemSize::Thermodynamic);
    let p: IsingPoint = serde_json::from_str(r#"{"h": 0.5, "phi": 0.1, "beta": 2.0, "size": {"modes": 64}}"#).unwrap();
    assert_eq!(p.size, SystemSize::Modes(64));
    let back: IsingPoint = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(back, p);
    assert_eq!("beta_h_phi".parse::<ParameterSet>().unwrap(), ParameterSet::BetaHPhi);
    let fs = finite_sum(&p).unwrap();
    assert_eq!(fs.labels, vec!["beta", "h", "phi"]);
}

#[test]
fn lyapunov_residual_on_pair_space() {
    let [h_op, _, _] = pair_hamiltonian(0.7, 0.4, 0.2);
    let ens = thermal_state(&h_op, 1.3).unwrap();
    let dh = pair_hamiltonian(0.7, 0.4, 0.2);
    let slds = crate::estimation::sld(&ens, &dh[1..]).unwrap();
    assert!(lyapunov_residual(&ens, &dh[1..], &slds).unwrap() < 1e-12);
}
