use std::collections::BTreeMap;
use std::f64::consts::PI;

use gerbe_core::gauge::*;
use gerbe_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn case(name: &str) -> GaugeChartData {
    builtin_case(name, &Params::new()).unwrap()
}

fn max_of(residual: &Residual, equation: &str) -> f64 {
    residual.equation(equation).unwrap().max
}

fn j() -> Mat {
    so2_generator()
}

#[test]
fn trivial_data_gives_exact_zero() {
    let data = case("trivial");
    for (_, residual) in all_residuals(&data).unwrap() {
        assert_eq!(residual.max(), 0.0);
    }
    let report = curvature_and_nu(&data).unwrap();
    assert!(report.curvature.iter().all(|s| s.components.is_empty()));
}

#[test]
fn compute_t_vanishes_at_identity_and_for_trivial_actions() {
    let so3 = MatrixCrossedModule::so3_conjugation();
    let x = so3_hat([0.3, -0.2, 0.9]);
    assert!(compute_t(&x, &Mat::identity(3, 3), &so3, 1e-4).norm() < 1e-12);
    let trivial = MatrixCrossedModule::u1_central_in_so3();
    assert_eq!(compute_t(&x, &rotation2(1.1), &trivial, 1e-4).norm(), 0.0);
}

#[test]
fn compute_t_matches_conjugation_closed_form() {
    let xm = MatrixCrossedModule::so3_conjugation();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let v: [f64; 3] = [rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), rng.gen_range(-PI..PI)];
        let w: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let h = so3_hat(v).exp();
        let x = so3_hat(w);
        let h_inv = h.clone().try_inverse().unwrap();
        let closed = &h * &x * &h_inv - &x;
        worst = worst.max((compute_t(&x, &h, &xm, 1e-4) - closed).norm());
    }
    assert!(worst < 1e-6, "worst {worst}");
    assert!(conjugation_t_check(100, 7, 1e-4, 1e-6).passed);
}

#[test]
fn matrix_crossed_modules_satisfy_axioms() {
    let so2: Vec<Mat> = [0.0, 0.4, 2.5, -1.3].iter().map(|&t| rotation2(t)).collect();
    let so3: Vec<Mat> = [[0.1, 0.2, 0.3], [-1.0, 0.5, 2.0], [0.0, 0.0, 3.0]]
        .iter()
        .map(|&v| so3_hat(v).exp())
        .collect();
    let one = vec![Mat::identity(1, 1)];
    assert!(MatrixCrossedModule::u1_identity().axiom_residual(&so2, &so2) < 1e-12);
    assert!(MatrixCrossedModule::u1_to_point().axiom_residual(&so2, &one) < 1e-12);
    assert!(MatrixCrossedModule::so3_conjugation().axiom_residual(&so3, &so3) < 1e-12);
    assert!(MatrixCrossedModule::u1_central_in_so3().axiom_residual(&so2, &so3) < 1e-12);
}

#[test]
fn circle_first_law_converges_at_second_order() {
    let data = case("u1-circle");
    assert_eq!(data.fd_step, 1e-3);
    let coarse = max_of(&check_connection(&data).unwrap(), CONNECTION_FIRST);
    let fine = max_of(&check_connection(&data.with_fd_step(5e-4)).unwrap(), CONNECTION_FIRST);
    assert!(coarse < 1e-6, "{coarse}");
    assert!(coarse / fine >= 3.5, "ratio {}", coarse / fine);
}

#[test]
fn circle_first_law_holds_for_higher_winding() {
    let params = Params::from([("k".to_string(), 3.0)]);
    let data = builtin_case("u1-circle", &params).unwrap();
    assert!(max_of(&check_connection(&data).unwrap(), CONNECTION_FIRST) < 1e-5);
    // A connection that ignores the winding misses the Maurer-Cartan term
    // `-kJ dθ`, of norm `k·√2`.
    let mut wrong = data.clone();
    let conn = wrong.connection.as_mut().unwrap();
    conn.chart[0] = conn.chart[1].clone();
    let miss = max_of(&check_connection(&wrong).unwrap(), CONNECTION_FIRST);
    assert!((miss - 3.0 * 2f64.sqrt()).abs() < 1e-5, "{miss}");
}

#[test]
fn three_chart_second_law_holds() {
    let data = case("u1-three-chart");
    let residual = check_connection(&data).unwrap();
    assert!(residual.equation(CONNECTION_SECOND).unwrap().samples.len() > 0);
    assert!(max_of(&residual, CONNECTION_SECOND) < 1e-6);
    let fine = check_connection(&data.with_fd_step(5e-4)).unwrap();
    assert!(max_of(&residual, CONNECTION_SECOND) / max_of(&fine, CONNECTION_SECOND) >= 3.5);
}

#[test]
fn second_law_detects_a_shifted_a() {
    let mut data = case("u1-three-chart");
    let eps = 1e-3;
    let conn = data.connection.as_mut().unwrap();
    let original = conn.pair[&[1, 2]].clone();
    conn.pair.insert([1, 2], form(move |p| original(p).into_iter().map(|m| m + j() * eps).collect()));
    let max = max_of(&check_connection(&data).unwrap(), CONNECTION_SECOND);
    assert!((max - eps * 2f64.sqrt()).abs() < 1e-6, "{max}");
}

#[test]
fn smooth_cocycle_conditions_hold_for_a_coboundary() {
    let data = case("u1-plane");
    let residual = check_gerbe_cocycle_smooth(&data).unwrap();
    assert!(residual.equation(COCYCLE_CELL).unwrap().samples.len() > 0);
    assert!(residual.max() < 1e-10);
}

#[test]
fn perturbed_h_shows_in_the_cell_condition() {
    let mut data = case("u1-plane");
    let eps = 1e-3;
    let original = data.h[&[0, 1, 2]].clone();
    data.h.insert([0, 1, 2], field(move |p| original(p) * rotation2(eps)));
    let max = max_of(&check_gerbe_cocycle_smooth(&data).unwrap(), COCYCLE_CELL);
    // `‖R(x + ε) − R(x)‖ = 2√2 sin(ε/2)`.
    let expected = 2.0 * 2f64.sqrt() * (eps / 2.0).sin();
    assert!((max - expected).abs() < 1e-12, "{max} vs {expected}");
}

#[test]
fn abelian_bfield_laws_collapse() {
    let data = case("u1-plane");
    let residual = check_bfield(&data).unwrap();
    assert!(residual.equation(BFIELD_TRIPLE).unwrap().samples.len() > 0);
    assert!(residual.max() < 1e-10);
}

#[test]
fn perturbed_delta_breaks_the_bfield_laws() {
    let mut data = case("u1-plane");
    let eps = 1e-3;
    let bf = data.bfield.as_mut().unwrap();
    let original = bf.pair[&[0, 1]].clone();
    bf.pair.insert([0, 1], form(move |p| original(p).into_iter().map(|m| m + j() * eps).collect()));
    let residual = check_bfield(&data).unwrap();
    assert!((max_of(&residual, BFIELD_PAIR) - eps * 2f64.sqrt()).abs() < 1e-12);
    assert!((max_of(&residual, BFIELD_TRIPLE) - eps * 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn monopole_curvature_agrees_between_charts() {
    let data = case("u1-monopole");
    assert_eq!(data.fd_step, 1e-2);
    let report = curvature_and_nu(&data).unwrap();
    assert!(max_of(&report.residual, CURVATURE_GLUING) < 1e-4);
    // F = dA = -(n/2) sin θ dθ∧dφ J in both charts.
    for sample in &report.curvature {
        let expected = -0.5 * sample.point[0].sin();
        let f = &sample.components[0];
        assert!((f[2] - expected).abs() < 1e-4 && (f[1] + expected).abs() < 1e-4);
        assert!(f[0].abs() < 1e-12 && f[3].abs() < 1e-12);
    }
    assert!(report.nu_gluing_expected);
    assert!(max_of(&report.residual, NU_GLUING) < 1e-4);
}

#[test]
fn monopole_first_law_meets_the_two_dimensional_tolerance() {
    let data = case("u1-monopole");
    assert!(max_of(&check_connection(&data).unwrap(), CONNECTION_FIRST) < default_tolerance(2));
}

#[test]
fn flat_connection_on_the_circle_has_no_curvature_components() {
    let report = curvature_and_nu(&case("u1-circle")).unwrap();
    assert!(!report.curvature.is_empty());
    assert!(report.curvature.iter().all(|s| s.components.is_empty()));
}

#[test]
fn nonabelian_curvature_gluing_holds_and_nu_is_reported() {
    let data = case("so3-plane");
    let report = curvature_and_nu(&data).unwrap();
    assert!(max_of(&report.residual, CURVATURE_GLUING) < 1e-4);
    assert!(!report.nu_gluing_expected);
    assert!(max_of(&report.residual, NU_GLUING) > 1e-2);
    let verified = verify(&data, default_tolerance(2)).unwrap();
    assert!(verified.passed);
    let nu = verified.equations.iter().find(|e| e.equation == NU_GLUING).unwrap();
    assert!(!nu.asserted);
}

#[test]
fn zero_connection_has_nu_equal_to_alpha_of_b() {
    let mut data = case("so3-plane");
    let zero = form(|_| vec![Mat::zeros(3, 3); 2]);
    data.connection.as_mut().unwrap().chart = vec![zero.clone(), zero];
    let report = curvature_and_nu(&data).unwrap();
    let bf = data.bfield.as_ref().unwrap();
    for (f, nu) in report.curvature.iter().zip(&report.nu) {
        assert!(f.components[0].iter().all(|v| *v == 0.0));
        let b = bf.chart[nu.chart](&nu.point)[0].transpose();
        assert!(nu.components[0].iter().zip(b.iter()).all(|(x, y)| x == y));
    }
}

#[test]
fn every_bundled_case_passes() {
    for name in BUILTIN_CASES {
        let report = run_case(&GaugeJson::named(name)).unwrap();
        assert!(report.passed, "{name}: {report:?}");
        for eq in report.equations.iter().filter(|e| e.asserted) {
            if let Some(ratio) = eq.halving_ratio {
                assert!(ratio >= MIN_HALVING_RATIO, "{name} {}: {ratio}", eq.equation);
            }
        }
    }
}

#[test]
fn step_larger_than_half_the_spacing_is_rejected() {
    let data = case("u1-circle").with_fd_step(0.2);
    assert!(matches!(check_connection(&data), Err(Error::StepTooLarge { .. })));
}

#[test]
fn missing_overlap_data_is_reported() {
    let mut data = case("u1-three-chart");
    data.h.clear();
    assert!(matches!(check_gerbe_cocycle_smooth(&data), Err(Error::MissingData(_))));
    let mut data = case("u1-circle");
    data.connection = None;
    assert!(matches!(check_connection(&data), Err(Error::MissingData(_))));
    assert!(matches!(check_bfield(&data), Err(Error::MissingData(_))));
}

#[test]
fn unknown_case_is_rejected() {
    assert!(matches!(builtin_case("u7-torus", &Params::new()), Err(Error::UnknownPreset(_))));
}

#[test]
fn simplicial_labels_give_identical_residuals() {
    for name in ["u1-circle", "u1-three-chart", "so3-plane"] {
        let data = case(name);
        let labels = SimplicialConnection::from_chart_data(&data).unwrap();
        let p = data.base.overlap_samples(&[0, 1])[0].clone();
        let a = data.connection.as_ref().unwrap().pair[&[0, 1]](&p);
        let a01 = labels.a01[&[0, 1]](&p);
        assert!(a.iter().zip(&a01).all(|(x, y)| x == &-y));
        assert_eq!(check_simplicial_connection(&labels, &data).unwrap(), check_connection(&data).unwrap());
    }
}

/// `(U(1) → U(1))` on three arcs with `d_ab = exp(iθ_ab)`, `h` forced by
/// the cocycle condition, `A_c = (0.4 + θ'_0c) J` and `a` fixed by the
/// first law.
fn identity_module_three_chart() -> GaugeChartData {
    let mut data = case("u1-three-chart");
    data.xm = MatrixCrossedModule::u1_identity();
    let slope = |a: usize, b: usize| 0.2 * (a + 2 * b) as f64;
    data.d = BTreeMap::new();
    let mut pairs = BTreeMap::new();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        data.d.insert([a, b], field(move |p| rotation2(slope(a, b) * p[0].sin() + 0.1 * a as f64)));
        // a_ab = (θ'_ab − θ'_0b + θ'_0a) J
        let coefficient = slope(a, b) - slope(0, b) + if a == 0 { 0.0 } else { slope(0, a) };
        pairs.insert([a, b], form(move |p| vec![j() * (coefficient * p[0].cos())]));
    }
    data.h = BTreeMap::from([(
        [0, 1, 2],
        field(move |p| rotation2((slope(0, 1) + slope(1, 2) - slope(0, 2)) * p[0].sin() + 0.1)),
    )]);
    let chart = (0..3)
        .map(|c| {
            form(move |p| {
                let shift = if c == 0 { 0.0 } else { slope(0, c) * p[0].cos() };
                vec![j() * (0.4 + shift)]
            })
        })
        .collect();
    data.connection = Some(Connection { chart, pair: pairs });
    data
}

#[test]
fn identity_module_connection_laws_disagree_on_varying_h() {
    let data = identity_module_three_chart();
    let cocycle = check_gerbe_cocycle_smooth(&data).unwrap();
    assert!(cocycle.max() < 1e-12);
    let residual = check_connection(&data).unwrap();
    assert!(max_of(&residual, CONNECTION_FIRST) < 1e-6);
    // The first law forces a_01 + a_12 - a_02 = φ' J while the second asks
    // for h d(h⁻¹) = -φ' J, leaving 2|φ'|·√2 with φ = θ_01 + θ_12 - θ_02.
    let phi_prime = |x: f64| 0.6 * x.cos();
    for s in &residual.equation(CONNECTION_SECOND).unwrap().samples {
        let expected = 2.0 * phi_prime(s.point[0]).abs() * 2f64.sqrt();
        assert!((s.magnitude - expected).abs() < 1e-6);
    }
    assert!(max_of(&residual, CONNECTION_SECOND) > 0.1);
}

#[test]
fn gauge_json_round_trips() {
    let json = GaugeJson {
        case: "u1-circle".into(),
        params: Params::from([("k".to_string(), 2.0)]),
        fd_step: Some(5e-4),
        t_step: None,
        tolerance: Some(1e-6),
    };
    let text = serde_json::to_string(&json).unwrap();
    let back: GaugeJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back, json);
    let report = run_case(&back).unwrap();
    assert_eq!(report.fd_step, Some(5e-4));
    assert!(report.passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compute_t_is_linear_and_matches_closed_form(
        v in prop::array::uniform3(-3.0f64..3.0),
        w in prop::array::uniform3(-1.0f64..1.0),
        scale in -2.0f64..2.0,
    ) {
        let xm = MatrixCrossedModule::so3_conjugation();
        let h = so3_hat(v).exp();
        let x = so3_hat(w);
        let closed = &h * &x * h.transpose() - &x;
        prop_assert!((compute_t(&x, &h, &xm, 1e-4) - &closed).norm() < 1e-6);
        prop_assert!((compute_t(&(&x * scale), &h, &xm, 1e-4) - closed * scale).norm() < 1e-6);
    }

    #[test]
    fn monopole_curvature_is_gauge_invariant(charge in 1i32..4) {
        let params = Params::from([("n".to_string(), charge as f64), ("resolution".to_string(), 16.0)]);
        let data = builtin_case("u1-monopole", &params).unwrap();
        let report = curvature_and_nu(&data).unwrap();
        prop_assert!(report.residual.max() < 1e-4);
    }
}
