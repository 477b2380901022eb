use num_complex::Complex64;
use wavebound::constants::{ledger, WeightSet};
use wavebound::geometry::{BodyCurve, GeometryBox, ShapeSpec};
use wavebound::solver::{assemble_and_solve, BoundaryData, NeumannData, PointSource, SolutionField};
use wavebound::validation::*;
use wavebound::Error;

fn circle() -> (BodyCurve, GeometryBox) {
    let c = BodyCurve::new(ShapeSpec::circle([0.0, 2.0], 1.0)).unwrap();
    let g = GeometryBox::of(&c).with_epsilon(1.0).unwrap();
    (c, g)
}

fn single_source() -> BoundaryData {
    BoundaryData::manufactured(vec![PointSource {
        at: [0.2, 2.1],
        strength: Complex64::new(1.0, 0.5),
    }])
}

fn coarse() -> QuadratureSettings {
    QuadratureSettings {
        truncation: None,
        refinement: 0.5,
    }
}

fn solve(data: &BoundaryData, n: usize) -> (SolutionField, GeometryBox) {
    let (c, g) = circle();
    (assemble_and_solve(&c, 1.0, data, n).unwrap(), g)
}

#[test]
fn zero_data_gives_zero_norms_and_residuals() {
    let (sol, g) = solve(&BoundaryData::zero(), 64);
    let e = evaluate_field(&sol, &g, &coarse()).unwrap();
    let n = &e.norms;
    for v in [n.norm_u, n.norm_f, n.norm_f1, n.norm_v, n.norm_v_u, n.tail_estimate] {
        assert_eq!(v, 0.0);
    }
    assert!(e.identities.all().iter().all(|r| r.residual == 0.0));
    let led = ledger(1.0, &g).unwrap();
    let r = bound_report("zero", &e, &led).unwrap();
    assert_eq!((r.rho_u, r.rho_d, r.d_sum), (0.0, 0.0, 0.0));
    assert!(r.lemmas.holds());
}

#[test]
fn nonzero_solution_without_data_is_inconsistent() {
    let (sol, g) = solve(&BoundaryData::zero(), 64);
    let mut e = evaluate_field(&sol, &g, &coarse()).unwrap();
    e.norms.norm_u = 1.0;
    let led = ledger(1.0, &g).unwrap();
    assert!(matches!(bound_report("bad", &e, &led), Err(Error::Inconsistent(_))));
}

#[test]
fn manufactured_identities() {
    let (sol, g) = solve(&single_source(), 128);
    let r = identity_residuals(&sol, &g, &QuadratureSettings::default()).unwrap();
    assert!(r.green.residual <= 1e-4, "{:?}", r.green);
    assert!(r.energy.residual <= 1e-3, "{:?}", r.energy);
    assert!(r.multiplier_v.residual <= 1e-3, "{:?}", r.multiplier_v);
    assert!(r.multiplier_w.residual <= 1e-3, "{:?}", r.multiplier_w);
}

#[test]
fn scaling_the_data_scales_the_report() {
    let case = &regression_family()[0];
    let mut big = case.clone();
    big.data = case.data.scaled(Complex64::new(10.0, 0.0));
    let a = run_case(case, 1.0, 64, &coarse()).unwrap();
    let b = run_case(&big, 1.0, 64, &coarse()).unwrap();
    for (x, y) in [(a.norm_u, b.norm_u), (a.norm_f, b.norm_f), (a.d_sum, b.d_sum), (a.norm_v, b.norm_v)] {
        assert!((y - 10.0 * x).abs() <= 1e-10 * y, "{x} vs {y}");
    }
    assert!((a.rho_u - b.rho_u).abs() <= 1e-10 * a.rho_u);
    assert!((a.rho_d - b.rho_d).abs() <= 1e-10 * a.rho_d);
}

#[test]
fn doubling_the_truncation_stays_within_the_tail_estimate() {
    let (sol, g) = solve(&single_source(), 128);
    let at = |r: f64| {
        compute_norms(
            &sol,
            &g,
            &QuadratureSettings {
                truncation: Some(r),
                refinement: 1.0,
            },
        )
        .unwrap()
    };
    let (a, b) = (at(60.0), at(120.0));
    assert!(a.tail_estimate > 0.0);
    for (x, y) in [(a.norm_u, b.norm_u), (a.norm_v, b.norm_v), (a.norm_v_u, b.norm_v_u)] {
        assert!((x - y).abs() <= a.tail_estimate, "{x} vs {y}, tail {}", a.tail_estimate);
    }
    assert_eq!(a.norm_f, b.norm_f);
}

#[test]
fn data_norm_converges_with_the_contour_rule() {
    let data = BoundaryData {
        g1: NeumannData::Fourier {
            cos: vec![Complex64::default(), Complex64::new(1.0, 0.0)],
            sin: vec![],
        },
        ..BoundaryData::default()
    };
    let f = |n: usize| {
        let (sol, g) = solve(&data, n);
        compute_norms(&sol, &g, &coarse()).unwrap().norm_f
    };
    let (a, b) = (f(64), f(128));
    assert!(a.is_finite() && a > 0.0);
    assert!((a - b).abs() < 1e-8, "{a} vs {b}");
}

#[test]
fn residuals_decrease_under_refinement() {
    let (c, g) = circle();
    let data = regression_family()[0].data.clone();
    let base = QuadratureSettings::default();
    let a = identity_residuals(&assemble_and_solve(&c, 1.0, &data, 128).unwrap(), &g, &base).unwrap();
    let b = identity_residuals(&assemble_and_solve(&c, 1.0, &data, 256).unwrap(), &g, &base.refined(1.0, &g)).unwrap();
    assert!(b.energy.residual < a.energy.residual);
    assert!(b.multiplier_w.residual < a.multiplier_w.residual);
    assert!(b.multiplier_v.residual < a.multiplier_v.residual);
    assert!(b.green.residual < 1e-8);
}

#[test]
fn radiation_constants_meet_their_bounds() {
    for (nu, l, h) in [(1.0, 1.0, 3.0), (0.5, 1.0, 3.0), (2.0, 2.0, 4.0)] {
        let r = radiation_constants(nu, l, h).unwrap();
        assert!(r.a_holds() && r.b_holds(), "{r:?}");
        let (a, b) = mode_norms(&WeightSet::from_parts(nu, l, h).unwrap());
        assert!((r.a - 2f64.sqrt() * a).abs() < 1e-12 * r.a);
        assert!((r.b - 2f64.sqrt() * b).abs() < 1e-12 * r.b);
    }
    assert!(radiation_constants(-1.0, 1.0, 3.0).is_err());
}

#[test]
fn quadratic_forms() {
    let (p, v) = q_form_samples(2024, 10_000);
    let w = q_form_check(Multiplier::W, &p, &v).unwrap();
    assert!(w.non_positive(1e-12), "{w:?}");
    assert!(w.fd_discrepancy < 1e-6, "{}", w.fd_discrepancy);
    let vv = q_form_check(Multiplier::V, &p, &v).unwrap();
    assert!(vv.max_form <= 1e-15 && vv.min_form >= -2.0 - 1e-15);
}

#[test]
fn settings_reject_unknown_fields_and_bad_values() {
    let ok: QuadratureSettings = serde_json::from_str(r#"{"truncation": 80.0}"#).unwrap();
    assert_eq!(ok.refinement, 1.0);
    assert!(serde_json::from_str::<QuadratureSettings>(r#"{"radius": 80.0}"#).is_err());
    let (sol, g) = solve(&single_source(), 64);
    let bad = QuadratureSettings {
        truncation: Some(10.0),
        refinement: 1.0,
    };
    assert!(matches!(compute_norms(&sol, &g, &bad), Err(Error::Parameter(_))));
    let bad = QuadratureSettings {
        truncation: None,
        refinement: 20.0,
    };
    assert!(compute_norms(&sol, &g, &bad).is_err());
}
