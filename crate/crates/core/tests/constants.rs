use proptest::prelude::*;
use wavebound::constants::*;
use wavebound::geometry::GeometryBox;

fn gbox(l: f64, h: f64, hh: f64, k: f64, eps: f64) -> GeometryBox {
    GeometryBox {
        half_width: l,
        min_depth: h,
        max_depth: hh,
        curvature: k,
        epsilon: Some(eps),
    }
}

fn params() -> impl Strategy<Value = (f64, GeometryBox)> {
    (0.05f64..4.0, 0.1f64..3.0, 0.2f64..3.0, 0.1f64..3.0, 0.0f64..4.0, 0.05f64..1.0)
        .prop_map(|(nu, l, h, extra, k, frac)| (nu, gbox(l, h, h + extra, k, frac * h)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ledger_is_positive_and_consistent((nu, b) in params()) {
        let led = ledger(nu, &b).unwrap();
        prop_assert!(led.entries.iter().all(|e| e.value.is_finite() && e.value > 0.0));
        prop_assert_eq!(led.tau, b.half_width + 1.0 / nu + b.max_depth);
        prop_assert!(led.c5 >= led.c4 && led.c6 >= 0.5 && led.c1 >= 1.0);
        prop_assert!((led.c2 * led.c2 - led.c1).abs() <= 1e-12 * led.c1);
        prop_assert!((led.multiplier_d * led.multiplier_d - led.multiplier_u).abs() <= 1e-12 * led.multiplier_u);
        prop_assert_eq!(led.b_bound, 32.0 * (nu * led.tau).sqrt());
    }

    // C carries ε⁻², C0 carries ε⁻¹.
    #[test]
    fn epsilon_dependence((nu, b) in params()) {
        let eps = b.epsilon.unwrap();
        let half = GeometryBox { epsilon: Some(0.5 * eps), ..b };
        let (p, q) = (ledger(nu, &b).unwrap(), ledger(nu, &half).unwrap());
        prop_assert!((q.c / p.c - 4.0).abs() < 1e-12);
        prop_assert!((q.c0 / p.c0 - 2.0).abs() < 1e-12);
        prop_assert_eq!(q.c3, p.c3);
    }

    #[test]
    fn chain_inequalities((nu, b) in params()) {
        let led = ledger(nu, &b).unwrap();
        let ratio = b.max_depth / b.epsilon.unwrap();
        prop_assert!(led.c4 <= 0.5 * led.c3);
        prop_assert!(led.c5 <= led.c3 * ratio);
        prop_assert!(led.c6 <= ratio);
    }

    // Monotone in H, κ and 1/ε.  Not in ν: see below.
    #[test]
    fn c0_grows_with_depth_curvature_and_inverse_epsilon((nu, b) in params(), s in 1.01f64..3.0) {
        let c0 = ledger(nu, &b).unwrap().c0;
        let deeper = GeometryBox { max_depth: s * b.max_depth, ..b };
        let bent = GeometryBox { curvature: s * b.curvature + 0.01, ..b };
        let thin = GeometryBox { epsilon: Some(b.epsilon.unwrap() / s), ..b };
        for g in [deeper, bent, thin] {
            prop_assert!(ledger(nu, &g).unwrap().c0 > c0);
        }
    }

    #[test]
    fn theorem_rhs_is_linear_in_the_data_norm(c in 0.0f64..1e12, f in 0.0f64..1e3, k in 0.0f64..100.0) {
        let a = theorem_rhs_for(c, f).unwrap();
        let b = theorem_rhs_for(c, k * f).unwrap();
        prop_assert!((b.bound_u - k * a.bound_u).abs() <= 1e-12 * (1.0 + b.bound_u));
        prop_assert!((b.bound_d - k * a.bound_d).abs() <= 1e-12 * (1.0 + b.bound_d));
    }

    #[test]
    fn weights_decay_and_are_even(nu in 0.05f64..4.0, l in 0.0f64..3.0, x1 in -50.0f64..50.0, x2 in 0.0f64..50.0) {
        let w = WeightSet::from_parts(nu, l, 1.0).unwrap();
        prop_assert!(w.gamma0_sq([x1, x2]) <= w.gamma0_sq([0.0, 0.0]));
        prop_assert!(w.gamma0_sq([2.0 * x1, 2.0 * x2]) <= w.gamma0_sq([x1, x2]));
        prop_assert_eq!(w.gamma2_sq(x1), w.gamma2_sq(-x1));
        prop_assert!(w.gamma2_sq(x1) <= nu);
    }
}

// τ = L + 1/ν + H makes (1 + κτ) fall with ν; for a narrow body nothing
// compensates.
#[test]
fn c0_is_not_monotone_in_nu_for_narrow_bodies() {
    let b = gbox(0.1, 1.0, 2.0, 1.0, 0.5);
    let lo = ledger(0.5, &b).unwrap().c0;
    let hi = ledger(1.0, &b).unwrap().c0;
    assert!(hi < lo);
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(ledger(0.0, &gbox(1.0, 1.0, 3.0, 1.0, 1.0)).is_err());
    assert!(ledger(1.0, &gbox(1.0, 0.0, 3.0, 1.0, 1.0)).is_err());
    assert!(ledger(1.0, &gbox(1.0, 1.0, 3.0, -1.0, 1.0)).is_err());
    assert!(theorem_rhs_for(1.0, -1.0).is_err());
    assert!(WeightSet::from_parts(f64::NAN, 1.0, 1.0).is_err());
}

#[test]
fn ledger_names_cover_every_constant() {
    let led = ledger(1.0, &gbox(1.0, 1.0, 3.0, 1.0, 1.0)).unwrap();
    let names: Vec<&str> = led.entries.iter().map(|e| e.name.as_str()).collect();
    for n in ["tau", "C0", "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C", "A_bound", "B_bound"] {
        assert!(names.contains(&n), "{n}");
    }
}
