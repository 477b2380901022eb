use proptest::prelude::*;
use wavebound::conditions::*;
use wavebound::geometry::{BodyCurve, GeometryBox, ShapeSpec};

fn ellipse(c: [f64; 2], a: f64, b: f64) -> BodyCurve {
    BodyCurve::new(ShapeSpec::ellipse(c, a, b)).unwrap()
}

fn min_slack(curve: &BodyCurve, cond: Condition) -> f64 {
    slack_profile(curve, cond, 256)
        .iter()
        .map(|p| p.2)
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Scaling the plane by λ scales x1 n1 by λ and the cubic slacks by λ³.
    #[test]
    fn slacks_scale_homogeneously(c1 in -1.0f64..1.0, c2 in 2.0f64..4.0, a in 0.3f64..1.2,
                                  b in 0.3f64..1.2, lambda in 0.5f64..3.0) {
        let s = ellipse([c1, c2], a, b);
        let t = ellipse([lambda * c1, lambda * c2], lambda * a, lambda * b);
        let eps = 0.5 * GeometryBox::of(&s).min_depth;
        let cases = [
            (Condition::Condition1, Condition::Condition1, lambda),
            (Condition::Mazya, Condition::Mazya, lambda.powi(3)),
            (Condition::Condition2 { epsilon: eps }, Condition::Condition2 { epsilon: lambda * eps }, lambda.powi(3)),
        ];
        for (cs, ct, k) in cases {
            let ps = slack_profile(&s, cs, 64);
            let pt = slack_profile(&t, ct, 64);
            for (p, q) in ps.iter().zip(&pt) {
                prop_assert!((q.2 - k * p.2).abs() <= 1e-10 * (1.0 + q.2.abs()), "{}: {} vs {}", cs.name(), q.2, k * p.2);
            }
        }
    }

    // Reflection x1 ↦ -x1 leaves every slack's minimum unchanged.
    #[test]
    fn mirror_image_has_the_same_minimum(c1 in -1.0f64..1.0, c2 in 2.0f64..4.0, a in 0.3f64..1.2, b in 0.3f64..1.2) {
        let s = ellipse([c1, c2], a, b);
        let m = ellipse([-c1, c2], a, b);
        let eps = 0.5 * GeometryBox::of(&s).min_depth;
        for cond in [Condition::Condition1, Condition::Mazya, Condition::Condition2 { epsilon: eps }] {
            let (x, y) = (min_slack(&s, cond), min_slack(&m, cond));
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()), "{}: {x} vs {y}", cond.name());
        }
    }

    // Conditions 1 and 2 together imply the comparison used in Lemma 4.
    #[test]
    fn conditions_imply_the_comparison(c2 in 1.6f64..4.0, a in 0.3f64..1.4, b in 0.3f64..1.4, frac in 0.05f64..1.0) {
        let s = ellipse([0.0, c2], a, b);
        prop_assume!(GeometryBox::of(&s).min_depth > 0.1);
        let found = max_epsilon(&s, 256, 1e-8).unwrap();
        if let Some(emax) = found.epsilon {
            let eps = frac * emax;
            prop_assume!(check_condition2(&s, eps, 256).unwrap().holds);
            let c1 = check_condition1(&s, 256).unwrap();
            prop_assert!(c1.holds);
            let l4 = lemma4_slack(&s, eps, 256).unwrap();
            prop_assert!(l4.holds, "min slack {}", l4.min_slack);
        }
    }

    // Centered circles: Condition 1 holds with minimum 0, ε_max = h.
    #[test]
    fn centered_circles(c in 1.2f64..6.0, frac in 0.1f64..0.9) {
        let a = frac * c;
        let s = BodyCurve::new(ShapeSpec::circle([0.0, c], a)).unwrap();
        let r = check_condition1(&s, 256).unwrap();
        prop_assert!(r.holds && r.min_slack.abs() < 1e-12 * c);
        let e = max_epsilon(&s, 256, 1e-6).unwrap().epsilon.unwrap();
        prop_assert!(((e - (c - a)) / (c - a)).abs() <= 1e-6);
    }
}

#[test]
fn mazya_slack_on_a_circle_matches_closed_form() {
    let (c, a) = (2.5, 1.1);
    let s = BodyCurve::new(ShapeSpec::circle([0.0, c], a)).unwrap();
    for f in s.sample(256) {
        let [x1, x2] = f.x;
        let r2 = x1 * x1 + x2 * x2;
        let want = x1 * x1 * (c * c - a * a) / (a * r2);
        assert!((w_dot_n(&f) - want).abs() < 1e-10, "t={}: {} vs {want}", f.t, w_dot_n(&f));
    }
}

#[test]
fn lopsided_ellipse_fails_mazya() {
    let s = ellipse([0.0, 3.0], 2.0, 1.0);
    assert!(!check_mazya(&s, 256).unwrap().holds);
}

#[test]
fn uniqueness_value_matches_arithmetic() {
    let r = uniqueness_criterion(0.01, 1.0, 1.0).unwrap();
    assert!((r.value - 0.24 * 1.01f64.powi(3)).abs() < 1e-12);
    assert!(r.holds);
}
