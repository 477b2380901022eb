use num_complex::Complex64;
use wavebound::geometry::{BodyCurve, ShapeSpec};
use wavebound::greens::SourcePotential;
use wavebound::solver::{assemble_and_solve, scattering_coefficients, BoundaryData, NeumannData, PointSource};

fn circle() -> BodyCurve {
    BodyCurve::new(ShapeSpec::circle([0.0, 2.0], 1.0)).unwrap()
}

fn source(at: [f64; 2], s: Complex64) -> PointSource {
    PointSource { at, strength: s }
}

fn trace_error(curve: &BodyCurve, nu: f64, data: &BoundaryData, n: usize) -> f64 {
    let sol = assemble_and_solve(curve, nu, data, n).unwrap();
    let g = SourcePotential::new(nu).unwrap();
    let tr = sol.boundary_trace().unwrap();
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (fr, u) in sol.nodes().iter().zip(&tr) {
        let e = data.exact_field(&g, fr.x).unwrap().unwrap().value;
        num = num.max((u - e).norm());
        den = den.max(e.norm());
    }
    num / den
}

#[test]
fn manufactured_trace_converges() {
    let c = circle();
    let data = BoundaryData::manufactured(vec![source([0.0, 2.9], Complex64::new(1.0, 0.0))]);
    let errs: Vec<f64> = [64, 128, 256].iter().map(|&n| trace_error(&c, 1.0, &data, n)).collect();
    eprintln!("trace errors {errs:?}");
    assert!(errs[2] < 1e-6);
    assert!(errs[0] > errs[1] && errs[1] > errs[2]);
}

#[test]
fn two_source_field_at_probes() {
    let c = circle();
    let data = BoundaryData::manufactured(vec![
        source([0.3, 2.2], Complex64::new(1.0, 0.0)),
        source([-0.4, 1.7], Complex64::new(0.0, 2.0)),
    ]);
    let g = SourcePotential::new(1.0).unwrap();
    let sol = assemble_and_solve(&c, 1.0, &data, 256).unwrap();
    for x in [[3.0, 1.0], [0.0, 5.0], [0.0, 0.0], [1.05, 2.0], [0.0, 0.97], [80.0, 1.0]] {
        let u = sol.evaluate_with_gradient(x).unwrap();
        let e = data.exact_field(&g, x).unwrap().unwrap();
        assert!((u.value - e.value).norm() < 1e-6, "{x:?}: {} vs {}", u.value, e.value);
        for k in 0..2 {
            assert!((u.grad[k] - e.grad[k]).norm() < 1e-5, "{x:?} grad {k}: {} vs {}", u.grad[k], e.grad[k]);
        }
    }
    let d = scattering_coefficients(&sol).unwrap();
    let (ep, em) = data.exact_far_field(&g).unwrap();
    assert!((d.d_plus - ep).norm() < 1e-6 * ep.norm());
    assert!((d.d_minus - em).norm() < 1e-6 * em.norm());
    eprintln!("extraction discrepancy {:.2e}", d.discrepancy);
}

#[test]
fn symmetric_data_gives_equal_amplitudes() {
    let c = circle();
    let data = BoundaryData {
        g1: NeumannData::Fourier {
            cos: vec![Complex64::new(0.3, 0.0)],
            sin: vec![Complex64::new(1.0, 0.0)],
        },
        ..Default::default()
    };
    let sol = assemble_and_solve(&c, 1.0, &data, 128).unwrap();
    let d = scattering_coefficients(&sol).unwrap();
    assert!((d.d_plus - d.d_minus).norm() < 1e-10 * d.d_plus.norm());
    let a = sol.evaluate([2.0, 1.5]).unwrap();
    let b = sol.evaluate([-2.0, 1.5]).unwrap();
    assert!((a - b).norm() < 1e-10);
}

#[test]
fn far_probe_matches_wave_amplitude() {
    let c = circle();
    let data = BoundaryData::manufactured(vec![source([0.2, 2.1], Complex64::new(1.0, 0.0))]);
    let sol = assemble_and_solve(&c, 1.0, &data, 128).unwrap();
    let d = scattering_coefficients(&sol).unwrap();
    let u = sol.evaluate([80.0, 1.0]).unwrap();
    let w = d.d_plus * Complex64::from_polar((-1.0f64).exp(), -80.0);
    assert!((u - w).norm() < 1e-4, "{u} vs {w}");
}

#[test]
fn volume_and_surface_data_residuals() {
    use wavebound::solver::{SurfaceBump, VolumeBump};
    let c = circle();
    let nu = 1.0;
    let data = BoundaryData {
        f: vec![VolumeBump { center: [3.0, 2.0], radius: 0.7, amplitude: Complex64::new(1.0, 0.0) }],
        g1: NeumannData::Zero,
        g2: vec![SurfaceBump { center: -2.0, radius: 1.0, amplitude: Complex64::new(0.0, 1.0) }],
    };
    let sol = assemble_and_solve(&c, nu, &data, 128).unwrap();
    // Neumann condition on the body from the near-field gradient.
    for t in [0.3, 2.0, 4.5] {
        let fr = c.frame(t);
        let off = 1e-4;
        let x = [fr.x[0] - off * fr.normal[0], fr.x[1] - off * fr.normal[1]];
        let k = sol.evaluate_with_gradient(x).unwrap();
        let dn = k.grad[0] * fr.normal[0] + k.grad[1] * fr.normal[1];
        assert!(dn.norm() < 2e-3, "t={t}: {dn}");
    }
    // Surface condition.
    for x1 in [-2.3, 0.0, 4.0] {
        let h = 1e-3;
        let r = |x2: f64| {
            let k = sol.evaluate_with_gradient([x1, x2]).unwrap();
            -k.grad[1] - nu * k.value
        };
        let r0 = 2.0 * r(h) - r(2.0 * h);
        let g2 = data.g2[0].value(x1);
        assert!((r0 - g2).norm() < 1e-5, "x1={x1}: {r0} vs {g2}");
    }
    let d = scattering_coefficients(&sol).unwrap();
    assert!(d.discrepancy < 1e-6, "{}", d.discrepancy);
}
