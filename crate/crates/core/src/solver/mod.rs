//! Boundary-integral solver.
//!
//! The field is written as `u = u_p + ∫_S G(·; y) σ(y) ds_y`, where `u_p`
//! carries the volume and surface data (see [`particular`]).  The free
//! surface and radiation conditions then hold by construction; the Neumann
//! condition on the body gives a second-kind equation for σ,
//!
//! ```text
//! -σ(x)/2 + ∫_S ∂G/∂n_x(x; y) σ(y) ds_y = g1(x) - ∂u_p/∂n(x),
//! ```
//!
//! discretised by Nyström's method on `N` equispaced parameter nodes.

pub mod data;
mod linalg;
pub mod particular;

pub use data::{BoundaryData, NeumannData, PointSource, SurfaceBump, VolumeBump};
pub use particular::ParticularField;

use crate::error::{param, Error, Result};
use crate::geometry::{BodyCurve, Frame};
use crate::greens::{kernel, KernelEval, SourcePotential};
use crate::multipole::Multipole;
use crate::quadrature::{
    fourier_magnitudes, graded_breaks, log_weights, periodic_derivative, periodic_resample, GaussRule,
    PeriodicInterpolant,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const MIN_PANELS: usize = 16;
/// Systems with a larger condition estimate are rejected.
pub const CONDITION_LIMIT: f64 = 1e12;
/// Relative tolerance between the two extraction methods for `d±`.
pub const EXTRACTION_TOLERANCE: f64 = 1e-3;

const FINE_FACTOR: usize = 8;
const NEAR_FACTOR: f64 = 5.0;

/// A solved boundary-value problem.
#[derive(Debug, Clone)]
pub struct SolutionField {
    curve: BodyCurve,
    kernel: SourcePotential,
    data: BoundaryData,
    particular: ParticularField,
    nodes: Vec<Frame>,
    density: Vec<Complex64>,
    fine: PeriodicInterpolant,
    /// Expansion of the layer for points well away from the body.
    far: Multipole,
    near_distance: f64,
    condition: f64,
    resolution: f64,
    warnings: Vec<String>,
    gl: GaussRule,
}

/// Solve the problem for the given body, frequency and data on `n` nodes.
pub fn assemble_and_solve(curve: &BodyCurve, nu: f64, data: &BoundaryData, n: usize) -> Result<SolutionField> {
    let g = SourcePotential::new(nu)?;
    if n < MIN_PANELS || n % 2 != 0 {
        return Err(param(format!("panel count must be even and at least {MIN_PANELS}, got {n}")));
    }
    data.validate(curve)?;
    let particular = ParticularField::new(nu, data);
    let nodes = curve.sample(n);
    let h = 2.0 * PI / n as f64;

    let rhs: Vec<Complex64> = crate::par::map(&nodes, |fr| -> Result<Complex64> {
        let g1 = data.g1(&g, fr)?;
        if particular.is_empty() {
            return Ok(g1);
        }
        let p = particular.eval(fr.x)?;
        Ok(g1 - (p.grad[0] * fr.normal[0] + p.grad[1] * fr.normal[1]))
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let rows: Vec<Vec<Complex64>> = crate::par::map(&nodes, |xi| {
        let mut row = vec![Complex64::default(); n];
        for (j, yj) in nodes.iter().enumerate() {
            let w = h * yj.speed;
            let k = if xi.t == yj.t {
                let reg = kernel(nu, xi.x, yj.x, false);
                reg.map(|r| {
                    let curv = -(xi.ddx[0] * xi.normal[0] + xi.ddx[1] * xi.normal[1]) / (2.0 * xi.speed * xi.speed);
                    dot(r.grad, xi.normal) + curv / (2.0 * PI)
                })
            } else {
                kernel(nu, xi.x, yj.x, true).map(|r| dot(r.grad, xi.normal))
            };
            row[j] = w * k.unwrap_or(Complex64::new(f64::NAN, 0.0));
        }
        row
    });
    let mut a = DMatrix::from_element(n, n, Complex64::default());
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.re.is_finite() {
                return Err(Error::Evaluation {
                    what: format!("kernel at nodes {i}, {j}"),
                    achieved: f64::NAN,
                });
            }
            a[(i, j)] = *v;
        }
        a[(i, i)] -= 0.5;
    }
    let lu = linalg::Factored::new(a);
    let condition = lu.condition_estimate();
    if !(condition < CONDITION_LIMIT) {
        return Err(Error::IllConditioned { cond: condition });
    }
    let density = lu.solve(&rhs).ok_or(Error::IllConditioned { cond: f64::INFINITY })?;

    let mut warnings = Vec::new();
    let spec = fourier_magnitudes(&density);
    let peak = spec.iter().fold(0.0f64, |m, v| m.max(*v));
    let tail_from = 3 * n / 8;
    let resolution = if peak > 0.0 {
        spec[tail_from..].iter().fold(0.0f64, |m, v| m.max(*v)) / peak
    } else {
        0.0
    };
    if resolution > 1e-8 {
        warnings.push(format!(
            "density is under-resolved with N = {n}: trailing Fourier coefficients at {resolution:.1e} of the peak"
        ));
    }

    let fine = PeriodicInterpolant::new(periodic_resample(&density, FINE_FACTOR * n), 12);
    let far = Multipole::new(
        nu,
        curve.center(),
        curve.max_radius(),
        nodes.iter().zip(&density).map(|(fr, s)| (fr.x, s * (h * fr.speed))),
    );
    let max_step = nodes.iter().map(|f| f.speed).fold(0.0, f64::max) * h;

    Ok(SolutionField {
        curve: curve.clone(),
        kernel: g,
        data: data.clone(),
        particular,
        nodes,
        density,
        fine,
        far,
        near_distance: NEAR_FACTOR * max_step,
        condition,
        resolution,
        warnings,
        gl: GaussRule::new(16),
    })
}

#[inline]
fn dot(g: [Complex64; 2], n: [f64; 2]) -> Complex64 {
    g[0] * n[0] + g[1] * n[1]
}

impl SolutionField {
    pub fn nu(&self) -> f64 {
        self.kernel.nu()
    }

    pub fn curve(&self) -> &BodyCurve {
        &self.curve
    }

    pub fn data(&self) -> &BoundaryData {
        &self.data
    }

    pub fn kernel(&self) -> &SourcePotential {
        &self.kernel
    }

    pub fn particular(&self) -> &ParticularField {
        &self.particular
    }

    pub fn panels(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Frame] {
        &self.nodes
    }

    pub fn density(&self) -> &[Complex64] {
        &self.density
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition
    }

    /// Relative size of the trailing density Fourier coefficients.
    pub fn resolution_estimate(&self) -> f64 {
        self.resolution
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Quadrature weights `2π/N · |x'(t_j)|` of the contour nodes.
    pub fn node_weights(&self) -> Vec<f64> {
        let h = 2.0 * PI / self.nodes.len() as f64;
        self.nodes.iter().map(|f| h * f.speed).collect()
    }

    pub fn evaluate(&self, x: [f64; 2]) -> Result<Complex64> {
        self.field(x, false).map(|k| k.value)
    }

    /// Value and gradient at a point of the fluid domain.
    pub fn evaluate_with_gradient(&self, x: [f64; 2]) -> Result<KernelEval> {
        self.field(x, true)
    }

    /// Batch evaluation, order preserving.
    pub fn evaluate_many(&self, xs: &[[f64; 2]]) -> Vec<Result<KernelEval>> {
        crate::par::map(xs, |x| self.field(*x, true))
    }

    fn field(&self, x: [f64; 2], _want_grad: bool) -> Result<KernelEval> {
        if !(x[0].is_finite() && x[1].is_finite()) {
            return Err(param("non-finite evaluation point"));
        }
        if x[1] < 0.0 {
            return Err(Error::Domain(format!("{x:?} lies above the free surface")));
        }
        if self.curve.contains(x) {
            return Err(Error::Domain(format!("{x:?} lies inside the body")));
        }
        let mut out = self.layer(x)?;
        if !self.particular.is_empty() {
            let p = self.particular.eval(x)?;
            out.value += p.value;
            out.grad[0] += p.grad[0];
            out.grad[1] += p.grad[1];
        }
        Ok(out)
    }

    fn layer(&self, x: [f64; 2]) -> Result<KernelEval> {
        let nu = self.nu();
        let err = || Error::Evaluation {
            what: format!("single layer at {x:?}"),
            achieved: f64::NAN,
        };
        let mut acc = KernelEval::zero();
        let mut add = |k: KernelEval, q: Complex64| {
            acc.value += q * k.value;
            acc.grad[0] += q * k.grad[0];
            acc.grad[1] += q * k.grad[1];
        };
        if self.far.admits(x) {
            return self.far.eval(x).ok_or_else(err);
        }
        let (t0, d) = self.curve.closest(x);
        let h = 2.0 * PI / self.nodes.len() as f64;
        if d >= self.near_distance {
            for (fr, s) in self.nodes.iter().zip(&self.density) {
                add(kernel(nu, x, fr.x, true).ok_or_else(err)?, s * (h * fr.speed));
            }
            return Ok(acc);
        }
        if d == 0.0 {
            return Err(Error::Domain(format!("{x:?} lies on the body contour")));
        }
        // Smooth remainder by the trapezoid rule, log part by graded panels.
        for (fr, s) in self.nodes.iter().zip(&self.density) {
            add(kernel(nu, x, fr.x, false).ok_or_else(err)?, s * (h * fr.speed));
        }
        let speed0 = self.curve.frame(t0).speed;
        let delta = (d / speed0).max(1e-14);
        let breaks = graded_breaks(t0 - PI, t0 + PI, t0, delta);
        let mut v = Complex64::default();
        let mut g = [Complex64::default(); 2];
        for w in breaks.windows(2) {
            for (s, ws) in self.gl.on(w[0], w[1]) {
                let (y, dy, _) = self.curve.derivatives(s);
                let q = self.fine.eval(s) * (ws * dy[0].hypot(dy[1]) / (2.0 * PI));
                let r = [x[0] - y[0], x[1] - y[1]];
                let r2 = r[0] * r[0] + r[1] * r[1];
                v += q * (0.5 * r2.ln());
                g[0] += q * (r[0] / r2);
                g[1] += q * (r[1] / r2);
            }
        }
        acc.value += v;
        acc.grad[0] += g[0];
        acc.grad[1] += g[1];
        Ok(acc)
    }

    /// Values of `u` at the contour nodes (log-product quadrature).
    pub fn boundary_trace(&self) -> Result<Vec<Complex64>> {
        let n = self.nodes.len();
        let nu = self.nu();
        let h = 2.0 * PI / n as f64;
        let r = log_weights(n);
        let phi: Vec<Complex64> = self.nodes.iter().zip(&self.density).map(|(f, s)| s * f.speed).collect();
        let layer: Vec<Result<Complex64>> = crate::par::map_range(n, |i| {
            let xi = &self.nodes[i];
            let mut acc = Complex64::default();
            for (j, yj) in self.nodes.iter().enumerate() {
                let reg = kernel(nu, xi.x, yj.x, false).ok_or_else(|| Error::Evaluation {
                    what: "trace kernel".into(),
                    achieved: f64::NAN,
                })?;
                let dt = xi.t - yj.t;
                let m2 = if i == j {
                    xi.speed.ln() / (2.0 * PI)
                } else {
                    let d2 = (xi.x[0] - yj.x[0]).powi(2) + (xi.x[1] - yj.x[1]).powi(2);
                    let s2 = 4.0 * (0.5 * dt).sin().powi(2);
                    (d2 / s2).ln() / (4.0 * PI)
                };
                let k = (i as isize - j as isize).unsigned_abs();
                acc += phi[j] * (r[k] / (4.0 * PI) + h * (m2 + reg.value));
            }
            Ok(acc)
        });
        let mut out = Vec::with_capacity(n);
        for (i, l) in layer.into_iter().enumerate() {
            let mut v = l?;
            if !self.particular.is_empty() {
                v += self.particular.eval(self.nodes[i].x)?.value;
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Tangential derivative `∂u/∂σ` at the nodes, from the trace.
    pub fn boundary_tangential_derivative(&self, trace: &[Complex64]) -> Vec<Complex64> {
        periodic_derivative(trace)
            .iter()
            .zip(&self.nodes)
            .map(|(d, f)| d / f.speed)
            .collect()
    }

    /// Kochin-type amplitudes `(d+, d-)` of the solved field.
    pub fn kochin(&self) -> (Complex64, Complex64) {
        let h = 2.0 * PI / self.nodes.len() as f64;
        let (mut p, mut m) = self.particular.far_field();
        for (fr, s) in self.nodes.iter().zip(&self.density) {
            let (a, b) = self.kernel.far_field(fr.x);
            let q = s * (h * fr.speed);
            p += q * a;
            m += q * b;
        }
        (p, m)
    }
}

/// `d±` from two independent extractions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringResult {
    #[serde(with = "data::complex_serde")]
    pub d_plus: Complex64,
    #[serde(with = "data::complex_serde")]
    pub d_minus: Complex64,
    /// Amplitudes fitted to surface samples on `|x1| ∈ [X, 2X]`.
    #[serde(with = "data::complex_serde")]
    pub far_field_plus: Complex64,
    #[serde(with = "data::complex_serde")]
    pub far_field_minus: Complex64,
    pub sample_distance: f64,
    pub discrepancy: f64,
    pub tolerance: f64,
}

/// Extract `d±` by the Kochin integral and by fitting the far field; the
/// reported values are the Kochin ones.
pub fn scattering_coefficients(sol: &SolutionField) -> Result<ScatteringResult> {
    let (kp, km) = sol.kochin();
    let nu = sol.nu();
    let c = sol.curve.center();
    let mut reach = c[0].abs() + sol.curve.max_radius();
    for b in &sol.data.f {
        reach = reach.max(b.center[0].abs() + b.radius);
    }
    for b in &sol.data.g2 {
        reach = reach.max(b.center.abs() + b.radius);
    }
    let x0 = (60.0 / nu).max(8.0 * reach);
    let (fp, fm) = (far_fit(sol, x0, 1.0)?, far_fit(sol, x0, -1.0)?);
    let scale = kp.norm().max(km.norm());
    let discrepancy = if scale > 0.0 {
        ((fp - kp).norm()).max((fm - km).norm()) / scale
    } else if fp.norm().max(fm.norm()) > 0.0 {
        1.0
    } else {
        0.0
    };
    if discrepancy > EXTRACTION_TOLERANCE {
        return Err(Error::ExtractionMismatch { discrepancy });
    }
    Ok(ScatteringResult {
        d_plus: kp,
        d_minus: km,
        far_field_plus: fp,
        far_field_minus: fm,
        sample_distance: x0,
        discrepancy,
        tolerance: EXTRACTION_TOLERANCE,
    })
}

/// Least-squares fit of `A e^{∓iνx1} + Σ_{p=2}^{5} c_p (X/x1)^p` to `u`
/// on the free surface, `|x1| ∈ [X, 2X]`.
fn far_fit(sol: &SolutionField, x0: f64, side: f64) -> Result<Complex64> {
    let nu = sol.nu();
    let m = 12;
    let cols = 5;
    let mut a = DMatrix::from_element(m, cols, Complex64::default());
    let mut b = nalgebra::DVector::from_element(m, Complex64::default());
    for k in 0..m {
        let x1 = side * x0 * (1.0 + k as f64 / (m - 1) as f64);
        let u = sol.evaluate([x1, 0.0])?;
        a[(k, 0)] = Complex64::from_polar(1.0, -nu * x1.abs());
        for p in 2..=5 {
            a[(k, p - 1)] = Complex64::new((x0 / x1.abs()).powi(p as i32), 0.0);
        }
        b[k] = u;
    }
    let sol_ls = a.svd(true, true).solve(&b, 1e-14).map_err(|e| Error::Evaluation {
        what: format!("far-field fit: {e}"),
        achieved: f64::NAN,
    })?;
    Ok(sol_ls[0])
}
