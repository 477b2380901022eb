//! Particular solutions for the volume source `f` and the surface datum `g2`.
//!
//! `u_f = -∫ G(·; ξ) f(ξ) dξ` solves `-Δu = f` with homogeneous surface
//! and radiation conditions.  The logarithmic part of the kernel is
//! integrated exactly for the radial bump; the remainder is smooth and
//! uses polar Gauss–trapezoid quadrature.
//!
//! `u_g = -∫ G(·; (t, 0)) g2(t) dt` is harmonic, radiating, and satisfies
//! `-∂u/∂x2 - νu = g2` on the surface.

use super::data::{bump, BoundaryData, SurfaceBump, VolumeBump};
use crate::error::{Error, Result};
use crate::greens::{kernel, KernelEval};
use crate::multipole::Multipole;
use crate::quadrature::{graded_breaks, uniform_breaks, GaussRule};
use crate::special::EULER_GAMMA;
use num_complex::Complex64;
use std::f64::consts::PI;

const RADIAL_POINTS: usize = 40;
const ANGULAR_POINTS: usize = 48;

/// Polar Gauss–trapezoid nodes and weights on a disc.
pub(crate) fn disc_nodes(center: [f64; 2], rho: f64, gl: &GaussRule) -> Vec<([f64; 2], f64)> {
    let mut nodes = Vec::with_capacity(gl.len() * ANGULAR_POINTS);
    for (s, ws) in gl.on(0.0, rho) {
        for k in 0..ANGULAR_POINTS {
            let th = 2.0 * PI * k as f64 / ANGULAR_POINTS as f64;
            let (sn, cs) = th.sin_cos();
            let w = ws * s * 2.0 * PI / ANGULAR_POINTS as f64;
            nodes.push(([center[0] + s * cs, center[1] + s * sn], w));
        }
    }
    nodes
}

/// The rule used for volume data.
pub(crate) fn volume_rule() -> GaussRule {
    GaussRule::new(RADIAL_POINTS)
}

#[derive(Debug, Clone)]
struct VolumeQuad {
    bump: VolumeBump,
    /// Polar nodes `(ξ, weight · f(ξ))`.
    nodes: Vec<([f64; 2], Complex64)>,
    /// `∫_0^ρ b(s/ρ) s ds`.
    mass: f64,
}

impl VolumeQuad {
    fn new(b: &VolumeBump, gl: &GaussRule) -> Self {
        let rho = b.radius;
        let nodes = disc_nodes(b.center, rho, gl)
            .into_iter()
            .map(|(x, w)| (x, b.value(x) * w))
            .collect();
        let mass = gl.integrate(0.0, rho, |s| bump(s / rho) * s);
        Self {
            bump: b.clone(),
            nodes,
            mass,
        }
    }

    /// `Φ(R) = ∫_0^ρ b s ln max(R, s) ds` and `Φ'(R)`.
    fn radial_log(&self, r: f64, gl: &GaussRule) -> (f64, f64) {
        let rho = self.bump.radius;
        let p = |s: f64| bump(s / rho) * s;
        if r >= rho {
            return (self.mass * r.ln(), self.mass / r);
        }
        let inner = gl.integrate(0.0, r, p);
        let outer = gl.integrate(r, rho, |s| p(s) * s.ln());
        if r <= 0.0 {
            return (outer, 0.0);
        }
        (inner * r.ln() + outer, inner / r)
    }
}

/// Superposed particular field of the volume and surface data.
#[derive(Debug, Clone)]
pub struct ParticularField {
    nu: f64,
    volume: Vec<VolumeQuad>,
    surface: Vec<SurfaceBump>,
    /// Expansion of each surface bump, used away from its support.
    surface_far: Vec<Multipole>,
    gl: GaussRule,
    gl16: GaussRule,
}

impl ParticularField {
    pub fn new(nu: f64, data: &BoundaryData) -> Self {
        let gl = volume_rule();
        let volume = data.f.iter().map(|b| VolumeQuad::new(b, &gl)).collect();
        let gl16 = GaussRule::new(16);
        let surface_far = data
            .g2
            .iter()
            .map(|s| {
                let (lo, hi) = s.support();
                let charges: Vec<([f64; 2], Complex64)> = uniform_breaks(lo, hi, s.radius / 8.0, &[])
                    .windows(2)
                    .flat_map(|b| gl16.on(b[0], b[1]).map(|(t, w)| ([t, 0.0], w * s.value(t))).collect::<Vec<_>>())
                    .collect();
                Multipole::new(nu, [s.center, 0.0], s.radius, charges)
            })
            .collect();
        Self {
            nu,
            volume,
            surface: data.g2.clone(),
            surface_far,
            gl,
            gl16,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.volume.is_empty() && self.surface.is_empty()
    }

    /// Value and gradient; on the free surface (`x2 = 0`) with surface
    /// data only the value is available and the gradient is NaN.
    pub fn eval(&self, x: [f64; 2]) -> Result<KernelEval> {
        let mut acc = KernelEval::zero();
        for v in &self.volume {
            let k = self.volume_part(v, x)?;
            add(&mut acc, &k, -1.0);
        }
        for (s, m) in self.surface.iter().zip(&self.surface_far) {
            let k = if m.admits(x) {
                m.eval(x).ok_or_else(|| eval_err(x))?
            } else {
                self.surface_part(s, x)?
            };
            add(&mut acc, &k, -1.0);
        }
        Ok(acc)
    }

    /// `∫ G(x; ξ) f(ξ) dξ` for one bump.  Outside the support `G(x; ·)`
    /// is harmonic on the disc and `f` is radial, so by the mean-value
    /// property the integral is `G(x; c) ∫ f`.
    fn volume_part(&self, v: &VolumeQuad, x: [f64; 2]) -> Result<KernelEval> {
        let c = v.bump.center;
        let r = (x[0] - c[0]).hypot(x[1] - c[1]);
        if r > v.bump.radius {
            let k = kernel(self.nu, x, c, true).ok_or_else(|| eval_err(x))?;
            let m = v.bump.amplitude * (2.0 * PI * v.mass);
            return Ok(KernelEval {
                value: m * k.value,
                grad: [m * k.grad[0], m * k.grad[1]],
            });
        }
        self.volume_part_quadrature(v, x)
    }

    fn volume_part_quadrature(&self, v: &VolumeQuad, x: [f64; 2]) -> Result<KernelEval> {
        let c = v.bump.center;
        let (d0, d1) = (x[0] - c[0], x[1] - c[1]);
        let r = d0.hypot(d1);
        let (phi, dphi) = v.radial_log(r, &self.gl);
        // Angular mean of (1/2π) ln|x - ξ| is (1/2π) ln max(R, s); times 2π s ds.
        let a = v.bump.amplitude;
        let mut out = KernelEval {
            value: a * phi,
            grad: if r > 0.0 {
                [a * (dphi * d0 / r), a * (dphi * d1 / r)]
            } else {
                [Complex64::default(); 2]
            },
        };
        for (xi, wf) in &v.nodes {
            let k = kernel(self.nu, x, *xi, false).ok_or_else(|| eval_err(x))?;
            out.value += wf * k.value;
            out.grad[0] += wf * k.grad[0];
            out.grad[1] += wf * k.grad[1];
        }
        Ok(out)
    }

    /// `∫ G(x; (t, 0)) g2(t) dt` for one bump.
    fn surface_part(&self, s: &SurfaceBump, x: [f64; 2]) -> Result<KernelEval> {
        let (lo, hi) = s.support();
        let nu = self.nu;
        let x2 = x[1];
        let mut out = KernelEval::zero();
        let inside = x[0] > lo && x[0] < hi;
        let dist = if inside { 0.0 } else { (x[0] - x[0].clamp(lo, hi)).abs() };
        let near = dist.hypot(x2);
        let on_surface = x2 == 0.0 && inside;
        let (a, b) = if on_surface {
            // Excise [x1 - δ, x1 + δ] and integrate the log singularity there.
            let d = 1e-9 * s.radius;
            let g = s.value(x[0]);
            let core = 2.0 * d * ((EULER_GAMMA + (nu * d).ln() - 1.0) / PI);
            out.value += g * Complex64::new(core, 2.0 * d);
            (x[0] - d, x[0] + d)
        } else {
            (x[0], x[0])
        };
        let mut panels: Vec<(f64, f64)> = Vec::new();
        let mut push = |br: Vec<f64>| panels.extend(br.windows(2).map(|w| (w[0], w[1])));
        if on_surface {
            if a > lo {
                push(graded_breaks(lo, a, a, (a - lo).min(1e-8 * s.radius).max(1e-300)));
            }
            if b < hi {
                push(graded_breaks(b, hi, b, (hi - b).min(1e-8 * s.radius).max(1e-300)));
            }
        } else if near < s.radius {
            push(graded_breaks(lo, hi, x[0].clamp(lo, hi), (0.5 * near).max(1e-12 * s.radius)));
        } else {
            push(uniform_breaks(lo, hi, s.radius / 4.0, &[]));
        }
        for (p, q) in panels {
            if q <= p {
                continue;
            }
            for (t, w) in self.gl16.on(p, q) {
                let g = s.value(t);
                if g == Complex64::default() {
                    continue;
                }
                let k = kernel(nu, x, [t, 0.0], true).ok_or_else(|| eval_err(x))?;
                out.value += w * g * k.value;
                out.grad[0] += w * g * k.grad[0];
                out.grad[1] += w * g * k.grad[1];
            }
        }
        if on_surface {
            out.grad = [Complex64::new(f64::NAN, f64::NAN); 2];
        }
        Ok(out)
    }

    /// Far-field amplitudes `(d+, d-)` of the particular field.
    pub fn far_field(&self) -> (Complex64, Complex64) {
        let nu = self.nu;
        let i = Complex64::new(0.0, 1.0);
        let mut p = Complex64::default();
        let mut m = Complex64::default();
        for v in &self.volume {
            for (xi, wf) in &v.nodes {
                let e = (-nu * xi[1]).exp();
                p -= i * wf * e * Complex64::from_polar(1.0, nu * xi[0]);
                m -= i * wf * e * Complex64::from_polar(1.0, -nu * xi[0]);
            }
        }
        for s in &self.surface {
            let (lo, hi) = s.support();
            for br in uniform_breaks(lo, hi, s.radius / 8.0, &[]).windows(2) {
                for (t, w) in self.gl16.on(br[0], br[1]) {
                    let g = w * s.value(t);
                    p -= i * g * Complex64::from_polar(1.0, nu * t);
                    m -= i * g * Complex64::from_polar(1.0, -nu * t);
                }
            }
        }
        (p, m)
    }
}

fn add(acc: &mut KernelEval, k: &KernelEval, s: f64) {
    acc.value += s * k.value;
    acc.grad[0] += s * k.grad[0];
    acc.grad[1] += s * k.grad[1];
}

fn eval_err(x: [f64; 2]) -> Error {
    Error::Evaluation {
        what: format!("particular field at {x:?}"),
        achieved: f64::NAN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vb(c: [f64; 2], r: f64) -> VolumeBump {
        VolumeBump {
            center: c,
            radius: r,
            amplitude: Complex64::new(1.0, 0.0),
        }
    }

    #[test]
    fn radial_log_is_continuous_at_the_rim() {
        let gl = GaussRule::new(RADIAL_POINTS);
        let q = VolumeQuad::new(&vb([0.0, 3.0], 0.5), &gl);
        let (a, da) = q.radial_log(0.5 - 1e-9, &gl);
        let (b, db) = q.radial_log(0.5 + 1e-9, &gl);
        assert!((a - b).abs() < 1e-8 && (da - db).abs() < 1e-7);
    }

    #[test]
    fn volume_potential_solves_poisson() {
        let data = BoundaryData {
            f: vec![vb([1.0, 3.0], 0.8)],
            ..Default::default()
        };
        let p = ParticularField::new(1.0, &data);
        for x in [[1.2, 3.1], [2.5, 2.0]] {
            let h = 1e-3;
            let g = |a: f64, b: f64| p.eval([a, b]).unwrap().grad;
            let lap = (g(x[0] + h, x[1])[0] - g(x[0] - h, x[1])[0] + g(x[0], x[1] + h)[1] - g(x[0], x[1] - h)[1])
                / (2.0 * h);
            let f = data.f[0].value(x);
            assert!((-lap - f).norm() < 1e-5, "x={x:?}: -Δu={} f={f}", -lap);
        }
    }

    #[test]
    fn mean_value_shortcut_matches_quadrature() {
        let data = BoundaryData {
            f: vec![vb([1.0, 3.0], 0.8)],
            ..Default::default()
        };
        let p = ParticularField::new(0.7, &data);
        for x in [[1.85, 3.0], [1.0, 2.1], [-4.0, 0.5], [30.0, 1.0]] {
            let a = p.volume_part(&p.volume[0], x).unwrap();
            let b = p.volume_part_quadrature(&p.volume[0], x).unwrap();
            assert!((a.value - b.value).norm() < 1e-10 * (1.0 + b.value.norm()), "x={x:?}");
            assert!((a.grad[0] - b.grad[0]).norm() < 1e-9 && (a.grad[1] - b.grad[1]).norm() < 1e-9);
        }
    }

    #[test]
    fn surface_potential_satisfies_the_surface_condition() {
        let s = SurfaceBump {
            center: 0.5,
            radius: 1.0,
            amplitude: Complex64::new(1.0, 0.5),
        };
        let data = BoundaryData {
            g2: vec![s.clone()],
            ..Default::default()
        };
        let nu = 1.3;
        let p = ParticularField::new(nu, &data);
        for x1 in [0.2, 0.9, 3.0] {
            // Second-order extrapolation of -∂u/∂x2 - νu to x2 = 0.
            let h = 1e-3;
            let r = |x2: f64| {
                let k = p.eval([x1, x2]).unwrap();
                -k.grad[1] - nu * k.value
            };
            let r0 = 2.0 * r(h) - r(2.0 * h);
            assert!((r0 - s.value(x1)).norm() < 1e-5, "x1={x1}: {r0} vs {}", s.value(x1));
            let on = p.eval([x1, 0.0]).unwrap().value;
            let off = p.eval([x1, 1e-7]).unwrap().value;
            assert!((on - off).norm() < 1e-5);
        }
    }
}
