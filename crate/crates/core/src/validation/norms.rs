//! Field samples on the domain quadrature, the weighted norms and the
//! integral identities.

use super::cutoff::{mode_laplacian_norm_sq, mode_norm_parts, ModeEval, WaveModes};
use super::domain::{DomainQuadrature, DomainSpec};
use super::fields::{quadratic_form, Multiplier};
use super::QuadratureSettings;
use crate::constants::WeightSet;
use crate::error::{Error, Result};
use crate::geometry::{Frame, GeometryBox};
use crate::quadrature::periodic_derivative;
use crate::solver::SolutionField;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type C = Complex64;

#[derive(Debug, Clone, Copy)]
struct InteriorSample {
    x: [f64; 2],
    w: f64,
    frame: u8,
    u: C,
    grad_u: [C; 2],
    mode: ModeEval,
}

impl InteriorSample {
    fn v(&self) -> C {
        self.u - self.mode.value
    }

    fn grad_v(&self) -> [C; 2] {
        [self.grad_u[0] - self.mode.grad[0], self.grad_u[1] - self.mode.grad[1]]
    }
}

#[derive(Debug, Clone, Copy)]
struct SurfaceSample {
    x1: f64,
    w: f64,
    frame: u8,
    u: C,
    mode: C,
    g2: C,
    dg2: C,
}

#[derive(Debug, Clone)]
struct ContourSample {
    frame: Frame,
    w: f64,
    u: C,
    du: C,
    g1: C,
    dg1: C,
}

#[derive(Debug, Clone, Copy)]
struct VolumeSample {
    w: f64,
    x: [f64; 2],
    /// The bump owning this node, and the total `f`.
    f_own: C,
    f_total: C,
    u: C,
    grad_u: [C; 2],
    mode: ModeEval,
}

/// A solved field sampled on the truncated-domain quadrature.
#[derive(Debug, Clone)]
pub struct FieldSamples {
    weights: WeightSet,
    d_plus: C,
    d_minus: C,
    truncation: f64,
    interior: Vec<InteriorSample>,
    surface: Vec<SurfaceSample>,
    contour: Vec<ContourSample>,
    volume: Vec<VolumeSample>,
}

fn eval_error(what: &str, e: Error) -> Error {
    match e {
        Error::Evaluation { what: w, achieved } => Error::Evaluation {
            what: format!("{what}: {w}"),
            achieved,
        },
        other => other,
    }
}

impl FieldSamples {
    /// Evaluate `u`, `∇u`, the wave modes and the data on every node.
    pub fn collect(sol: &SolutionField, geometry: &GeometryBox, settings: &QuadratureSettings) -> Result<Self> {
        let nu = sol.nu();
        let weights = WeightSet::new(nu, geometry)?;
        let tau = weights.tau();
        let truncation = settings.truncation_for(nu, geometry);
        let data = sol.data();
        let dq = DomainQuadrature::build(&DomainSpec {
            curve: sol.curve(),
            geometry,
            data,
            nu,
            tau,
            truncation,
            refinement: settings.refinement,
        })?;
        let (d_plus, d_minus) = sol.kochin();
        let modes = WaveModes::new(&weights);

        let xs: Vec<[f64; 2]> = dq.interior.iter().map(|n| n.x).collect();
        let vals = sol.evaluate_many(&xs);
        let mut interior = Vec::with_capacity(xs.len());
        for (n, v) in dq.interior.iter().zip(vals) {
            let k = v.map_err(|e| eval_error("domain quadrature", e))?;
            interior.push(InteriorSample {
                x: n.x,
                w: n.w,
                frame: n.frame,
                u: k.value,
                grad_u: k.grad,
                mode: modes.combined(d_plus, d_minus, n.x),
            });
        }

        let xs: Vec<[f64; 2]> = dq.surface.iter().map(|n| n.x).collect();
        let vals = sol.evaluate_many(&xs);
        let mut surface = Vec::with_capacity(xs.len());
        for (n, v) in dq.surface.iter().zip(vals) {
            let k = v.map_err(|e| eval_error("surface quadrature", e))?;
            let x1 = n.x[0];
            surface.push(SurfaceSample {
                x1,
                w: n.w,
                frame: n.frame,
                u: k.value,
                mode: modes.combined(d_plus, d_minus, n.x).value,
                g2: data.g2.iter().map(|b| b.value(x1)).sum(),
                dg2: data.g2.iter().map(|b| b.derivative(x1)).sum(),
            });
        }

        let trace = sol.boundary_trace()?;
        let du = sol.boundary_tangential_derivative(&trace);
        let g1: Vec<C> = sol
            .nodes()
            .iter()
            .map(|f| data.g1(sol.kernel(), f))
            .collect::<Result<_>>()?;
        let dg1: Vec<C> = periodic_derivative(&g1)
            .iter()
            .zip(sol.nodes())
            .map(|(d, f)| d / f.speed)
            .collect();
        let contour = sol
            .nodes()
            .iter()
            .zip(sol.node_weights())
            .enumerate()
            .map(|(j, (f, w))| ContourSample {
                frame: f.clone(),
                w,
                u: trace[j],
                du: du[j],
                g1: g1[j],
                dg1: dg1[j],
            })
            .collect();

        let xs: Vec<[f64; 2]> = dq.volume.iter().map(|n| n.x).collect();
        let vals = sol.evaluate_many(&xs);
        let mut volume = Vec::with_capacity(xs.len());
        for (n, v) in dq.volume.iter().zip(vals) {
            let k = v.map_err(|e| eval_error("volume-data quadrature", e))?;
            volume.push(VolumeSample {
                w: n.w,
                x: n.x,
                f_own: data.f[n.bump].value(n.x),
                f_total: data.f.iter().map(|b| b.value(n.x)).sum(),
                u: k.value,
                grad_u: k.grad,
                mode: modes.combined(d_plus, d_minus, n.x),
            });
        }

        Ok(Self {
            weights,
            d_plus,
            d_minus,
            truncation: dq.truncation,
            interior,
            surface,
            contour,
            volume,
        })
    }

    pub fn d(&self) -> (C, C) {
        (self.d_plus, self.d_minus)
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn node_count(&self) -> usize {
        self.interior.len() + self.surface.len() + self.contour.len() + self.volume.len()
    }

    fn d_norm_sq(&self) -> f64 {
        self.d_plus.norm_sqr() + self.d_minus.norm_sqr()
    }

    pub fn norms(&self) -> NormReport {
        let w = &self.weights;
        let nu = w.nu;
        let g1sq = w.gamma1_sq();
        let mut p = NormParts::default();
        let mut tails = [[0.0f64; 5]; 3];
        for s in &self.interior {
            let g0 = w.gamma0_sq(s.x);
            let gu = s.grad_u;
            let gv = s.grad_v();
            let gu2 = gu[0].norm_sqr() + gu[1].norm_sqr();
            let gv2 = gv[0].norm_sqr() + gv[1].norm_sqr();
            p.u_domain += s.w * g0 * s.u.norm_sqr();
            p.u_gradient += s.w * g0 * gu2 / (nu * nu);
            p.v_domain += s.w * g0 * s.v().norm_sqr();
            p.v_gradient += s.w * gv2;
            p.v_gradient_weighted += s.w * g0 * gv2 / (nu * nu);
            let t = &mut tails[s.frame as usize];
            t[0] += s.w * g0 * s.v().norm_sqr();
            t[1] += s.w * gv2;
            t[2] += s.w * g0 * gv2 / (nu * nu);
        }
        for s in &self.surface {
            let v = s.u - s.mode;
            let g2w = w.gamma2_sq(s.x1);
            p.u_surface += s.w * g2w * s.u.norm_sqr();
            p.v_surface += s.w * nu * v.norm_sqr();
            p.v_surface_weighted += s.w * g2w * v.norm_sqr();
            p.f_g2 += s.w * s.g2.norm_sqr() / g2w;
            p.f_dg2 += s.w * (s.x1 * s.dg2).norm_sqr() / nu;
            let t = &mut tails[s.frame as usize];
            t[3] += s.w * nu * v.norm_sqr();
            t[4] += s.w * g2w * v.norm_sqr();
        }
        for s in &self.contour {
            p.u_contour += s.w * g1sq * s.u.norm_sqr();
            p.f_g1 += s.w * s.g1.norm_sqr() / g1sq;
            p.f_dg1 += s.w * (s.frame.x[0] * s.dg1).norm_sqr() / g1sq;
        }
        p.v_contour = p.u_contour;
        for s in &self.volume {
            let inv = 1.0 / w.gamma0_sq(s.x);
            p.f_volume += s.w * inv * (s.f_own * s.f_total.conj()).re;
            p.f1_cross += s.w * inv * 2.0 * (s.f_own * s.mode.laplacian.conj()).re;
        }
        let d2 = self.d_norm_sq();
        p.f1_modes = d2 * mode_laplacian_norm_sq(w);
        let (tv, tg, ts) = mode_norm_parts(w, self.truncation);
        p.wave_tail = d2 * (tv + tg + ts);

        // Geometric extrapolation from the two outer frames.
        let tail_of = |k: usize| {
            let (a, b) = (tails[1][k], tails[2][k]);
            if a > 0.0 && b < a {
                let q = b / a;
                b * q / (1.0 - q)
            } else {
                b
            }
        };
        let t: Vec<f64> = (0..5).map(tail_of).collect();
        let norm_u_sq = p.u_domain + p.u_gradient + p.u_contour + p.u_surface + p.wave_tail;
        let norm_v_sq = p.v_domain + p.v_gradient + p.v_contour + p.v_surface;
        let norm_v_u_sq = p.v_domain + p.v_gradient_weighted + p.v_contour + p.v_surface_weighted;
        let f_sq = p.f_volume + p.f_g1 + p.f_dg1 + p.f_g2 + p.f_dg2;
        let f1_sq = f_sq + p.f1_cross + p.f1_modes;
        let grow = |s: f64, extra: f64| (s + extra).max(0.0).sqrt() - s.max(0.0).sqrt();
        let tail_estimate = grow(norm_u_sq, t[0] + t[2] + t[4])
            .max(grow(norm_v_sq, t[0] + t[1] + t[3]))
            .max(grow(norm_v_u_sq, t[0] + t[2] + t[4]));
        NormReport {
            norm_u: norm_u_sq.max(0.0).sqrt(),
            norm_f: f_sq.max(0.0).sqrt(),
            norm_f1: f1_sq.max(0.0).sqrt(),
            norm_v: norm_v_sq.max(0.0).sqrt(),
            norm_v_u: norm_v_u_sq.max(0.0).sqrt(),
            d_plus: self.d_plus,
            d_minus: self.d_minus,
            truncation: self.truncation,
            tail_estimate,
            nodes: self.node_count(),
            parts: p,
        }
    }

    /// `‖∂v/∂x1‖²` over the truncated domain.
    pub fn horizontal_derivative_sq(&self) -> f64 {
        self.interior.iter().map(|s| s.w * s.grad_v()[0].norm_sqr()).sum()
    }

    /// `∫_S |∂σ v|² φ(frame) ds`; `v = u` on the body since the modes vanish there.
    pub fn contour_tangential(&self, phi: impl Fn(&Frame) -> f64) -> f64 {
        self.contour.iter().map(|s| s.w * s.du.norm_sqr() * phi(&s.frame)).sum()
    }

    pub fn identities(&self) -> IdentityResiduals {
        IdentityResiduals {
            green: self.green_identity(),
            energy: self.energy_identity(),
            multiplier_w: self.multiplier_identity(Multiplier::W, 0.5),
            multiplier_v: self.multiplier_identity(Multiplier::V, 0.5),
        }
    }

    fn green_identity(&self) -> IdentityResidual {
        let mut s = C::default();
        for v in &self.volume {
            s += v.w * v.f_own * v.u.conj();
        }
        for c in &self.contour {
            s += c.w * c.g1 * c.u.conj();
        }
        for g in &self.surface {
            s += g.w * g.g2 * g.u.conj();
        }
        IdentityResidual::new("green", self.d_norm_sq(), 2.0 * s.im)
    }

    fn energy_identity(&self) -> IdentityResidual {
        let nu = self.weights.nu;
        let mut work = 0.0;
        let mut dirichlet = 0.0;
        for v in &self.volume {
            work += v.w * (v.f_own * (v.u - v.mode.value).conj()).re;
        }
        for s in &self.interior {
            let gv = s.grad_v();
            work += s.w * (s.mode.laplacian * s.v().conj()).re;
            dirichlet += s.w * (gv[0].norm_sqr() + gv[1].norm_sqr());
        }
        for c in &self.contour {
            work += c.w * (c.g1 * c.u.conj()).re;
        }
        for g in &self.surface {
            let v = g.u - g.mode;
            work += g.w * (g.g2 * v.conj()).re;
            dirichlet -= nu * g.w * v.norm_sqr();
        }
        IdentityResidual::new("energy", work, dirichlet)
    }

    /// The multiplier identity with field `Z` and constant `T`, for
    /// `Re v` and `Im v` together.  The surface part of the right side
    /// carries `-2∫ v Z1 ∂g2/∂x1`, which comes from the same integration
    /// by parts as the `∂Z1/∂x1` term.
    fn multiplier_identity(&self, z: Multiplier, t: f64) -> IdentityResidual {
        let nu = self.weights.nu;
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        for g in &self.surface {
            let v = g.u - g.mode;
            let stretch = z.surface_stretch(g.x1);
            let z1 = z.value([g.x1, 0.0])[0];
            lhs += nu * g.w * (stretch - 2.0 * t) * v.norm_sqr();
            rhs += 2.0 * g.w * (v.conj() * ((t - stretch) * g.g2 - z1 * g.dg2)).re;
        }
        for s in &self.interior {
            let q = z.q_matrix(s.x, t);
            let gv = s.grad_v();
            let form = quadratic_form(&q, [gv[0].re, gv[1].re]) + quadratic_form(&q, [gv[0].im, gv[1].im]);
            lhs -= s.w * form;
            let zv = z.value(s.x);
            let m = zv[0] * gv[0] + zv[1] * gv[1] + t * s.v();
            rhs += 2.0 * s.w * (s.mode.laplacian * m.conj()).re;
        }
        for v in &self.volume {
            let zv = z.value(v.x);
            let gv = [v.grad_u[0] - v.mode.grad[0], v.grad_u[1] - v.mode.grad[1]];
            let m = zv[0] * gv[0] + zv[1] * gv[1] + t * (v.u - v.mode.value);
            rhs += 2.0 * v.w * (v.f_own * m.conj()).re;
        }
        for c in &self.contour {
            let f = &c.frame;
            let zv = z.value(f.x);
            let zn = zv[0] * f.normal[0] + zv[1] * f.normal[1];
            let zs = zv[0] * f.tangent[0] + zv[1] * f.tangent[1];
            lhs += c.w * c.du.norm_sqr() * zn;
            rhs += c.w * (c.g1.norm_sqr() * zn + (c.g1.conj() * (2.0 * zs * c.du + 2.0 * t * c.u)).re);
        }
        let name = match z {
            Multiplier::W => "multiplier-W",
            Multiplier::V => "multiplier-V",
        };
        IdentityResidual::new(name, lhs, rhs)
    }
}

/// Squared pieces of the norms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct NormParts {
    pub u_domain: f64,
    pub u_gradient: f64,
    pub u_contour: f64,
    pub u_surface: f64,
    /// Closed-form wave tail of `|||u|||_u²` beyond `|x1| = R`.
    pub wave_tail: f64,
    pub v_domain: f64,
    pub v_gradient: f64,
    pub v_gradient_weighted: f64,
    pub v_contour: f64,
    pub v_surface: f64,
    pub v_surface_weighted: f64,
    pub f_volume: f64,
    pub f_g1: f64,
    pub f_dg1: f64,
    pub f_g2: f64,
    pub f_dg2: f64,
    /// `2 Re ∫ γ0⁻² f conj(Δ(d+U+ + d-U-))`.
    pub f1_cross: f64,
    /// `‖γ0⁻¹ Δ(d+U+ + d-U-)‖²`.
    pub f1_modes: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    /// `|||u|||_u`.
    pub norm_u: f64,
    /// `|||F|||_f`.
    pub norm_f: f64,
    /// `|||F1|||_f`, with `f1 = f + Δ(d+U+ + d-U-)`.
    pub norm_f1: f64,
    /// `|||v|||`.
    pub norm_v: f64,
    /// `|||v|||_u`.
    pub norm_v_u: f64,
    #[serde(with = "crate::solver::data::complex_serde")]
    pub d_plus: Complex64,
    #[serde(with = "crate::solver::data::complex_serde")]
    pub d_minus: Complex64,
    pub truncation: f64,
    /// Estimated contribution of the remainder beyond the truncation box
    /// to any of the norms.
    pub tail_estimate: f64,
    pub nodes: usize,
    pub parts: NormParts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / (|lhs| + |rhs|)`, zero when both vanish.
    pub residual: f64,
}

impl IdentityResidual {
    pub fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        let den = lhs.abs() + rhs.abs();
        let residual = if den > 0.0 { (lhs - rhs).abs() / den } else { 0.0 };
        Self {
            name: name.into(),
            lhs,
            rhs,
            residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    pub green: IdentityResidual,
    pub energy: IdentityResidual,
    pub multiplier_w: IdentityResidual,
    pub multiplier_v: IdentityResidual,
}

impl IdentityResiduals {
    pub fn all(&self) -> [&IdentityResidual; 4] {
        [&self.green, &self.energy, &self.multiplier_w, &self.multiplier_v]
    }
}
