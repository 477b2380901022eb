//! Free-surface Green's function for deep water.
//!
//! `G(x; ξ)` solves `Δ_x G = δ(x - ξ)` in `x2 > 0`, satisfies
//! `-∂G/∂x2 - νG = 0` on `x2 = 0` and is outgoing:
//! `G ~ i e^{-ν(x2+ξ2)} e^{-iν|x1-ξ1|}` as `|x1| → ∞`.
//!
//! With `X = x1 - ξ1`, `Y = x2 + ξ2`:
//!
//! ```text
//! G = (1/4π) ln(r²/r'²) - PV(X, Y)/π + i e^{-νY} cos(νX)
//! PV = p.v. ∫_0^∞ e^{-kY} cos(kX) / (k - ν) dk
//!    = Re[e^{z} E1(z)] - π e^{-νY} sin(ν|X|),   z = -ν(Y - i|X|)
//! ```
//!
//! The closed form is the production path; the principal-value integral is
//! kept as an independent evaluation for cross-checks.

use crate::error::{param, Error, Result};
use crate::quadrature::GaussRule;
use crate::special::scaled_e1;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

const INV_2PI: f64 = 0.5 / PI;
const INV_4PI: f64 = 0.25 / PI;

/// How `PV(X, Y)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GreenMethod {
    #[default]
    ClosedForm,
    /// Direct principal-value quadrature in the wavenumber variable.
    Quadrature,
}

/// Value and gradient (with respect to the field point `x`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    pub value: Complex64,
    pub grad: [Complex64; 2],
}

impl KernelEval {
    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            value: z,
            grad: [z, z],
        }
    }
}

/// The Green's function at a fixed frequency parameter ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourcePotential {
    nu: f64,
    method: GreenMethod,
}

impl SourcePotential {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(param(format!("frequency parameter must be positive, got {nu}")));
        }
        Ok(Self {
            nu,
            method: GreenMethod::ClosedForm,
        })
    }

    pub fn with_method(mut self, method: GreenMethod) -> Self {
        self.method = method;
        self
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    fn check(&self, x: [f64; 2], xi: [f64; 2]) -> Result<()> {
        if !(x.iter().chain(&xi).all(|v| v.is_finite())) {
            return Err(param("non-finite coordinates"));
        }
        if xi[1] <= 0.0 {
            return Err(Error::Domain(format!("source depth must be positive, got {}", xi[1])));
        }
        if x[1] < 0.0 {
            return Err(Error::Domain(format!("field point above the free surface (x2 = {})", x[1])));
        }
        Ok(())
    }

    /// `G(x; ξ)` and `∇_x G`.
    pub fn eval(&self, x: [f64; 2], xi: [f64; 2]) -> Result<KernelEval> {
        self.check(x, xi)?;
        if x == xi {
            return Err(Error::Singularity(format!("field point coincides with the source {xi:?}")));
        }
        self.eval_unchecked(x, xi, true)
    }

    pub fn value(&self, x: [f64; 2], xi: [f64; 2]) -> Result<Complex64> {
        Ok(self.eval(x, xi)?.value)
    }

    pub fn gradient(&self, x: [f64; 2], xi: [f64; 2]) -> Result<[Complex64; 2]> {
        Ok(self.eval(x, xi)?.grad)
    }

    /// `G - (1/2π) ln|x - ξ|` and its gradient; smooth through `x = ξ`.
    pub fn regular_part(&self, x: [f64; 2], xi: [f64; 2]) -> Result<KernelEval> {
        self.check(x, xi)?;
        self.eval_unchecked(x, xi, false)
    }

    /// Outgoing wave component `i e^{-νY} e^{-iν|X|}`; `G` minus this decays
    /// like `|X|^{-2}`.
    pub fn wave_part(&self, x: [f64; 2], xi: [f64; 2]) -> Complex64 {
        let y = x[1] + xi[1];
        let ax = (x[0] - xi[0]).abs();
        Complex64::new(0.0, (-self.nu * y).exp()) * Complex64::from_polar(1.0, -self.nu * ax)
    }

    /// Amplitudes `(d+, d-)` of `G(·; ξ) ~ d± e^{∓iνx1 - νx2}`.
    pub fn far_field(&self, xi: [f64; 2]) -> (Complex64, Complex64) {
        let a = (-self.nu * xi[1]).exp();
        let i = Complex64::new(0.0, 1.0);
        (
            i * a * Complex64::from_polar(1.0, self.nu * xi[0]),
            i * a * Complex64::from_polar(1.0, -self.nu * xi[0]),
        )
    }

    pub(crate) fn eval_unchecked(&self, x: [f64; 2], xi: [f64; 2], with_log: bool) -> Result<KernelEval> {
        match self.method {
            GreenMethod::ClosedForm => kernel(self.nu, x, xi, with_log).ok_or_else(|| Error::Evaluation {
                what: format!("exponential integral at x = {x:?}, ξ = {xi:?}"),
                achieved: f64::NAN,
            }),
            GreenMethod::Quadrature => kernel_by_quadrature(self.nu, x, xi, with_log),
        }
    }
}

/// Closed-form kernel.  `y2 = 0` (a source on the free surface) is allowed
/// as long as `x ≠ y`; the logarithmic pair then cancels identically.
#[inline]
pub(crate) fn kernel(nu: f64, x: [f64; 2], y: [f64; 2], with_log: bool) -> Option<KernelEval> {
    let xx = x[0] - y[0];
    let d2 = x[1] - y[1];
    let yy = x[1] + y[1];
    let ax = xx.abs();
    let zeta = Complex64::new(yy, -ax);
    let f = scaled_e1(-nu * zeta)?;
    let fp = -nu * f - zeta.inv();
    pack(nu, xx, d2, yy, f.re, fp, with_log)
}

#[inline]
fn pack(nu: f64, xx: f64, d2: f64, yy: f64, re_f: f64, fp: Complex64, with_log: bool) -> Option<KernelEval> {
    let ax = xx.abs();
    let e = (-nu * yy).exp();
    let (s, c) = (nu * ax).sin_cos();
    let pv = re_f - PI * e * s;
    let pv_y = fp.re + PI * nu * e * s;
    let pv_ax = fp.im - PI * nu * e * c;
    let rp2 = xx * xx + yy * yy;
    let (sx, cx) = (nu * xx).sin_cos();
    let sgn = if xx > 0.0 {
        1.0
    } else if xx < 0.0 {
        -1.0
    } else {
        0.0
    };

    let (mut v, mut g1, mut g2);
    if yy > 0.0 {
        v = -INV_4PI * rp2.ln();
        g1 = -INV_2PI * xx / rp2;
        g2 = -INV_2PI * yy / rp2;
    } else {
        v = 0.0;
        g1 = 0.0;
        g2 = 0.0;
    }
    if with_log {
        let r2 = xx * xx + d2 * d2;
        if yy > 0.0 {
            v += INV_4PI * r2.ln();
            g1 += INV_2PI * xx / r2;
            g2 += INV_2PI * d2 / r2;
        } else {
            // Source on the surface: ln(r²/r'²) and its gradient vanish.
            v = 0.0;
            g1 = 0.0;
            g2 = 0.0;
        }
    }
    v -= pv / PI;
    g1 -= sgn * pv_ax / PI;
    g2 -= pv_y / PI;
    let out = KernelEval {
        value: Complex64::new(v, e * cx),
        grad: [Complex64::new(g1, -nu * e * sx), Complex64::new(g2, -nu * e * cx)],
    };
    (out.value.re.is_finite() && out.grad[0].re.is_finite() && out.grad[1].re.is_finite()).then_some(out)
}

fn rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| GaussRule::new(24))
}

/// `(PV, ∂PV/∂X, ∂PV/∂Y)` by direct quadrature in the wavenumber, with the
/// pole at `k = ν` removed by subtraction on `[0, 2ν]`.
fn pv_by_quadrature(nu: f64, xx: f64, yy: f64, level: usize) -> [f64; 3] {
    let g = |k: f64| {
        let e = (-k * yy).exp();
        let (s, c) = (k * xx).sin_cos();
        [e * c, -k * e * s, -k * e * c]
    };
    let g0 = g(nu);
    let gl = rule();
    let osc = xx.abs() + yy;
    let mut acc = [0.0; 3];
    let m = level * ((nu * osc).ceil() as usize + 2);
    for side in 0..2 {
        let (a, b) = if side == 0 { (0.0, nu) } else { (nu, 2.0 * nu) };
        for p in 0..m {
            let lo = a + (b - a) * p as f64 / m as f64;
            let hi = a + (b - a) * (p + 1) as f64 / m as f64;
            for (k, w) in gl.on(lo, hi) {
                let gk = g(k);
                for i in 0..3 {
                    acc[i] += w * (gk[i] - g0[i]) / (k - nu);
                }
            }
        }
    }
    let kmax = 2.0 * nu + 46.0 / yy;
    let width = 2.0 / (osc + nu) / level as f64;
    let panels = ((kmax - 2.0 * nu) / width).ceil() as usize;
    for p in 0..panels {
        let lo = 2.0 * nu + width * p as f64;
        for (k, w) in gl.on(lo, lo + width) {
            let gk = g(k);
            for i in 0..3 {
                acc[i] += w * gk[i] / (k - nu);
            }
        }
    }
    acc
}

fn kernel_by_quadrature(nu: f64, x: [f64; 2], y: [f64; 2], with_log: bool) -> Result<KernelEval> {
    let xx = x[0] - y[0];
    let yy = x[1] + y[1];
    if yy <= 0.0 {
        return Err(Error::Domain("quadrature path needs x2 + ξ2 > 0".into()));
    }
    let coarse = pv_by_quadrature(nu, xx, yy, 1);
    let fine = pv_by_quadrature(nu, xx, yy, 2);
    let scale = 1.0 + fine.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = coarse
        .iter()
        .zip(&fine)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if diff > 1e-11 * scale {
        return Err(Error::Evaluation {
            what: format!("principal-value quadrature at X = {xx}, Y = {yy}"),
            achieved: diff / scale,
        });
    }
    let [pv, pv_x, pv_y] = fine;
    // Reuse pack() by converting the X-derivative to the |X| convention:
    // pack() computes PV from Re F and sin, so hand it consistent pieces.
    let e = (-nu * yy).exp();
    let ax = xx.abs();
    let (s, c) = (nu * ax).sin_cos();
    let re_f = pv + PI * e * s;
    let sgn = if xx >= 0.0 { 1.0 } else { -1.0 };
    let pv_ax = sgn * pv_x;
    let fp = Complex64::new(pv_y - PI * nu * e * s, pv_ax + PI * nu * e * c);
    pack(nu, xx, x[1] - y[1], yy, re_f, fp, with_log).ok_or_else(|| Error::Evaluation {
        what: "non-finite quadrature result".into(),
        achieved: f64::NAN,
    })
}
