//! The cut-off χ, the wave modes `U±` built from it, and the constants
//! `𝒜`, `ℬ` obtained by quadrature of their norms.
//!
//! `χ` is the quintic smoothstep from 0 at `t = 1` to 1 at `t = 3`.  It has
//! `max|χ'| = 15/16` and `max|χ''| = 5√3/6 ≈ 1.443`; no smooth cut-off over
//! an interval of length 2 can keep both derivatives strictly below 1.

use crate::constants::WeightSet;
use crate::error::Result;
use crate::quadrature::GaussRule;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `χ(t)` for `t ∈ ℝ`.
pub fn chi(t: f64) -> f64 {
    let y = ((t - 1.0) / 2.0).clamp(0.0, 1.0);
    y * y * y * (10.0 + y * (-15.0 + 6.0 * y))
}

pub fn chi_prime(t: f64) -> f64 {
    let y = (t - 1.0) / 2.0;
    if !(0.0..=1.0).contains(&y) {
        return 0.0;
    }
    15.0 * y * y * (1.0 - y) * (1.0 - y)
}

pub fn chi_second(t: f64) -> f64 {
    let y = (t - 1.0) / 2.0;
    if !(0.0..=1.0).contains(&y) {
        return 0.0;
    }
    15.0 * y * (1.0 - y) * (1.0 - 2.0 * y)
}

pub const CHI_PRIME_MAX: f64 = 15.0 / 16.0;
/// `5√3/6`.
pub const CHI_SECOND_MAX: f64 = 1.443_375_672_974_064_5;

/// Value, gradient and Laplacian of a wave mode at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEval {
    pub value: Complex64,
    pub grad: [Complex64; 2],
    pub laplacian: Complex64,
}

/// `U+(x) = χ(x1/τ) e^{-iνx1 - νx2}` and its mirror `U-(x1, x2) = U+(-x1, x2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveModes {
    pub nu: f64,
    pub tau: f64,
}

impl WaveModes {
    pub fn new(w: &WeightSet) -> Self {
        Self {
            nu: w.nu,
            tau: w.tau(),
        }
    }

    pub fn plus(&self, x: [f64; 2]) -> ModeEval {
        let (nu, g) = (self.nu, 1.0 / self.tau);
        let t = x[0] * g;
        let (c, c1, c2) = (chi(t), chi_prime(t), chi_second(t));
        if c == 0.0 && c1 == 0.0 {
            let z = Complex64::default();
            return ModeEval {
                value: z,
                grad: [z; 2],
                laplacian: z,
            };
        }
        let e = Complex64::from_polar((-nu * x[1]).exp(), -nu * x[0]);
        let i = Complex64::i();
        ModeEval {
            value: c * e,
            grad: [(g * c1 - i * nu * c) * e, -nu * c * e],
            laplacian: (g * g * c2 - 2.0 * i * nu * g * c1) * e,
        }
    }

    pub fn minus(&self, x: [f64; 2]) -> ModeEval {
        let m = self.plus([-x[0], x[1]]);
        ModeEval {
            value: m.value,
            grad: [-m.grad[0], m.grad[1]],
            laplacian: m.laplacian,
        }
    }

    /// `d+ U+ + d- U-`.
    pub fn combined(&self, d_plus: Complex64, d_minus: Complex64, x: [f64; 2]) -> ModeEval {
        let (p, m) = (self.plus(x), self.minus(x));
        ModeEval {
            value: d_plus * p.value + d_minus * m.value,
            grad: [
                d_plus * p.grad[0] + d_minus * m.grad[0],
                d_plus * p.grad[1] + d_minus * m.grad[1],
            ],
            laplacian: d_plus * p.laplacian + d_minus * m.laplacian,
        }
    }
}

/// `𝒜 = (|||U+|||² + |||U-|||²)^{1/2}` and `ℬ = (‖γ0⁻¹ΔU+‖² + ‖γ0⁻¹ΔU-‖²)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiationConstants {
    pub nu: f64,
    pub half_width: f64,
    pub max_depth: f64,
    pub a: f64,
    pub b: f64,
    pub a_bound: f64,
    pub b_bound: f64,
    pub chi_prime_max: f64,
    pub chi_second_max: f64,
}

impl RadiationConstants {
    pub fn a_holds(&self) -> bool {
        self.a <= self.a_bound
    }

    pub fn b_holds(&self) -> bool {
        self.b <= self.b_bound
    }
}

/// Squared pieces of `|||U+|||_u²`: `(‖γ0U‖², ν⁻²‖γ0∇U‖², ‖γ2U‖²_Γ)`.
/// `U` vanishes on the body, so the contour term is zero.
pub(crate) fn mode_norm_parts(w: &WeightSet, from: f64) -> (f64, f64, f64) {
    let nu = w.nu;
    let tau = w.tau();
    let g = 1.0 / tau;
    let gl = GaussRule::new(16);
    let x2_breaks: Vec<f64> = {
        let mut v = vec![0.0];
        let mut x = 0.25 / nu;
        while x < 60.0 / nu {
            v.push(x);
            x *= 1.6;
        }
        v.push(60.0 / nu);
        v
    };
    // ∫_0^∞ γ0² e^{-2νx2} dx2 at fixed x1.
    let depth_integral = |x1: f64| -> f64 {
        let mut s = 0.0;
        for b in x2_breaks.windows(2) {
            s += gl.integrate(b[0], b[1], |x2| w.gamma0_sq([x1, x2]) * (-2.0 * nu * x2).exp());
        }
        s
    };
    let mut vol = 0.0;
    let mut grad = 0.0;
    let mut surf = 0.0;
    let mut add = |x1: f64, wt: f64| {
        let t = x1 * g;
        let (c, c1) = (chi(t), chi_prime(t));
        let d = depth_integral(x1);
        vol += wt * c * c * d;
        grad += wt * (g.powi(4) * c1 * c1 + 2.0 * nu * nu * c * c) * d / (nu * nu);
        surf += wt * w.gamma2_sq(x1) * c * c;
    };
    let lo = from.max(tau);
    // Transition band, then x1 = X/s on (0, 1] for the infinite part.
    let panels = 16;
    if lo < 3.0 * tau {
        let hw = (3.0 * tau - lo) / panels as f64;
        for k in 0..panels {
            let a = lo + k as f64 * hw;
            for (x1, wt) in gl.on(a, a + hw) {
                add(x1, wt);
            }
        }
    }
    let x0 = lo.max(3.0 * tau);
    let mut s_breaks = vec![0.0];
    let mut s = 1e-6;
    while s < 1.0 {
        s_breaks.push(s);
        s *= 2.0;
    }
    s_breaks.push(1.0);
    for b in s_breaks.windows(2) {
        for (s, ws) in gl.on(b[0], b[1]) {
            add(x0 / s, ws * x0 / (s * s));
        }
    }
    (vol, grad, surf)
}

/// `‖γ0⁻¹ΔU+‖²`; the depth integral is exact:
/// `∫_0^∞ (a + ν²x2²)/ν² e^{-2νx2} dx2 = (a/(2ν) + 1/(4ν))/ν²`.
pub(crate) fn mode_laplacian_norm_sq(w: &WeightSet) -> f64 {
    let nu = w.nu;
    let tau = w.tau();
    let g = 1.0 / tau;
    let l = w.half_width;
    let gl = GaussRule::new(16);
    let panels = 32;
    let hw = 2.0 * tau / panels as f64;
    let mut s = 0.0;
    for k in 0..panels {
        let a0 = tau + k as f64 * hw;
        s += gl.integrate(a0, a0 + hw, |x1| {
            let t = x1 * g;
            let (c1, c2) = (chi_prime(t), chi_second(t));
            let amp = g.powi(8) * c2 * c2 + 4.0 * nu * nu * g.powi(4) * c1 * c1;
            let a = l * l * nu * nu + 1.0 + nu * nu * x1 * x1;
            amp * (a / (2.0 * nu) + 1.0 / (4.0 * nu)) / (nu * nu)
        });
    }
    s
}

/// Quadrature values of `𝒜` and `ℬ` for the concrete χ.
pub fn radiation_constants(nu: f64, half_width: f64, max_depth: f64) -> Result<RadiationConstants> {
    let w = WeightSet::from_parts(nu, half_width, max_depth)?;
    let (vol, grad, surf) = mode_norm_parts(&w, 0.0);
    // U- is the mirror image of U+, so both carry the same norms.
    let a = (2.0 * (vol + grad + surf)).sqrt();
    let b = (2.0 * mode_laplacian_norm_sq(&w)).sqrt();
    Ok(RadiationConstants {
        nu,
        half_width,
        max_depth,
        a,
        b,
        a_bound: 3.0,
        b_bound: 32.0 * (nu * w.tau()).sqrt(),
        chi_prime_max: CHI_PRIME_MAX,
        chi_second_max: CHI_SECOND_MAX,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_endpoints_and_derivatives() {
        assert_eq!(chi(0.5), 0.0);
        assert_eq!(chi(1.0), 0.0);
        assert_eq!(chi(3.0), 1.0);
        assert_eq!(chi(7.0), 1.0);
        assert!((chi(2.0) - 0.5).abs() < 1e-15);
        let h = 1e-5;
        for t in [1.3, 2.0, 2.7] {
            let fd1 = (chi(t + h) - chi(t - h)) / (2.0 * h);
            let fd2 = (chi_prime(t + h) - chi_prime(t - h)) / (2.0 * h);
            assert!((fd1 - chi_prime(t)).abs() < 1e-9);
            assert!((fd2 - chi_second(t)).abs() < 1e-9);
        }
        assert!((chi_prime(2.0) - CHI_PRIME_MAX).abs() < 1e-15);
        let y = (3.0 - 3f64.sqrt()) / 6.0;
        assert!((chi_second(1.0 + 2.0 * y) - CHI_SECOND_MAX).abs() < 1e-12);
    }

    #[test]
    fn modes_solve_the_homogeneous_surface_condition() {
        let m = WaveModes { nu: 1.3, tau: 4.0 };
        for x1 in [-20.0, -9.0, 5.0, 20.0] {
            for p in [m.plus([x1, 0.0]), m.minus([x1, 0.0])] {
                let r = -p.grad[1] - 1.3 * p.value;
                assert!(r.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn laplacian_matches_finite_differences() {
        let m = WaveModes { nu: 0.7, tau: 3.0 };
        let x = [6.1, 0.8];
        let h = 1e-3;
        let v = |a: f64, b: f64| m.plus([a, b]).value;
        let lap = (v(x[0] + h, x[1]) + v(x[0] - h, x[1]) + v(x[0], x[1] + h) + v(x[0], x[1] - h)
            - 4.0 * v(x[0], x[1]))
            / (h * h);
        assert!((lap - m.plus(x).laplacian).norm() < 1e-6);
        let gx = (v(x[0] + h, x[1]) - v(x[0] - h, x[1])) / (2.0 * h);
        assert!((gx - m.plus(x).grad[0]).norm() < 1e-6);
        let mm = m.minus([-x[0], x[1]]);
        assert!((mm.laplacian - m.plus(x).laplacian).norm() < 1e-15);
    }
}
