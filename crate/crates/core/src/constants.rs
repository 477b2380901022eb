//! Weight functions of the solution/data norms and the explicit constants
//! of the a priori bound.
//!
//! Where a constant is only known through an upper bound, the bound itself
//! is stored; validation therefore checks a sufficient right-hand side.

use crate::error::{param, Result};
use crate::geometry::GeometryBox;
use serde::{Deserialize, Serialize};

/// `γ0² = ν²/(L²ν² + 1 + ν²|x|²)`, `γ1² = 1/τ`, `γ2² = ν/(1 + ν²x1²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSet {
    pub nu: f64,
    pub half_width: f64,
    pub max_depth: f64,
}

impl WeightSet {
    pub fn new(nu: f64, b: &GeometryBox) -> Result<Self> {
        Self::from_parts(nu, b.half_width, b.max_depth)
    }

    pub fn from_parts(nu: f64, half_width: f64, max_depth: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(param(format!("ν must be positive, got {nu}")));
        }
        if !(half_width >= 0.0 && max_depth > 0.0) {
            return Err(param("L must be non-negative and H positive"));
        }
        Ok(Self {
            nu,
            half_width,
            max_depth,
        })
    }

    /// τ = L + 1/ν + H.
    pub fn tau(&self) -> f64 {
        self.half_width + 1.0 / self.nu + self.max_depth
    }

    pub fn gamma0_sq(&self, x: [f64; 2]) -> f64 {
        let nu2 = self.nu * self.nu;
        nu2 / (self.half_width * self.half_width * nu2 + 1.0 + nu2 * (x[0] * x[0] + x[1] * x[1]))
    }

    pub fn gamma1_sq(&self) -> f64 {
        1.0 / self.tau()
    }

    pub fn gamma2_sq(&self, x1: f64) -> f64 {
        self.nu / (1.0 + self.nu * self.nu * x1 * x1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub name: String,
    pub value: f64,
    pub formula: String,
}

/// All constants for one (ν, geometry) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantLedger {
    pub nu: f64,
    pub geometry: GeometryBox,
    pub tau: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    /// Stated bound with the 2³⁰ prefactor.
    pub c0: f64,
    /// Intermediate form `2¹² H ε⁻¹ C8 C3 (1 + C7)`.
    pub c0_intermediate: f64,
    pub c1: f64,
    pub c2: f64,
    /// The constant C of the final estimate.
    pub c: f64,
    pub a_bound: f64,
    pub b_bound: f64,
    /// `1 + C` and `(1 + C)^{1/2}`; the absolute constant is taken as 1.
    pub multiplier_u: f64,
    pub multiplier_d: f64,
    pub entries: Vec<LedgerEntry>,
}

pub fn weights(nu: f64, b: &GeometryBox) -> Result<WeightSet> {
    WeightSet::new(nu, b)
}

pub fn ledger(nu: f64, b: &GeometryBox) -> Result<ConstantLedger> {
    let eps = b
        .epsilon
        .ok_or_else(|| param("ε is not set on the geometry box"))?;
    let w = WeightSet::new(nu, b)?;
    let (l, h, hh, k) = (b.half_width, b.min_depth, b.max_depth, b.curvature);
    if !(h > 0.0 && k >= 0.0 && eps > 0.0) {
        return Err(param("geometry box must have h > 0, κ ≥ 0, ε > 0"));
    }
    let tau = w.tau();
    let c3 = 3.0 + 2.0 * (k * l + 10.0);
    let c4 = 2f64.sqrt() + k * l;
    let c5 = c4 + hh * c3 / (2.0 * eps);
    let c6 = hh / (2.0 * eps) + 0.5;
    let c7 = 72.0 * nu * l * l * (1.0 + nu * h).powi(3) / h;
    let c8 = 24.0 + 18.0 * k * tau;
    let c0 = 2f64.powi(30)
        * hh
        / eps
        * (1.0 + k * l)
        * (1.0 + k * tau)
        * (1.0 + nu * l * l / h * (1.0 + nu * h).powi(3));
    let c0_intermediate = 2f64.powi(12) * hh / eps * c8 * c3 * (1.0 + c7);
    let c1 = 1.0 + nu * tau * c0 * c0;
    let c2 = c1.sqrt();
    let c = (1.0 + k * tau).powi(4) * (1.0 + nu * h).powi(6) * nu.powi(3) * tau.powi(7) / (h * h * eps * eps);
    let a_bound = 3.0;
    let b_bound = 32.0 * (nu * tau).sqrt();
    let e = |name: &str, value: f64, formula: &str| LedgerEntry {
        name: name.into(),
        value,
        formula: formula.into(),
    };
    let entries = vec![
        e("tau", tau, "L + 1/ν + H"),
        e("C3", c3, "3 + 2(κL + 10)"),
        e("C4", c4, "√2 + κL"),
        e("C5", c5, "C4 + H·C3/(2ε)"),
        e("C6", c6, "H/(2ε) + 1/2"),
        e("C7", c7, "72 νL²(1 + νh)³/h"),
        e("C8", c8, "24 + 18κτ"),
        e("C0", c0, "2^30 H ε⁻¹ (1 + κL)(1 + κτ)(1 + νL²h⁻¹(1 + νh)³)"),
        e("C0_intermediate", c0_intermediate, "2^12 H ε⁻¹ C8 C3 (1 + C7)"),
        e("C1", c1, "1 + ντ C0²"),
        e("C2", c2, "C1^{1/2}"),
        e("C", c, "h⁻²ε⁻²(1 + κτ)⁴(1 + νh)⁶ ν³ τ⁷"),
        e("A_bound", a_bound, "3"),
        e("B_bound", b_bound, "2^5 ν^{1/2} γ1⁻¹"),
        e("multiplier_u", 1.0 + c, "c(1 + C), c = 1"),
        e("multiplier_d", (1.0 + c).sqrt(), "c(1 + C)^{1/2}, c = 1"),
    ];
    if entries.iter().any(|x| !(x.value.is_finite() && x.value > 0.0)) {
        return Err(param("constant ledger overflowed for these parameters"));
    }
    Ok(ConstantLedger {
        nu,
        geometry: *b,
        tau,
        c3,
        c4,
        c5,
        c6,
        c7,
        c8,
        c0,
        c0_intermediate,
        c1,
        c2,
        c,
        a_bound,
        b_bound,
        multiplier_u: 1.0 + c,
        multiplier_d: (1.0 + c).sqrt(),
        entries,
    })
}

/// Right-hand sides of the final estimate (absolute constant taken as 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremBound {
    pub bound_u: f64,
    pub bound_d: f64,
}

pub fn theorem_rhs(ledger: &ConstantLedger, norm_f: f64) -> Result<TheoremBound> {
    theorem_rhs_for(ledger.c, norm_f)
}

pub fn theorem_rhs_for(c: f64, norm_f: f64) -> Result<TheoremBound> {
    if !(norm_f >= 0.0) || !(c >= 0.0) {
        return Err(param("norm and constant must be non-negative"));
    }
    Ok(TheoremBound {
        bound_u: (1.0 + c) * norm_f,
        bound_d: (1.0 + c).sqrt() * norm_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gbox(l: f64, h: f64, hh: f64, k: f64, eps: f64) -> GeometryBox {
        GeometryBox {
            half_width: l,
            min_depth: h,
            max_depth: hh,
            curvature: k,
            epsilon: Some(eps),
        }
    }

    #[test]
    fn weight_examples() {
        let w = WeightSet::from_parts(1.0, 1.0, 2.0).unwrap();
        assert!((w.gamma0_sq([0.0, 0.0]) - 0.5).abs() < 1e-15);
        assert!((w.gamma1_sq() - 0.25).abs() < 1e-15);
        assert!((w.gamma2_sq(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ledger_examples() {
        let l = ledger(1.0, &gbox(1.0, 1.0, 3.0, 1.0, 1.0)).unwrap();
        assert_eq!(l.tau, 5.0);
        assert_eq!(l.c3, 25.0);
        assert!((l.c4 - (2f64.sqrt() + 1.0)).abs() < 1e-15);
        assert!((l.c7 - 576.0).abs() < 1e-12);
        assert!((l.c - 6.48e9).abs() < 1e-3);
    }

    #[test]
    fn epsilon_is_required() {
        let mut b = gbox(1.0, 1.0, 3.0, 1.0, 1.0);
        b.epsilon = None;
        assert!(ledger(1.0, &b).is_err());
    }

    #[test]
    fn theorem_rhs_examples() {
        let t = theorem_rhs_for(6.48e9, 1.0).unwrap();
        assert_eq!(t.bound_u, 6.48e9 + 1.0);
        assert!((t.bound_d - 80498.44719620373).abs() < 1e-8);
        let t = theorem_rhs_for(0.0, 1.0).unwrap();
        assert_eq!((t.bound_u, t.bound_d), (1.0, 1.0));
        let t = theorem_rhs_for(5.0, 0.0).unwrap();
        assert_eq!((t.bound_u, t.bound_d), (0.0, 0.0));
    }
}
