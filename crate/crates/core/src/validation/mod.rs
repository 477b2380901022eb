//! Weighted norms by truncated quadrature, integral-identity residuals on
//! solved fields, the quadratic-form check and the bound report.
//!
//! Quadrature covers `Ω ∩ {|x1| < R, x2 < R}`.  The wave part of `u`
//! beyond `|x1| = R` is added in closed form; the remainder `v` beyond the
//! box is estimated from its decay over the two outer frames.

mod bound;
pub mod cutoff;
mod domain;
pub mod fields;
mod norms;

pub use bound::{
    bound_report, regression_family, run_case, BoundReport, InequalityCheck, LemmaChain, RegressionCase,
    REGRESSION_FREQUENCIES,
};
pub use cutoff::{radiation_constants, RadiationConstants, WaveModes};
pub use fields::{q_form_check, q_form_samples, Multiplier, QFormReport};
pub use norms::{FieldSamples, IdentityResidual, IdentityResiduals, NormParts, NormReport};

use crate::constants::WeightSet;
use crate::error::{param, Result};
use crate::geometry::GeometryBox;
use crate::solver::SolutionField;
use serde::{Deserialize, Serialize};

/// Truncation radius and quadrature density of the domain integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSettings {
    /// `R`; by default `max(60/ν, 3(L + H), 4τ)`.
    #[serde(default)]
    pub truncation: Option<f64>,
    /// Multiplies the node density in every direction.
    #[serde(default = "unit")]
    pub refinement: f64,
}

fn unit() -> f64 {
    1.0
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            truncation: None,
            refinement: 1.0,
        }
    }
}

impl QuadratureSettings {
    pub fn default_truncation(nu: f64, geometry: &GeometryBox) -> f64 {
        let tau = geometry.tau(nu);
        (60.0 / nu)
            .max(3.0 * (geometry.half_width + geometry.max_depth))
            .max(4.0 * tau)
    }

    pub fn truncation_for(&self, nu: f64, geometry: &GeometryBox) -> f64 {
        self.truncation
            .unwrap_or_else(|| Self::default_truncation(nu, geometry))
    }

    /// One refinement step: density ×2 and `R` ×1.5.
    pub fn refined(&self, nu: f64, geometry: &GeometryBox) -> Self {
        Self {
            truncation: Some(1.5 * self.truncation_for(nu, geometry)),
            refinement: 2.0 * self.refinement,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(r) = self.truncation {
            if !(r > 0.0 && r.is_finite()) {
                return Err(param("truncation radius must be positive"));
            }
        }
        if !(self.refinement >= 0.5 && self.refinement <= 8.0) {
            return Err(param("quadrature refinement must lie in [0.5, 8]"));
        }
        Ok(())
    }
}

/// Norms and identity residuals of one solved field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldEvaluation {
    pub norms: NormReport,
    pub identities: IdentityResiduals,
    /// `‖∂v/∂x1‖²`.
    pub horizontal_derivative_sq: f64,
    /// `∫_S |∂σv|² (W·n) ds`.
    pub contour_w: f64,
    /// `∫_S x1 n1 |∂σv|² ds`.
    pub contour_v: f64,
}

pub fn compute_norms(sol: &SolutionField, geometry: &GeometryBox, settings: &QuadratureSettings) -> Result<NormReport> {
    settings.validate()?;
    Ok(FieldSamples::collect(sol, geometry, settings)?.norms())
}

pub fn identity_residuals(
    sol: &SolutionField,
    geometry: &GeometryBox,
    settings: &QuadratureSettings,
) -> Result<IdentityResiduals> {
    settings.validate()?;
    Ok(FieldSamples::collect(sol, geometry, settings)?.identities())
}

/// Everything the bound report needs, from a single pass over the nodes.
pub fn evaluate_field(sol: &SolutionField, geometry: &GeometryBox, settings: &QuadratureSettings) -> Result<FieldEvaluation> {
    settings.validate()?;
    let s = FieldSamples::collect(sol, geometry, settings)?;
    Ok(FieldEvaluation {
        norms: s.norms(),
        identities: s.identities(),
        horizontal_derivative_sq: s.horizontal_derivative_sq(),
        contour_w: s.contour_tangential(crate::conditions::w_dot_n),
        contour_v: s.contour_tangential(|f| f.x[0] * f.normal[0]),
    })
}

/// `|||U+|||_u` and `‖γ0⁻¹ΔU+‖` for the concrete cut-off.
pub fn mode_norms(w: &WeightSet) -> (f64, f64) {
    let (a, b, c) = cutoff::mode_norm_parts(w, 0.0);
    ((a + b + c).sqrt(), cutoff::mode_laplacian_norm_sq(w).sqrt())
}
