//! The bound report: empirical ratios against `(1 + C)|||F|||` and the
//! chain of intermediate inequalities, on single cases and on the
//! regression family.

use super::{evaluate_field, FieldEvaluation, IdentityResiduals, QuadratureSettings};
use crate::constants::{ledger, ConstantLedger};
use crate::error::{Error, Result};
use crate::geometry::{BodyCurve, GeometryBox, ShapeSpec};
use crate::solver::{assemble_and_solve, BoundaryData, PointSource, SurfaceBump, VolumeBump};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A norm this small counts as zero when deciding whether a solution
/// exists without data.
const ZERO_NORM: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }

    /// `(rhs - lhs) / |rhs|`.
    pub fn margin(&self) -> f64 {
        if self.rhs == 0.0 {
            if self.lhs <= 0.0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            (self.rhs - self.lhs) / self.rhs.abs()
        }
    }
}

/// The intermediate estimates, each with its printed constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaChain {
    /// `∫_S |∂σv|²(W·n) ≤ C3 |||v||| |||F1||| + |||F1|||²`.
    pub contour_w: InequalityCheck,
    /// `2‖v_x1‖² + ∫_S x1n1|∂σv|² ≤ 2C4 |||v||| |||F1||| + |||F1|||²`.
    pub contour_v: InequalityCheck,
    /// `‖v_x1‖² ≤ C5 |||v||| |||F1||| + C6 |||F1|||²`.
    pub horizontal: InequalityCheck,
    /// `|||v|||_u ≤ |||v|||`.
    pub norm_order: InequalityCheck,
    /// `|d+|² + |d-|² ≤ 2 |||u|||_u |||F|||_f`.
    pub amplitudes: InequalityCheck,
}

impl LemmaChain {
    pub fn all(&self) -> [&InequalityCheck; 5] {
        [&self.contour_w, &self.contour_v, &self.horizontal, &self.norm_order, &self.amplitudes]
    }

    pub fn holds(&self) -> bool {
        self.all().iter().all(|c| c.holds)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub case: String,
    pub nu: f64,
    pub norm_u: f64,
    pub norm_f: f64,
    pub norm_f1: f64,
    pub norm_v: f64,
    /// `|d+| + |d-|`.
    pub d_sum: f64,
    #[serde(with = "crate::solver::data::complex_serde")]
    pub d_plus: Complex64,
    #[serde(with = "crate::solver::data::complex_serde")]
    pub d_minus: Complex64,
    /// The ledger constant `C`.
    pub c: f64,
    /// `|||u|||_u / ((1 + C)|||F|||_f)`.
    pub rho_u: f64,
    /// `(|d+| + |d-|) / ((1 + C)^{1/2}|||F|||_f)`.
    pub rho_d: f64,
    pub lemmas: LemmaChain,
    pub identities: IdentityResiduals,
    pub truncation: f64,
    pub tail_estimate: f64,
    pub nodes: usize,
}

pub fn bound_report(case: &str, eval: &FieldEvaluation, ledger: &ConstantLedger) -> Result<BoundReport> {
    let n = &eval.norms;
    let d_sum = n.d_plus.norm() + n.d_minus.norm();
    let (rho_u, rho_d) = if n.norm_f > 0.0 {
        (
            n.norm_u / ((1.0 + ledger.c) * n.norm_f),
            d_sum / ((1.0 + ledger.c).sqrt() * n.norm_f),
        )
    } else if n.norm_u > ZERO_NORM || d_sum > ZERO_NORM {
        return Err(Error::Inconsistent(format!(
            "{case}: nonzero solution (|||u||| = {:.3e}) for zero data",
            n.norm_u
        )));
    } else {
        (0.0, 0.0)
    };
    let (v, f1) = (n.norm_v, n.norm_f1);
    let lemmas = LemmaChain {
        contour_w: InequalityCheck::new("contour-W", eval.contour_w, ledger.c3 * v * f1 + f1 * f1),
        contour_v: InequalityCheck::new(
            "contour-V",
            2.0 * eval.horizontal_derivative_sq + eval.contour_v,
            2.0 * ledger.c4 * v * f1 + f1 * f1,
        ),
        horizontal: InequalityCheck::new(
            "horizontal-derivative",
            eval.horizontal_derivative_sq,
            ledger.c5 * v * f1 + ledger.c6 * f1 * f1,
        ),
        norm_order: InequalityCheck::new("norm-order", n.norm_v_u, n.norm_v),
        amplitudes: InequalityCheck::new(
            "amplitudes",
            n.d_plus.norm_sqr() + n.d_minus.norm_sqr(),
            2.0 * n.norm_u * n.norm_f,
        ),
    };
    Ok(BoundReport {
        case: case.into(),
        nu: ledger.nu,
        norm_u: n.norm_u,
        norm_f: n.norm_f,
        norm_f1: n.norm_f1,
        norm_v: n.norm_v,
        d_sum,
        d_plus: n.d_plus,
        d_minus: n.d_minus,
        c: ledger.c,
        rho_u,
        rho_d,
        lemmas,
        identities: eval.identities.clone(),
        truncation: n.truncation,
        tail_estimate: n.tail_estimate,
        nodes: n.nodes,
    })
}

/// A body, the `ε` it is checked with, and its data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegressionCase {
    pub name: String,
    pub shape: ShapeSpec,
    pub epsilon: f64,
    pub data: BoundaryData,
}

pub const REGRESSION_FREQUENCIES: [f64; 3] = [0.5, 1.0, 2.0];

/// Five bodies satisfying Conditions 1 and 2 and the Maz'ya condition,
/// each with two interior sources, a volume bump beside the body and a
/// surface bump off to one side.
pub fn regression_family() -> Vec<RegressionCase> {
    let shapes = [
        ("circle-c2", ShapeSpec::circle([0.0, 2.0], 1.0), 1.0),
        ("circle-c3", ShapeSpec::circle([0.0, 3.0], 1.0), 2.0),
        ("ellipse-tall", ShapeSpec::ellipse([0.0, 3.0], 1.0, 1.5), 1.5),
        ("ellipse-small", ShapeSpec::ellipse([0.0, 2.5], 0.8, 1.2), 1.3),
        ("fourier-k2", ShapeSpec::fourier([0.0, 2.5], 1.0, vec![0.0, 0.0, 0.05, 0.0]), 1.0),
    ];
    shapes
        .into_iter()
        .map(|(name, shape, epsilon)| {
            let c = shape.center;
            let data = BoundaryData {
                f: vec![VolumeBump {
                    center: [c[0] + 2.2, c[1]],
                    radius: 0.5,
                    amplitude: Complex64::new(0.5, 0.0),
                }],
                g2: vec![SurfaceBump {
                    center: -3.0,
                    radius: 1.0,
                    amplitude: Complex64::new(0.0, 0.3),
                }],
                ..BoundaryData::manufactured(vec![
                    PointSource {
                        at: [c[0] + 0.2, c[1] - 0.3],
                        strength: Complex64::new(1.0, 0.0),
                    },
                    PointSource {
                        at: [c[0] - 0.3, c[1] + 0.2],
                        strength: Complex64::new(0.0, 2.0),
                    },
                ])
            };
            RegressionCase {
                name: name.into(),
                shape,
                epsilon,
                data,
            }
        })
        .collect()
}

/// Solve one case at one frequency and build its report.
pub fn run_case(case: &RegressionCase, nu: f64, panels: usize, settings: &QuadratureSettings) -> Result<BoundReport> {
    let curve = BodyCurve::new(case.shape.clone())?;
    let geometry = GeometryBox::of(&curve).with_epsilon(case.epsilon)?;
    let led = ledger(nu, &geometry)?;
    let sol = assemble_and_solve(&curve, nu, &case.data, panels)?;
    let eval = evaluate_field(&sol, &geometry, settings)?;
    bound_report(&format!("{}@nu={nu}", case.name), &eval, &led)
}
