//! Geometric and parametric uniqueness conditions on the body contour.
//!
//! Every check is phrased as a pointwise *slack* that is non-negative where
//! the inequality holds; reports carry the sampled minimum.  The normal is
//! the one exterior to the fluid (pointing into the body).

use crate::error::{param, Result};
use crate::geometry::{BodyCurve, Frame, GeometryBox};
use serde::{Deserialize, Serialize};

/// Relative tolerance applied to the characteristic slack scale `L·H²`.
pub const DEFAULT_REL_TOLERANCE: f64 = 1e-9;
/// Number of ε values in the coarse feasibility scan.
pub const EPSILON_SCAN_POINTS: usize = 32;

/// The pointwise inequalities that can be checked on a contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// `-x1 n1 ≥ 0`.
    Condition1,
    /// `x1(x1² - (x2-ε)²) n1 + 2 x1² (x2-ε) n2 ≥ 0`.
    Condition2 { epsilon: f64 },
    /// `x1(x1² - x2²) n1 + 2 x1² x2 n2 ≥ 0`, i.e. `r² W·n ≥ 0`.
    Mazya,
    /// `(H/ε) W·n + x1 n1 ≥ 0`.
    Lemma4 { epsilon: f64, max_depth: f64 },
}

impl Condition {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Condition1 => "condition1",
            Self::Condition2 { .. } => "condition2",
            Self::Mazya => "mazya",
            Self::Lemma4 { .. } => "lemma4",
        }
    }

    pub fn slack(&self, f: &Frame) -> f64 {
        let [x1, x2] = f.x;
        let [n1, n2] = f.normal;
        match *self {
            Self::Condition1 => -x1 * n1,
            Self::Condition2 { epsilon } => circle_family(x1, x2 - epsilon, n1, n2),
            Self::Mazya => circle_family(x1, x2, n1, n2),
            Self::Lemma4 { epsilon, max_depth } => {
                let r2 = x1 * x1 + x2 * x2;
                max_depth / epsilon * circle_family(x1, x2, n1, n2) / r2 + x1 * n1
            }
        }
    }
}

#[inline]
fn circle_family(x1: f64, y: f64, n1: f64, n2: f64) -> f64 {
    x1 * (x1 * x1 - y * y) * n1 + 2.0 * x1 * x1 * y * n2
}

/// `W·n` for the field `W = (x1(x1²-x2²), 2x1²x2)/r²`.
pub fn w_dot_n(f: &Frame) -> f64 {
    let [x1, x2] = f.x;
    circle_family(x1, x2, f.normal[0], f.normal[1]) / (x1 * x1 + x2 * x2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub name: String,
    pub holds: bool,
    pub min_slack: f64,
    pub argmin: [f64; 2],
    pub samples: usize,
    pub tolerance: f64,
    /// Change of the minimum when the sampling is halved.
    pub convergence: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Default tolerance for a contour: `1e-9 · L · H²`.
pub fn default_tolerance(b: &GeometryBox) -> f64 {
    DEFAULT_REL_TOLERANCE * b.half_width.max(f64::MIN_POSITIVE) * b.max_depth * b.max_depth
}

/// Evaluate one condition at `samples` equispaced parameters.
pub fn evaluate(curve: &BodyCurve, cond: Condition, samples: usize, tolerance: f64) -> Result<ConditionReport> {
    if samples < 8 {
        return Err(param(format!("at least 8 samples are needed, got {samples}")));
    }
    let frames = curve.sample(samples);
    let mut best = (f64::INFINITY, [0.0; 2]);
    let mut coarse = f64::INFINITY;
    for (j, f) in frames.iter().enumerate() {
        let s = cond.slack(f);
        if s < best.0 {
            best = (s, f.x);
        }
        if j % 2 == 0 {
            coarse = coarse.min(s);
        }
    }
    Ok(ConditionReport {
        name: cond.name().to_string(),
        holds: best.0 >= -tolerance,
        min_slack: best.0,
        argmin: best.1,
        samples,
        tolerance,
        convergence: (coarse - best.0).abs(),
        warnings: Vec::new(),
    })
}

/// Slack along the contour: `(t, x, slack)` triples.
pub fn slack_profile(curve: &BodyCurve, cond: Condition, samples: usize) -> Vec<(f64, [f64; 2], f64)> {
    curve
        .sample(samples)
        .iter()
        .map(|f| (f.t, f.x, cond.slack(f)))
        .collect()
}

pub fn check_condition1(curve: &BodyCurve, samples: usize) -> Result<ConditionReport> {
    let b = GeometryBox::of(curve);
    evaluate(curve, Condition::Condition1, samples, default_tolerance(&b))
}

pub fn check_condition2(curve: &BodyCurve, epsilon: f64, samples: usize) -> Result<ConditionReport> {
    let b = GeometryBox::of(curve);
    if !(epsilon > 0.0 && epsilon <= b.min_depth * (1.0 + 1e-12)) {
        return Err(param(format!(
            "epsilon must lie in (0, h = {}], got {epsilon}",
            b.min_depth
        )));
    }
    evaluate(curve, Condition::Condition2 { epsilon }, samples, default_tolerance(&b))
}

pub fn check_mazya(curve: &BodyCurve, samples: usize) -> Result<ConditionReport> {
    let b = GeometryBox::of(curve);
    evaluate(curve, Condition::Mazya, samples, default_tolerance(&b))
}

/// The comparison `-x1 n1 ≤ (H/ε) W·n`, which is only guaranteed when
/// Conditions 1 and 2 hold; unmet preconditions are reported as warnings.
pub fn lemma4_slack(curve: &BodyCurve, epsilon: f64, samples: usize) -> Result<ConditionReport> {
    let b = GeometryBox::of(curve);
    let c1 = check_condition1(curve, samples)?;
    let c2 = check_condition2(curve, epsilon, samples)?;
    let cond = Condition::Lemma4 {
        epsilon,
        max_depth: b.max_depth,
    };
    let mut rep = evaluate(curve, cond, samples, default_tolerance(&b))?;
    if !c1.holds {
        rep.warnings.push("precondition: condition 1 does not hold".into());
    }
    if !c2.holds {
        rep.warnings.push(format!("precondition: condition 2 does not hold for ε = {epsilon}"));
    }
    Ok(rep)
}

/// Outcome of the search for the largest admissible ε.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSearch {
    pub epsilon: Option<f64>,
    /// Runs of feasible scan points, as closed intervals `[lo, hi]`.
    pub feasible_intervals: Vec<[f64; 2]>,
    pub scan: Vec<(f64, bool)>,
}

/// Largest ε ∈ (0, h] for which Condition 2 holds: a 32-point scan of
/// `(0, h]` followed by bisection above the largest feasible scan point.
/// Feasibility is not assumed to be monotone in ε.
pub fn max_epsilon(curve: &BodyCurve, samples: usize, rel_tol: f64) -> Result<EpsilonSearch> {
    if !(rel_tol > 0.0) {
        return Err(param("rel_tol must be positive"));
    }
    let b = GeometryBox::of(curve);
    let tol = default_tolerance(&b);
    let h = b.min_depth;
    let frames = curve.sample(samples.max(8));
    let ok = |eps: f64| {
        let c = Condition::Condition2 { epsilon: eps };
        frames.iter().all(|f| c.slack(f) >= -tol)
    };
    let scan: Vec<(f64, bool)> = (1..=EPSILON_SCAN_POINTS)
        .map(|k| {
            let e = h * k as f64 / EPSILON_SCAN_POINTS as f64;
            (e, ok(e))
        })
        .collect();
    let mut feasible_intervals = Vec::new();
    let mut run: Option<[f64; 2]> = None;
    for &(e, f) in &scan {
        match (f, run.as_mut()) {
            (true, Some(r)) => r[1] = e,
            (true, None) => run = Some([e, e]),
            (false, Some(_)) => feasible_intervals.push(run.take().unwrap()),
            (false, None) => {}
        }
    }
    feasible_intervals.extend(run);
    let last = scan.iter().rposition(|s| s.1);
    let epsilon = last.map(|k| {
        if k + 1 == scan.len() {
            return h;
        }
        let (mut lo, mut hi) = (scan[k].0, scan[k + 1].0);
        while hi - lo > rel_tol * lo {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    });
    Ok(EpsilonSearch {
        epsilon,
        feasible_intervals,
        scan,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub value: f64,
    pub holds: bool,
}

/// Small-frequency criterion `24 ν L² (1 + νh)³ / h < 1`.
pub fn uniqueness_criterion(nu: f64, l: f64, h: f64) -> Result<UniquenessReport> {
    if !(nu > 0.0 && l > 0.0 && h > 0.0) || !(nu.is_finite() && l.is_finite() && h.is_finite()) {
        return Err(param(format!("ν, L, h must be positive, got ({nu}, {l}, {h})")));
    }
    let value = 24.0 * nu * l * l * (1.0 + nu * h).powi(3) / h;
    Ok(UniquenessReport {
        value,
        holds: value < 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ShapeSpec;

    fn circle(c: [f64; 2], a: f64) -> BodyCurve {
        BodyCurve::new(ShapeSpec::circle(c, a)).unwrap()
    }

    #[test]
    fn centred_circle_passes_condition1_with_zero_minimum() {
        let r = check_condition1(&circle([0.0, 2.0], 1.0), 256).unwrap();
        assert!(r.holds);
        assert!(r.min_slack.abs() < 1e-15);
        assert!(r.argmin[0].abs() < 1e-12);
    }

    #[test]
    fn off_axis_circle_fails_condition1_toward_axis() {
        let r = check_condition1(&circle([0.5, 2.0], 1.0), 256).unwrap();
        assert!(!r.holds);
        assert!(r.argmin[0] > 0.0 && r.argmin[0] < 0.5);
    }

    #[test]
    fn condition2_examples() {
        let c = circle([0.0, 2.0], 1.0);
        let r = check_condition2(&c, 1.0, 256).unwrap();
        assert!(r.holds && r.min_slack.abs() < 1e-12);
        let r = check_condition2(&c, 0.5, 256).unwrap();
        assert!(r.holds);
        assert!(check_condition2(&c, 1.5, 256).is_err());
        assert!(check_condition2(&c, 0.0, 256).is_err());
    }

    #[test]
    fn condition2_slack_on_shallow_circle_is_negative_beyond_c_minus_a() {
        // c - ε = 0.9 < a: the algebraic inequality fails off the axis.
        let c = circle([0.0, 1.5], 1.0);
        let cond = Condition::Condition2 { epsilon: 0.6 };
        let min = c.sample(256).iter().map(|f| cond.slack(f)).fold(f64::INFINITY, f64::min);
        assert!(min < -1e-3);
    }

    #[test]
    fn epsilon_search_on_circles() {
        let s = max_epsilon(&circle([0.0, 2.0], 1.0), 512, 1e-8).unwrap();
        assert_eq!(s.epsilon, Some(1.0));
        assert_eq!(s.feasible_intervals.len(), 1);
        let s = max_epsilon(&circle([0.0, 3.0], 1.0), 512, 1e-8).unwrap();
        assert!((s.epsilon.unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn uniqueness_examples() {
        let r = uniqueness_criterion(0.01, 1.0, 1.0).unwrap();
        assert!((r.value - 0.24 * 1.01f64.powi(3)).abs() < 1e-12 && r.holds);
        let r = uniqueness_criterion(0.1, 1.0, 1.0).unwrap();
        assert!((r.value - 3.1944).abs() < 1e-12 && !r.holds);
        assert!(uniqueness_criterion(1.0, 0.0, 1.0).is_err());
        assert!(uniqueness_criterion(1.0, 1e-9, 1.0).unwrap().holds);
    }

    #[test]
    fn lemma4_reports_unmet_preconditions() {
        let c = circle([0.0, 2.0], 1.0);
        let r = lemma4_slack(&c, 1.0, 256).unwrap();
        assert!(r.holds && r.warnings.is_empty());
        let off = circle([0.5, 2.0], 1.0);
        let r = lemma4_slack(&off, 0.5, 256).unwrap();
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn report_json_fields() {
        let r = check_mazya(&circle([0.0, 2.0], 1.0), 64).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for k in ["name", "holds", "min_slack", "argmin", "samples", "tolerance"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert_eq!(v["name"], "mazya");
    }
}
