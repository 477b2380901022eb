//! Body contours and the geometric box (L, h, H, κ, ε) derived from them.
//!
//! Every contour is parametrised counterclockwise by `t ∈ [0, 2π)` and is
//! star-shaped about its `center`.  The normal returned here is the one
//! exterior to the fluid, i.e. it points into the body.

use crate::error::{param, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_SAMPLES: usize = 4096;

/// Shape description as it appears in configuration files:
/// `{"kind": "circle" | "ellipse" | "fourier", "center": [c1, c2],
///   "radius": a | "semiaxes": [a, b], "coeffs": [...], "samples": n}`.
///
/// Fourier shapes use `radius` together with `coeffs = [c1, s1, c2, s2, ...]`:
/// `r(θ) = radius · (1 + Σ_k c_k cos kθ + s_k sin kθ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    pub center: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semiaxes: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Circle,
    Ellipse,
    Fourier,
}

impl ShapeSpec {
    pub fn circle(center: [f64; 2], radius: f64) -> Self {
        Self {
            kind: ShapeKind::Circle,
            center,
            radius: Some(radius),
            semiaxes: None,
            coeffs: None,
            samples: None,
        }
    }

    pub fn ellipse(center: [f64; 2], a: f64, b: f64) -> Self {
        Self {
            kind: ShapeKind::Ellipse,
            center,
            radius: None,
            semiaxes: Some([a, b]),
            coeffs: None,
            samples: None,
        }
    }

    pub fn fourier(center: [f64; 2], radius: f64, coeffs: Vec<f64>) -> Self {
        Self {
            kind: ShapeKind::Fourier,
            center,
            radius: Some(radius),
            semiaxes: None,
            coeffs: Some(coeffs),
            samples: None,
        }
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.samples = Some(n);
        self
    }

    fn resolve(&self) -> Result<Shape> {
        let center = self.center;
        let extra = |what: &str| param(format!("{what} is not a parameter of a {:?} shape", self.kind));
        match self.kind {
            ShapeKind::Circle => {
                if self.semiaxes.is_some() {
                    return Err(extra("semiaxes"));
                }
                if self.coeffs.is_some() {
                    return Err(extra("coeffs"));
                }
                let radius = self.radius.ok_or_else(|| param("circle needs a radius"))?;
                Ok(Shape::Circle { center, radius })
            }
            ShapeKind::Ellipse => {
                if self.radius.is_some() {
                    return Err(extra("radius"));
                }
                if self.coeffs.is_some() {
                    return Err(extra("coeffs"));
                }
                let [a, b] = self.semiaxes.ok_or_else(|| param("ellipse needs semiaxes"))?;
                Ok(Shape::Ellipse { center, a, b })
            }
            ShapeKind::Fourier => {
                if self.semiaxes.is_some() {
                    return Err(extra("semiaxes"));
                }
                let radius = self.radius.ok_or_else(|| param("fourier shape needs a radius"))?;
                let coeffs = self.coeffs.clone().unwrap_or_default();
                let cos = coeffs.iter().step_by(2).copied().collect();
                let sin = coeffs.iter().skip(1).step_by(2).copied().collect();
                Ok(Shape::Fourier {
                    center,
                    radius,
                    cos,
                    sin,
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    Ellipse {
        center: [f64; 2],
        a: f64,
        b: f64,
    },
    Fourier {
        center: [f64; 2],
        radius: f64,
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
}

impl Shape {
    fn center(&self) -> [f64; 2] {
        match self {
            Self::Circle { center, .. } | Self::Ellipse { center, .. } | Self::Fourier { center, .. } => {
                *center
            }
        }
    }
}

/// Local geometry of the contour at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub t: f64,
    pub x: [f64; 2],
    pub dx: [f64; 2],
    pub ddx: [f64; 2],
    pub speed: f64,
    pub tangent: [f64; 2],
    /// Unit normal pointing into the body.
    pub normal: [f64; 2],
    /// Signed curvature, positive where the body is convex.
    pub curvature: f64,
}

/// A validated body contour.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyCurve {
    spec: ShapeSpec,
    shape: Shape,
    samples: usize,
}

impl BodyCurve {
    pub fn new(spec: ShapeSpec) -> Result<Self> {
        let samples = spec.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < 16 {
            return Err(param(format!("sampling density {samples} is below 16")));
        }
        let shape = spec.resolve()?;
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match &shape {
            Shape::Circle { center, radius } => {
                if !finite(center) || !radius.is_finite() || *radius <= 0.0 {
                    return Err(param("circle needs a finite center and a positive radius"));
                }
            }
            Shape::Ellipse { center, a, b } => {
                if !finite(center) || !finite(&[*a, *b]) || *a <= 0.0 || *b <= 0.0 {
                    return Err(param("ellipse needs a finite center and positive semi-axes"));
                }
            }
            Shape::Fourier {
                center,
                radius,
                cos,
                sin,
            } => {
                if !finite(center) || !radius.is_finite() || *radius <= 0.0 || !finite(cos) || !finite(sin) {
                    return Err(param("Fourier shape needs finite coefficients and a positive radius"));
                }
            }
        }
        let curve = Self { spec, shape, samples };
        if let Shape::Fourier { .. } = curve.shape {
            let n = samples.max(4 * curve.bandwidth() + 64);
            for j in 0..n {
                let th = 2.0 * PI * j as f64 / n as f64;
                if curve.radial(th).0 <= 0.0 {
                    return Err(Error::NotSimple(format!(
                        "polar radius is non-positive at θ = {th:.6}"
                    )));
                }
            }
        }
        let (min_depth, _) = curve.extreme(|f| f.x[1], false);
        if min_depth <= 0.0 {
            return Err(Error::NotSubmerged { min_depth });
        }
        Ok(curve)
    }

    pub fn spec(&self) -> &ShapeSpec {
        &self.spec
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn center(&self) -> [f64; 2] {
        self.shape.center()
    }

    fn bandwidth(&self) -> usize {
        match &self.shape {
            Shape::Fourier { cos, sin, .. } => cos.len().max(sin.len()),
            _ => 1,
        }
    }

    /// Polar radius about the center and its first two θ-derivatives
    /// (Fourier shapes only).
    fn radial(&self, th: f64) -> (f64, f64, f64) {
        match &self.shape {
            Shape::Fourier {
                radius, cos, sin, ..
            } => {
                let (mut r, mut dr, mut ddr) = (1.0, 0.0, 0.0);
                for (k, c) in cos.iter().enumerate() {
                    let kf = (k + 1) as f64;
                    let (s, co) = (kf * th).sin_cos();
                    r += c * co;
                    dr -= c * kf * s;
                    ddr -= c * kf * kf * co;
                }
                for (k, c) in sin.iter().enumerate() {
                    let kf = (k + 1) as f64;
                    let (s, co) = (kf * th).sin_cos();
                    r += c * s;
                    dr += c * kf * co;
                    ddr -= c * kf * kf * s;
                }
                (radius * r, radius * dr, radius * ddr)
            }
            _ => unreachable!("radial() is only used for Fourier shapes"),
        }
    }

    /// Position and first two derivatives in `t`.
    pub fn derivatives(&self, t: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        let c = self.center();
        let (s, co) = t.sin_cos();
        match &self.shape {
            Shape::Circle { radius: a, .. } => (
                [c[0] + a * co, c[1] + a * s],
                [-a * s, a * co],
                [-a * co, -a * s],
            ),
            Shape::Ellipse { a, b, .. } => (
                [c[0] + a * co, c[1] + b * s],
                [-a * s, b * co],
                [-a * co, -b * s],
            ),
            Shape::Fourier { .. } => {
                let (r, dr, ddr) = self.radial(t);
                (
                    [c[0] + r * co, c[1] + r * s],
                    [dr * co - r * s, dr * s + r * co],
                    [
                        ddr * co - 2.0 * dr * s - r * co,
                        ddr * s + 2.0 * dr * co - r * s,
                    ],
                )
            }
        }
    }

    pub fn point(&self, t: f64) -> [f64; 2] {
        self.derivatives(t).0
    }

    pub fn frame(&self, t: f64) -> Frame {
        let (x, dx, ddx) = self.derivatives(t);
        let speed = dx[0].hypot(dx[1]);
        let tangent = [dx[0] / speed, dx[1] / speed];
        Frame {
            t,
            x,
            dx,
            ddx,
            speed,
            tangent,
            normal: [-tangent[1], tangent[0]],
            curvature: (dx[0] * ddx[1] - dx[1] * ddx[0]) / speed.powi(3),
        }
    }

    /// Frames at `t_j = 2πj/n`.
    pub fn sample(&self, n: usize) -> Vec<Frame> {
        (0..n).map(|j| self.frame(2.0 * PI * j as f64 / n as f64)).collect()
    }

    /// Distance from the center to the contour in direction `θ`.
    pub fn radial_extent(&self, th: f64) -> f64 {
        match &self.shape {
            Shape::Circle { radius, .. } => *radius,
            Shape::Ellipse { a, b, .. } => {
                let (s, c) = th.sin_cos();
                1.0 / ((c / a).powi(2) + (s / b).powi(2)).sqrt()
            }
            Shape::Fourier { .. } => self.radial(th).0,
        }
    }

    /// Largest distance from the center to the contour.
    pub fn max_radius(&self) -> f64 {
        match &self.shape {
            Shape::Circle { radius, .. } => *radius,
            Shape::Ellipse { a, b, .. } => a.max(*b),
            Shape::Fourier { .. } => (0..self.samples)
                .map(|j| self.radial(2.0 * PI * j as f64 / self.samples as f64).0)
                .fold(0.0, f64::max)
                * (1.0 + 1e-3),
        }
    }

    /// True when `x` lies in the closed body.
    pub fn contains(&self, x: [f64; 2]) -> bool {
        let c = self.center();
        let (d0, d1) = (x[0] - c[0], x[1] - c[1]);
        let r = d0.hypot(d1);
        r <= self.radial_extent(d1.atan2(d0))
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.samples;
        self.sample(n).iter().map(|f| f.speed).sum::<f64>() * 2.0 * PI / n as f64
    }

    /// Closest contour point to `x`: returns `(t, distance)`.
    pub fn closest(&self, x: [f64; 2]) -> (f64, f64) {
        let n = 256.max(8 * self.bandwidth());
        let mut best = (0.0, f64::INFINITY);
        for j in 0..n {
            let t = 2.0 * PI * j as f64 / n as f64;
            let p = self.point(t);
            let d = (p[0] - x[0]).hypot(p[1] - x[1]);
            if d < best.1 {
                best = (t, d);
            }
        }
        // Newton on (y(t) - x)·y'(t) = 0, safeguarded to the bracketing cell.
        let h = 2.0 * PI / n as f64;
        let (lo, hi) = (best.0 - h, best.0 + h);
        let mut t = best.0;
        for _ in 0..30 {
            let (y, dy, ddy) = self.derivatives(t);
            let r = [y[0] - x[0], y[1] - x[1]];
            let g = r[0] * dy[0] + r[1] * dy[1];
            let dg = dy[0] * dy[0] + dy[1] * dy[1] + r[0] * ddy[0] + r[1] * ddy[1];
            if dg <= 0.0 {
                break;
            }
            let step = g / dg;
            t = (t - step).clamp(lo, hi);
            if step.abs() < 1e-15 {
                break;
            }
        }
        let p = self.point(t);
        let d = (p[0] - x[0]).hypot(p[1] - x[1]);
        if d < best.1 {
            (t.rem_euclid(2.0 * PI), d)
        } else {
            best
        }
    }

    /// Extreme value of a smooth function of the frame: dense sampling
    /// followed by golden-section refinement around the best sample.
    pub fn extreme(&self, f: impl Fn(&Frame) -> f64, maximize: bool) -> (f64, f64) {
        let sign = if maximize { -1.0 } else { 1.0 };
        let g = |t: f64| sign * f(&self.frame(t));
        let n = self.samples;
        let h = 2.0 * PI / n as f64;
        let mut best = (0.0, f64::INFINITY);
        for j in 0..n {
            let t = h * j as f64;
            let v = g(t);
            if v < best.1 {
                best = (t, v);
            }
        }
        let (mut a, mut b) = (best.0 - h, best.0 + h);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let (mut fc, mut fd) = (g(c), g(d));
        for _ in 0..80 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = g(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = g(d);
            }
            if b - a < 1e-13 {
                break;
            }
        }
        let (t, v) = if fc < fd { (c, fc) } else { (d, fd) };
        if v < best.1 {
            (sign * v, t.rem_euclid(2.0 * PI))
        } else {
            (sign * best.1, best.0)
        }
    }
}

/// Bounding data of the body: `B ⊂ {|x1| ≤ L, h ≤ x2 ≤ H}`, maximal
/// absolute curvature κ, and the margin ε from the second geometric
/// condition (unset until chosen).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryBox {
    /// L: max |x1| over the contour.
    pub half_width: f64,
    /// h: min x2 over the contour.
    pub min_depth: f64,
    /// H: max x2 over the contour.
    pub max_depth: f64,
    /// κ: max |curvature|.
    pub curvature: f64,
    pub epsilon: Option<f64>,
}

impl GeometryBox {
    pub fn of(curve: &BodyCurve) -> Self {
        let (l, _) = curve.extreme(|f| f.x[0].abs(), true);
        let (h, _) = curve.extreme(|f| f.x[1], false);
        let (hh, _) = curve.extreme(|f| f.x[1], true);
        let (k, _) = curve.extreme(|f| f.curvature.abs(), true);
        Self {
            half_width: l,
            min_depth: h,
            max_depth: hh,
            curvature: k,
            epsilon: None,
        }
    }

    pub fn with_epsilon(mut self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= self.min_depth * (1.0 + 1e-12)) {
            return Err(param(format!(
                "epsilon must lie in (0, h = {}], got {eps}",
                self.min_depth
            )));
        }
        self.epsilon = Some(eps.min(self.min_depth));
        Ok(self)
    }

    /// τ = L + 1/ν + H.
    pub fn tau(&self, nu: f64) -> f64 {
        self.half_width + 1.0 / nu + self.max_depth
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_normal_points_into_body() {
        let c = BodyCurve::new(ShapeSpec::circle([0.0, 2.0], 1.0)).unwrap();
        let f = c.frame(0.0);
        assert!((f.x[0] - 1.0).abs() < 1e-15 && (f.x[1] - 2.0).abs() < 1e-15);
        assert!((f.normal[0] + 1.0).abs() < 1e-15 && f.normal[1].abs() < 1e-15);
        assert!((f.curvature - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ellipse_box_and_curvature() {
        let c = BodyCurve::new(ShapeSpec::ellipse([0.0, 3.0], 2.0, 1.0)).unwrap();
        let b = GeometryBox::of(&c);
        assert!((b.half_width - 2.0).abs() < 1e-9);
        assert!((b.min_depth - 2.0).abs() < 1e-9);
        assert!((b.max_depth - 4.0).abs() < 1e-9);
        assert!((b.curvature - 2.0).abs() < 1e-9);
    }

    #[test]
    fn touching_surface_is_not_submerged() {
        let e = BodyCurve::new(ShapeSpec::circle([0.0, 1.0], 1.0)).unwrap_err();
        assert!(matches!(e, Error::NotSubmerged { .. }));
    }

    #[test]
    fn fourier_with_negative_radius_is_not_simple() {
        let s = ShapeSpec::fourier([0.0, 5.0], 1.0, vec![0.0, 0.0, 1.3]);
        assert!(matches!(BodyCurve::new(s), Err(Error::NotSimple(_))));
    }

    #[test]
    fn fourier_derivatives_match_finite_differences() {
        let s = ShapeSpec::fourier([0.2, 4.0], 1.0, vec![0.05, 0.0, 0.1, 0.0, 0.0, 0.04]);
        let c = BodyCurve::new(s).unwrap();
        let t = 0.7;
        let h = 1e-5;
        let (_, d1, d2) = c.derivatives(t);
        let p = c.point(t + h);
        let m = c.point(t - h);
        for i in 0..2 {
            assert!(((p[i] - m[i]) / (2.0 * h) - d1[i]).abs() < 1e-8);
        }
        let (_, pp, _) = c.derivatives(t + h);
        let (_, mm, _) = c.derivatives(t - h);
        for i in 0..2 {
            assert!(((pp[i] - mm[i]) / (2.0 * h) - d2[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn closest_point_on_circle() {
        let c = BodyCurve::new(ShapeSpec::circle([0.0, 2.0], 1.0)).unwrap();
        let (t, d) = c.closest([2.0, 3.0]);
        assert!((t - 0.5f64.atan()).abs() < 1e-12);
        assert!((d - (5f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(c.contains([0.3, 2.2]));
        assert!(!c.contains([0.0, 0.9]));
    }

    #[test]
    fn epsilon_must_be_within_depth() {
        let c = BodyCurve::new(ShapeSpec::circle([0.0, 2.0], 1.0)).unwrap();
        let b = GeometryBox::of(&c);
        assert!(b.with_epsilon(0.0).is_err());
        assert!(b.with_epsilon(1.5).is_err());
        assert_eq!(b.with_epsilon(0.5).unwrap().epsilon, Some(0.5));
    }

    #[test]
    fn unknown_shape_keys_are_rejected() {
        let bad = r#"{"kind":"circle","center":[0,2],"radius":1,"bogus":3}"#;
        assert!(serde_json::from_str::<ShapeSpec>(bad).is_err());
        let mixed = r#"{"kind":"circle","center":[0,2],"radius":1,"semiaxes":[1,1]}"#;
        let spec: ShapeSpec = serde_json::from_str(mixed).unwrap();
        assert!(BodyCurve::new(spec).is_err());
        let good = r#"{"kind":"ellipse","center":[0,3],"semiaxes":[2,1]}"#;
        assert_eq!(
            serde_json::from_str::<ShapeSpec>(good).unwrap(),
            ShapeSpec::ellipse([0.0, 3.0], 2.0, 1.0)
        );
    }
}
