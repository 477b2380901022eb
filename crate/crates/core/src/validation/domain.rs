//! Quadrature of the truncated fluid domain `{|x1| < R, 0 < x2 < R} \ B`.
//!
//! A polar layer about the body center fills the rectangle
//! `[-L - h, L + h] × [0, H + h]` outside the body; tensor Gauss blocks
//! cover the rest.  Block edges include `±τ`, `±3τ` (the cut-off band),
//! `R/4` and `R/2` (the frames used for the tail estimate) and the edges of
//! the surface data.

use crate::error::{param, Result};
use crate::geometry::{BodyCurve, GeometryBox};
use crate::quadrature::{graded_breaks, uniform_breaks, GaussRule};
use crate::solver::particular::{disc_nodes, volume_rule};
use crate::solver::BoundaryData;
use std::f64::consts::PI;

const ORDER: usize = 10;

/// Which frame of the truncated domain a node belongs to, by
/// `max(|x1|, x2)`: `< R/4`, `[R/4, R/2)` or `≥ R/2`.
pub(crate) fn frame_of(m: f64, r: f64) -> u8 {
    if m >= 0.5 * r {
        2
    } else if m >= 0.25 * r {
        1
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Node {
    pub x: [f64; 2],
    pub w: f64,
    pub frame: u8,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct VolumeNode {
    pub x: [f64; 2],
    pub w: f64,
    pub bump: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct DomainQuadrature {
    pub truncation: f64,
    pub interior: Vec<Node>,
    /// Free-surface nodes, `x = (x1, 0)`.
    pub surface: Vec<Node>,
    pub volume: Vec<VolumeNode>,
}

pub(crate) struct DomainSpec<'a> {
    pub curve: &'a BodyCurve,
    pub geometry: &'a GeometryBox,
    pub data: &'a BoundaryData,
    pub nu: f64,
    pub tau: f64,
    pub truncation: f64,
    pub refinement: f64,
}

impl DomainQuadrature {
    pub fn build(s: &DomainSpec) -> Result<Self> {
        let (nu, tau, r) = (s.nu, s.tau, s.truncation);
        let g = s.geometry;
        if !(s.refinement >= 0.5 && s.refinement <= 8.0) {
            return Err(param("quadrature refinement must lie in [0.5, 8]"));
        }
        if !(r >= 4.0 * tau) {
            return Err(param(format!("truncation radius {r} must be at least 4τ = {}", 4.0 * tau)));
        }
        let mut reach = g.half_width.max(g.max_depth);
        for b in &s.data.f {
            reach = reach.max(b.center[0].abs() + b.radius).max(b.center[1] + b.radius);
        }
        for b in &s.data.g2 {
            reach = reach.max(b.center.abs() + b.radius);
        }
        if reach >= 0.25 * r {
            return Err(param(format!("truncation radius {r} does not enclose the body and data supports")));
        }
        let gl = GaussRule::new(ORDER);
        let refine = s.refinement;
        let m = g.min_depth;
        let rect = [-g.half_width - m, g.half_width + m, g.max_depth + m];
        let body_scale = 0.5 * g.min_depth.max(s.curve.max_radius()).min(1.0 / nu).max(0.25);

        let mut interior = polar_layer(s.curve, rect, body_scale / refine, refine, &gl);

        // Outer blocks.
        let wave_zone = r.min(30.0 / nu);
        let mut xb = vec![-r, -0.5 * r, -0.25 * r, -3.0 * tau, -tau, rect[0], rect[1], tau, 3.0 * tau, 0.25 * r, 0.5 * r, r];
        for b in &s.data.g2 {
            xb.push((b.center - b.radius).clamp(-r, r));
            xb.push((b.center + b.radius).clamp(-r, r));
        }
        let xb = sorted_unique(xb);
        let yb = sorted_unique(vec![0.0, rect[2], wave_zone, 0.25 * r, 0.5 * r, r]);
        let graded_top = !s.data.g2.is_empty();
        let width = |lo_dist: f64, waves: bool| {
            let geo = (0.25 * lo_dist).max(body_scale);
            let w = if waves { geo.min(1.5 / nu) } else { geo };
            w / refine
        };
        for xw in xb.windows(2) {
            let (xa, xc) = (xw[0], xw[1]);
            let dx = if xa >= 0.0 { xa } else if xc <= 0.0 { -xc } else { 0.0 };
            for yw in yb.windows(2) {
                let (ya, yc) = (yw[0], yw[1]);
                if xa >= rect[0] && xc <= rect[1] && yc <= rect[2] {
                    continue;
                }
                let dist = dx.max(ya);
                let waves = ya < wave_zone;
                let bx = uniform_breaks(xa, xc, width(dist, waves), &[]);
                let by = if ya == 0.0 && graded_top {
                    let mut v = graded_breaks(ya, yc, 0.0, 1e-4 * body_scale);
                    v = refine_breaks(&v, width(dist, waves));
                    v
                } else {
                    uniform_breaks(ya, yc, width(dist, waves), &[])
                };
                for px in bx.windows(2) {
                    for py in by.windows(2) {
                        for (x1, w1) in gl.on(px[0], px[1]) {
                            for (x2, w2) in gl.on(py[0], py[1]) {
                                interior.push(Node {
                                    x: [x1, x2],
                                    w: w1 * w2,
                                    frame: frame_of(x1.abs().max(x2), r),
                                });
                            }
                        }
                    }
                }
            }
        }
        for n in interior.iter_mut() {
            n.frame = frame_of(n.x[0].abs().max(n.x[1]), r);
        }

        // Free surface.
        let mut surface = Vec::new();
        for xw in xb.windows(2) {
            let (xa, xc) = (xw[0], xw[1]);
            let dx = if xa >= 0.0 { xa } else if xc <= 0.0 { -xc } else { 0.0 };
            let mut wmax = width(dx, true);
            for b in &s.data.g2 {
                if xc > b.center - b.radius && xa < b.center + b.radius {
                    wmax = wmax.min(b.radius / (8.0 * refine));
                }
            }
            for p in uniform_breaks(xa, xc, wmax, &[]).windows(2) {
                for (x1, w) in gl.on(p[0], p[1]) {
                    surface.push(Node {
                        x: [x1, 0.0],
                        w,
                        frame: frame_of(x1.abs(), r),
                    });
                }
            }
        }

        let vr = volume_rule();
        let mut volume = Vec::new();
        for (k, b) in s.data.f.iter().enumerate() {
            for (x, w) in disc_nodes(b.center, b.radius, &vr) {
                volume.push(VolumeNode { x, w, bump: k });
            }
        }
        Ok(Self {
            truncation: r,
            interior,
            surface,
            volume,
        })
    }
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * (1.0 + b.abs()));
    v
}

/// Split panels of `breaks` wider than `max_width`.
fn refine_breaks(breaks: &[f64], max_width: f64) -> Vec<f64> {
    let mut out = vec![breaks[0]];
    for w in breaks.windows(2) {
        let n = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
        for k in 1..=n {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / n as f64);
        }
    }
    out
}

/// Distance from `c` along direction `θ` to the boundary of the rectangle
/// `[x_lo, x_hi] × [0, y_hi]` containing `c`.
fn rect_exit(c: [f64; 2], th: f64, rect: [f64; 3]) -> f64 {
    let (s, co) = th.sin_cos();
    let mut t = f64::INFINITY;
    if co > 0.0 {
        t = t.min((rect[1] - c[0]) / co);
    } else if co < 0.0 {
        t = t.min((rect[0] - c[0]) / co);
    }
    if s > 0.0 {
        t = t.min((rect[2] - c[1]) / s);
    } else if s < 0.0 {
        t = t.min((0.0 - c[1]) / s);
    }
    t
}

fn polar_layer(curve: &BodyCurve, rect: [f64; 3], radial_width: f64, refine: f64, gl: &GaussRule) -> Vec<Node> {
    let c = curve.center();
    let mut corners: Vec<f64> = [[rect[0], 0.0], [rect[1], 0.0], [rect[1], rect[2]], [rect[0], rect[2]]]
        .iter()
        .map(|p| (p[1] - c[1]).atan2(p[0] - c[0]))
        .collect();
    corners.sort_by(f64::total_cmp);
    let mut nodes = Vec::new();
    for k in 0..4 {
        let a = corners[k];
        let b = if k == 3 { corners[0] + 2.0 * PI } else { corners[k + 1] };
        let panels = ((b - a) / (PI / 8.0) * refine).ceil().max(1.0) as usize;
        let hw = (b - a) / panels as f64;
        for p in 0..panels {
            let ta = a + p as f64 * hw;
            for (th, wt) in gl.on(ta, ta + hw) {
                let r0 = curve.radial_extent(th);
                let r1 = rect_exit(c, th, rect);
                let (s, co) = th.sin_cos();
                for q in uniform_breaks(r0, r1, radial_width, &[]).windows(2) {
                    for (rr, wr) in gl.on(q[0], q[1]) {
                        nodes.push(Node {
                            x: [c[0] + rr * co, c[1] + rr * s],
                            w: wt * wr * rr,
                            frame: 0,
                        });
                    }
                }
            }
        }
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ShapeSpec;

    fn quad(refine: f64) -> DomainQuadrature {
        let curve = BodyCurve::new(ShapeSpec::circle([0.0, 2.0], 1.0)).unwrap();
        let g = GeometryBox::of(&curve);
        let data = BoundaryData::zero();
        DomainQuadrature::build(&DomainSpec {
            curve: &curve,
            geometry: &g,
            data: &data,
            nu: 1.0,
            tau: 5.0,
            truncation: 60.0,
            refinement: refine,
        })
        .unwrap()
    }

    #[test]
    fn area_and_moments_are_exact() {
        let q = quad(1.0);
        let area: f64 = q.interior.iter().map(|n| n.w).sum();
        assert!((area - (120.0 * 60.0 - PI)).abs() < 1e-9 * area, "{area}");
        // ∫ x2² over the box minus ∫ over the disc (2² π + π/4).
        let m2: f64 = q.interior.iter().map(|n| n.w * n.x[1] * n.x[1]).sum();
        let want = 120.0 * 60f64.powi(3) / 3.0 - (4.0 * PI + PI / 4.0);
        assert!((m2 - want).abs() < 1e-9 * want);
        let len: f64 = q.surface.iter().map(|n| n.w).sum();
        assert!((len - 120.0).abs() < 1e-10);
        assert!(q.interior.iter().all(|n| n.x[0].hypot(n.x[1] - 2.0) > 1.0));
    }

    #[test]
    fn frames_partition_by_box_norm() {
        let q = quad(1.0);
        let outer: f64 = q.interior.iter().filter(|n| n.frame == 2).map(|n| n.w).sum();
        assert!((outer - (120.0 * 60.0 - 60.0 * 30.0)).abs() < 1e-8);
        let mid: f64 = q.interior.iter().filter(|n| n.frame == 1).map(|n| n.w).sum();
        assert!((mid - (60.0 * 30.0 - 30.0 * 15.0)).abs() < 1e-8);
    }

    #[test]
    fn truncation_must_cover_the_cutoff_band() {
        let curve = BodyCurve::new(ShapeSpec::circle([0.0, 2.0], 1.0)).unwrap();
        let g = GeometryBox::of(&curve);
        let data = BoundaryData::zero();
        let spec = DomainSpec {
            curve: &curve,
            geometry: &g,
            data: &data,
            nu: 1.0,
            tau: 5.0,
            truncation: 15.0,
            refinement: 1.0,
        };
        assert!(DomainQuadrature::build(&spec).is_err());
    }
}
