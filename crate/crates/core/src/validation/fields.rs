//! Multiplier fields of the Rellich-type identity and the quadratic form
//! `Q_ij = (∇·Z - 2T)δ_ij - (∂_i Z_j + ∂_j Z_i)`.

use crate::error::{param, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// `W = (x1(x1² - x2²), 2x1²x2)/|x|²` or `V = (x1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Multiplier {
    W,
    V,
}

impl Multiplier {
    pub fn name(&self) -> &'static str {
        match self {
            Self::W => "W",
            Self::V => "V",
        }
    }

    pub fn value(&self, x: [f64; 2]) -> [f64; 2] {
        match self {
            Self::W => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                if r2 == 0.0 {
                    return [0.0, 0.0];
                }
                [
                    x[0] * (x[0] * x[0] - x[1] * x[1]) / r2,
                    2.0 * x[0] * x[0] * x[1] / r2,
                ]
            }
            Self::V => [x[0], 0.0],
        }
    }

    /// `J[i][j] = ∂_i Z_j`, in closed form.  `W` has no derivative at the origin.
    pub fn jacobian(&self, x: [f64; 2]) -> [[f64; 2]; 2] {
        match self {
            Self::W => {
                let (a, b) = (x[0], x[1]);
                let r4 = (a * a + b * b).powi(2);
                let d1w1 = (a.powi(4) + 4.0 * a * a * b * b - b.powi(4)) / r4;
                let d2w1 = -4.0 * a.powi(3) * b / r4;
                let d1w2 = 4.0 * a * b.powi(3) / r4;
                let d2w2 = 2.0 * a * a * (a * a - b * b) / r4;
                [[d1w1, d1w2], [d2w1, d2w2]]
            }
            Self::V => [[1.0, 0.0], [0.0, 0.0]],
        }
    }

    pub fn divergence(&self, x: [f64; 2]) -> f64 {
        let j = self.jacobian(x);
        j[0][0] + j[1][1]
    }

    pub fn q_matrix(&self, x: [f64; 2], t: f64) -> [[f64; 2]; 2] {
        q_from_jacobian(&self.jacobian(x), t)
    }

    /// `∂Z1/∂x1` on the free surface.
    pub fn surface_stretch(&self, x1: f64) -> f64 {
        match self {
            Self::W if x1 == 0.0 => 1.0,
            _ => self.jacobian([x1, 0.0])[0][0],
        }
    }
}

fn q_from_jacobian(j: &[[f64; 2]; 2], t: f64) -> [[f64; 2]; 2] {
    let div = j[0][0] + j[1][1] - 2.0 * t;
    [
        [div - 2.0 * j[0][0], -(j[0][1] + j[1][0])],
        [-(j[1][0] + j[0][1]), div - 2.0 * j[1][1]],
    ]
}

/// `(Qξ)·ξ`.
pub fn quadratic_form(q: &[[f64; 2]; 2], xi: [f64; 2]) -> f64 {
    q[0][0] * xi[0] * xi[0] + (q[0][1] + q[1][0]) * xi[0] * xi[1] + q[1][1] * xi[1] * xi[1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QFormReport {
    pub field: Multiplier,
    pub t: f64,
    pub samples: usize,
    /// Largest `(Qξ)·ξ / |ξ|²` over the samples.
    pub max_form: f64,
    pub min_form: f64,
    pub argmax: [f64; 2],
    /// Largest difference between the closed-form and finite-difference `Q`.
    pub fd_discrepancy: f64,
}

impl QFormReport {
    pub fn non_positive(&self, tol: f64) -> bool {
        self.max_form <= tol
    }
}

/// Evaluate the form at paired points and vectors, with `T = 1/2`.
pub fn q_form_check(field: Multiplier, points: &[[f64; 2]], vectors: &[[f64; 2]]) -> Result<QFormReport> {
    if points.len() != vectors.len() {
        return Err(param("q_form_check needs one vector per point"));
    }
    let t = 0.5;
    let mut max_form = f64::NEG_INFINITY;
    let mut min_form = f64::INFINITY;
    let mut argmax = [0.0; 2];
    let mut fd = 0.0f64;
    for (x, xi) in points.iter().zip(vectors) {
        if x[0] * x[0] + x[1] * x[1] == 0.0 {
            return Err(param("Q is undefined at the origin"));
        }
        let n2 = xi[0] * xi[0] + xi[1] * xi[1];
        if n2 == 0.0 {
            continue;
        }
        let q = field.q_matrix(*x, t);
        let f = quadratic_form(&q, *xi) / n2;
        if f > max_form {
            max_form = f;
            argmax = *x;
        }
        min_form = min_form.min(f);
        let qf = q_from_jacobian(&fd_jacobian(field, *x), t);
        for i in 0..2 {
            for j in 0..2 {
                fd = fd.max((qf[i][j] - q[i][j]).abs());
            }
        }
    }
    Ok(QFormReport {
        field,
        t,
        samples: points.len(),
        max_form,
        min_form,
        argmax,
        fd_discrepancy: fd,
    })
}

fn fd_jacobian(field: Multiplier, x: [f64; 2]) -> [[f64; 2]; 2] {
    let h = 1e-5 * x[0].hypot(x[1]);
    let mut j = [[0.0; 2]; 2];
    for i in 0..2 {
        let mut p = x;
        let mut m = x;
        p[i] += h;
        m[i] -= h;
        let (vp, vm) = (field.value(p), field.value(m));
        for k in 0..2 {
            j[i][k] = (vp[k] - vm[k]) / (2.0 * h);
        }
    }
    j
}

/// Seeded sample points in the lower half-plane (`|x|` log-uniform on
/// `[10⁻³, 10³]`, a tenth of them on the axis `x1 = 0`) and unit vectors.
pub fn q_form_samples(seed: u64, count: usize) -> (Vec<[f64; 2]>, Vec<[f64; 2]>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(count);
    let mut vecs = Vec::with_capacity(count);
    for k in 0..count {
        let r = 10f64.powf(rng.gen_range(-3.0..3.0));
        let th = if k % 10 == 0 {
            std::f64::consts::FRAC_PI_2
        } else {
            rng.gen_range(0.0..std::f64::consts::PI)
        };
        pts.push([r * th.cos(), r * th.sin()]);
        let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        vecs.push([a.cos(), a.sin()]);
    }
    (pts, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_form_is_constant() {
        let q = Multiplier::V.q_matrix([3.0, 1.0], 0.5);
        assert_eq!(q, [[-2.0, 0.0], [0.0, 0.0]]);
        assert_eq!(quadratic_form(&q, [0.5, 3.0]), -0.5);
    }

    #[test]
    fn w_form_on_the_axis() {
        let q = Multiplier::W.q_matrix([0.0, 2.0], 0.5);
        assert!(q[0][0].abs() < 1e-15 && (q[1][1] + 2.0).abs() < 1e-15);
        assert_eq!(Multiplier::W.value([0.0, 2.0]), [0.0, 0.0]);
    }

    #[test]
    fn w_form_matches_rotation_formula() {
        // Q = -2 (sin 2θ, -cos 2θ)ᵀ(sin 2θ, -cos 2θ).
        for th in [0.1f64, 0.7, 1.2, 2.9] {
            let x = [2.0 * th.cos(), 2.0 * th.sin()];
            let q = Multiplier::W.q_matrix(x, 0.5);
            let (s, c) = (2.0 * th).sin_cos();
            let want = [[-2.0 * s * s, 2.0 * s * c], [2.0 * s * c, -2.0 * c * c]];
            for i in 0..2 {
                for j in 0..2 {
                    assert!((q[i][j] - want[i][j]).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn w_has_no_vertical_component_on_the_surface() {
        for x1 in [-3.0, 0.5, 10.0] {
            assert_eq!(Multiplier::W.value([x1, 0.0])[1], 0.0);
            assert!((Multiplier::W.surface_stretch(x1) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn origin_is_rejected() {
        assert!(q_form_check(Multiplier::W, &[[0.0, 0.0]], &[[1.0, 0.0]]).is_err());
    }
}
