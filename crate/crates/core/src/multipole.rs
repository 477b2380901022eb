//! Expansion of a cluster of free-surface sources about its center.
//!
//! With `p = x1 + i x2` and `ζ = (x2 + y2) - i(x1 - y1)`,
//!
//! ```text
//! G(x; y) = (1/2π) Re ln(p - p_y) + Re H1(ζ) + i Re H2(ζ)
//! H1 = -(1/2π) ln ζ - (1/π)[F_A(-νζ) + iπ e^{-νζ}],   H2 = e^{-νζ}
//! ```
//!
//! where `F_A` is `e^z E1(z)` continued across the negative real axis, so
//! its cut lies above the free surface and every term is analytic in the
//! source position.  For complex charges `q`, `Σ q Re φ` splits into
//! `½ Σ q φ + ½ Σ q conj φ`, so two moment sequences carry the cluster.

use crate::greens::KernelEval;
use crate::special::scaled_e1;
use num_complex::Complex64;
use std::f64::consts::PI;

type C = Complex64;

/// Admitted field points are at least this many cluster radii from the
/// center; the series then converge at least like `2^{-n}`.
pub(crate) const ADMIT_FACTOR: f64 = 2.0;
const TERMS: usize = 54;

#[derive(Debug, Clone)]
pub(crate) struct Multipole {
    nu: f64,
    center: [f64; 2],
    radius: f64,
    /// `Σ q (u/ρ)^n` and `Σ q conj(u/ρ)^n`, `u = p_y - p_c`.
    plain: Vec<C>,
    conj: Vec<C>,
}

impl Multipole {
    /// Charges `(y, q)` within `radius` of `center`, all with `y2 ≥ 0`.
    pub fn new(nu: f64, center: [f64; 2], radius: f64, charges: impl IntoIterator<Item = ([f64; 2], C)>) -> Self {
        let mut plain = vec![C::default(); TERMS + 1];
        let mut conj = vec![C::default(); TERMS + 1];
        for (y, q) in charges {
            let u = C::new(y[0] - center[0], y[1] - center[1]) / radius;
            let (mut a, mut b) = (q, q);
            for n in 0..=TERMS {
                plain[n] += a;
                conj[n] += b;
                a *= u;
                b *= u.conj();
            }
        }
        Self {
            nu,
            center,
            radius,
            plain,
            conj,
        }
    }

    pub fn admits(&self, x: [f64; 2]) -> bool {
        (x[0] - self.center[0]).hypot(x[1] - self.center[1]) >= ADMIT_FACTOR * self.radius
    }

    /// `Σ q G(x; y)` and its gradient; `None` if `E1` fails.
    pub fn eval(&self, x: [f64; 2]) -> Option<KernelEval> {
        let (c, rho, nu) = (self.center, self.radius, self.nu);
        let (u, v) = (&self.plain, &self.conj);
        let i = C::i();

        // Direct logarithm about p_c.
        let d = C::new(x[0] - c[0], x[1] - c[1]);
        let t = rho / d;
        let (mut s1, mut s2) = (d.ln() * u[0], d.ln().conj() * v[0]);
        let (mut d1, mut d2) = (u[0], v[0]);
        let mut tn = C::new(1.0, 0.0);
        for n in 1..=TERMS {
            tn *= t;
            let a = -tn / n as f64;
            s1 += a * u[n];
            s2 += a.conj() * v[n];
            d1 += tn * u[n];
            d2 += tn.conj() * v[n];
        }
        let (d1, d2) = (d1 / d, d2 * d.inv().conj());
        let k = 0.25 / PI;
        let mut value = k * (s1 + s2);
        let mut grad = [k * (d1 + d2), k * i * (d1 - d2)];

        // Image and wave terms in ζ.
        let zeta = C::new(x[1] + c[1], -(x[0] - c[0]));
        let z = -nu * zeta;
        let mut f = scaled_e1(z)?;
        let e = (-nu * zeta).exp();
        if z.im < 0.0 {
            f -= 2.0 * PI * i * e;
        }
        let s = -nu * rho;
        let r = rho / zeta;
        let (mut g, mut rn, mut sz, mut en) = (f, C::new(1.0, 0.0), C::new(1.0, 0.0), e);
        let mut a = Vec::with_capacity(TERMS + 2);
        let mut b = Vec::with_capacity(TERMS + 2);
        for n in 0..=TERMS + 1 {
            let log_n = if n == 0 {
                zeta.ln()
            } else {
                rn *= r;
                sz *= s / z;
                g = g * (s / n as f64) - (if n % 2 == 1 { sz } else { -sz }) / n as f64;
                en *= s / n as f64;
                (if n % 2 == 1 { rn } else { -rn }) / n as f64
            };
            let h1 = -log_n / (2.0 * PI) - (g + i * PI * en) / PI;
            a.push(h1 + i * en);
            b.push(h1 - i * en);
        }
        let (mut t1, mut t2, mut t1d, mut t2d) = (C::default(), C::default(), C::default(), C::default());
        let mut ip = C::new(1.0, 0.0);
        for n in 0..=TERMS {
            let m = ip * v[n];
            let w = ip.conj() * u[n];
            t1 += a[n] * m;
            t2 += b[n].conj() * w;
            t1d += (n + 1) as f64 * a[n + 1] * m;
            t2d += (n + 1) as f64 * b[n + 1].conj() * w;
            ip *= i;
        }
        let (t1d, t2d) = (t1d / rho, t2d / rho);
        value += 0.5 * (t1 + t2);
        grad[0] += 0.5 * (-i * t1d + i * t2d);
        grad[1] += 0.5 * (t1d + t2d);
        let ok = value.re.is_finite() && value.im.is_finite() && grad.iter().all(|g| g.re.is_finite() && g.im.is_finite());
        ok.then_some(KernelEval { value, grad })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::kernel;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn direct(nu: f64, charges: &[([f64; 2], C)], x: [f64; 2]) -> KernelEval {
        let mut acc = KernelEval::zero();
        for (y, q) in charges {
            let k = kernel(nu, x, *y, true).unwrap();
            acc.value += q * k.value;
            acc.grad[0] += q * k.grad[0];
            acc.grad[1] += q * k.grad[1];
        }
        acc
    }

    #[test]
    fn matches_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &nu in &[0.3, 1.0, 2.0, 5.0] {
            let c = [0.4, 2.0];
            let rho = 1.2;
            let charges: Vec<([f64; 2], C)> = (0..40)
                .map(|_| {
                    let r = rho * rng.gen::<f64>().sqrt();
                    let th = rng.gen_range(0.0..std::f64::consts::TAU);
                    (
                        [c[0] + r * th.cos(), c[1] + r * th.sin()],
                        C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    )
                })
                .collect();
            let m = Multipole::new(nu, c, rho, charges.iter().copied());
            for x in [[c[0], 4.5], [c[0] + 2.4, 2.0], [c[0] - 2.5, 0.0], [-30.0, 0.3], [60.0, 25.0], [c[0] + 1e-13, 80.0]] {
                assert!(m.admits(x));
                let a = m.eval(x).unwrap();
                let b = direct(nu, &charges, x);
                let scale = 1.0 + b.value.norm();
                assert!((a.value - b.value).norm() < 1e-12 * scale, "nu={nu} x={x:?}: {} vs {}", a.value, b.value);
                for j in 0..2 {
                    assert!((a.grad[j] - b.grad[j]).norm() < 1e-12 * scale, "nu={nu} x={x:?} grad {j}");
                }
            }
        }
    }

    #[test]
    fn surface_charges_are_allowed() {
        let charges: Vec<([f64; 2], C)> = (0..9).map(|k| ([-1.0 + 0.25 * k as f64, 0.0], C::new(1.0, 0.3))).collect();
        let m = Multipole::new(1.0, [0.0, 0.0], 1.0, charges.iter().copied());
        for x in [[3.0, 0.0], [0.0, 2.5], [-4.0, 1.0]] {
            let a = m.eval(x).unwrap();
            let b = direct(1.0, &charges, x);
            assert!((a.value - b.value).norm() < 1e-12 * (1.0 + b.value.norm()), "x={x:?}");
        }
    }
}
