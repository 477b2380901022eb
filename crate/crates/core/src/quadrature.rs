//! Quadrature building blocks shared by the solver and the norm evaluators.

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Gauss–Legendre rule stored on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(points: usize) -> Self {
        let rule = GaussLegendre::new(points.max(2)).expect("degree >= 2");
        let mut pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (m + h * x, h * w))
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Breakpoints of panels that shrink geometrically (ratio 2) toward `center`,
/// covering `[lo, hi]`.  The innermost panels have width `min_width`.
pub fn graded_breaks(lo: f64, hi: f64, center: f64, min_width: f64) -> Vec<f64> {
    assert!(lo < hi);
    let c = center.clamp(lo, hi);
    let mut left = vec![c];
    let mut w = min_width.max(1e-300);
    let mut x = c;
    while x > lo {
        x = (x - w).max(lo);
        if x - lo < 0.5 * w {
            x = lo;
        }
        left.push(x);
        w *= 2.0;
    }
    let mut breaks: Vec<f64> = left.into_iter().rev().collect();
    let mut w = min_width.max(1e-300);
    let mut x = c;
    while x < hi {
        x = (x + w).min(hi);
        if hi - x < 0.5 * w {
            x = hi;
        }
        breaks.push(x);
        w *= 2.0;
    }
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 0.0);
    breaks
}

/// Breakpoints of equal panels no wider than `max_width`, always including
/// the given interior `fixed` points that fall inside `(lo, hi)`.
pub fn uniform_breaks(lo: f64, hi: f64, max_width: f64, fixed: &[f64]) -> Vec<f64> {
    let mut cuts: Vec<f64> = fixed.iter().copied().filter(|&x| x > lo && x < hi).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * (1.0 + b.abs()));
    let mut out = vec![cuts[0]];
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let n = ((b - a) / max_width).ceil().max(1.0) as usize;
        for k in 1..=n {
            out.push(a + (b - a) * k as f64 / n as f64);
        }
    }
    out
}

/// Weights `R_k` of the periodic log-product rule on `N = 2n` equispaced
/// nodes: `∫_0^{2π} ln(4 sin²((t-s)/2)) φ(s) ds ≈ Σ_k R_{|j-k|} φ(s_k)`.
pub fn log_weights(n_nodes: usize) -> Vec<f64> {
    assert!(n_nodes % 2 == 0 && n_nodes >= 4);
    let n = n_nodes / 2;
    let nf = n as f64;
    (0..n_nodes)
        .map(|k| {
            let mut s = 0.0;
            for m in 1..n {
                s += (m as f64 * k as f64 * PI / nf).cos() / m as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            -2.0 * PI / nf * s - PI / (nf * nf) * sign
        })
        .collect()
}

/// Trigonometric derivative `dφ/dt` of periodic samples on `t_j = 2πj/N`.
pub fn periodic_derivative(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut planner = FftPlanner::<f64>::new();
    let mut buf = samples.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let freq = if 2 * k < n {
            k as f64
        } else if 2 * k == n {
            0.0
        } else {
            k as f64 - n as f64
        };
        *c *= Complex64::new(0.0, freq / n as f64);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf
}

/// Fourier resampling of periodic samples from `N` to `M` equispaced nodes.
/// Downsampling truncates to the modes that fit; the Nyquist mode is split
/// symmetrically.
pub fn periodic_resample(samples: &[Complex64], m: usize) -> Vec<Complex64> {
    let n = samples.len();
    if m == n {
        return samples.to_vec();
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut spec = samples.to_vec();
    planner.plan_fft_forward(n).process(&mut spec);
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    let keep = n.min(m);
    let half = keep / 2;
    for k in 0..half {
        out[k] = spec[k];
        if k > 0 {
            out[m - k] = spec[n - k];
        }
    }
    if keep % 2 == 0 {
        // Nyquist of the smaller grid: symmetric split.
        let nyq = if n <= m {
            spec[half]
        } else {
            spec[half] + spec[n - half]
        };
        if n <= m {
            out[half] += 0.5 * nyq;
            out[m - half] += 0.5 * nyq;
        } else {
            out[half] = nyq;
        }
    } else {
        out[half] = spec[half];
        if m - half != half {
            out[m - half] = spec[n - half];
        }
    }
    let scale = 1.0 / n as f64;
    planner.plan_fft_inverse(m).process(&mut out);
    out.iter().map(|c| c * scale).collect()
}

/// Magnitudes of the Fourier coefficients of periodic samples, folded to
/// `|k| = 0..=N/2` (max of the ±k pair).
pub fn fourier_magnitudes(samples: &[Complex64]) -> Vec<f64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    (0..=n / 2)
        .map(|k| {
            let a = buf[k].norm();
            let b = buf[(n - k) % n].norm();
            a.max(b) / n as f64
        })
        .collect()
}

/// Local barycentric Lagrange interpolation on a fine periodic grid.
#[derive(Debug, Clone)]
pub struct PeriodicInterpolant {
    values: Vec<Complex64>,
    stencil: usize,
    bary: Vec<f64>,
}

impl PeriodicInterpolant {
    pub fn new(values: Vec<Complex64>, stencil: usize) -> Self {
        let stencil = stencil.clamp(2, values.len());
        // Barycentric weights for equispaced nodes: (-1)^j C(m-1, j).
        let mut bary = vec![1.0; stencil];
        for j in 1..stencil {
            bary[j] = -bary[j - 1] * (stencil - j) as f64 / j as f64;
        }
        Self {
            values,
            stencil,
            bary,
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let n = self.values.len();
        let h = 2.0 * PI / n as f64;
        let u = t.rem_euclid(2.0 * PI) / h;
        let first = u.floor() as i64 - (self.stencil as i64 / 2 - 1);
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for j in 0..self.stencil {
            let idx = first + j as i64;
            let d = u - idx as f64;
            let v = self.values[idx.rem_euclid(n as i64) as usize];
            if d == 0.0 {
                return v;
            }
            let c = self.bary[j] / d;
            num += v * c;
            den += c;
        }
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_is_exact_for_polynomials() {
        let g = GaussRule::new(8);
        let v = g.integrate(0.0, 2.0, |x| x.powi(15));
        assert!((v - 2f64.powi(16) / 16.0).abs() < 1e-10);
    }

    #[test]
    fn graded_breaks_cover_interval_monotonically() {
        let b = graded_breaks(-1.0, 3.0, 0.25, 1e-6);
        assert_eq!(b[0], -1.0);
        assert_eq!(*b.last().unwrap(), 3.0);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
        assert!(b.iter().any(|&x| x == 0.25));
    }

    #[test]
    fn log_weights_integrate_log_kernel() {
        // ∫ ln(4 sin²(s/2)) cos(s) ds over a period equals -2π.
        let n = 32;
        let r = log_weights(n);
        let s: f64 = (0..n)
            .map(|k| r[k] * (2.0 * PI * k as f64 / n as f64).cos())
            .sum();
        assert!((s + 2.0 * PI).abs() < 1e-12, "{s}");
        // ... and 0 against a constant.
        let s0: f64 = r.iter().sum();
        assert!(s0.abs() < 1e-12);
    }

    #[test]
    fn resampling_roundtrip_is_exact_for_band_limited_data() {
        let n = 16;
        let f = |t: f64| Complex64::new((3.0 * t).cos(), (2.0 * t).sin() + 0.5);
        let s: Vec<_> = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect();
        let up = periodic_resample(&s, 64);
        for (j, v) in up.iter().enumerate() {
            assert!((v - f(2.0 * PI * j as f64 / 64.0)).norm() < 1e-13);
        }
        let down = periodic_resample(&up, n);
        for (a, b) in down.iter().zip(&s) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn spectral_derivative_of_trig_polynomial() {
        let n = 24;
        let s: Vec<_> = (0..n)
            .map(|j| Complex64::new((2.0 * PI * j as f64 / n as f64 * 3.0).sin(), 0.0))
            .collect();
        let d = periodic_derivative(&s);
        for (j, v) in d.iter().enumerate() {
            let t = 2.0 * PI * j as f64 / n as f64;
            assert!((v.re - 3.0 * (3.0 * t).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn local_interpolant_reproduces_smooth_data() {
        let n = 256;
        let f = |t: f64| Complex64::new(t.sin().exp(), (2.0 * t).cos());
        let vals: Vec<_> = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect();
        let p = PeriodicInterpolant::new(vals, 12);
        for t in [0.0, 0.013, 1.7, 3.14159, 6.28] {
            assert!((p.eval(t) - f(t)).norm() < 1e-11, "t={t}");
        }
    }
}
