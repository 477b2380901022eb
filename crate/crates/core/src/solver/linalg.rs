//! Dense complex LU with a 1-norm condition estimate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub struct Factored {
    lu: nalgebra::linalg::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    lu_adjoint: nalgebra::linalg::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    norm1: f64,
}

fn norm1(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl Factored {
    pub fn new(a: DMatrix<Complex64>) -> Self {
        let norm1 = norm1(&a);
        let lu_adjoint = a.adjoint().lu();
        Self {
            lu: a.lu(),
            lu_adjoint,
            norm1,
        }
    }

    pub fn solve(&self, b: &[Complex64]) -> Option<Vec<Complex64>> {
        let rhs = DVector::from_column_slice(b);
        self.lu.solve(&rhs).map(|x| x.iter().copied().collect())
    }

    /// Hager–Higham estimate of `‖A‖₁ ‖A⁻¹‖₁`; infinite when singular.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.lu.l().nrows();
        if !self.lu.is_invertible() {
            return f64::INFINITY;
        }
        let mut x = DVector::from_element(n, Complex64::new(1.0 / n as f64, 0.0));
        let mut est = 0.0;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let Some(y) = self.lu.solve(&x) else {
                return f64::INFINITY;
            };
            let ynorm: f64 = y.iter().map(|z| z.norm()).sum();
            if ynorm <= est {
                break;
            }
            est = ynorm;
            let xi = y.map(|z| if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) });
            let Some(z) = self.lu_adjoint.solve(&xi) else {
                return f64::INFINITY;
            };
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(j, v)| (j, v.norm()))
                .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
            let zx: f64 = z.iter().zip(x.iter()).map(|(a, b)| (a.conj() * b).re).sum();
            if zmax <= zx || j == last_j {
                break;
            }
            last_j = j;
            x.fill(Complex64::new(0.0, 0.0));
            x[j] = Complex64::new(1.0, 0.0);
        }
        // Higham's alternating-sign safeguard vector.
        let alt = DVector::from_fn(n, |i, _| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(s * (1.0 + i as f64 / (n as f64 - 1.0).max(1.0)), 0.0)
        });
        if let Some(y) = self.lu.solve(&alt) {
            let alt_est = 2.0 * y.iter().map(|z| z.norm()).sum::<f64>() / (3.0 * n as f64);
            est = est.max(alt_est);
        }
        est * self.norm1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimate_is_exact_for_diagonal() {
        let mut a = DMatrix::from_element(4, 4, Complex64::new(0.0, 0.0));
        for (i, d) in [1.0, 2.0, 1e-3, 5.0].iter().enumerate() {
            a[(i, i)] = Complex64::new(*d, 0.0);
        }
        let f = Factored::new(a);
        assert!((f.condition_estimate() - 5e3).abs() < 1e-6);
    }

    #[test]
    fn estimate_is_a_lower_bound_within_small_factor() {
        let n = 12;
        let a = DMatrix::from_fn(n, n, |i, j| {
            let v = 1.0 / (1.0 + i as f64 + j as f64);
            Complex64::new(v, if i == j { 0.1 } else { 0.0 })
        });
        let exact = {
            let inv = a.clone().try_inverse().unwrap();
            norm1(&a) * norm1(&inv)
        };
        let est = Factored::new(a).condition_estimate();
        assert!(est <= exact * (1.0 + 1e-10) && est >= exact / 10.0, "{est} vs {exact}");
    }

    #[test]
    fn solves() {
        let a = DMatrix::from_fn(3, 3, |i, j| Complex64::new(if i == j { 2.0 } else { 0.5 }, j as f64 * 0.1));
        let b = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(2.0, -1.0)];
        let x = Factored::new(a.clone()).solve(&b).unwrap();
        let r = a * DVector::from_vec(x) - DVector::from_vec(b);
        assert!(r.norm() < 1e-14);
    }
}
