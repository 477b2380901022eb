//! Exponentially scaled exponential integral `e^z E1(z)`.
//!
//! Only the closed left half-plane matters for the Green's function, where
//! `E1` itself grows like `e^{|z|}` while the scaled product stays O(1/|z|).
//! Three regimes are used: the divergent asymptotic series for large `|z|`
//! in the left half-plane, the power series wherever its cancellation loss
//! `e^{|z| + Re z}` is small, and a continued fraction everywhere else.

use num_complex::Complex64;
use std::f64::consts::PI;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const MAX_TERMS: usize = 400;
const MAX_FRACTION_TERMS: usize = 20_000;

/// `e^z E1(z)` on the principal branch.
///
/// On the negative real axis the value is the limit from above
/// (`Im z = +0`, also for a signed `-0.0` imaginary part), i.e.
/// `E1(-x + i0) = -Ei(x) - iπ`.  Values with `Im z < 0` follow by
/// conjugate symmetry.  Returns `None` at `z = 0` or if a series fails to
/// converge.
pub fn scaled_e1(z: Complex64) -> Option<Complex64> {
    if z.im < 0.0 {
        return scaled_e1(z.conj()).map(|w| w.conj());
    }
    let z = Complex64::new(z.re, z.im.abs());
    let a = z.norm();
    if a == 0.0 || !a.is_finite() {
        return None;
    }
    // The power series loses about e^{|z| + Re z} to cancellation.
    if a >= 36.0 && z.re <= 0.0 {
        asymptotic(z)
    } else if a <= 2.0 || a + z.re < 4.5 {
        power_series(z)
    } else {
        continued_fraction(z)
    }
}

fn power_series(z: Complex64) -> Option<Complex64> {
    let mz = -z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..MAX_TERMS {
        term = term * mz / k as f64;
        let add = term / k as f64;
        sum += add;
        if k as f64 > z.norm() && add.norm() <= 1e-17 * sum.norm() {
            let e1 = -EULER_GAMMA - z.ln() - sum;
            return Some(z.exp() * e1);
        }
    }
    None
}

fn asymptotic(z: Complex64) -> Option<Complex64> {
    // e^z E1(z) ~ sum_k (-1)^k k! / z^{k+1}, truncated at the smallest term.
    let inv = z.inv();
    let mut term = inv;
    let mut sum = term;
    let mut last = term.norm();
    for k in 1..MAX_TERMS {
        let next = term * (-(k as f64)) * inv;
        let m = next.norm();
        if m >= last {
            break;
        }
        sum += next;
        term = next;
        last = m;
        if m <= 1e-17 * sum.norm() {
            break;
        }
    }
    if last > 1e-13 * sum.norm() {
        return None;
    }
    // Stokes contribution, switched on near the cut only; negligible in
    // magnitude but it fixes the sign of a vanishing imaginary part.
    if z.re < -2.0 * z.im {
        sum -= Complex64::new(0.0, PI) * z.exp();
    }
    Some(sum)
}

fn continued_fraction(z: Complex64) -> Option<Complex64> {
    // Modified Lentz on 1/(z+1- 1/(z+3- 4/(z+5- ...))).
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..MAX_FRACTION_TERMS {
        let an = -((i * i) as f64);
        b += 2.0;
        d = (d * an + b).inv();
        c = b + c.inv() * an;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            return Some(h);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Reference values from a 30-digit evaluation of e^z E1(z).
    const TABLE: &[(f64, f64, f64, f64)] = &[
        (0.5, 0.0, 0.92291063248373046883, 0.0),
        (-0.5, 0.0, -0.27549829855127026213, -1.9054722647301799369),
        (-3.0, 2.0, -0.21166423739351362204, -0.25058913283500535561),
        (-10.0, 0.0, -0.11314702047341077803, -0.00014262808581531501621),
        (-10.0, 3.0, -0.10063275908566944328, -0.034711574746419112978),
        (-0.2, 7.5, 0.013016637536914512386, -0.13002662210211413747),
        (-25.0, 4.0, -0.040606980418930915474, -0.0067942887049672064697),
        (-45.0, 1.0, -0.022727834432372576594, -0.00051711683877248785003),
        (-6.0, 40.0, -0.0030720654714835505079, -0.024600881975917773332),
        (0.0, 12.0, 0.0066870977947310693308, -0.082257362339637807132),
        (-1.0, 0.3, -0.41126774194393193767, -1.0274848586488814188),
        (-60.0, 0.0, -0.01695420039481328661, -2.75e-26),
        (-4.5, 4.5, -0.10210816404055151657, -0.13851916201133240218),
        (-38.0, 10.0, -0.025200161682552758144, -0.0068209205466341273851),
    ];

    #[test]
    fn matches_reference_table() {
        for &(x, y, re, im) in TABLE {
            let got = scaled_e1(c(x, y)).unwrap();
            let want = c(re, im);
            let rel = (got - want).norm() / want.norm();
            assert!(rel < 2e-13, "z=({x},{y}): got {got}, want {want}, rel {rel:e}");
        }
    }

    #[test]
    fn negative_zero_imaginary_part_is_upper_side() {
        let a = scaled_e1(c(-2.0, 0.0)).unwrap();
        let b = scaled_e1(c(-2.0, -0.0)).unwrap();
        assert_eq!(a, b);
        assert!(a.im < 0.0);
    }

    #[test]
    fn conjugate_symmetry_off_axis() {
        let z = c(-3.0, 2.0);
        let a = scaled_e1(z).unwrap();
        let b = scaled_e1(z.conj()).unwrap();
        assert!((a - b.conj()).norm() < 1e-15);
    }

    #[test]
    fn regimes_agree_where_they_overlap() {
        // Series vs continued fraction where the series still keeps ~12 digits.
        for i in 0..40 {
            for j in 0..40 {
                let z = c(-36.0 + 0.9 * i as f64, 0.9 * j as f64 + 0.05);
                let a = z.norm();
                if a < 2.0 || a >= 36.0 || a + z.re > 8.0 || a + z.re < 3.0 {
                    continue;
                }
                let s = power_series(z).unwrap();
                let f = continued_fraction(z).unwrap();
                assert!((s - f).norm() < 2e-12 * f.norm(), "z={z}: {s} vs {f}");
            }
        }
        // Series vs asymptotic at |z| = 40 near the negative axis.
        let z = c(-40.0, 3.0);
        let s = power_series(z).unwrap();
        let a = asymptotic(z).unwrap();
        assert!((s - a).norm() < 1e-12 * a.norm());
        // Asymptotic vs continued fraction off the axis.
        let z = c(-5.0, 38.0);
        let a = asymptotic(z).unwrap();
        let f = continued_fraction(z).unwrap();
        assert!((a - f).norm() < 1e-13 * a.norm());
    }

    #[test]
    fn defined_on_the_whole_closed_upper_left_quadrant() {
        for i in 0..120 {
            for j in 0..120 {
                let z = c(-60.0 + 0.5 * i as f64, 0.5 * j as f64);
                if z.norm() > 0.0 {
                    let v = scaled_e1(z).unwrap_or_else(|| panic!("no value at {z}"));
                    assert!(v.re.is_finite() && v.im.is_finite());
                }
            }
        }
    }

    #[test]
    fn zero_is_rejected() {
        assert!(scaled_e1(c(0.0, 0.0)).is_none());
    }
}
