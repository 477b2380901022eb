//! Problem data: volume sources, Neumann data on the body, surface data.

use crate::error::{param, Result};
use crate::geometry::{BodyCurve, Frame};
use crate::greens::{KernelEval, SourcePotential};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Smooth bump `exp(1 - 1/(1 - s²))` on `|s| < 1`, with value 1 at 0.
#[inline]
pub fn bump(s: f64) -> f64 {
    let s2 = s * s;
    if s2 >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s2)).exp()
    }
}

/// Derivative of [`bump`].
#[inline]
pub fn bump_derivative(s: f64) -> f64 {
    let s2 = s * s;
    if s2 >= 1.0 {
        0.0
    } else {
        let q = 1.0 - s2;
        -2.0 * s / (q * q) * bump(s)
    }
}

/// Complex numbers in configs: either a bare real number or `[re, im]`.
pub mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Pair([f64; 2]),
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Repr::Pair([z.re, z.im]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Real(x) => Complex64::new(x, 0.0),
            Repr::Pair([a, b]) => Complex64::new(a, b),
        })
    }

    pub mod vec {
        use super::Repr;
        use num_complex::Complex64;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
            v.iter()
                .map(|z| Repr::Pair([z.re, z.im]))
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
            Ok(Vec::<Repr>::deserialize(d)?
                .into_iter()
                .map(|r| match r {
                    Repr::Real(x) => Complex64::new(x, 0.0),
                    Repr::Pair([a, b]) => Complex64::new(a, b),
                })
                .collect())
        }
    }
}

/// `f(ξ) = amplitude · bump(|ξ - center| / radius)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumeBump {
    pub center: [f64; 2],
    pub radius: f64,
    #[serde(with = "complex_serde")]
    pub amplitude: Complex64,
}

impl VolumeBump {
    pub fn value(&self, x: [f64; 2]) -> Complex64 {
        let s = (x[0] - self.center[0]).hypot(x[1] - self.center[1]) / self.radius;
        self.amplitude * bump(s)
    }
}

/// `g2(x1) = amplitude · bump(|x1 - center| / radius)` on the free surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceBump {
    pub center: f64,
    pub radius: f64,
    #[serde(with = "complex_serde")]
    pub amplitude: Complex64,
}

impl SurfaceBump {
    pub fn value(&self, x1: f64) -> Complex64 {
        self.amplitude * bump((x1 - self.center) / self.radius)
    }

    pub fn derivative(&self, x1: f64) -> Complex64 {
        self.amplitude * bump_derivative((x1 - self.center) / self.radius) / self.radius
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }
}

/// Point source `strength · G(·; at)` placed inside the body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSource {
    pub at: [f64; 2],
    #[serde(with = "complex_serde")]
    pub strength: Complex64,
}

/// Neumann datum `g1` on the body contour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NeumannData {
    #[default]
    Zero,
    /// `g1(t) = cos[0] + Σ_{k≥1} cos[k] cos kt + sin[k-1] sin kt`.
    Fourier {
        #[serde(default, with = "complex_serde::vec")]
        cos: Vec<Complex64>,
        #[serde(default, with = "complex_serde::vec")]
        sin: Vec<Complex64>,
    },
    /// `g1 = ∂u/∂n` of the field of point sources inside the body; the
    /// exact solution is then that field itself.
    Sources { sources: Vec<PointSource> },
}

/// The right-hand sides `(f, g1, g2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct BoundaryData {
    #[serde(default)]
    pub f: Vec<VolumeBump>,
    #[serde(default)]
    pub g1: NeumannData,
    #[serde(default)]
    pub g2: Vec<SurfaceBump>,
}

impl BoundaryData {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Data whose exact solution is `Σ q_k G(·; ξ_k)`.
    pub fn manufactured(sources: Vec<PointSource>) -> Self {
        Self {
            g1: NeumannData::Sources { sources },
            ..Self::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        let z = |c: &Complex64| *c == Complex64::new(0.0, 0.0);
        self.f.iter().all(|b| z(&b.amplitude))
            && self.g2.iter().all(|b| z(&b.amplitude))
            && match &self.g1 {
                NeumannData::Zero => true,
                NeumannData::Fourier { cos, sin } => cos.iter().chain(sin).all(z),
                NeumannData::Sources { sources } => sources.iter().all(|s| z(&s.strength)),
            }
    }

    /// All amplitudes multiplied by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.f.iter_mut().for_each(|b| b.amplitude *= factor);
        out.g2.iter_mut().for_each(|b| b.amplitude *= factor);
        match &mut out.g1 {
            NeumannData::Zero => {}
            NeumannData::Fourier { cos, sin } => cos.iter_mut().chain(sin.iter_mut()).for_each(|c| *c *= factor),
            NeumannData::Sources { sources } => sources.iter_mut().for_each(|s| s.strength *= factor),
        }
        out
    }

    pub fn validate(&self, curve: &BodyCurve) -> Result<()> {
        for b in &self.f {
            if !(b.radius > 0.0 && b.radius.is_finite()) {
                return Err(param("volume bump radius must be positive"));
            }
            if b.center[1] - b.radius <= 0.0 {
                return Err(param(format!("volume bump at {:?} reaches the free surface", b.center)));
            }
            if curve.contains(b.center) || curve.closest(b.center).1 <= b.radius {
                return Err(param(format!("volume bump at {:?} overlaps the body", b.center)));
            }
        }
        for b in &self.g2 {
            if !(b.radius > 0.0 && b.radius.is_finite() && b.center.is_finite()) {
                return Err(param("surface bump needs a finite center and a positive radius"));
            }
        }
        if let NeumannData::Sources { sources } = &self.g1 {
            for s in sources {
                if !curve.contains(s.at) || curve.closest(s.at).1 < 1e-9 {
                    return Err(param(format!("manufactured source {:?} must lie strictly inside the body", s.at)));
                }
            }
        }
        Ok(())
    }

    /// `g1` at a contour frame.
    pub fn g1(&self, g: &SourcePotential, fr: &Frame) -> Result<Complex64> {
        Ok(match &self.g1 {
            NeumannData::Zero => Complex64::new(0.0, 0.0),
            NeumannData::Fourier { cos, sin } => {
                let mut v = cos.first().copied().unwrap_or_default();
                for (k, c) in cos.iter().enumerate().skip(1) {
                    v += c * (k as f64 * fr.t).cos();
                }
                for (k, c) in sin.iter().enumerate() {
                    v += c * ((k + 1) as f64 * fr.t).sin();
                }
                v
            }
            NeumannData::Sources { sources } => {
                let mut v = Complex64::new(0.0, 0.0);
                for s in sources {
                    let k = g.eval(fr.x, s.at)?;
                    v += s.strength * (k.grad[0] * fr.normal[0] + k.grad[1] * fr.normal[1]);
                }
                v
            }
        })
    }

    /// Exact field for manufactured data; `None` for other data.
    pub fn exact_field(&self, g: &SourcePotential, x: [f64; 2]) -> Option<Result<KernelEval>> {
        let NeumannData::Sources { sources } = &self.g1 else {
            return None;
        };
        if !self.f.is_empty() || !self.g2.is_empty() {
            return None;
        }
        let mut acc = KernelEval::zero();
        for s in sources {
            match g.eval(x, s.at) {
                Ok(k) => {
                    acc.value += s.strength * k.value;
                    acc.grad[0] += s.strength * k.grad[0];
                    acc.grad[1] += s.strength * k.grad[1];
                }
                Err(e) => return Some(Err(e)),
            }
        }
        Some(Ok(acc))
    }

    /// Far-field amplitudes of the manufactured field, if any.
    pub fn exact_far_field(&self, g: &SourcePotential) -> Option<(Complex64, Complex64)> {
        let NeumannData::Sources { sources } = &self.g1 else {
            return None;
        };
        if !self.f.is_empty() || !self.g2.is_empty() {
            return None;
        }
        Some(sources.iter().fold(Default::default(), |(p, m), s| {
            let (a, b) = g.far_field(s.at);
            (p + s.strength * a, m + s.strength * b)
        }))
    }
}
