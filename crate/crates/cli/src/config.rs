//! Scenario files.  Parsing rejects unknown keys; `check` then validates
//! every value before any computation starts.

use serde::{Deserialize, Serialize};
use wavebound::geometry::{BodyCurve, ShapeSpec};
use wavebound::solver::{BoundaryData, MIN_PANELS};
use wavebound::validation::QuadratureSettings;
use wavebound::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    /// Required by every subcommand except `green-dump`.
    #[serde(default)]
    pub shape: Option<ShapeSpec>,
    pub nu: f64,
    #[serde(default)]
    pub epsilon: EpsilonPolicy,
    #[serde(default)]
    pub data: BoundaryData,
    #[serde(default = "default_panels")]
    pub panels: usize,
    #[serde(default)]
    pub quadrature: QuadratureSettings,
    /// Conditions whose failure makes `check-geometry` exit with 2.
    #[serde(default = "default_require")]
    pub require: Vec<Requirement>,
    /// Points at which `solve` reports the field.
    #[serde(default)]
    pub probes: Vec<[f64; 2]>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub outputs: Outputs,
    /// Seed of the quadratic-form samples; `--seed` overrides it.
    #[serde(default)]
    pub seed: u64,
    /// Sampling grid of `green-dump`.
    #[serde(default)]
    pub grid: Option<GridSpec>,
}

fn default_name() -> String {
    "scenario".into()
}

fn default_panels() -> usize {
    128
}

fn default_require() -> Vec<Requirement> {
    vec![Requirement::Condition1, Requirement::Condition2]
}

/// How ε is chosen: `"max"` searches for the largest admissible value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged, expecting = "epsilon as a positive number or \"max\"")]
pub enum EpsilonPolicy {
    Fixed(f64),
    Named(EpsilonName),
}

impl Default for EpsilonPolicy {
    fn default() -> Self {
        Self::Named(EpsilonName::Max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonName {
    Max,
}

impl EpsilonPolicy {
    pub fn fixed(&self) -> Option<f64> {
        match *self {
            Self::Fixed(e) => Some(e),
            Self::Named(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Requirement {
    Condition1,
    Condition2,
    Mazya,
    Uniqueness,
}

/// Optional lists; the points are every shape at every frequency, shapes
/// outermost.  A list that is present but empty yields no points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    #[serde(default)]
    pub nu: Option<Vec<f64>>,
    #[serde(default)]
    pub shapes: Option<Vec<ShapeSpec>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    #[serde(default = "green_tol")]
    pub green: f64,
    #[serde(default = "energy_tol")]
    pub energy: f64,
    #[serde(default = "energy_tol")]
    pub multiplier: f64,
    /// Relative disagreement with the exact `d±` of manufactured data.
    #[serde(default = "oracle_tol")]
    pub oracle: f64,
}

fn green_tol() -> f64 {
    1e-4
}

fn energy_tol() -> f64 {
    1e-3
}

fn oracle_tol() -> f64 {
    1e-6
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            green: green_tol(),
            energy: energy_tol(),
            multiplier: energy_tol(),
            oracle: oracle_tol(),
        }
    }
}

/// File names inside the `--out` directory; each defaults to
/// `<subcommand>.json` / `<subcommand>.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub json: Option<String>,
    #[serde(default)]
    pub csv: Option<String>,
    /// Stem of the `(ν, ρ)` plot files written by `validate`.
    #[serde(default)]
    pub plot: Option<String>,
}

/// `x1` and `x2` ranges as `[start, end, count]`, and the source point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x1: (f64, f64, usize),
    pub x2: (f64, f64, usize),
    pub source: [f64; 2],
}

impl GridSpec {
    pub fn points(&self) -> Vec<[f64; 2]> {
        let axis = |(a, b, n): (f64, f64, usize)| -> Vec<f64> {
            match n {
                0 => vec![],
                1 => vec![a],
                _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
            }
        };
        let xs = axis(self.x1);
        let ys = axis(self.x2);
        ys.iter().flat_map(|&y| xs.iter().map(move |&x| [x, y])).collect()
    }
}

/// One `(shape, ν)` combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub index: usize,
    pub shape: ShapeSpec,
    pub nu: f64,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    fn nus(&self) -> Vec<f64> {
        match self.sweep.as_ref().and_then(|s| s.nu.clone()) {
            Some(v) => v,
            None => vec![self.nu],
        }
    }

    fn shapes(&self) -> Vec<ShapeSpec> {
        match self.sweep.as_ref().and_then(|s| s.shapes.clone()) {
            Some(v) => v,
            None => self.shape.clone().into_iter().collect(),
        }
    }

    /// Sweep points in config order.
    pub fn points(&self) -> Vec<Point> {
        let nus = self.nus();
        self.shapes()
            .into_iter()
            .flat_map(|s| nus.iter().map(move |&nu| (s.clone(), nu)))
            .enumerate()
            .map(|(index, (shape, nu))| Point { index, shape, nu })
            .collect()
    }

    /// Semantic checks.  `needs_shape` is false only for `green-dump`.
    pub fn check(&self, needs_shape: bool) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        for nu in std::iter::once(self.nu).chain(self.nus()) {
            if !(nu > 0.0 && nu.is_finite()) {
                return bad(format!("nu must be positive and finite, got {nu}"));
            }
        }
        if let Some(e) = self.epsilon.fixed() {
            if !(e > 0.0 && e.is_finite()) {
                return bad(format!("epsilon must be positive, got {e}"));
            }
        }
        self.quadrature.validate()?;
        let t = &self.thresholds;
        if [t.green, t.energy, t.multiplier, t.oracle].iter().any(|v| !(*v > 0.0)) {
            return bad("thresholds must be positive".into());
        }
        if !needs_shape {
            return match &self.grid {
                None => bad("green-dump needs a \"grid\"".into()),
                Some(g) if g.source[1] <= 0.0 => bad("the grid source must lie below the free surface".into()),
                Some(g) if [g.x1.0, g.x1.1, g.x2.0, g.x2.1].iter().any(|v| !v.is_finite()) => {
                    bad("grid ranges must be finite".into())
                }
                Some(_) => Ok(()),
            };
        }
        if self.shapes().is_empty() && self.shape.is_none() {
            return bad("a \"shape\" is required".into());
        }
        if self.panels < MIN_PANELS || self.panels % 2 != 0 {
            return bad(format!("panels must be even and at least {MIN_PANELS}, got {}", self.panels));
        }
        for s in self.shapes() {
            let curve = BodyCurve::new(s)?;
            self.data.validate(&curve)?;
        }
        Ok(())
    }
}
