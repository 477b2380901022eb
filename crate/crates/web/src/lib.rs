//! Browser demo.  Three JSON-in/JSON-out operations; the wasm exports are
//! thin wrappers so the same functions are testable natively.

use serde::{Deserialize, Serialize};
use wavebound::conditions::{check_condition1, check_condition2, check_mazya, max_epsilon, Condition};
use wavebound::geometry::{BodyCurve, GeometryBox, ShapeSpec};
use wavebound::greens::SourcePotential;
use wavebound::solver::{assemble_and_solve, scattering_coefficients, BoundaryData};

const SAMPLES: usize = 256;

#[derive(Debug, Serialize)]
pub struct ContourSample {
    pub x: [f64; 2],
    pub condition1: f64,
    pub condition2: Option<f64>,
    pub mazya: f64,
}

#[derive(Debug, Serialize)]
pub struct ConditionProfile {
    pub geometry: GeometryBox,
    pub epsilon_max: Option<f64>,
    pub epsilon: Option<f64>,
    pub condition1: bool,
    pub condition2: Option<bool>,
    pub mazya: bool,
    pub samples: Vec<ContourSample>,
}

/// Slacks of the contour conditions at 256 points.  `epsilon <= 0` means
/// "use the largest admissible ε".
pub fn condition_profile(shape_json: &str, epsilon: f64) -> Result<String, String> {
    let spec: ShapeSpec = serde_json::from_str(shape_json).map_err(|e| e.to_string())?;
    let curve = BodyCurve::new(spec).map_err(|e| e.to_string())?;
    let geometry = GeometryBox::of(&curve);
    let epsilon_max = max_epsilon(&curve, SAMPLES, 1e-8).map_err(|e| e.to_string())?.epsilon;
    let epsilon = if epsilon > 0.0 { Some(epsilon.min(geometry.min_depth)) } else { epsilon_max };
    let c1 = check_condition1(&curve, SAMPLES).map_err(|e| e.to_string())?;
    let mz = check_mazya(&curve, SAMPLES).map_err(|e| e.to_string())?;
    let c2 = match epsilon {
        Some(e) => Some(check_condition2(&curve, e, SAMPLES).map_err(|e| e.to_string())?.holds),
        None => None,
    };
    let samples = curve
        .sample(SAMPLES)
        .iter()
        .map(|f| ContourSample {
            x: f.x,
            condition1: Condition::Condition1.slack(f),
            condition2: epsilon.map(|e| Condition::Condition2 { epsilon: e }.slack(f)),
            mazya: Condition::Mazya.slack(f),
        })
        .collect();
    json(&ConditionProfile {
        geometry,
        epsilon_max,
        epsilon,
        condition1: c1.holds,
        condition2: c2,
        mazya: mz.holds,
        samples,
    })
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenGrid {
    pub nu: f64,
    pub source: [f64; 2],
    pub x1: [f64; 2],
    pub x2: [f64; 2],
    pub nx: usize,
    pub nz: usize,
}

#[derive(Debug, Serialize)]
pub struct GreenField {
    pub nx: usize,
    pub nz: usize,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    /// Row-major over `x2`, then `x1`; `null` where the kernel is singular.
    pub re: Vec<Option<f64>>,
    pub im: Vec<Option<f64>>,
}

const MAX_GRID: usize = 200;

pub fn green_field(grid_json: &str) -> Result<String, String> {
    let g: GreenGrid = serde_json::from_str(grid_json).map_err(|e| e.to_string())?;
    if !(2..=MAX_GRID).contains(&g.nx) || !(2..=MAX_GRID).contains(&g.nz) {
        return Err(format!("grid sizes must lie in [2, {MAX_GRID}]"));
    }
    if g.x2[0] < 0.0 || g.source[1] <= 0.0 {
        return Err("the grid and the source must lie in the water (x2 ≥ 0)".into());
    }
    let k = SourcePotential::new(g.nu).map_err(|e| e.to_string())?;
    let axis = |[a, b]: [f64; 2], n: usize| -> Vec<f64> { (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect() };
    let (x1, x2) = (axis(g.x1, g.nx), axis(g.x2, g.nz));
    let mut re = Vec::with_capacity(g.nx * g.nz);
    let mut im = Vec::with_capacity(g.nx * g.nz);
    for &b in &x2 {
        for &a in &x1 {
            let v = k.value([a, b], g.source).ok().filter(|v| v.re.is_finite());
            re.push(v.map(|v| v.re));
            im.push(v.map(|v| v.im));
        }
    }
    json(&GreenField {
        nx: g.nx,
        nz: g.nz,
        x1,
        x2,
        re,
        im,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterInput {
    pub shape: ShapeSpec,
    pub nu: f64,
    #[serde(default)]
    pub data: BoundaryData,
    #[serde(default = "default_panels")]
    pub panels: usize,
    /// Free-surface elevation is sampled on `[-span, span]`.
    #[serde(default = "default_span")]
    pub span: f64,
}

fn default_panels() -> usize {
    64
}

fn default_span() -> f64 {
    10.0
}

#[derive(Debug, Serialize)]
pub struct ScatterOutput {
    pub d_plus: [f64; 2],
    pub d_minus: [f64; 2],
    pub discrepancy: f64,
    pub contour: Vec<[f64; 2]>,
    pub surface_x1: Vec<f64>,
    /// `u` on the free surface.
    pub surface_re: Vec<f64>,
    pub surface_im: Vec<f64>,
}

const MAX_PANELS: usize = 256;

pub fn scatter(input_json: &str) -> Result<String, String> {
    let inp: ScatterInput = serde_json::from_str(input_json).map_err(|e| e.to_string())?;
    if inp.panels > MAX_PANELS {
        return Err(format!("at most {MAX_PANELS} panels in the browser"));
    }
    if !(inp.span > 0.0 && inp.span.is_finite()) {
        return Err("span must be positive".into());
    }
    let curve = BodyCurve::new(inp.shape).map_err(|e| e.to_string())?;
    let sol = assemble_and_solve(&curve, inp.nu, &inp.data, inp.panels).map_err(|e| e.to_string())?;
    let s = scattering_coefficients(&sol).map_err(|e| e.to_string())?;
    let n = 201;
    let surface_x1: Vec<f64> = (0..n).map(|i| -inp.span + 2.0 * inp.span * i as f64 / (n - 1) as f64).collect();
    let mut surface_re = Vec::with_capacity(n);
    let mut surface_im = Vec::with_capacity(n);
    for &x in &surface_x1 {
        let u = sol.evaluate([x, 0.0]).map_err(|e| e.to_string())?;
        surface_re.push(u.re);
        surface_im.push(u.im);
    }
    json(&ScatterOutput {
        d_plus: [s.d_plus.re, s.d_plus.im],
        d_minus: [s.d_minus.re, s.d_minus.im],
        discrepancy: s.discrepancy,
        contour: curve.sample(128).iter().map(|f| f.x).collect(),
        surface_x1,
        surface_re,
        surface_im,
    })
}

fn json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen(js_name = conditionProfile)]
    pub fn condition_profile(shape_json: &str, epsilon: f64) -> Result<String, JsValue> {
        super::condition_profile(shape_json, epsilon).map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen(js_name = greenField)]
    pub fn green_field(grid_json: &str) -> Result<String, JsValue> {
        super::green_field(grid_json).map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen]
    pub fn scatter(input_json: &str) -> Result<String, JsValue> {
        super::scatter(input_json).map_err(|e| JsValue::from_str(&e))
    }
}
