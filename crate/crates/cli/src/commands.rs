//! The four subcommands.  Sweep points run on the current thread pool and
//! are reported in config order.

use crate::config::{EpsilonPolicy, Point, Requirement, ScenarioConfig};
use crate::table::{self, num, NA};
use crate::{Outcome, UsageError, EXIT_CONDITION, EXIT_EXTRACTION, EXIT_OK, EXIT_RESIDUAL, REPORT_VERSION};
use rayon::prelude::*;
use serde::Serialize;
use std::path::{Path, PathBuf};
use wavebound::conditions::*;
use wavebound::constants::{ledger, ConstantLedger};
use wavebound::geometry::{BodyCurve, GeometryBox, ShapeSpec};
use wavebound::greens::SourcePotential;
use wavebound::solver::{assemble_and_solve, scattering_coefficients, ScatteringResult};
use wavebound::validation::*;
use wavebound::{Complex64, Error};

/// Contour samples for every condition check.
pub const CONDITION_SAMPLES: usize = 256;
const EPSILON_REL_TOL: f64 = 1e-8;
const Q_FORM_SAMPLES: usize = 10_000;

#[derive(Debug, Serialize)]
struct Report<'a, T> {
    report: &'static str,
    command: &'static str,
    name: &'a str,
    seed: u64,
    points: Vec<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_forms: Option<[QFormReport; 2]>,
}

fn report<'a, T>(command: &'static str, cfg: &'a ScenarioConfig, points: Vec<T>) -> Report<'a, T> {
    Report {
        report: &REPORT_VERSION[2..],
        command,
        name: &cfg.name,
        seed: cfg.seed,
        points,
        q_forms: None,
    }
}

fn path(out: &Path, given: &Option<String>, default: &str) -> PathBuf {
    out.join(given.as_deref().unwrap_or(default))
}

fn case(cfg: &ScenarioConfig, p: &Point) -> String {
    format!("{}-{}", cfg.name, p.index)
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Run `f` on every point in parallel; the first error (in config order) wins.
fn each<T: Send>(points: &[Point], f: impl Fn(&Point) -> Result<T, Error> + Sync + Send) -> Result<Vec<T>, UsageError> {
    let results: Vec<Result<T, Error>> = points.par_iter().map(f).collect();
    results
        .into_iter()
        .zip(points)
        .map(|(r, p)| r.map_err(|e| UsageError(format!("sweep point {} (ν = {}): {e}", p.index, p.nu))))
        .collect()
}

/// Conditions, ε and the small-frequency criterion for one body.
#[derive(Debug, Clone, Serialize)]
pub struct Assessment {
    /// With ε set when one was chosen and Condition 2 holds there.
    pub geometry: GeometryBox,
    pub condition1: ConditionReport,
    pub mazya: ConditionReport,
    pub epsilon_search: EpsilonSearch,
    pub epsilon: Option<f64>,
    pub condition2: Option<ConditionReport>,
    pub uniqueness: UniquenessReport,
    pub warnings: Vec<String>,
}

impl Assessment {
    pub fn holds(&self, r: Requirement) -> bool {
        match r {
            Requirement::Condition1 => self.condition1.holds,
            Requirement::Condition2 => self.condition2.as_ref().is_some_and(|c| c.holds),
            Requirement::Mazya => self.mazya.holds,
            Requirement::Uniqueness => self.uniqueness.holds,
        }
    }

    /// Whether the bound applies: Conditions 1 and 2 both hold.
    pub fn bound_applies(&self) -> bool {
        self.holds(Requirement::Condition1) && self.holds(Requirement::Condition2)
    }
}

pub fn assess(curve: &BodyCurve, nu: f64, policy: EpsilonPolicy) -> Result<Assessment, Error> {
    let mut geometry = GeometryBox::of(curve);
    let mut warnings = Vec::new();
    let condition1 = check_condition1(curve, CONDITION_SAMPLES)?;
    let mazya = check_mazya(curve, CONDITION_SAMPLES)?;
    let epsilon_search = max_epsilon(curve, CONDITION_SAMPLES, EPSILON_REL_TOL)?;
    let epsilon = policy.fixed().or(epsilon_search.epsilon);
    let condition2 = match epsilon {
        None => {
            warnings.push("condition 2 fails for every ε in (0, h]".into());
            None
        }
        Some(e) if e > geometry.min_depth * (1.0 + 1e-12) => {
            warnings.push(format!("ε = {e} exceeds the least depth h = {}", geometry.min_depth));
            None
        }
        Some(e) => Some(check_condition2(curve, e, CONDITION_SAMPLES)?),
    };
    if let (Some(e), Some(c2)) = (epsilon, &condition2) {
        if c2.holds {
            geometry = geometry.with_epsilon(e)?;
        }
    }
    if !condition1.holds {
        warnings.push(format!("condition 1 fails: min slack {:e} at {:?}", condition1.min_slack, condition1.argmin));
    }
    if let Some(c2) = condition2.as_ref().filter(|c| !c.holds) {
        warnings.push(format!("condition 2 fails: min slack {:e} at {:?}", c2.min_slack, c2.argmin));
    }
    let uniqueness = uniqueness_criterion(nu, geometry.half_width, geometry.min_depth)?;
    Ok(Assessment {
        geometry,
        condition1,
        mazya,
        epsilon_search,
        epsilon,
        condition2,
        uniqueness,
        warnings,
    })
}

#[derive(Debug, Serialize)]
struct GeometryPoint {
    case: String,
    shape: ShapeSpec,
    nu: f64,
    #[serde(flatten)]
    assessment: Assessment,
    failed: Vec<Requirement>,
}

const GEOMETRY_COLUMNS: [&str; 19] = [
    "case",
    "nu",
    "half_width",
    "min_depth",
    "max_depth",
    "curvature",
    "condition1_min",
    "condition1",
    "mazya_min",
    "mazya",
    "epsilon",
    "condition2_min",
    "condition2",
    "epsilon_max",
    "uniqueness_value",
    "uniqueness",
    "tau",
    "status",
    "failed",
];

pub fn check_geometry(cfg: &ScenarioConfig, out: &Path) -> Result<Outcome, UsageError> {
    let points = cfg.points();
    let rows = each(&points, |p| {
        let curve = BodyCurve::new(p.shape.clone())?;
        let a = assess(&curve, p.nu, cfg.epsilon)?;
        let failed = cfg.require.iter().copied().filter(|r| !a.holds(*r)).collect();
        Ok(GeometryPoint {
            case: case(cfg, p),
            shape: p.shape.clone(),
            nu: p.nu,
            assessment: a,
            failed,
        })
    })?;
    let opt = |x: Option<f64>| x.map_or(NA.to_string(), num);
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let a = &r.assessment;
            let g = &a.geometry;
            vec![
                r.case.clone(),
                num(r.nu),
                num(g.half_width),
                num(g.min_depth),
                num(g.max_depth),
                num(g.curvature),
                num(a.condition1.min_slack),
                a.condition1.holds.to_string(),
                num(a.mazya.min_slack),
                a.mazya.holds.to_string(),
                opt(a.epsilon),
                opt(a.condition2.as_ref().map(|c| c.min_slack)),
                a.holds(Requirement::Condition2).to_string(),
                opt(a.epsilon_search.epsilon),
                num(a.uniqueness.value),
                a.uniqueness.holds.to_string(),
                num(g.tau(r.nu)),
                if r.failed.is_empty() { "ok" } else { "condition-failed" }.into(),
                r.failed.iter().map(|f| requirement_name(*f)).collect::<Vec<_>>().join(" "),
            ]
        })
        .collect();
    let mut o = Outcome::default();
    for r in rows.iter().filter(|r| !r.failed.is_empty()) {
        o.code = EXIT_CONDITION;
        let names: Vec<&str> = r.failed.iter().map(|f| requirement_name(*f)).collect();
        o.messages.push(format!("{}: failed {}", r.case, names.join(", ")));
    }
    finish(o, out, cfg, "check-geometry", &GEOMETRY_COLUMNS, &table, &report("check-geometry", cfg, rows))
}

fn requirement_name(r: Requirement) -> &'static str {
    match r {
        Requirement::Condition1 => "condition1",
        Requirement::Condition2 => "condition2",
        Requirement::Mazya => "mazya",
        Requirement::Uniqueness => "uniqueness",
    }
}

fn finish<T: Serialize>(
    mut o: Outcome,
    out: &Path,
    cfg: &ScenarioConfig,
    stem: &str,
    columns: &[&str],
    rows: &[Vec<String>],
    json: &T,
) -> Result<Outcome, UsageError> {
    let c = path(out, &cfg.outputs.csv, &format!("{stem}.csv"));
    table::write(&c, columns, rows)?;
    let j = path(out, &cfg.outputs.json, &format!("{stem}.json"));
    table::write_json(&j, json)?;
    o.files.extend([j, c]);
    Ok(o)
}

#[derive(Debug, Serialize)]
struct Probe {
    x: [f64; 2],
    value: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<[f64; 2]>,
}

#[derive(Debug, Serialize)]
struct Oracle {
    d_plus: [f64; 2],
    d_minus: [f64; 2],
    relative_error: f64,
}

#[derive(Debug, Serialize)]
struct SolvePoint {
    case: String,
    shape: ShapeSpec,
    nu: f64,
    panels: usize,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    scattering: Option<ScatteringResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Oracle>,
    condition_estimate: f64,
    resolution_estimate: f64,
    warnings: Vec<String>,
    probes: Vec<Probe>,
    nodes: Vec<[f64; 2]>,
    density: Vec<[f64; 2]>,
}

const SOLVE_COLUMNS: [&str; 16] = [
    "case",
    "nu",
    "panels",
    "status",
    "d_plus_re",
    "d_plus_im",
    "d_minus_re",
    "d_minus_im",
    "far_plus_re",
    "far_plus_im",
    "far_minus_re",
    "far_minus_im",
    "discrepancy",
    "oracle_error",
    "condition_estimate",
    "resolution_estimate",
];

pub fn solve(cfg: &ScenarioConfig, out: &Path) -> Result<Outcome, UsageError> {
    let points = cfg.points();
    let rows = each(&points, |p| {
        let curve = BodyCurve::new(p.shape.clone())?;
        for x in &cfg.probes {
            if x[1] < 0.0 || curve.contains(*x) {
                return Err(Error::Domain(format!("probe {x:?} is not in the fluid")));
            }
        }
        let sol = assemble_and_solve(&curve, p.nu, &cfg.data, cfg.panels)?;
        let g = SourcePotential::new(p.nu)?;
        let mut warnings: Vec<String> = sol.warnings().to_vec();
        let (status, scattering) = match scattering_coefficients(&sol) {
            Ok(s) => ("ok", Some(s)),
            Err(e @ Error::ExtractionMismatch { .. }) => {
                warnings.push(e.to_string());
                ("extraction-disagreement", None)
            }
            Err(e) => return Err(e),
        };
        let mut status = status;
        let oracle = match (&scattering, cfg.data.exact_far_field(&g)) {
            (Some(s), Some((ep, em))) => {
                let scale = ep.norm().max(em.norm());
                let diff = (s.d_plus - ep).norm().max((s.d_minus - em).norm());
                let relative_error = if scale > 0.0 { diff / scale } else { diff };
                if relative_error > cfg.thresholds.oracle {
                    status = "oracle-disagreement";
                    warnings.push(format!("d± differ from the exact values by {relative_error:e}"));
                }
                Some(Oracle {
                    d_plus: pair(ep),
                    d_minus: pair(em),
                    relative_error,
                })
            }
            _ => None,
        };
        let probes = cfg
            .probes
            .iter()
            .map(|&x| {
                let exact = match cfg.data.exact_field(&g, x) {
                    Some(r) => Some(pair(r?.value)),
                    None => None,
                };
                Ok(Probe {
                    x,
                    value: pair(sol.evaluate(x)?),
                    exact,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(SolvePoint {
            case: case(cfg, p),
            shape: p.shape.clone(),
            nu: p.nu,
            panels: cfg.panels,
            status,
            scattering,
            oracle,
            condition_estimate: sol.condition_estimate(),
            resolution_estimate: sol.resolution_estimate(),
            warnings,
            probes,
            nodes: sol.nodes().iter().map(|f| f.x).collect(),
            density: sol.density().iter().map(|d| pair(*d)).collect(),
        })
    })?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut row = vec![r.case.clone(), num(r.nu), r.panels.to_string(), r.status.to_string()];
            match &r.scattering {
                Some(s) => {
                    for z in [s.d_plus, s.d_minus, s.far_field_plus, s.far_field_minus] {
                        row.extend([num(z.re), num(z.im)]);
                    }
                    row.push(num(s.discrepancy));
                }
                None => row.extend(std::iter::repeat(NA.to_string()).take(9)),
            }
            row.push(r.oracle.as_ref().map_or(NA.to_string(), |o| num(o.relative_error)));
            row.extend([num(r.condition_estimate), num(r.resolution_estimate)]);
            row
        })
        .collect();
    let mut o = Outcome::default();
    for r in rows.iter().filter(|r| r.status != "ok") {
        o.code = EXIT_EXTRACTION;
        o.messages.push(format!("{}: {}: {}", r.case, r.status, r.warnings.join("; ")));
    }
    finish(o, out, cfg, "solve", &SOLVE_COLUMNS, &table, &report("solve", cfg, rows))
}

#[derive(Debug, Serialize)]
struct ValidatePoint {
    case: String,
    shape: ShapeSpec,
    nu: f64,
    panels: usize,
    status: &'static str,
    warnings: Vec<String>,
    assessment: Assessment,
    evaluation: FieldEvaluation,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constants: Option<ConstantLedger>,
    breaches: Vec<String>,
}

const VALIDATE_COLUMNS: [&str; 25] = [
    "case",
    "nu",
    "epsilon",
    "panels",
    "truncation",
    "nodes",
    "status",
    "warning",
    "norm_u",
    "norm_f",
    "norm_f1",
    "norm_v",
    "d_plus_re",
    "d_plus_im",
    "d_minus_re",
    "d_minus_im",
    "C",
    "rho_u",
    "rho_d",
    "lemmas",
    "green_residual",
    "energy_residual",
    "multiplier_w_residual",
    "multiplier_v_residual",
    "max_residual_ratio",
];

pub fn validate(cfg: &ScenarioConfig, out: &Path) -> Result<Outcome, UsageError> {
    let points = cfg.points();
    let t = cfg.thresholds;
    let rows = each(&points, |p| {
        let curve = BodyCurve::new(p.shape.clone())?;
        let assessment = assess(&curve, p.nu, cfg.epsilon)?;
        let sol = assemble_and_solve(&curve, p.nu, &cfg.data, cfg.panels)?;
        let evaluation = evaluate_field(&sol, &assessment.geometry, &cfg.quadrature)?;
        let name = case(cfg, p);
        let (bound, constants) = if assessment.bound_applies() {
            let led = ledger(p.nu, &assessment.geometry)?;
            (Some(bound_report(&name, &evaluation, &led)?), Some(led))
        } else {
            (None, None)
        };
        let id = &evaluation.identities;
        let breaches = [
            (&id.green, t.green),
            (&id.energy, t.energy),
            (&id.multiplier_w, t.multiplier),
            (&id.multiplier_v, t.multiplier),
        ]
        .iter()
        .filter(|(r, tol)| !(r.residual <= *tol))
        .map(|(r, tol)| format!("{} residual {:e} exceeds {:e}", r.name, r.residual, tol))
        .collect();
        let mut warnings = assessment.warnings.clone();
        warnings.extend(sol.warnings().iter().cloned());
        if bound.is_none() {
            warnings.push("bound not applicable: conditions 1 and 2 are required".into());
        }
        Ok(ValidatePoint {
            case: name,
            shape: p.shape.clone(),
            nu: p.nu,
            panels: cfg.panels,
            status: if bound.is_some() { "ok" } else { "warning" },
            warnings,
            assessment,
            evaluation,
            bound,
            constants,
            breaches,
        })
    })?;
    let table: Vec<Vec<String>> = rows.iter().map(|r| validate_row(r, &t)).collect();
    let mut o = Outcome::default();
    for r in &rows {
        for b in &r.breaches {
            o.code = EXIT_RESIDUAL;
            o.messages.push(format!("{}: {b}", r.case));
        }
        if r.status == "warning" {
            o.messages.push(format!("{}: warning: {}", r.case, r.warnings.join("; ")));
        }
    }
    if let Some(stem) = &cfg.outputs.plot {
        let fields: [(&str, fn(&BoundReport) -> f64); 2] = [("rho_u", |b| b.rho_u), ("rho_d", |b| b.rho_d)];
        for (which, get) in fields {
            let lines: Vec<String> = rows
                .iter()
                .filter_map(|r| r.bound.as_ref().map(|b| format!("{} {}", num(r.nu), num(get(b)))))
                .collect();
            let p = out.join(format!("{stem}_{which}.dat"));
            std::fs::write(&p, format!("# nu {which}\n{}", lines.iter().map(|l| format!("{l}\n")).collect::<String>()))?;
            o.files.push(p);
        }
    }
    let (pts, vecs) = q_form_samples(cfg.seed, Q_FORM_SAMPLES);
    let q_forms = [q_form_check(Multiplier::W, &pts, &vecs)?, q_form_check(Multiplier::V, &pts, &vecs)?];
    let mut rep = report("validate", cfg, rows);
    rep.q_forms = Some(q_forms);
    finish(o, out, cfg, "validate", &VALIDATE_COLUMNS, &table, &rep)
}

fn validate_row(r: &ValidatePoint, t: &crate::config::Thresholds) -> Vec<String> {
    let n = &r.evaluation.norms;
    let id = &r.evaluation.identities;
    let ratio = [
        id.green.residual / t.green,
        id.energy.residual / t.energy,
        id.multiplier_w.residual / t.multiplier,
        id.multiplier_v.residual / t.multiplier,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let mut row = vec![
        r.case.clone(),
        num(r.nu),
        r.assessment.epsilon.map_or(NA.to_string(), num),
        r.panels.to_string(),
        num(n.truncation),
        n.nodes.to_string(),
        r.status.into(),
        r.warnings.join("; "),
        num(n.norm_u),
        num(n.norm_f),
        num(n.norm_f1),
        num(n.norm_v),
        num(n.d_plus.re),
        num(n.d_plus.im),
        num(n.d_minus.re),
        num(n.d_minus.im),
    ];
    match &r.bound {
        Some(b) => row.extend([num(b.c), num(b.rho_u), num(b.rho_d), b.lemmas.holds().to_string()]),
        None => row.extend(std::iter::repeat(NA.to_string()).take(4)),
    }
    row.extend([
        num(id.green.residual),
        num(id.energy.residual),
        num(id.multiplier_w.residual),
        num(id.multiplier_v.residual),
        num(ratio),
    ]);
    row
}

const GREEN_COLUMNS: [&str; 8] = ["x1", "x2", "g_re", "g_im", "dg_dx1_re", "dg_dx1_im", "dg_dx2_re", "dg_dx2_im"];

/// `G(x; source)` and its gradient on the grid; points where the kernel
/// cannot be evaluated (the source itself, above the surface) get NaN.
pub fn green_dump(cfg: &ScenarioConfig, out: &Path) -> Result<Outcome, UsageError> {
    let grid = cfg.grid.as_ref().ok_or_else(|| UsageError("green-dump needs a \"grid\"".into()))?;
    let g = SourcePotential::new(cfg.nu)?;
    let xs = grid.points();
    let rows: Vec<Vec<String>> = xs
        .par_iter()
        .map(|&x| {
            let vals = match g.eval(x, grid.source) {
                Ok(k) => [k.value, k.grad[0], k.grad[1]],
                Err(_) => [Complex64::new(f64::NAN, f64::NAN); 3],
            };
            let mut row = vec![num(x[0]), num(x[1])];
            for v in vals {
                row.extend([num(v.re), num(v.im)]);
            }
            row
        })
        .collect();
    let c = path(out, &cfg.outputs.csv, "green-dump.csv");
    table::write(&c, &GREEN_COLUMNS, &rows)?;
    Ok(Outcome {
        code: EXIT_OK,
        files: vec![c],
        messages: Vec::new(),
    })
}
