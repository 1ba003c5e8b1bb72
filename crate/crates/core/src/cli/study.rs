//! Parametric refinement studies with JSON trend reports.

use std::f64::consts::PI;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::conformal::{caratheodory_check, fit_exterior_map, CircleMap, EllipseMap, ExteriorMap, FitOptions};
use crate::diagnostics::poincare_estimate;
use crate::field::{DecompositionOptions, VortexBlobs};
use crate::geometry::{approximation_sequence, capacity_estimate, JordanCurve, SingularObstacle};
use crate::transport::{build_decomposition, integrate, Cadence, GeometryOptions, SimulationState};
use crate::{Error, Result, Vec2};

pub const STUDIES: [&str; 7] = [
    "caratheodory-circle",
    "caratheodory-ellipse",
    "dt-order",
    "capacity-point",
    "capacity-segment",
    "poincare",
    "n-refinement",
];

/// A study file: `{"schema_version": 1, "study": name, "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudySpec {
    pub schema_version: u32,
    pub study: String,
    #[serde(default)]
    pub params: serde_json::Value,
}

impl StudySpec {
    pub fn named(study: &str) -> Self {
        StudySpec { schema_version: super::SCHEMA_VERSION, study: study.into(), params: serde_json::Value::Null }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: StudySpec = serde_json::from_str(text)?;
        if s.schema_version != super::SCHEMA_VERSION {
            return Err(Error::Validation {
                field: "schema_version".into(),
                reason: format!("expected {}, got {}", super::SCHEMA_VERSION, s.schema_version),
            });
        }
        Ok(s)
    }
}

/// One pass/fail threshold of a study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Trend table: one value of `quantity` per refinement level, plus extra columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub study: String,
    pub quantity: String,
    pub level_name: String,
    pub levels: Vec<f64>,
    pub values: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl StudyReport {
    fn new(study: &str, quantity: &str, level_name: &str, levels: Vec<f64>, values: Vec<f64>) -> Self {
        StudyReport {
            study: study.into(),
            quantity: quantity.into(),
            level_name: level_name.into(),
            levels,
            values,
            columns: Vec::new(),
            checks: Vec::new(),
            pass: true,
        }
    }

    fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.pass &= pass;
        self.checks.push(Check { name: name.into(), pass, detail });
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn params<P: DeserializeOwned + Default>(value: &serde_json::Value) -> Result<P> {
    if value.is_null() {
        return Ok(P::default());
    }
    serde_json::from_value(value.clone())
        .map_err(|e| Error::Validation { field: "params".into(), reason: e.to_string() })
}

/// Runs a named study.
pub fn run_study(spec: &StudySpec) -> Result<StudyReport> {
    match spec.study.as_str() {
        "caratheodory-circle" => caratheodory_circle(&params(&spec.params)?),
        "caratheodory-ellipse" => caratheodory_ellipse(&params(&spec.params)?),
        "dt-order" => dt_order(&params(&spec.params)?),
        "capacity-point" => capacity_point(&params(&spec.params)?),
        "capacity-segment" => capacity_segment(&params(&spec.params)?),
        "poincare" => poincare(&params(&spec.params)?),
        "n-refinement" => n_refinement(&params(&spec.params)?),
        other => Err(Error::UnknownStudy { name: other.into(), available: STUDIES.to_vec() }),
    }
}

fn ring(radius: f64, count: usize) -> Vec<Vec2> {
    (0..count)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / count as f64;
            Vec2::new(radius * t.cos(), radius * t.sin())
        })
        .collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CaratheodoryParams {
    pub ns: Vec<usize>,
    pub test_radius: f64,
    pub test_points: usize,
    pub threshold: f64,
}

impl Default for CaratheodoryParams {
    fn default() -> Self {
        CaratheodoryParams { ns: vec![4, 8, 16, 32], test_radius: 2.0, test_points: 256, threshold: 0.01 }
    }
}

/// Fitted maps of circles of radius `1 + 1/n` against the unit-disk map on `|x| = test_radius`.
pub fn caratheodory_circle(p: &CaratheodoryParams) -> Result<StudyReport> {
    let maps = p
        .ns
        .iter()
        .map(|n| {
            let c = JordanCurve::circle(Vec2::zeros(), 1.0 + 1.0 / *n as f64, 256)?;
            fit_exterior_map(&c, &FitOptions::default())
        })
        .collect::<Result<Vec<ExteriorMap>>>()?;
    let seq: Vec<(usize, &ExteriorMap)> = p.ns.iter().copied().zip(&maps).collect();
    let reference = CircleMap { center: Vec2::zeros(), radius: 1.0 };
    let rows = caratheodory_check(&seq, &reference, &ring(p.test_radius, p.test_points), &ring(0.5, 64))?;
    let levels = p.ns.iter().map(|n| *n as f64).collect();
    let mut r = StudyReport::new("caratheodory-circle", "sup |T_n - T|", "n", levels, rows.iter().map(|r| r.map).collect());
    r.columns.push(("derivative".into(), rows.iter().map(|r| r.derivative).collect()));
    r.columns.push(("inverted".into(), rows.iter().map(|r| r.inverted.unwrap_or(f64::NAN)).collect()));
    r.columns.push(("exact".into(), p.ns.iter().map(|n| p.test_radius / (*n as f64 + 1.0)).collect()));
    let dec = strictly_decreasing(&r.values);
    r.check("decreasing", dec, format!("{:?}", r.values));
    let last = *r.values.last().unwrap_or(&f64::NAN);
    r.check("final below threshold", last < p.threshold, format!("{last:.3e} vs {:.1e}", p.threshold));
    Ok(r)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EllipseStudyParams {
    pub ns: Vec<usize>,
    pub a: f64,
    pub test_radius: f64,
    pub test_points: usize,
}

impl Default for EllipseStudyParams {
    fn default() -> Self {
        EllipseStudyParams { ns: vec![2, 4, 8, 16], a: 1.0, test_radius: 2.0, test_points: 256 }
    }
}

/// Fitted maps of ellipses with semi-axes `a` and `1/n` against the segment `[-a, a]`.
pub fn caratheodory_ellipse(p: &EllipseStudyParams) -> Result<StudyReport> {
    let maps = p
        .ns
        .iter()
        .map(|n| {
            let c = JordanCurve::ellipse(Vec2::zeros(), p.a, 1.0 / *n as f64, 512)?;
            fit_exterior_map(&c, &FitOptions { turning_weight: 0.0, tolerance: 1e-4, ..FitOptions::with_degree(128) })
        })
        .collect::<Result<Vec<ExteriorMap>>>()?;
    let seq: Vec<(usize, &ExteriorMap)> = p.ns.iter().copied().zip(&maps).collect();
    let reference = EllipseMap::new(Vec2::zeros(), p.a, 0.0)?;
    let rows = caratheodory_check(&seq, &reference, &ring(p.test_radius, p.test_points), &ring(0.25, 64))?;
    let levels = p.ns.iter().map(|n| *n as f64).collect();
    let mut r = StudyReport::new("caratheodory-ellipse", "sup |T_n - T|", "n", levels, rows.iter().map(|r| r.map).collect());
    r.columns.push(("derivative".into(), rows.iter().map(|r| r.derivative).collect()));
    r.columns.push(("inverted".into(), rows.iter().map(|r| r.inverted.unwrap_or(f64::NAN)).collect()));
    let exact: Vec<f64> = p
        .ns
        .iter()
        .map(|n| -> Result<f64> {
            let e = EllipseMap::new(Vec2::zeros(), p.a, 1.0 / *n as f64)?;
            Ok(ring(p.test_radius, p.test_points)
                .iter()
                .map(|x| {
                    let z = num_complex::Complex64::new(x.x, x.y);
                    use crate::conformal::ConformalMap;
                    (e.eval(z) - reference.eval(z)).norm()
                })
                .fold(0.0, f64::max))
        })
        .collect::<Result<_>>()?;
    r.columns.push(("closed_form".into(), exact));
    let dec = strictly_decreasing(&r.values);
    r.check("decreasing", dec, format!("{:?}", r.values));
    Ok(r)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DtOrderParams {
    pub dts: Vec<f64>,
    pub t_final: f64,
    pub ratio_range: [f64; 2],
}

impl Default for DtOrderParams {
    fn default() -> Self {
        DtOrderParams { dts: vec![1.6, 0.8, 0.4, 0.2], t_final: 19.2, ratio_range: [12.0, 20.0] }
    }
}

/// Endpoint of a blob with `Gamma = 2 pi` started at `(2, 0)` outside the unit disk.
pub fn orbit_endpoint(dt: f64, t_final: f64) -> Result<Vec2> {
    let disk = SingularObstacle::disk(0, Vec2::zeros(), 1.0)?;
    let geometry = GeometryOptions { exact_boundaries: true, ..GeometryOptions::default() };
    let decomp = build_decomposition(&[disk], vec![0.0], &geometry, &DecompositionOptions::default())?;
    let blobs = VortexBlobs::new(vec![Vec2::new(2.0, 0.0)], vec![2.0 * PI], 0.05)?;
    let mut state = SimulationState::exterior(blobs, decomp, dt)?;
    let cadence = Cadence { snapshots: usize::MAX, diagnostics: usize::MAX };
    let traj = integrate(&mut state, t_final, cadence, None, |_| Ok(()))?;
    Ok(traj.last().map(|s| s.positions[0]).unwrap_or_else(|| Vec2::new(2.0, 0.0)))
}

/// Orbit endpoint error against the `dt / 2` run, and its ratio per halving.
pub fn dt_order(p: &DtOrderParams) -> Result<StudyReport> {
    let errors = p
        .dts
        .iter()
        .map(|dt| Ok((orbit_endpoint(*dt, p.t_final)? - orbit_endpoint(dt / 2.0, p.t_final)?).norm()))
        .collect::<Result<Vec<f64>>>()?;
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let mut r = StudyReport::new("dt-order", "|x(dt) - x(dt/2)|", "dt", p.dts.clone(), errors);
    let mut col = vec![f64::NAN];
    col.extend(&ratios);
    r.columns.push(("ratio".into(), col));
    let last = *ratios.last().unwrap_or(&f64::NAN);
    let ok = last >= p.ratio_range[0] && last <= p.ratio_range[1];
    r.check("ratio in range", ok, format!("finest ratio {last:.3} in {:?}", p.ratio_range));
    Ok(r)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapacityPointParams {
    pub radii: Vec<f64>,
    pub outer_radius: f64,
    /// Grid spacing as a fraction of the disk radius.
    pub h_fraction: f64,
}

impl Default for CapacityPointParams {
    fn default() -> Self {
        CapacityPointParams { radii: vec![1e-1, 1e-2, 1e-3, 1e-4], outer_radius: 2.0, h_fraction: 0.25 }
    }
}

/// Capacity of shrinking disks; the planar condenser value is `2 pi / ln(R / r)`.
pub fn capacity_point(p: &CapacityPointParams) -> Result<StudyReport> {
    let vals = p
        .radii
        .iter()
        .map(|r| capacity_estimate(&SingularObstacle::disk(0, Vec2::zeros(), *r)?, p.outer_radius, r * p.h_fraction))
        .collect::<Result<Vec<f64>>>()?;
    let scaled: Vec<f64> = vals.iter().zip(&p.radii).map(|(c, r)| c * (p.outer_radius / r).ln() / (2.0 * PI)).collect();
    let mut rep = StudyReport::new("capacity-point", "capacity", "radius", p.radii.clone(), vals);
    rep.columns.push(("condenser_ratio".into(), scaled.clone()));
    let dec = strictly_decreasing(&rep.values);
    rep.check("decreasing", dec, format!("{:?}", rep.values));
    let bounded = scaled.iter().all(|s| *s > 0.5 && *s < 2.0);
    rep.check("logarithmic decay", bounded, format!("cap ln(R/r) / 2pi = {scaled:?}"));
    Ok(rep)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapacitySegmentParams {
    pub hs: Vec<f64>,
    pub half_length: f64,
    pub outer_radius: f64,
}

impl Default for CapacitySegmentParams {
    fn default() -> Self {
        CapacitySegmentParams { hs: vec![0.04, 0.02, 0.01, 0.005], half_length: 0.5, outer_radius: 2.0 }
    }
}

/// Capacity of a segment under grid refinement, against the floor
/// `2 pi / ln(8 R / L)` below the condenser capacity of a segment of length `L`.
pub fn capacity_segment(p: &CapacitySegmentParams) -> Result<StudyReport> {
    let seg = SingularObstacle::segment(0, Vec2::new(-p.half_length, 0.0), Vec2::new(p.half_length, 0.0))?;
    let vals = p.hs.iter().map(|h| capacity_estimate(&seg, p.outer_radius, *h)).collect::<Result<Vec<f64>>>()?;
    let floor = 2.0 * PI / (8.0 * p.outer_radius / (2.0 * p.half_length)).ln();
    let mut r = StudyReport::new("capacity-segment", "capacity", "h", p.hs.clone(), vals);
    let min = r.values.iter().copied().fold(f64::INFINITY, f64::min);
    r.check("above floor", min > floor, format!("min {min:.4} vs floor {floor:.4}"));
    Ok(r)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoincareParams {
    pub ns: Vec<usize>,
    pub rho: f64,
    pub h: f64,
    pub half_length: f64,
}

impl Default for PoincareParams {
    fn default() -> Self {
        PoincareParams { ns: vec![8, 16, 32], rho: 2.0, h: 0.01, half_length: 0.5 }
    }
}

/// Poincare constants of `B(0, rho)` minus the approximants of a segment.
pub fn poincare(p: &PoincareParams) -> Result<StudyReport> {
    let seg = SingularObstacle::segment(0, Vec2::new(-p.half_length, 0.0), Vec2::new(p.half_length, 0.0))?;
    let vals = p
        .ns
        .iter()
        .map(|n| poincare_estimate(&approximation_sequence(&seg, *n, 1024)?, p.rho, p.h))
        .collect::<Result<Vec<f64>>>()?;
    let mut sorted = vals.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let mut r = StudyReport::new("poincare", "C_rho", "n", p.ns.iter().map(|n| *n as f64).collect(), vals);
    let ok = r.values.iter().all(|v| *v <= 2.0 * median && *v >= 0.5 * median);
    r.check("within 2x of median", ok, format!("median {median:.4}"));
    Ok(r)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NRefinementParams {
    pub ns: Vec<usize>,
    pub positions: Vec<[f64; 2]>,
    pub strengths: Vec<f64>,
    pub gamma: f64,
    pub dt: f64,
    pub t_final: f64,
}

impl Default for NRefinementParams {
    fn default() -> Self {
        NRefinementParams {
            ns: vec![8, 16, 32],
            positions: vec![[0.0, 0.6], [0.4, -0.7], [-0.5, 0.8]],
            strengths: vec![1.0, -0.5, 0.7],
            gamma: 0.5,
            dt: 0.02,
            t_final: 1.0,
        }
    }
}

/// Endpoints of identical blobs outside the approximants of a segment.
pub fn n_refinement_endpoints(p: &NRefinementParams) -> Result<Vec<Vec<Vec2>>> {
    let seg = SingularObstacle::segment(0, Vec2::new(-0.5, 0.0), Vec2::new(0.5, 0.0))?;
    p.ns
        .iter()
        .map(|n| {
            let decomp =
                build_decomposition(&[seg.clone()], vec![p.gamma], &GeometryOptions::with_n(*n), &DecompositionOptions::default())?;
            let blobs = VortexBlobs::new(p.positions.iter().map(|x| Vec2::new(x[0], x[1])).collect(), p.strengths.clone(), 0.05)?;
            let mut state = SimulationState::exterior(blobs, decomp, p.dt)?;
            let cadence = Cadence { snapshots: usize::MAX, diagnostics: usize::MAX };
            let traj = integrate(&mut state, p.t_final, cadence, None, |_| Ok(()))?;
            Ok(traj.last().map(|s| s.positions.clone()).unwrap_or_default())
        })
        .collect()
}

/// Largest endpoint distance between runs at consecutive approximation indices.
pub fn n_refinement(p: &NRefinementParams) -> Result<StudyReport> {
    let ends = n_refinement_endpoints(p)?;
    let dist: Vec<f64> = ends
        .windows(2)
        .map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
        .collect();
    let levels = p.ns.iter().take(dist.len()).map(|n| *n as f64).collect();
    let mut r = StudyReport::new("n-refinement", "max_j |x_j(n) - x_j(2n)|", "n", levels, dist);
    let dec = strictly_decreasing(&r.values);
    r.check("decreasing", dec, format!("{:?}", r.values));
    Ok(r)
}
