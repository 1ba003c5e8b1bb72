//! Scenario files, run and study entry points, and output files.

mod scenario;
mod study;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::diagnostics::{write_diagnostics_csv, Diagnostician};
use crate::field::fullplane_biot_savart;
use crate::transport::{integrate, SimulationState, Trajectory};
use crate::{Error, Result, Vec2};

pub use scenario::{
    BlobInit, DiagnosticsOverrides, FieldGrid, GeometryOverrides, Mode, Profile, Scenario, ScenarioCadence, Tolerances,
    SCHEMA_VERSION,
};
pub use study::{
    caratheodory_circle, caratheodory_ellipse, capacity_point, capacity_segment, dt_order, n_refinement,
    n_refinement_endpoints, orbit_endpoint, poincare, run_study, CapacityPointParams, CapacitySegmentParams,
    CaratheodoryParams, Check, DtOrderParams, EllipseStudyParams, NRefinementParams, PoincareParams, StudyReport,
    StudySpec, STUDIES,
};

/// Files written by [`run_scenario`].
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    pub files: Vec<PathBuf>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Default snapshot grid: the box around obstacles and blobs, padded by one unit.
fn default_grid(state: &SimulationState) -> FieldGrid {
    let mut pts: Vec<Vec2> = state.blobs.positions.clone();
    if let Some(d) = &state.decomp {
        for c in &d.approximation().curves {
            pts.extend(c.points().iter().copied());
        }
    }
    let (mut lo, mut hi) = (Vec2::new(-1.0, -1.0), Vec2::new(1.0, 1.0));
    for p in &pts {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    FieldGrid { x: [lo.x - 1.0, hi.x + 1.0], y: [lo.y - 1.0, hi.y + 1.0], nx: 41, ny: 41 }
}

/// `x,y,psi,u1,u2` on `grid`; `NaN` inside obstacles.
pub fn write_field_csv<W: Write>(state: &SimulationState, grid: &FieldGrid, out: &mut W) -> Result<()> {
    let (xs, ys) = grid.axes();
    match &state.decomp {
        Some(d) => d.write_field_csv(&xs, &ys, out),
        None => {
            writeln!(out, "x,y,psi,u1,u2")?;
            let b = &state.blobs;
            let eps2 = b.core * b.core;
            let pts: Vec<Vec2> = ys.iter().flat_map(|&y| xs.iter().map(move |&x| Vec2::new(x, y))).collect();
            let rows: Vec<(f64, Vec2)> = pts
                .par_iter()
                .map(|x| {
                    let psi: f64 = b
                        .positions
                        .iter()
                        .zip(&b.strengths)
                        .map(|(p, g)| g * ((x - p).norm_squared() + eps2).ln() / (4.0 * std::f64::consts::PI))
                        .sum();
                    (psi, fullplane_biot_savart(b, *x))
                })
                .collect();
            for (x, (psi, u)) in pts.iter().zip(rows) {
                writeln!(out, "{},{},{psi},{},{}", x.x, x.y, u.x, u.y)?;
            }
            Ok(())
        }
    }
}

/// Runs `scenario`, writing `trajectory.csv`, `diagnostics.csv` and
/// `field_<step>.csv` snapshots into `out_dir`.
pub fn run_scenario(scenario: &Scenario, out_dir: &Path) -> Result<RunOutput> {
    std::fs::create_dir_all(out_dir)?;
    let mut state = scenario.initial_state()?;
    let diag = Diagnostician::new(&state, &scenario.diagnostics_config())?;
    let grid = scenario.field_grid.unwrap_or_else(|| default_grid(&state));
    let mut files = Vec::new();
    let every = scenario.cadence.fields;
    let mut field_files = Vec::new();
    let mut traj = integrate(&mut state, scenario.t_final, scenario.cadence(), Some(&diag), |s| {
        if every > 0 && s.step_index % every == 0 {
            let path = out_dir.join(format!("field_{:06}.csv", s.step_index));
            let mut w = create(&path)?;
            write_field_csv(s, &grid, &mut w)?;
            w.flush()?;
            field_files.push(path);
        }
        Ok(())
    })?;
    let final_path = out_dir.join(format!("field_{:06}.csv", state.step_index));
    if !field_files.contains(&final_path) {
        let mut w = create(&final_path)?;
        write_field_csv(&state, &grid, &mut w)?;
        w.flush()?;
        field_files.push(final_path);
    }
    let path = out_dir.join("trajectory.csv");
    let mut w = create(&path)?;
    traj.write_csv(&mut w)?;
    w.flush()?;
    files.push(path);
    let path = out_dir.join("diagnostics.csv");
    let mut w = create(&path)?;
    write_diagnostics_csv(&traj.diagnostics, &mut w)?;
    w.flush()?;
    files.push(path);
    files.extend(field_files);
    traj.diagnostics.shrink_to_fit();
    Ok(RunOutput { trajectory: traj, files })
}

/// Runs a study and writes `<study>.json` into `out_dir`.
pub fn run_study_file(spec: &StudySpec, out_dir: &Path) -> Result<(StudyReport, PathBuf)> {
    let report = run_study(spec)?;
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("{}.json", report.study));
    let mut w = create(&path)?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    Ok((report, path))
}

/// Machine-readable description of an error.
pub fn error_json(err: &Error) -> serde_json::Value {
    let mut v = serde_json::json!({ "error": err.kind(), "message": err.to_string() });
    match err {
        Error::Validation { field, .. } => v["field"] = field.clone().into(),
        Error::InvalidArgument { field, .. } => v["field"] = (*field).into(),
        Error::UnknownStudy { available, .. } => v["available"] = available.clone().into(),
        Error::Collision { blob, obstacle } => {
            v["blob"] = (*blob).into();
            v["obstacle"] = (*obstacle).into();
        }
        _ => {}
    }
    v
}
