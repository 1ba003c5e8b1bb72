//! Lagrangian transport of vortex blobs and full simulations.

mod setup;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{DiagnosticsRecord, Diagnostician};
use crate::field::{fullplane_skip, StreamDecomposition, VortexBlobs};
use crate::{Error, Result, Vec2};

pub use setup::{build_decomposition, build_map, build_maps, GeometryOptions};

/// Largest number of step halvings after a blob lands inside an obstacle.
pub const MAX_HALVINGS: u32 = 6;

/// Blobs with the flow that carries them. Without a decomposition the blobs
/// move in the free plane.
#[derive(Debug, Clone)]
pub struct SimulationState {
    pub blobs: VortexBlobs,
    pub decomp: Option<StreamDecomposition>,
    pub step_index: usize,
    pub dt: f64,
    /// Blob velocities at the current positions.
    velocity: Vec<Vec2>,
}

impl SimulationState {
    pub fn exterior(blobs: VortexBlobs, decomp: StreamDecomposition, dt: f64) -> Result<Self> {
        check_dt(dt)?;
        let mut s = SimulationState { blobs, decomp: Some(decomp), step_index: 0, dt, velocity: Vec::new() };
        let positions = s.blobs.positions.clone();
        s.velocity = s.velocities(&positions)?;
        Ok(s)
    }

    pub fn free_plane(blobs: VortexBlobs, dt: f64) -> Result<Self> {
        check_dt(dt)?;
        let mut s = SimulationState { blobs, decomp: None, step_index: 0, dt, velocity: Vec::new() };
        let positions = s.blobs.positions.clone();
        s.velocity = s.velocities(&positions)?;
        Ok(s)
    }

    pub fn time(&self) -> f64 {
        self.blobs.time
    }

    /// Current blob velocities.
    pub fn blob_velocities(&self) -> &[Vec2] {
        &self.velocity
    }

    /// Velocities of blobs placed at `positions`; in exterior mode this also
    /// moves the decomposition (correction and `alpha`) to those positions.
    fn velocities(&mut self, positions: &[Vec2]) -> Result<Vec<Vec2>> {
        match &mut self.decomp {
            Some(d) => {
                let mut b = self.blobs.clone();
                b.positions = positions.to_vec();
                d.update(&b)?;
                d.blob_velocities()
            }
            None => {
                let mut b = self.blobs.clone();
                b.positions = positions.to_vec();
                Ok((0..positions.len()).into_par_iter().map(|j| fullplane_skip(&b, positions[j], Some(j))).collect())
            }
        }
    }

    fn rk4(&mut self, dt: f64) -> Result<(Vec<Vec2>, Vec<Vec2>)> {
        let x0 = self.blobs.positions.clone();
        let k1 = self.velocity.clone();
        let shift = |k: &[Vec2], c: f64| -> Vec<Vec2> { x0.iter().zip(k).map(|(x, v)| x + v * c).collect() };
        let k2 = self.velocities(&shift(&k1, 0.5 * dt))?;
        let k3 = self.velocities(&shift(&k2, 0.5 * dt))?;
        let k4 = self.velocities(&shift(&k3, dt))?;
        let x1: Vec<Vec2> = (0..x0.len()).map(|j| x0[j] + (k1[j] + (k2[j] + k3[j]) * 2.0 + k4[j]) * (dt / 6.0)).collect();
        let v1 = self.velocities(&x1)?;
        Ok((x1, v1))
    }

    /// Advances by at most `dt`, halving on collisions; returns the step taken.
    pub fn advance(&mut self, dt: f64) -> Result<f64> {
        check_dt(dt)?;
        let mut h = dt;
        let mut last_blob = 0;
        for _ in 0..=MAX_HALVINGS {
            match self.rk4(h) {
                Ok((x1, v1)) => {
                    self.blobs.positions = x1;
                    self.blobs.time += h;
                    self.velocity = v1;
                    self.step_index += 1;
                    return Ok(h);
                }
                Err(Error::Collision { blob, .. }) => last_blob = blob,
                Err(e) => return Err(e),
            }
            h *= 0.5;
        }
        // restore the decomposition to the accepted positions
        let positions = self.blobs.positions.clone();
        self.velocity = self.velocities(&positions)?;
        let obstacle = self
            .decomp
            .as_ref()
            .and_then(|d| d.approximation().obstacle_containing(self.blobs.positions[last_blob] + self.velocity[last_blob] * h))
            .unwrap_or(0);
        Err(Error::Collision { blob: last_blob, obstacle })
    }
}

fn check_dt(dt: f64) -> Result<()> {
    if !dt.is_finite() || dt == 0.0 {
        return Err(Error::InvalidArgument { field: "dt", reason: format!("time step must be finite and nonzero, got {dt}") });
    }
    Ok(())
}

/// One classical RK4 step of size `state.dt`.
pub fn step(mut state: SimulationState) -> Result<SimulationState> {
    let dt = state.dt;
    state.advance(dt)?;
    Ok(state)
}

/// Blob positions at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub positions: Vec<Vec2>,
}

/// Recorded blob states and diagnostics of a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub strengths: Vec<f64>,
    pub core: f64,
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Vec<DiagnosticsRecord>,
}

impl Trajectory {
    pub fn new(blobs: &VortexBlobs) -> Self {
        Trajectory { strengths: blobs.strengths.clone(), core: blobs.core, snapshots: Vec::new(), diagnostics: Vec::new() }
    }

    pub fn blobs_at(&self, index: usize) -> VortexBlobs {
        let s = &self.snapshots[index];
        VortexBlobs { positions: s.positions.clone(), strengths: self.strengths.clone(), core: self.core, time: s.t }
    }

    pub fn last(&self) -> Option<&Snapshot> {
        self.snapshots.last()
    }

    /// `t,blob_id,x,y,gamma`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "t,blob_id,x,y,gamma")?;
        for s in &self.snapshots {
            for (j, (p, g)) in s.positions.iter().zip(&self.strengths).enumerate() {
                writeln!(out, "{},{j},{},{},{g}", s.t, p.x, p.y)?;
            }
        }
        Ok(())
    }
}

/// Output cadence of [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cadence {
    /// Steps between snapshots.
    pub snapshots: usize,
    /// Steps between diagnostics records.
    pub diagnostics: usize,
}

impl Default for Cadence {
    fn default() -> Self {
        Cadence { snapshots: 10, diagnostics: 10 }
    }
}

/// Steps `state` to `t_final`, recording the initial and final states and
/// every state at the cadence. `on_step` sees the initial state and every
/// accepted step.
pub fn integrate(
    state: &mut SimulationState,
    t_final: f64,
    cadence: Cadence,
    diagnostics: Option<&Diagnostician>,
    mut on_step: impl FnMut(&SimulationState) -> Result<()>,
) -> Result<Trajectory> {
    let dt = state.dt;
    let span = t_final - state.time();
    if !(span * dt > 0.0) {
        return Err(Error::InvalidArgument { field: "t_final", reason: format!("cannot reach {t_final} with dt = {dt}") });
    }
    let mut traj = Trajectory::new(&state.blobs);
    let record = |state: &SimulationState, traj: &mut Trajectory, snap: bool, diag: bool| -> Result<()> {
        if snap {
            traj.snapshots.push(Snapshot { t: state.time(), positions: state.blobs.positions.clone() });
        }
        if diag {
            if let Some(d) = diagnostics {
                traj.diagnostics.push(d.record(state)?);
            }
        }
        Ok(())
    };
    record(state, &mut traj, true, true)?;
    on_step(state)?;
    let tol = 1e-9 * dt.abs();
    loop {
        let remaining = t_final - state.time();
        if remaining.abs() <= tol {
            break;
        }
        let h = if remaining.abs() < dt.abs() { remaining } else { dt };
        state.advance(h)?;
        let last = (t_final - state.time()).abs() <= tol;
        let snap = last || state.step_index % cadence.snapshots.max(1) == 0;
        let diag = last || state.step_index % cadence.diagnostics.max(1) == 0;
        record(state, &mut traj, snap, diag)?;
        on_step(state)?;
    }
    Ok(traj)
}

/// Runs a scenario: builds geometry, maps and harmonic fields once, then steps to the final time.
pub fn simulate(scenario: &crate::cli::Scenario) -> Result<Trajectory> {
    let mut state = scenario.initial_state()?;
    let diag = Diagnostician::new(&state, &scenario.diagnostics_config())?;
    integrate(&mut state, scenario.t_final, scenario.cadence(), Some(&diag), |_| Ok(()))
}
