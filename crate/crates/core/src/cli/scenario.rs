use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::diagnostics::DiagnosticsConfig;
use crate::field::{AlphaMethod, DecompositionOptions, HarmonicOptions, VortexBlobs};
use crate::geometry::{ObstacleKind, SingularObstacle};
use crate::transport::{build_decomposition, Cadence, GeometryOptions, SimulationState};
use crate::{Error, Result, Vec2};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Exterior,
    FreePlane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    #[default]
    Uniform,
    /// `exp(-r^2 / (2 sigma^2))` with `sigma` half the patch radius.
    Gaussian,
}

/// Blob initialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum BlobInit {
    Explicit { positions: Vec<[f64; 2]>, strengths: Vec<f64> },
    /// `count` blobs on a sunflower lattice filling a disk, carrying `circulation` in total.
    Patch {
        center: [f64; 2],
        radius: f64,
        count: usize,
        circulation: f64,
        #[serde(default)]
        profile: Profile,
    },
}

impl BlobInit {
    pub fn blobs(&self, core: f64) -> Result<VortexBlobs> {
        match self {
            BlobInit::Explicit { positions, strengths } => {
                VortexBlobs::new(positions.iter().map(|p| Vec2::new(p[0], p[1])).collect(), strengths.clone(), core)
                    .map_err(|e| match e {
                        Error::Validation { field, reason } => Error::Validation { field: format!("blobs.explicit.{field}"), reason },
                        e => e,
                    })
            }
            BlobInit::Patch { center, radius, count, circulation, profile } => {
                if *count == 0 || !(*radius > 0.0) {
                    return Err(Error::Validation {
                        field: "blobs.patch".into(),
                        reason: "patch needs a positive radius and at least one blob".into(),
                    });
                }
                let golden = PI * (3.0 - 5f64.sqrt());
                let c = Vec2::new(center[0], center[1]);
                let mut positions = Vec::with_capacity(*count);
                let mut weights = Vec::with_capacity(*count);
                for k in 0..*count {
                    let r = radius * ((k as f64 + 0.5) / *count as f64).sqrt();
                    let t = golden * k as f64;
                    positions.push(c + Vec2::new(r * t.cos(), r * t.sin()));
                    weights.push(match profile {
                        Profile::Uniform => 1.0,
                        Profile::Gaussian => (-2.0 * r * r / (radius * radius)).exp(),
                    });
                }
                let total: f64 = weights.iter().sum();
                let strengths = weights.iter().map(|w| circulation * w / total).collect();
                VortexBlobs::new(positions, strengths, core)
            }
        }
    }
}

/// Solver settings; every value is optional and positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub map_residual: Option<f64>,
    pub collocation_degree: Option<usize>,
    pub blob_core: f64,
    pub cutoff_eps: Option<f64>,
    /// Deposition grid for the vorticity norms.
    pub grid_h: f64,
    pub harmonic_degree: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            map_residual: None,
            collocation_degree: None,
            blob_core: 0.05,
            cutoff_eps: None,
            grid_h: 0.02,
            harmonic_degree: HarmonicOptions::default().degree,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioCadence {
    pub snapshots: usize,
    pub diagnostics: usize,
    /// Steps between field snapshots; 0 writes only the final field.
    pub fields: usize,
}

impl Default for ScenarioCadence {
    fn default() -> Self {
        ScenarioCadence { snapshots: 10, diagnostics: 10, fields: 0 }
    }
}

/// Rectilinear grid for field snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldGrid {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub nx: usize,
    pub ny: usize,
}

impl FieldGrid {
    pub fn axes(&self) -> (Vec<f64>, Vec<f64>) {
        let axis = |r: [f64; 2], n: usize| -> Vec<f64> {
            if n <= 1 {
                return vec![0.5 * (r[0] + r[1])];
            }
            (0..n).map(|i| r[0] + (r[1] - r[0]) * i as f64 / (n - 1) as f64).collect()
        };
        (axis(self.x, self.nx), axis(self.y, self.ny))
    }
}

/// A simulation described in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub obstacles: Vec<ObstacleKind>,
    #[serde(default = "default_n")]
    pub approximation_index: usize,
    pub blobs: BlobInit,
    #[serde(default)]
    pub gamma: Vec<f64>,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub t_final: f64,
    #[serde(default)]
    pub cadence: ScenarioCadence,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub geometry: GeometryOverrides,
    #[serde(default)]
    pub alpha_method: AlphaMethod,
    pub field_grid: Option<FieldGrid>,
    #[serde(default)]
    pub diagnostics: DiagnosticsOverrides,
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryOverrides {
    pub curve_samples: Option<usize>,
    pub turning_weight: Option<f64>,
    pub exact_boundaries: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsOverrides {
    pub tangency: bool,
}

impl Default for DiagnosticsOverrides {
    fn default() -> Self {
        DiagnosticsOverrides { tangency: true }
    }
}

fn default_n() -> usize {
    32
}

fn default_dt() -> f64 {
    0.01
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::Validation { field: field.into(), reason: reason.into() }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid("schema_version", format!("expected {SCHEMA_VERSION}, got {}", self.schema_version)));
        }
        match self.mode {
            Mode::Exterior => {
                if self.obstacles.is_empty() {
                    return Err(invalid("obstacles", "exterior mode needs at least one obstacle"));
                }
                if self.gamma.len() != self.obstacles.len() {
                    return Err(invalid(
                        "gamma",
                        format!("{} circulations for {} obstacles", self.gamma.len(), self.obstacles.len()),
                    ));
                }
            }
            Mode::FreePlane => {
                if !self.obstacles.is_empty() || !self.gamma.is_empty() {
                    return Err(invalid("obstacles", "free-plane mode takes no obstacles and no gamma"));
                }
            }
        }
        if self.gamma.iter().any(|g| !g.is_finite()) {
            return Err(invalid("gamma", "circulations must be finite"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid("dt", "time step must be positive"));
        }
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(invalid("t_final", "final time must be positive"));
        }
        if self.approximation_index == 0 {
            return Err(invalid("approximation_index", "must be at least 1"));
        }
        let t = &self.tolerances;
        let positive = [
            ("tolerances.map_residual", t.map_residual),
            ("tolerances.blob_core", Some(t.blob_core)),
            ("tolerances.cutoff_eps", t.cutoff_eps),
            ("tolerances.grid_h", Some(t.grid_h)),
        ];
        for (name, v) in positive {
            if let Some(v) = v {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(invalid(name, "must be positive"));
                }
            }
        }
        if t.collocation_degree == Some(0) || t.harmonic_degree == 0 {
            return Err(invalid("tolerances.collocation_degree", "degrees must be positive"));
        }
        if let Some(g) = &self.field_grid {
            if g.nx == 0 || g.ny == 0 {
                return Err(invalid("field_grid", "grid needs at least one node per axis"));
            }
        }
        Ok(())
    }

    pub fn obstacles(&self) -> Result<Vec<SingularObstacle>> {
        self.obstacles
            .iter()
            .enumerate()
            .map(|(i, k)| {
                SingularObstacle::new(i, k.clone()).map_err(|e| invalid(&format!("obstacles[{i}]"), e.to_string()))
            })
            .collect()
    }

    pub fn geometry_options(&self) -> GeometryOptions {
        GeometryOptions {
            n: self.approximation_index,
            curve_samples: self.geometry.curve_samples,
            map_degree: self.tolerances.collocation_degree,
            map_tolerance: self.tolerances.map_residual,
            turning_weight: self.geometry.turning_weight,
            exact_boundaries: self.geometry.exact_boundaries,
        }
    }

    pub fn decomposition_options(&self) -> DecompositionOptions {
        DecompositionOptions {
            harmonic: HarmonicOptions { degree: self.tolerances.harmonic_degree, ..Default::default() },
            cutoff_eps: self.tolerances.cutoff_eps,
            alpha: self.alpha_method,
            ..Default::default()
        }
    }

    pub fn diagnostics_config(&self) -> DiagnosticsConfig {
        DiagnosticsConfig { grid_h: Some(self.tolerances.grid_h), tangency: self.diagnostics.tangency, ..Default::default() }
    }

    pub fn cadence(&self) -> Cadence {
        Cadence { snapshots: self.cadence.snapshots, diagnostics: self.cadence.diagnostics }
    }

    /// Builds geometry, maps and harmonic fields and places the blobs.
    pub fn initial_state(&self) -> Result<SimulationState> {
        let blobs = self.blobs.blobs(self.tolerances.blob_core)?;
        match self.mode {
            Mode::FreePlane => SimulationState::free_plane(blobs, self.dt),
            Mode::Exterior => {
                let obstacles = self.obstacles()?;
                let decomp = build_decomposition(
                    &obstacles,
                    self.gamma.clone(),
                    &self.geometry_options(),
                    &self.decomposition_options(),
                )?;
                for (j, x) in blobs.positions.iter().enumerate() {
                    if let Some(o) = decomp.approximation().obstacle_containing(*x) {
                        return Err(invalid("blobs", format!("blob {j} at ({}, {}) lies inside obstacle {o}", x.x, x.y)));
                    }
                }
                SimulationState::exterior(blobs, decomp, self.dt)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "schema_version": 1,
        "obstacles": [{"kind": "disk", "center": [0, 0], "radius": 1}],
        "blobs": {"explicit": {"positions": [[2, 0]], "strengths": [1]}},
        "gamma": [0],
        "t_final": 0.1
    }"#;

    #[test]
    fn minimal_scenario_parses_with_defaults() {
        let s = Scenario::from_json(MINIMAL).unwrap();
        assert_eq!(s.approximation_index, 32);
        assert_eq!(s.dt, 0.01);
        assert_eq!(s.tolerances.blob_core, 0.05);
        assert_eq!(s.tolerances.grid_h, 0.02);
    }

    #[test]
    fn gamma_length_is_checked() {
        let text = MINIMAL.replace("\"gamma\": [0]", "\"gamma\": [0, 1]");
        match Scenario::from_json(&text) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "gamma"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schema_version_is_checked() {
        let text = MINIMAL.replace("\"schema_version\": 1", "\"schema_version\": 7");
        assert!(matches!(Scenario::from_json(&text), Err(Error::Validation { field, .. }) if field == "schema_version"));
    }

    #[test]
    fn unknown_fields_are_named() {
        let text = MINIMAL.replace("\"t_final\": 0.1", "\"t_final\": 0.1, \"t_fnial\": 2");
        let err = Scenario::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("t_fnial"), "{err}");
    }

    #[test]
    fn patch_carries_the_requested_circulation() {
        let init = BlobInit::Patch { center: [0.0, 2.0], radius: 0.3, count: 50, circulation: 1.5, profile: Profile::Gaussian };
        let b = init.blobs(0.05).unwrap();
        assert_eq!(b.len(), 50);
        assert!((b.signed_mass() - 1.5).abs() < 1e-12);
        assert!(b.positions.iter().all(|p| (p - Vec2::new(0.0, 2.0)).norm() <= 0.3));
    }
}
