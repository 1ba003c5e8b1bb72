use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec2};

/// Lagrangian vorticity: point positions carrying fixed circulations,
/// regularized at radius `core`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VortexBlobs {
    pub positions: Vec<Vec2>,
    pub strengths: Vec<f64>,
    pub core: f64,
    pub time: f64,
}

impl VortexBlobs {
    pub fn new(positions: Vec<Vec2>, strengths: Vec<f64>, core: f64) -> Result<Self> {
        if positions.len() != strengths.len() {
            return Err(Error::Validation {
                field: "strengths".into(),
                reason: format!("{} positions but {} strengths", positions.len(), strengths.len()),
            });
        }
        if !(core > 0.0) {
            return Err(Error::Validation { field: "core".into(), reason: "blob core must be positive".into() });
        }
        if positions.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) || strengths.iter().any(|g| !g.is_finite()) {
            return Err(Error::Validation { field: "positions".into(), reason: "non-finite blob data".into() });
        }
        Ok(VortexBlobs { positions, strengths, core, time: 0.0 })
    }

    pub fn empty(core: f64) -> Self {
        VortexBlobs { positions: Vec::new(), strengths: Vec::new(), core, time: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// `sum Gamma_j`.
    pub fn signed_mass(&self) -> f64 {
        self.strengths.iter().sum()
    }

    /// `sum |Gamma_j|`.
    pub fn l1_mass(&self) -> f64 {
        self.strengths.iter().map(|g| g.abs()).sum()
    }

    /// Copy with every position rotated by `angle` about the origin.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let mut out = self.clone();
        for p in &mut out.positions {
            *p = Vec2::new(c * p.x - s * p.y, s * p.x + c * p.y);
        }
        out
    }
}
