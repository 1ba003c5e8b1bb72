//! Conserved quantities and weak-form residuals.

mod lq;
mod momentum;
mod poincare;
mod tangency;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::field::{BandQuadrature, VortexBlobs};
use crate::geometry::Cutoff;
use crate::transport::{SimulationState, Trajectory};
use crate::{Error, Result, Vec2};

pub use lq::lq_norm_estimate;
pub use momentum::{momentum_residual, TestField};
pub use poincare::poincare_estimate;
pub use tangency::{tangency_residual, TangencyQuadrature};

/// `-sum_j Gamma_j chi(x_j) - int u . grad^perp chi`, the second term by the
/// midpoint rule on cells of side `cell` over the cutoff band.
pub fn weak_circulation(
    u: impl Fn(Vec2) -> Result<Vec2> + Sync,
    blobs: &VortexBlobs,
    cutoff: &Cutoff,
    cell: f64,
) -> Result<f64> {
    let q = BandQuadrature::new(cutoff, cell)?;
    let vel = q.points.par_iter().map(|x| u(*x)).collect::<Result<Vec<_>>>()?;
    let blob_term: f64 = blobs.positions.iter().zip(&blobs.strengths).map(|(x, g)| g * cutoff.value(*x)).sum();
    Ok(-blob_term + q.flux_term(&vel))
}

/// Measurements of one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub l1_mass: f64,
    pub signed_mass: f64,
    pub l2_norm: f64,
    pub linf_norm: f64,
    /// Further `(q, ||omega||_q)` pairs.
    pub lq_norms: Vec<(f64, f64)>,
    /// Weak circulation of the velocity around each obstacle.
    pub circulations: Vec<f64>,
    pub alpha: Vec<f64>,
    pub tangency_residual: f64,
    pub momentum_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsConfig {
    /// Deposition grid spacing for the vorticity norms (defaults to a quarter core).
    pub grid_h: Option<f64>,
    /// Extra exponents beyond 2 and infinity.
    pub extra_q: Vec<f64>,
    pub tangency: bool,
    pub tangency_angles: usize,
    pub tangency_radial: usize,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig { grid_h: None, extra_q: Vec::new(), tangency: true, tangency_angles: 512, tangency_radial: 48 }
    }
}

/// Precomputed quadratures for recording diagnostics along a run.
#[derive(Debug, Clone)]
pub struct Diagnostician {
    config: DiagnosticsConfig,
    tangency: Option<TangencyQuadrature>,
}

impl Diagnostician {
    pub fn new(state: &SimulationState, config: &DiagnosticsConfig) -> Result<Self> {
        let tangency = match (&state.decomp, config.tangency) {
            (Some(d), true) => Some(TangencyQuadrature::new(
                d.approximation(),
                &d.maps,
                &d.cutoffs,
                config.tangency_angles,
                config.tangency_radial,
            )?),
            _ => None,
        };
        Ok(Diagnostician { config: config.clone(), tangency })
    }

    pub fn record(&self, state: &SimulationState) -> Result<DiagnosticsRecord> {
        let blobs = &state.blobs;
        let h = self.config.grid_h.unwrap_or(blobs.core / 4.0);
        let (circulations, alpha, tangency_residual) = match &state.decomp {
            Some(d) => {
                let tan = match &self.tangency {
                    Some(t) => t.residual(|x| d.velocity(x))?,
                    None => 0.0,
                };
                (d.weak_circulations(), d.alpha.clone(), tan)
            }
            None => (Vec::new(), Vec::new(), 0.0),
        };
        Ok(DiagnosticsRecord {
            time: blobs.time,
            l1_mass: blobs.l1_mass(),
            signed_mass: blobs.signed_mass(),
            l2_norm: lq_norm_estimate(blobs, 2.0, h)?,
            linf_norm: lq_norm_estimate(blobs, f64::INFINITY, h)?,
            lq_norms: self.config.extra_q.iter().map(|q| Ok((*q, lq_norm_estimate(blobs, *q, h)?))).collect::<Result<_>>()?,
            circulations,
            alpha,
            tangency_residual,
            momentum_residual: None,
        })
    }
}

/// `t,l1_mass,signed_mass,l2_norm,linf_norm,circ_1..circ_k,alpha_1..alpha_k,tangency`.
pub fn write_diagnostics_csv<W: Write>(records: &[DiagnosticsRecord], out: &mut W) -> Result<()> {
    let k = records.first().map(|r| r.circulations.len()).unwrap_or(0);
    let mut header = String::from("t,l1_mass,signed_mass,l2_norm,linf_norm");
    for i in 1..=k {
        header += &format!(",circ_{i}");
    }
    for i in 1..=k {
        header += &format!(",alpha_{i}");
    }
    writeln!(out, "{header},tangency")?;
    for r in records {
        let mut line = format!("{},{},{},{},{}", r.time, r.l1_mass, r.signed_mass, r.l2_norm, r.linf_norm);
        for c in r.circulations.iter().chain(&r.alpha) {
            line += &format!(",{c}");
        }
        writeln!(out, "{line},{}", r.tangency_residual)?;
    }
    Ok(())
}

/// Largest drift of one quantity from its initial value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    pub quantity: String,
    pub initial: f64,
    pub max_abs_drift: f64,
    /// Absolute drift divided by `|initial|` (equal to the absolute drift when the initial value is zero).
    pub max_rel_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftTable {
    pub rows: Vec<Drift>,
}

impl DriftTable {
    pub fn get(&self, quantity: &str) -> Option<&Drift> {
        self.rows.iter().find(|d| d.quantity == quantity)
    }
}

/// Per-quantity drift over the recorded diagnostics of `traj`.
pub fn conservation_report(traj: &Trajectory) -> Result<DriftTable> {
    let recs = &traj.diagnostics;
    if recs.len() < 2 {
        return Err(Error::NotEnoughRecords { needed: 2, got: recs.len() });
    }
    let mut series: Vec<(String, Vec<f64>)> = vec![
        ("l1_mass".into(), recs.iter().map(|r| r.l1_mass).collect()),
        ("signed_mass".into(), recs.iter().map(|r| r.signed_mass).collect()),
        ("l2_norm".into(), recs.iter().map(|r| r.l2_norm).collect()),
        ("linf_norm".into(), recs.iter().map(|r| r.linf_norm).collect()),
    ];
    for i in 0..recs[0].circulations.len() {
        series.push((format!("circ_{}", i + 1), recs.iter().map(|r| r.circulations[i]).collect()));
    }
    for (m, (q, _)) in recs[0].lq_norms.iter().enumerate() {
        series.push((format!("l{q}_norm"), recs.iter().map(|r| r.lq_norms[m].1).collect()));
    }
    let rows = series
        .into_iter()
        .map(|(quantity, v)| {
            let initial = v[0];
            let max_abs_drift = v.iter().map(|x| (x - initial).abs()).fold(0.0, f64::max);
            let max_rel_drift = if initial == 0.0 { max_abs_drift } else { max_abs_drift / initial.abs() };
            Drift { quantity, initial, max_abs_drift, max_rel_drift }
        })
        .collect();
    Ok(DriftTable { rows })
}

#[cfg(test)]
mod tests;
