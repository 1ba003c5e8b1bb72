//! Geometry, maps and decomposition for a set of obstacles.

use serde::{Deserialize, Serialize};

use crate::conformal::{fit_exterior_map, ExteriorMap, FitOptions};
use crate::field::{DecompositionOptions, StreamDecomposition};
use crate::geometry::{approximation_sequence, offset_length, DomainApproximation, JordanCurve, ObstacleKind, SingularObstacle};
use crate::{Result, Vec2};

/// How approximants and their maps are built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryOptions {
    /// Approximation index.
    pub n: usize,
    /// Samples per curve (256 for disks and ellipses, 1024 otherwise).
    pub curve_samples: Option<usize>,
    /// Map degree N (64 for smooth obstacles, 128 otherwise).
    pub map_degree: Option<usize>,
    /// Map residual tolerance (1e-8 for smooth obstacles, 1e-4 otherwise).
    pub map_tolerance: Option<f64>,
    pub turning_weight: Option<f64>,
    /// Use the obstacle boundary itself for disks and ellipses.
    pub exact_boundaries: bool,
}

impl Default for GeometryOptions {
    fn default() -> Self {
        GeometryOptions {
            n: 32,
            curve_samples: None,
            map_degree: None,
            map_tolerance: None,
            turning_weight: None,
            exact_boundaries: false,
        }
    }
}

impl GeometryOptions {
    pub fn with_n(n: usize) -> Self {
        GeometryOptions { n, ..Default::default() }
    }

    pub fn samples_for(&self, obstacle: &SingularObstacle) -> usize {
        self.curve_samples.unwrap_or(if obstacle.is_smooth() { 256 } else { 1024 })
    }

    pub fn fit_options_for(&self, obstacle: &SingularObstacle) -> FitOptions {
        let smooth = obstacle.is_smooth();
        let mut opts = FitOptions::with_degree(self.map_degree.unwrap_or(if smooth { 64 } else { 128 }));
        opts.tolerance = self.map_tolerance.unwrap_or(if smooth { 1e-8 } else { FitOptions::RELAXED_TOLERANCE });
        if let Some(w) = self.turning_weight {
            opts.turning_weight = w;
        }
        opts
    }
}

/// Approximant curve and exterior map of one obstacle, tagged with index `owner`.
pub fn build_map(obstacle: &SingularObstacle, owner: usize, options: &GeometryOptions) -> Result<(JordanCurve, ExteriorMap)> {
    let samples = options.samples_for(obstacle);
    let delta = if options.exact_boundaries && obstacle.is_smooth() { 0.0 } else { offset_length(options.n) };
    if let Some((center, radius)) = obstacle.disk_parameters() {
        let map = ExteriorMap::disk(center, radius + delta, samples)?.with_owner(owner);
        return Ok((map.boundary().clone(), map));
    }
    let curve = match (&obstacle.kind, delta == 0.0) {
        (ObstacleKind::Ellipse { center, a, b }, true) => JordanCurve::ellipse(Vec2::new(center[0], center[1]), *a, *b, samples)?,
        _ => approximation_sequence(obstacle, options.n, samples)?,
    }
    .with_owner(owner, options.n);
    let map = fit_exterior_map(&curve, &options.fit_options_for(obstacle))?;
    Ok((curve, map))
}

/// Approximation of all obstacles with one map per curve.
pub fn build_maps(obstacles: &[SingularObstacle], options: &GeometryOptions) -> Result<(DomainApproximation, Vec<ExteriorMap>)> {
    use rayon::prelude::*;
    let built = obstacles
        .par_iter()
        .enumerate()
        .map(|(i, o)| build_map(o, i, options))
        .collect::<Result<Vec<_>>>()?;
    let (curves, maps): (Vec<_>, Vec<_>) = built.into_iter().unzip();
    Ok((DomainApproximation::from_curves(curves, options.n)?, maps))
}

/// Builds geometry, maps and harmonic fields once.
pub fn build_decomposition(
    obstacles: &[SingularObstacle],
    gamma: Vec<f64>,
    geometry: &GeometryOptions,
    options: &DecompositionOptions,
) -> Result<StreamDecomposition> {
    let (approx, maps) = build_maps(obstacles, geometry)?;
    StreamDecomposition::new(obstacles, approx, maps, gamma, options)
}
