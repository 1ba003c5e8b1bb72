//! Velocity reconstruction `u = grad^perp psi0 + sum_i alpha_i grad^perp psi_i`.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::harmonic::{map_point, solve_harmonic_multi, CorrectionField, CorrectionSolver, HarmonicField, HarmonicOptions, MappedPoint};
use super::kernel::{kernel_grad_w, kernel_value, map_blobs, MappedBlob};
use super::quadrature::BandQuadrature;
use super::VortexBlobs;
use crate::conformal::ExteriorMap;
use crate::geometry::{Cutoff, DomainApproximation, SingularObstacle};
use crate::{Error, Result, Vec2};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DecompositionOptions {
    pub harmonic: HarmonicOptions,
    /// Cutoff width; picked from the geometry when absent.
    pub cutoff_eps: Option<f64>,
    /// Quadrature cells per cutoff width.
    pub band_cells: usize,
    pub alpha: AlphaMethod,
}

/// How the boundary circulation of the kernel part is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaMethod {
    /// From the logarithmic content of the kernel and correction: the kernel
    /// carries `-sum Gamma` around the first obstacle, the correction `d_j`.
    #[default]
    Analytic,
    /// Cutoff-band quadrature of `-int chi omega - int grad psi0 . grad chi`.
    WeakForm,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        DecompositionOptions { harmonic: HarmonicOptions::default(), cutoff_eps: None, band_cells: 24, alpha: AlphaMethod::Analytic }
    }
}

/// Band data for one obstacle, with every map evaluated at the points.
#[derive(Debug, Clone)]
struct Band {
    quad: BandQuadrature,
    mapped: Vec<MappedPoint>,
}

/// Kernel part through the first map, harmonic fields per obstacle, the
/// multi-obstacle correction and the circulation coefficients.
#[derive(Debug, Clone)]
pub struct StreamDecomposition {
    pub maps: Vec<ExteriorMap>,
    pub harmonic_fields: Vec<HarmonicField>,
    pub correction: CorrectionField,
    pub gamma: Vec<f64>,
    pub alpha: Vec<f64>,
    pub cutoffs: Vec<Cutoff>,
    /// `weak[i][j]`: weak circulation of `grad^perp psi_i` around obstacle `j`.
    pub harmonic_weak: Vec<Vec<f64>>,
    approx: DomainApproximation,
    solver: CorrectionSolver,
    bands: Vec<Band>,
    mapped: Vec<MappedBlob>,
    positions: Vec<Vec2>,
    method: AlphaMethod,
}

/// Cutoff width covering every approximant and keeping the `2 eps` supports apart.
pub fn default_cutoff_eps(obstacles: &[SingularObstacle], approx: &DomainApproximation) -> Result<f64> {
    let gap = obstacles
        .iter()
        .zip(&approx.curves)
        .flat_map(|(o, c)| c.points().iter().map(move |p| o.distance(*p)))
        .fold(0.0, f64::max);
    let upper = 0.45 * crate::geometry::obstacle_separation(obstacles);
    let eps = (1.5 * gap).max(0.25).min(upper);
    if eps <= gap {
        return Err(Error::CutoffsOverlap { two_eps: 2.0 * 1.5 * gap, separation: upper / 0.45 });
    }
    Ok(eps)
}

impl StreamDecomposition {
    pub fn new(
        obstacles: &[SingularObstacle],
        approx: DomainApproximation,
        maps: Vec<ExteriorMap>,
        gamma: Vec<f64>,
        options: &DecompositionOptions,
    ) -> Result<Self> {
        let k = approx.len();
        if gamma.len() != k {
            return Err(Error::Validation { field: "gamma".into(), reason: format!("{} values for {k} obstacles", gamma.len()) });
        }
        if maps.len() != k || obstacles.len() != k || k == 0 {
            return Err(Error::InvalidArgument {
                field: "maps",
                reason: format!("{} maps and {} obstacles for {k} curves", maps.len(), obstacles.len()),
            });
        }
        let harmonic_fields = (0..k)
            .into_par_iter()
            .map(|i| solve_harmonic_multi(&approx, i, &maps, &options.harmonic))
            .collect::<Result<Vec<_>>>()?;
        let solver = CorrectionSolver::new(&approx, &maps, &options.harmonic)?;

        let eps = match options.cutoff_eps {
            Some(e) => e,
            None => default_cutoff_eps(obstacles, &approx)?,
        };
        let mut cutoffs = Vec::with_capacity(k);
        for i in 0..k {
            let c = Cutoff::new(obstacles, i, eps)?;
            c.check_band_outside(&approx.curves[i])?;
            cutoffs.push(c);
        }
        let cell = eps / options.band_cells.max(4) as f64;
        let bands = cutoffs
            .iter()
            .map(|c| {
                let quad = BandQuadrature::new(c, cell)?;
                let mapped = quad.points.par_iter().map(|x| map_point(&maps, *x)).collect::<Result<Vec<_>>>()?;
                Ok(Band { quad, mapped })
            })
            .collect::<Result<Vec<_>>>()?;

        let harmonic_weak = harmonic_fields
            .iter()
            .map(|h| {
                bands
                    .iter()
                    .map(|b| {
                        let u: Vec<Vec2> = b.mapped.iter().map(|p| h.velocity(p)).collect();
                        b.quad.flux_term(&u)
                    })
                    .collect()
            })
            .collect();

        Ok(StreamDecomposition {
            correction: CorrectionField::zero(k),
            alpha: gamma.clone(),
            harmonic_fields,
            gamma,
            cutoffs,
            harmonic_weak,
            approx,
            solver,
            bands,
            mapped: Vec::new(),
            positions: Vec::new(),
            method: options.alpha,
            maps,
        })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn approximation(&self) -> &DomainApproximation {
        &self.approx
    }

    pub fn correction_condition(&self) -> f64 {
        self.solver.condition
    }

    /// Points of the quadrature band around obstacle `i`.
    pub fn band(&self, i: usize) -> &BandQuadrature {
        &self.bands[i].quad
    }

    /// Recomputes the correction and `alpha` for new blob positions.
    pub fn update(&mut self, blobs: &VortexBlobs) -> Result<()> {
        for (j, x) in blobs.positions.iter().enumerate() {
            if let Some(o) = self.approx.obstacle_containing(*x) {
                return Err(Error::Collision { blob: j, obstacle: o });
            }
        }
        self.mapped = map_blobs(&self.maps[0], blobs)?;
        self.positions = blobs.positions.clone();
        self.correction = self.solver.solve(&self.mapped);
        let circ = match self.method {
            AlphaMethod::Analytic => self.analytic_kernel_circulations(),
            AlphaMethod::WeakForm => self.kernel_circulations(),
        };
        self.alpha = self.gamma.iter().zip(&circ).map(|(g, c)| g - c).collect();
        Ok(())
    }

    /// `alpha_i = gamma_i - (boundary circulation of grad^perp psi0 around i)`.
    pub fn compute_alpha(&self, blobs: &VortexBlobs) -> Result<Vec<f64>> {
        let mut d = self.clone();
        d.update(blobs)?;
        Ok(d.alpha)
    }

    /// Weak boundary circulations of `grad^perp psi0` for `blobs`.
    pub fn kernel_circulations_for(&self, blobs: &VortexBlobs) -> Result<Vec<f64>> {
        let mut d = self.clone();
        d.update(blobs)?;
        Ok(d.kernel_circulations())
    }

    /// Weak boundary circulations of `grad^perp psi0` for the current blobs.
    pub fn kernel_circulations(&self) -> Vec<f64> {
        self.bands
            .iter()
            .zip(&self.cutoffs)
            .map(|(b, c)| {
                let u: Vec<Vec2> = b.mapped.par_iter().map(|p| perp(self.psi0_gradient(p))).collect();
                let blob_term: f64 = self.positions.iter().zip(&self.mapped).map(|(x, m)| m.gamma * c.value(*x)).sum();
                -blob_term + b.quad.flux_term(&u)
            })
            .collect()
    }

    /// Boundary circulations of `grad^perp psi0` from its logarithmic terms.
    pub fn analytic_kernel_circulations(&self) -> Vec<f64> {
        let mut circ = self.correction.circulations();
        circ[0] -= self.mapped.iter().map(|m| m.gamma).sum::<f64>();
        circ
    }

    /// Weak circulations of the full velocity around each obstacle.
    pub fn weak_circulations(&self) -> Vec<f64> {
        let mut circ = self.kernel_circulations();
        for (i, a) in self.alpha.iter().enumerate() {
            for (j, c) in circ.iter_mut().enumerate() {
                *c += a * self.harmonic_weak[i][j];
            }
        }
        circ
    }

    fn psi0_gradient(&self, p: &MappedPoint) -> Complex64 {
        let gw = kernel_grad_w(p.t[0], &self.mapped, None);
        p.dt[0].conj() * gw + self.correction.gradient(p)
    }

    fn gradient_at(&self, p: &MappedPoint, skip: Option<usize>) -> Complex64 {
        let gw = kernel_grad_w(p.t[0], &self.mapped, skip);
        let mut g = p.dt[0].conj() * gw + self.correction.gradient(p);
        for (h, a) in self.harmonic_fields.iter().zip(&self.alpha) {
            if *a != 0.0 {
                g += h.gradient(p) * *a;
            }
        }
        g
    }

    /// Velocity at an exterior point for the blobs of the last [`update`](Self::update).
    pub fn velocity(&self, x: Vec2) -> Result<Vec2> {
        let p = map_point(&self.maps, x)?;
        Ok(perp(self.gradient_at(&p, None)))
    }

    /// Kernel part `psi0` (kernel through the first map plus correction).
    pub fn psi0(&self, x: Vec2) -> Result<f64> {
        let p = map_point(&self.maps, x)?;
        Ok(kernel_value(p.t[0], &self.mapped, None) + self.correction.value(&p))
    }

    /// Full stream function `psi0 + sum_i alpha_i psi_i`.
    pub fn psi(&self, x: Vec2) -> Result<f64> {
        let p = map_point(&self.maps, x)?;
        let mut v = kernel_value(p.t[0], &self.mapped, None) + self.correction.value(&p);
        for (h, a) in self.harmonic_fields.iter().zip(&self.alpha) {
            v += a * h.value(&p);
        }
        Ok(v)
    }

    /// Velocities of the current blobs, each without its own direct term.
    pub fn blob_velocities(&self) -> Result<Vec<Vec2>> {
        self.positions
            .par_iter()
            .enumerate()
            .map(|(j, x)| {
                let p = map_point(&self.maps, *x)?;
                Ok(perp(self.gradient_at(&p, Some(j))))
            })
            .collect()
    }

    /// Writes `x,y,psi,u1,u2` on the grid `xs` by `ys`, NaN inside obstacles.
    pub fn write_field_csv<W: Write>(&self, xs: &[f64], ys: &[f64], out: &mut W) -> Result<()> {
        writeln!(out, "x,y,psi,u1,u2")?;
        let rows: Vec<(f64, f64, f64, f64, f64)> = ys
            .iter()
            .flat_map(|&y| xs.iter().map(move |&x| (x, y)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(x, y)| {
                let z = Vec2::new(x, y);
                if self.approx.obstacle_containing(z).is_some() {
                    return (x, y, f64::NAN, f64::NAN, f64::NAN);
                }
                match (self.psi(z), self.velocity(z)) {
                    (Ok(p), Ok(u)) => (x, y, p, u.x, u.y),
                    _ => (x, y, f64::NAN, f64::NAN, f64::NAN),
                }
            })
            .collect();
        for (x, y, p, u, v) in rows {
            writeln!(out, "{x},{y},{p},{u},{v}")?;
        }
        Ok(())
    }
}

#[inline]
fn perp(g: Complex64) -> Vec2 {
    Vec2::new(-g.im, g.re)
}

/// Velocity of `decomp` at `x` for the blobs `blobs`.
pub fn velocity(decomp: &StreamDecomposition, blobs: &VortexBlobs, x: Vec2) -> Result<Vec2> {
    let mut d = decomp.clone();
    d.update(blobs)?;
    d.velocity(x)
}
