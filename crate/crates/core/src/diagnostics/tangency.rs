//! Weak tangency `int u . grad h = 0` for test functions `h` not vanishing on the boundary.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::conformal::ExteriorMap;
use crate::geometry::{Cutoff, DomainApproximation};
use crate::linalg::gauss_legendre;
use crate::{Error, Result, Vec2};

/// Number of polynomial factors in the test family.
const FAMILY: usize = 6;

/// Quadrature on the preimage of the annulus `1 < |w| < R` under each map,
/// covering the support of the cutoff of that obstacle.
#[derive(Debug, Clone)]
pub struct TangencyQuadrature {
    /// Per obstacle: points, weights and gradients of the test family there.
    groups: Vec<Group>,
}

#[derive(Debug, Clone)]
struct Group {
    points: Vec<Vec2>,
    weights: Vec<f64>,
    grads: Vec<[Vec2; FAMILY]>,
}

/// `h = chi * p` for `p` in `1, X, Y, X^2, XY, Y^2` with `X = (x - c)/L`.
fn family(cutoff: &Cutoff, center: Vec2, scale: f64, x: Vec2) -> [Vec2; FAMILY] {
    let (chi, g) = cutoff.value_gradient(x);
    let d = (x - center) / scale;
    let (px, py) = (d.x, d.y);
    let p = [1.0, px, py, px * px, px * py, py * py];
    let dp = [
        Vec2::zeros(),
        Vec2::new(1.0, 0.0),
        Vec2::new(0.0, 1.0),
        Vec2::new(2.0 * px, 0.0),
        Vec2::new(py, px),
        Vec2::new(0.0, 2.0 * py),
    ];
    let mut out = [Vec2::zeros(); FAMILY];
    for m in 0..FAMILY {
        out[m] = g * p[m] + dp[m] * (chi / scale);
    }
    out
}

impl TangencyQuadrature {
    /// `angles` trapezoidal nodes and `radial` Gauss-Legendre nodes per obstacle.
    pub fn new(
        approx: &DomainApproximation,
        maps: &[ExteriorMap],
        cutoffs: &[Cutoff],
        angles: usize,
        radial: usize,
    ) -> Result<Self> {
        let (gl_x, gl_w) = gauss_legendre(radial);
        let mut groups = Vec::with_capacity(maps.len());
        for (i, (map, cutoff)) in maps.iter().zip(cutoffs).enumerate() {
            let eps = cutoff.eps;
            let (lo, hi) = cutoff.target().bounding_box();
            let center = (lo + hi) * 0.5;
            let scale = 0.5 * (hi - lo).norm() + 2.0 * eps;
            // outer radius whose preimage clears the 2 eps neighbourhood
            let mut r_out = 1.05;
            let ring = |r: f64| -> Result<Vec<Vec2>> {
                (0..angles)
                    .into_par_iter()
                    .map(|a| map.map_inverse(Complex64::from_polar(r, 2.0 * PI * a as f64 / angles as f64)))
                    .collect()
            };
            loop {
                let pts = ring(r_out)?;
                if pts.iter().all(|p| cutoff.target().distance(*p) >= 2.0 * eps) {
                    break;
                }
                r_out *= 1.1;
                if r_out > 1e3 {
                    return Err(Error::InvalidArgument { field: "cutoff", reason: "support not enclosed by map annulus".into() });
                }
            }
            let rows: Vec<Vec<(Vec2, f64)>> = (0..angles)
                .into_par_iter()
                .map(|a| {
                    let theta = 2.0 * PI * a as f64 / angles as f64;
                    let mut out = Vec::with_capacity(radial);
                    let mut seed: Option<Vec2> = None;
                    for k in (0..radial).rev() {
                        let r = 1.0 + 0.5 * (r_out - 1.0) * (gl_x[k] + 1.0);
                        let w = Complex64::from_polar(r, theta);
                        let x = match seed {
                            Some(s) => map.map_inverse_from(w, s)?,
                            None => map.map_inverse(w)?,
                        };
                        seed = Some(x);
                        let dt = map.derivative_unchecked(Complex64::new(x.x, x.y));
                        let weight = 0.5 * (r_out - 1.0) * gl_w[k] * r * (2.0 * PI / angles as f64) / dt.norm_sqr();
                        out.push((x, weight));
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()?;
            // resolution of the transition band
            let mut worst: f64 = 0.0;
            for a in 0..angles {
                for k in 0..radial {
                    let (x, _) = rows[a][k];
                    let d = cutoff.target().distance(x);
                    if d > eps && d < 2.0 * eps {
                        let (xa, _) = rows[(a + 1) % angles][k];
                        worst = worst.max((xa - x).norm());
                        if k + 1 < radial {
                            worst = worst.max((rows[a][k + 1].0 - x).norm());
                        }
                    }
                }
            }
            if worst > eps / 4.0 {
                return Err(Error::UnresolvedGrid { spacing: worst, limit: eps / 4.0 });
            }
            let mut g = Group { points: Vec::new(), weights: Vec::new(), grads: Vec::new() };
            for (x, w) in rows.into_iter().flatten() {
                let grads = family(cutoff, center, scale, x);
                if grads.iter().all(|v| v.x == 0.0 && v.y == 0.0) {
                    continue;
                }
                if let Some(j) = approx.obstacle_containing(x) {
                    if j != i {
                        return Err(Error::SupportIntersectsObstacle { obstacle: j });
                    }
                }
                g.points.push(x);
                g.weights.push(w);
                g.grads.push(grads);
            }
            groups.push(g);
        }
        Ok(TangencyQuadrature { groups })
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(|g| g.points.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest normalized `|int u . grad h| / (||grad h|| ||u||_{supp grad h})`
    /// over the test family of every obstacle.
    pub fn residual(&self, u: impl Fn(Vec2) -> Result<Vec2> + Sync) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for g in &self.groups {
            let vel = g.points.par_iter().map(|x| u(*x)).collect::<Result<Vec<_>>>()?;
            for m in 0..FAMILY {
                let (mut flux, mut gh, mut uu) = (0.0, 0.0, 0.0);
                for ((v, w), grads) in vel.iter().zip(&g.weights).zip(&g.grads) {
                    let dh = grads[m];
                    flux += w * v.dot(&dh);
                    gh += w * dh.norm_squared();
                    if dh.x != 0.0 || dh.y != 0.0 {
                        uu += w * v.norm_squared();
                    }
                }
                let denom = (gh * uu).sqrt();
                if denom > 0.0 {
                    worst = worst.max(flux.abs() / denom);
                }
            }
        }
        Ok(worst)
    }
}

/// One-shot weak tangency residual (see [`TangencyQuadrature::residual`]).
pub fn tangency_residual(
    u: impl Fn(Vec2) -> Result<Vec2> + Sync,
    approx: &DomainApproximation,
    maps: &[ExteriorMap],
    cutoffs: &[Cutoff],
) -> Result<f64> {
    TangencyQuadrature::new(approx, maps, cutoffs, 512, 48)?.residual(u)
}
