//! Weak momentum residual over a recorded trajectory.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::field::{fullplane_biot_savart, StreamDecomposition};
use crate::transport::Trajectory;
use crate::{Error, Result, Vec2};

/// `phi = eta(t) grad^perp g(x)` with `g(x) = b(|x - c|^2 / R^2)`,
/// `b(s) = exp(-1 / (1 - s))`, and `eta` a smooth bump on `[t0, t1]`
/// (identically one when `time` is absent).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestField {
    pub center: [f64; 2],
    pub radius: f64,
    pub time: Option<[f64; 2]>,
}

impl TestField {
    fn eta(&self, t: f64) -> (f64, f64) {
        let Some([t0, t1]) = self.time else { return (1.0, 0.0) };
        if t <= t0 || t >= t1 {
            return (0.0, 0.0);
        }
        // eta(t) = exp(1 - 1 / (1 - s^2)) on s in (-1, 1)
        let half = 0.5 * (t1 - t0);
        let s = (t - 0.5 * (t0 + t1)) / half;
        let q = 1.0 - s * s;
        let e = (1.0 - 1.0 / q).exp();
        (e, e * (-2.0 * s / (q * q)) / half)
    }

    /// Spatial part: `(grad^perp g, Hessian of g)`.
    fn spatial(&self, x: Vec2) -> Option<(Vec2, [f64; 3])> {
        let r2 = self.radius * self.radius;
        let d = x - Vec2::new(self.center[0], self.center[1]);
        let s = d.norm_squared() / r2;
        if s >= 1.0 {
            return None;
        }
        let q = 1.0 - s;
        let b = (-1.0 / q).exp();
        let b1 = -b / (q * q);
        let b2 = b * (1.0 / q.powi(4) - 2.0 / q.powi(3));
        let gx = b1 * 2.0 * d.x / r2;
        let gy = b1 * 2.0 * d.y / r2;
        let hxx = b2 * 4.0 * d.x * d.x / (r2 * r2) + b1 * 2.0 / r2;
        let hxy = b2 * 4.0 * d.x * d.y / (r2 * r2);
        let hyy = b2 * 4.0 * d.y * d.y / (r2 * r2) + b1 * 2.0 / r2;
        Some((Vec2::new(-gy, gx), [hxx, hxy, hyy]))
    }
}

/// `|int int (u . d_t phi + (u (x) u) : grad phi) + int u(0) . phi(0) - int u(T) . phi(T)|`
/// with the midpoint rule on cells of side `h` and the trapezoidal rule over
/// the recorded snapshots. `decomp` reconstructs the velocity; without it the
/// full-plane field of the blobs is used.
pub fn momentum_residual(
    traj: &Trajectory,
    decomp: Option<&StreamDecomposition>,
    phi: &TestField,
    h: f64,
) -> Result<f64> {
    if traj.snapshots.len() < 2 {
        return Err(Error::NotEnoughRecords { needed: 2, got: traj.snapshots.len() });
    }
    if !(h > 0.0) || h > phi.radius / 4.0 {
        return Err(Error::UnresolvedGrid { spacing: h, limit: phi.radius / 4.0 });
    }
    let c = Vec2::new(phi.center[0], phi.center[1]);
    if let Some(d) = decomp {
        for (j, curve) in d.approximation().curves.iter().enumerate() {
            if curve.contains(c) || curve.distance_to(c) <= phi.radius {
                return Err(Error::SupportIntersectsObstacle { obstacle: j });
            }
        }
    }
    let cells = (2.0 * phi.radius / h).ceil() as usize;
    let x0 = c - Vec2::new(0.5 * cells as f64 * h, 0.5 * cells as f64 * h);
    let mut grid = Vec::new();
    for j in 0..cells {
        for i in 0..cells {
            let x = x0 + Vec2::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
            if let Some(s) = phi.spatial(x) {
                grid.push((x, s));
            }
        }
    }
    let area = h * h;
    let mut work = decomp.cloned();
    // per snapshot: (int u . grad^perp g, int (u (x) u) : grad grad^perp g)
    let mut terms = Vec::with_capacity(traj.snapshots.len());
    for k in 0..traj.snapshots.len() {
        let blobs = traj.blobs_at(k);
        if let Some(d) = work.as_mut() {
            d.update(&blobs)?;
        }
        let vel: Vec<Vec2> = match &work {
            Some(d) => grid.par_iter().map(|(x, _)| d.velocity(*x)).collect::<Result<_>>()?,
            None => grid.par_iter().map(|(x, _)| fullplane_biot_savart(&blobs, *x)).collect(),
        };
        let (mut lin, mut quad) = (0.0, 0.0);
        for ((_, (p, hs)), u) in grid.iter().zip(&vel) {
            lin += u.dot(p) * area;
            // grad phi for phi = (-g_y, g_x): d1 phi1 = -g_xy, d2 phi1 = -g_yy, d1 phi2 = g_xx, d2 phi2 = g_xy
            let [hxx, hxy, hyy] = *hs;
            quad += (u.x * u.x * -hxy + u.x * u.y * -hyy + u.y * u.x * hxx + u.y * u.y * hxy) * area;
        }
        terms.push((traj.snapshots[k].t, lin, quad));
    }
    let mut total = 0.0;
    for w in terms.windows(2) {
        let (ta, la, qa) = w[0];
        let (tb, lb, qb) = w[1];
        let fa = la * phi.eta(ta).1 + qa * phi.eta(ta).0;
        let fb = lb * phi.eta(tb).1 + qb * phi.eta(tb).0;
        total += 0.5 * (tb - ta) * (fa + fb);
    }
    let (t0, l0, _) = terms[0];
    let (t1, l1, _) = *terms.last().unwrap();
    total += l0 * phi.eta(t0).0 - l1 * phi.eta(t1).0;
    Ok(total.abs())
}
