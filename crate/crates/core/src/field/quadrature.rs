//! Tensor midpoint quadrature over the transition band of a cutoff.

use crate::geometry::Cutoff;
use crate::{Error, Result, Vec2};

/// Cell centers where `grad chi` is nonzero, with cell areas and `grad chi`.
#[derive(Debug, Clone)]
pub struct BandQuadrature {
    pub obstacle: usize,
    pub cell: f64,
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
    pub grad_chi: Vec<Vec2>,
    pub chi: Vec<f64>,
}

impl BandQuadrature {
    /// Midpoint rule with square cells of side `cell` (at most `eps / 4`).
    pub fn new(cutoff: &Cutoff, cell: f64) -> Result<Self> {
        let limit = cutoff.eps / 4.0;
        if !(cell > 0.0) || cell > limit {
            return Err(Error::UnresolvedGrid { spacing: cell, limit });
        }
        let (lo, hi) = cutoff.target().bounding_box();
        let pad = 2.0 * cutoff.eps + cell;
        let nx = ((hi.x - lo.x + 2.0 * pad) / cell).ceil() as usize;
        let ny = ((hi.y - lo.y + 2.0 * pad) / cell).ceil() as usize;
        // center the grid on the bounding box
        let x0 = 0.5 * (lo.x + hi.x) - 0.5 * nx as f64 * cell;
        let y0 = 0.5 * (lo.y + hi.y) - 0.5 * ny as f64 * cell;
        let mut q = BandQuadrature {
            obstacle: cutoff.obstacle,
            cell,
            points: Vec::new(),
            weights: Vec::new(),
            grad_chi: Vec::new(),
            chi: Vec::new(),
        };
        let area = cell * cell;
        for j in 0..ny {
            for i in 0..nx {
                let x = Vec2::new(x0 + (i as f64 + 0.5) * cell, y0 + (j as f64 + 0.5) * cell);
                let (s, g) = cutoff.value_gradient(x);
                if g.x != 0.0 || g.y != 0.0 {
                    q.points.push(x);
                    q.weights.push(area);
                    q.grad_chi.push(g);
                    q.chi.push(s);
                }
            }
        }
        Ok(q)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `-int u . grad^perp chi` for velocity samples `u` at the quadrature points.
    pub fn flux_term(&self, u: &[Vec2]) -> f64 {
        let mut acc = 0.0;
        for ((w, g), v) in self.weights.iter().zip(&self.grad_chi).zip(u) {
            // grad^perp chi = (-g.y, g.x)
            acc += w * (v.x * -g.y + v.y * g.x);
        }
        -acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SingularObstacle;
    use std::f64::consts::PI;

    #[test]
    fn point_vortex_has_unit_weak_circulation() {
        let obs = [SingularObstacle::disk(0, Vec2::zeros(), 1.0).unwrap()];
        let c = Cutoff::new(&obs, 0, 0.3).unwrap();
        let q = BandQuadrature::new(&c, 0.3 / 24.0).unwrap();
        let u: Vec<Vec2> = q.points.iter().map(|x| Vec2::new(-x.y, x.x) / (2.0 * PI * x.norm_squared())).collect();
        assert!((q.flux_term(&u) - 1.0).abs() < 1e-7, "{}", q.flux_term(&u));
    }

    #[test]
    fn coarse_cells_are_rejected() {
        let obs = [SingularObstacle::disk(0, Vec2::zeros(), 1.0).unwrap()];
        let c = Cutoff::new(&obs, 0, 0.2).unwrap();
        assert!(matches!(BandQuadrature::new(&c, 0.1), Err(Error::UnresolvedGrid { .. })));
    }
}
