//! Grid surrogate for the H1 capacity of a compact set.

use super::obstacle::SingularObstacle;
use crate::linalg::pcg;
use crate::{Error, Result, Vec2};

/// Geometric growth of the cell size away from the fine region.
const GROWTH: f64 = 1.15;
const MAX_NODES: usize = 4_000_000;

/// Upper-bound surrogate for the H1 capacity of `obstacle`: the minimum of
/// `||v||^2_{H1}` over continuous piecewise-bilinear `v` with `v = 1` at nodes
/// within `2h` of the set and `v = 0` at nodes outside `B(0, radius)`.
///
/// The grid has spacing `h` around the set and grows geometrically towards
/// the outer circle.
pub fn capacity_estimate(obstacle: &SingularObstacle, radius: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) || !(radius > 0.0) {
        return Err(Error::InvalidArgument { field: "h", reason: "grid spacing and radius must be positive".into() });
    }
    if h >= radius {
        return Err(Error::GridTooCoarse { h, radius });
    }
    if obstacle.sample_points().iter().any(|p| p.norm() >= radius) {
        return Err(Error::InvalidArgument { field: "radius", reason: format!("obstacle is not inside B(0, {radius})") });
    }
    let (lo, hi) = obstacle.bounding_box();
    let xs = graded_axis(lo.x - 4.0 * h, hi.x + 4.0 * h, h, radius);
    let ys = graded_axis(lo.y - 4.0 * h, hi.y + 4.0 * h, h, radius);
    let (nx, ny) = (xs.len(), ys.len());
    if nx * ny > MAX_NODES {
        return Err(Error::InvalidArgument { field: "h", reason: format!("grid of {nx}x{ny} nodes is too large") });
    }

    // 0 = free, 1 = fixed at one, 2 = fixed at zero
    let mut kind = vec![0u8; nx * ny];
    let mut v = vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let x = Vec2::new(xs[i], ys[j]);
            let k = j * nx + i;
            if x.norm() >= radius {
                kind[k] = 2;
            } else if obstacle.distance(x) <= 2.0 * h {
                kind[k] = 1;
                v[k] = 1.0;
            }
        }
    }
    let op = Bilinear { xs: &xs, ys: &ys };
    let mut diag = vec![0.0; nx * ny];
    op.diagonal(&mut diag);

    let mut rhs = vec![0.0; nx * ny];
    op.apply(&v, &mut rhs);
    for (k, r) in rhs.iter_mut().enumerate() {
        *r = if kind[k] == 0 { -*r } else { 0.0 };
    }
    for (k, d) in diag.iter_mut().enumerate() {
        if kind[k] != 0 {
            *d = 1.0;
        }
    }
    let masked = |x: &[f64], out: &mut [f64]| {
        let mut tmp: Vec<f64> = x.iter().zip(&kind).map(|(xi, k)| if *k == 0 { *xi } else { 0.0 }).collect();
        op.apply(&tmp, out);
        for (k, o) in out.iter_mut().enumerate() {
            if kind[k] != 0 {
                *o = x[k];
            }
        }
        tmp.clear();
    };
    let mut free = vec![0.0; nx * ny];
    pcg(masked, &diag, &rhs, &mut free, 1e-10, 20 * (nx + ny) + 2000);
    for k in 0..nx * ny {
        if kind[k] == 0 {
            v[k] = free[k];
        }
    }
    let mut av = vec![0.0; nx * ny];
    op.apply(&v, &mut av);
    Ok(v.iter().zip(&av).map(|(a, b)| a * b).sum::<f64>().max(0.0))
}

/// Nodes of `[-radius, radius]` with spacing `h` on `[lo, hi]` and geometric
/// growth outside it.
fn graded_axis(lo: f64, hi: f64, h: f64, radius: f64) -> Vec<f64> {
    let lo = lo.max(-radius);
    let hi = hi.min(radius);
    let cells = ((hi - lo) / h).ceil().max(1.0) as usize;
    let mut core: Vec<f64> = (0..=cells).map(|i| lo + i as f64 * h).collect();
    let mut left = Vec::new();
    let (mut x, mut step) = (lo, h);
    while x > -radius {
        step *= GROWTH;
        x = (x - step).max(-radius);
        left.push(x);
    }
    let mut right = Vec::new();
    let (mut x, mut step) = (*core.last().unwrap(), h);
    while x < radius {
        step *= GROWTH;
        x = (x + step).min(radius);
        right.push(x);
    }
    left.reverse();
    left.append(&mut core);
    left.append(&mut right);
    left
}

/// Stiffness plus mass matrix of bilinear elements on a rectilinear grid.
struct Bilinear<'a> {
    xs: &'a [f64],
    ys: &'a [f64],
}

impl Bilinear<'_> {
    fn local(hx: f64, hy: f64) -> [[f64; 4]; 4] {
        let (a, b, area) = (hy / hx, hx / hy, hx * hy);
        let kd = (a + b) / 3.0;
        let kx = -a / 3.0 + b / 6.0;
        let ky = a / 6.0 - b / 3.0;
        let kg = -(a + b) / 6.0;
        let m = area / 36.0;
        // local order (i,j), (i+1,j), (i+1,j+1), (i,j+1)
        let d = kd + 4.0 * m;
        let x = kx + 2.0 * m;
        let y = ky + 2.0 * m;
        let g = kg + m;
        [[d, x, g, y], [x, d, y, g], [g, y, d, x], [y, g, x, d]]
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        let nx = self.xs.len();
        out.iter_mut().for_each(|o| *o = 0.0);
        for j in 0..self.ys.len() - 1 {
            let hy = self.ys[j + 1] - self.ys[j];
            for i in 0..nx - 1 {
                let l = Self::local(self.xs[i + 1] - self.xs[i], hy);
                let idx = [j * nx + i, j * nx + i + 1, (j + 1) * nx + i + 1, (j + 1) * nx + i];
                for r in 0..4 {
                    let mut s = 0.0;
                    for c in 0..4 {
                        s += l[r][c] * v[idx[c]];
                    }
                    out[idx[r]] += s;
                }
            }
        }
    }

    fn diagonal(&self, out: &mut [f64]) {
        let nx = self.xs.len();
        out.iter_mut().for_each(|o| *o = 0.0);
        for j in 0..self.ys.len() - 1 {
            let hy = self.ys[j + 1] - self.ys[j];
            for i in 0..nx - 1 {
                let l = Self::local(self.xs[i + 1] - self.xs[i], hy);
                for idx in [j * nx + i, j * nx + i + 1, (j + 1) * nx + i + 1, (j + 1) * nx + i] {
                    out[idx] += l[0][0];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shrinking_disks_lose_capacity() {
        let caps: Vec<f64> = [0.1, 0.01, 0.001]
            .iter()
            .map(|&r| {
                let d = SingularObstacle::disk(0, Vec2::zeros(), r).unwrap();
                capacity_estimate(&d, 2.0, r / 4.0).unwrap()
            })
            .collect();
        assert!(caps[0] > caps[1] && caps[1] > caps[2] && caps[2] > 0.0, "{caps:?}");
    }

    #[test]
    fn nested_disks_are_ordered() {
        let small = SingularObstacle::disk(0, Vec2::zeros(), 0.5).unwrap();
        let big = SingularObstacle::disk(0, Vec2::zeros(), 1.0).unwrap();
        let a = capacity_estimate(&small, 3.0, 0.05).unwrap();
        let b = capacity_estimate(&big, 3.0, 0.05).unwrap();
        assert!(a <= b);
    }

    #[test]
    fn disk_capacity_is_near_the_annulus_value() {
        // H1 capacity of B(r) in B(R) with zero outer data: the radial minimizer
        // solves v'' + v'/s - v = 0, energy 2 pi r (-v'(r)); compare loosely
        // with the Dirichlet-only value 2 pi / ln(R / r).
        let d = SingularObstacle::disk(0, Vec2::zeros(), 0.5).unwrap();
        let c = capacity_estimate(&d, 3.0, 0.02).unwrap();
        let dirichlet = 2.0 * std::f64::consts::PI / (3.0f64 / 0.54).ln();
        assert!(c > dirichlet && c < 2.0 * dirichlet, "{c} {dirichlet}");
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let d = SingularObstacle::disk(0, Vec2::zeros(), 0.1).unwrap();
        assert!(matches!(capacity_estimate(&d, 1.0, 2.0), Err(Error::GridTooCoarse { .. })));
    }
}
