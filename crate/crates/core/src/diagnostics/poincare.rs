//! Grid estimate of the Poincare constant of `B(0, rho)` minus an obstacle.

use crate::geometry::JordanCurve;
use crate::linalg::{dot, pcg};
use crate::{Error, Result, Vec2};

/// Best constant `C` in `||phi|| <= C ||grad phi||` over bilinear grid
/// functions on `B(0, rho)` vanishing on the closed region of `curve`:
/// `1 / sqrt(lambda_min)` for the Dirichlet-on-obstacle, Neumann-outside
/// eigenproblem, solved by inverse iteration to relative tolerance 1e-8.
pub fn poincare_estimate(curve: &JordanCurve, rho: f64, h: f64) -> Result<f64> {
    if !(rho > 0.0) || !(h > 0.0) {
        return Err(Error::InvalidArgument { field: "rho", reason: "radius and spacing must be positive".into() });
    }
    if curve.points().iter().any(|p| p.norm() >= rho) {
        return Err(Error::InvalidArgument { field: "rho", reason: format!("obstacle is not inside B(0, {rho})") });
    }
    // half-width of the region, area / perimeter for a thin stadium
    let feature = curve.signed_area().abs() / curve.perimeter();
    if h > feature {
        return Err(Error::UnresolvedGrid { spacing: h, limit: feature });
    }
    let n = (2.0 * rho / h).ceil() as usize;
    let h = 2.0 * rho / n as f64;
    let nodes = n + 1;
    let node = |i: usize, j: usize| Vec2::new(-rho + i as f64 * h, -rho + j as f64 * h);
    // elements whose center lies in the ball
    let mut active = vec![false; n * n];
    for j in 0..n {
        for i in 0..n {
            let c = node(i, j) + Vec2::new(0.5 * h, 0.5 * h);
            active[j * n + i] = c.norm() < rho;
        }
    }
    // 0 = free, 1 = outside the mesh, 2 = on the obstacle
    let mut kind = vec![1u8; nodes * nodes];
    for j in 0..n {
        for i in 0..n {
            if active[j * n + i] {
                for (a, b) in [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)] {
                    kind[b * nodes + a] = 0;
                }
            }
        }
    }
    let mut pinned = 0;
    for j in 0..nodes {
        for i in 0..nodes {
            let k = j * nodes + i;
            if kind[k] == 0 && curve.contains(node(i, j)) {
                kind[k] = 2;
                pinned += 1;
            }
        }
    }
    if pinned == 0 {
        return Err(Error::UnresolvedGrid { spacing: h, limit: feature });
    }

    // uniform square elements: stiffness diag 2/3, edge -1/6, diagonal -1/3;
    // mass h^2/36 * (4, 2, 1)
    let kd = [2.0 / 3.0, -1.0 / 6.0, -1.0 / 3.0];
    let md = [4.0 * h * h / 36.0, 2.0 * h * h / 36.0, h * h / 36.0];
    let apply = |coef: [f64; 3], v: &[f64], out: &mut [f64]| {
        out.iter_mut().for_each(|o| *o = 0.0);
        for j in 0..n {
            for i in 0..n {
                if !active[j * n + i] {
                    continue;
                }
                let idx = [j * nodes + i, j * nodes + i + 1, (j + 1) * nodes + i + 1, (j + 1) * nodes + i];
                for r in 0..4 {
                    let mut s = 0.0;
                    for c in 0..4 {
                        let rel = match (r + 4 - c) % 4 {
                            0 => 0,
                            2 => 2,
                            _ => 1,
                        };
                        s += coef[rel] * v[idx[c]];
                    }
                    out[idx[r]] += s;
                }
            }
        }
    };
    let free: Vec<bool> = kind.iter().map(|k| *k == 0).collect();
    let mask = |v: &mut [f64]| {
        for (x, f) in v.iter_mut().zip(&free) {
            if !f {
                *x = 0.0;
            }
        }
    };
    let stiff = |v: &[f64], out: &mut [f64]| {
        let mut tmp = v.to_vec();
        mask(&mut tmp);
        apply(kd, &tmp, out);
        for (k, o) in out.iter_mut().enumerate() {
            if !free[k] {
                *o = v[k];
            }
        }
    };
    let mut diag = vec![0.0; nodes * nodes];
    {
        let mut e = vec![0.0; nodes * nodes];
        for j in 0..n {
            for i in 0..n {
                if active[j * n + i] {
                    for idx in [j * nodes + i, j * nodes + i + 1, (j + 1) * nodes + i + 1, (j + 1) * nodes + i] {
                        e[idx] += kd[0];
                    }
                }
            }
        }
        for k in 0..e.len() {
            diag[k] = if free[k] { e[k] } else { 1.0 };
        }
    }
    let mass = |v: &[f64], out: &mut [f64]| {
        apply(md, v, out);
        mask(out);
    };

    let mut v: Vec<f64> = (0..nodes * nodes).map(|k| if free[k] { 1.0 } else { 0.0 }).collect();
    let mut lambda = f64::INFINITY;
    let mut mv = vec![0.0; v.len()];
    let mut kv = vec![0.0; v.len()];
    for _ in 0..500 {
        mass(&v, &mut mv);
        let mut next = v.clone();
        pcg(&stiff, &diag, &mv, &mut next, 1e-12, 20 * nodes + 2000);
        mask(&mut next);
        stiff(&next, &mut kv);
        mask(&mut kv);
        mass(&next, &mut mv);
        let l = dot(&next, &kv) / dot(&next, &mv);
        let norm = dot(&next, &mv).sqrt();
        v = next.iter().map(|x| x / norm).collect();
        let done = ((l - lambda) / l).abs() < 1e-8;
        lambda = l;
        if done {
            break;
        }
    }
    Ok(1.0 / lambda.sqrt())
}
