use std::collections::BTreeMap;

use crate::field::VortexBlobs;
use crate::{Error, Result};

/// Subsamples per cell side when computing core coverage.
const SUB: usize = 8;

/// Deposits each blob as a uniform disk of radius `core` carrying `Gamma_j`
/// onto cells of side `h` and returns the discrete `L^q` norm of the result
/// (`q = inf` gives the largest cell value).
pub fn lq_norm_estimate(blobs: &VortexBlobs, q: f64, h: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::InvalidArgument { field: "q", reason: format!("q must be in [1, inf], got {q}") });
    }
    if !(h > 0.0) || h > blobs.core / 2.0 {
        return Err(Error::UnresolvedGrid { spacing: h, limit: blobs.core / 2.0 });
    }
    let cells = deposit(blobs, h);
    if q.is_infinite() {
        return Ok(cells.values().fold(0.0, |m, v| m.max(v.abs())));
    }
    let area = h * h;
    Ok(cells.values().map(|v| v.abs().powf(q) * area).sum::<f64>().powf(1.0 / q))
}

/// Cell values keyed by integer cell index, each blob's mass preserved exactly.
fn deposit(blobs: &VortexBlobs, h: f64) -> BTreeMap<(i64, i64), f64> {
    let eps = blobs.core;
    let mut cells = BTreeMap::new();
    let reach = (eps / h).ceil() as i64 + 1;
    for (p, g) in blobs.positions.iter().zip(&blobs.strengths) {
        let ci = (p.x / h).floor() as i64;
        let cj = (p.y / h).floor() as i64;
        let mut local = Vec::new();
        let mut total = 0.0;
        for i in ci - reach..=ci + reach {
            for j in cj - reach..=cj + reach {
                let mut hits = 0usize;
                for a in 0..SUB {
                    for b in 0..SUB {
                        let x = (i as f64 + (a as f64 + 0.5) / SUB as f64) * h - p.x;
                        let y = (j as f64 + (b as f64 + 0.5) / SUB as f64) * h - p.y;
                        if x * x + y * y < eps * eps {
                            hits += 1;
                        }
                    }
                }
                if hits > 0 {
                    let frac = hits as f64 / (SUB * SUB) as f64;
                    total += frac;
                    local.push(((i, j), frac));
                }
            }
        }
        for (key, frac) in local {
            // value = Gamma * (coverage / total coverage) / cell area
            *cells.entry(key).or_insert(0.0) += g * frac / (total * h * h);
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Vec2;

    #[test]
    fn single_blob_mass() {
        let b = VortexBlobs::new(vec![Vec2::new(0.013, -0.4)], vec![1.0], 0.05).unwrap();
        let m = lq_norm_estimate(&b, 1.0, 0.02).unwrap();
        assert!((m - 1.0).abs() < 0.02);
    }

    #[test]
    fn empty_blobs_have_zero_norms() {
        let b = VortexBlobs::empty(0.05);
        for q in [1.0, 2.0, f64::INFINITY] {
            assert_eq!(lq_norm_estimate(&b, q, 0.02).unwrap(), 0.0);
        }
    }

    #[test]
    fn l2_of_a_core_matches_the_disk_value() {
        let b = VortexBlobs::new(vec![Vec2::new(0.3, 0.1)], vec![2.0], 0.05).unwrap();
        let l2 = lq_norm_estimate(&b, 2.0, 0.005).unwrap();
        let exact = 2.0 / (std::f64::consts::PI.sqrt() * 0.05);
        assert!((l2 / exact - 1.0).abs() < 0.03, "{l2} {exact}");
        let linf = lq_norm_estimate(&b, f64::INFINITY, 0.005).unwrap();
        assert!((linf / (2.0 / (std::f64::consts::PI * 0.0025)) - 1.0).abs() < 0.05);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let b = VortexBlobs::new(vec![Vec2::zeros()], vec![1.0], 0.05).unwrap();
        assert!(matches!(lq_norm_estimate(&b, 2.0, 0.05), Err(Error::UnresolvedGrid { .. })));
    }
}
