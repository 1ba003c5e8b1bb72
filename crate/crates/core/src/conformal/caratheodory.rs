use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{to_complex, ConformalMap};
use crate::{Error, Result, Vec2};

/// Sup-norm deviations of one map of a sequence from the reference map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaratheodoryRow {
    pub n: usize,
    /// `sup_K |T_n - T|`.
    pub map: f64,
    /// `sup_K |T_n' - T'|`.
    pub derivative: f64,
    /// `sup_{K'} ||T_n(1/y)|^-1 - |T(1/y)|^-1|` over the inverted test set.
    pub inverted: Option<f64>,
}

/// Compares each map of a sequence with `reference` on the compact test set
/// `k` (exterior points) and, optionally, on `k_inverted` (points `y` near the
/// origin, evaluated at `1/y`; `y = 0` counts as the point at infinity).
pub fn caratheodory_check<M: ConformalMap>(
    sequence: &[(usize, &M)],
    reference: &dyn ConformalMap,
    k: &[Vec2],
    k_inverted: &[Vec2],
) -> Result<Vec<CaratheodoryRow>> {
    sequence
        .iter()
        .map(|&(n, map)| {
            let all_exterior = k.iter().all(|x| map.is_exterior(*x) && reference.is_exterior(*x))
                && k_inverted.iter().all(|y| {
                    let r2 = y.norm_squared();
                    r2 == 0.0 || {
                        let x = y / r2;
                        map.is_exterior(x) && reference.is_exterior(x)
                    }
                });
            if !all_exterior {
                return Err(Error::TestSetIntersects { n });
            }
            let (dmap, dder) = k
                .par_iter()
                .map(|x| {
                    let z = to_complex(*x);
                    ((map.eval(z) - reference.eval(z)).norm(), (map.derivative(z) - reference.derivative(z)).norm())
                })
                .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
            let inverted = if k_inverted.is_empty() {
                None
            } else {
                Some(
                    k_inverted
                        .par_iter()
                        .map(|y| {
                            let r2 = y.norm_squared();
                            if r2 == 0.0 {
                                return 0.0;
                            }
                            let z = to_complex(y / r2);
                            (1.0 / map.eval(z).norm() - 1.0 / reference.eval(z).norm()).abs()
                        })
                        .reduce(|| 0.0, f64::max),
                )
            };
            Ok(CaratheodoryRow { n, map: dmap, derivative: dder, inverted })
        })
        .collect()
}
