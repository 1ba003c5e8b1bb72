//! Kernel part of the stream function through one exterior map, and the
//! full-plane Biot-Savart sum.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::VortexBlobs;
use crate::conformal::ExteriorMap;
use crate::{Error, Result, Vec2};

/// A blob seen in the mapped plane.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MappedBlob {
    pub w: Complex64,
    /// Reflection `w / |w|^2` across the unit circle.
    pub w_star: Complex64,
    pub log_abs_w: f64,
    /// Core radius in the mapped plane, `core |T'(x_j)|`.
    pub core: f64,
    pub gamma: f64,
}

pub(crate) fn map_blobs(map: &ExteriorMap, blobs: &VortexBlobs) -> Result<Vec<MappedBlob>> {
    blobs
        .positions
        .iter()
        .zip(&blobs.strengths)
        .map(|(x, g)| {
            if !map.is_exterior_point(*x) {
                return Err(Error::NotExterior { x: x.x, y: x.y, obstacle: map.boundary().owner });
            }
            let (w, dw) = map.eval_with_derivative_unchecked(Complex64::new(x.x, x.y));
            Ok(MappedBlob { w, w_star: w / w.norm_sqr(), log_abs_w: w.norm().ln(), core: blobs.core * dw.norm(), gamma: *g })
        })
        .collect()
}

/// `ln r` outside the core, continued by the quadratic core profile inside.
#[inline]
pub(crate) fn core_log(r2: f64, eps: f64) -> f64 {
    let e2 = eps * eps;
    if r2 >= e2 {
        0.5 * r2.ln()
    } else {
        eps.ln() + 0.5 * (r2 / e2 - 1.0)
    }
}

/// Gradient of [`core_log`] as a complex number `d/dx + i d/dy`.
#[inline]
pub(crate) fn core_log_grad(d: Complex64, eps: f64) -> Complex64 {
    let r2 = d.norm_sqr();
    let e2 = eps * eps;
    if r2 >= e2 {
        d / r2
    } else {
        d / e2
    }
}

/// Kernel stream value at a mapped point `w`, skipping the direct term of `skip`.
pub(crate) fn kernel_value(w: Complex64, blobs: &[MappedBlob], skip: Option<usize>) -> f64 {
    let mut acc = 0.0;
    for (j, b) in blobs.iter().enumerate() {
        let direct = if skip == Some(j) { 0.0 } else { core_log((w - b.w).norm_sqr(), b.core) };
        acc += b.gamma * (direct - 0.5 * (w - b.w_star).norm_sqr().ln() - b.log_abs_w);
    }
    acc / (2.0 * PI)
}

/// Gradient of the kernel stream function in the mapped plane (complex form).
pub(crate) fn kernel_grad_w(w: Complex64, blobs: &[MappedBlob], skip: Option<usize>) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, b) in blobs.iter().enumerate() {
        if skip != Some(j) {
            acc += core_log_grad(w - b.w, b.core) * b.gamma;
        }
        let d = w - b.w_star;
        acc -= d / d.norm_sqr() * b.gamma;
    }
    acc / (2.0 * PI)
}

/// `(1/2pi) sum_j Gamma_j ln(|T(x) - T(x_j)| / (|T(x) - T(x_j)*| |T(x_j)|))`,
/// with the logarithm of the direct term continued quadratically inside the
/// mapped core `core |T'(x_j)|`.
pub fn kernel_psi0_single(map: &ExteriorMap, blobs: &VortexBlobs, x: Vec2) -> Result<f64> {
    let w = map.map_evaluate(x)?;
    let mapped = map_blobs(map, blobs)?;
    Ok(kernel_value(w, &mapped, None))
}

/// Desingularized full-plane sum `sum_j Gamma_j (x - x_j)^perp / (2pi max(|x - x_j|^2, core^2))`.
pub fn fullplane_biot_savart(blobs: &VortexBlobs, x: Vec2) -> Vec2 {
    fullplane_skip(blobs, x, None)
}

pub(crate) fn fullplane_skip(blobs: &VortexBlobs, x: Vec2, skip: Option<usize>) -> Vec2 {
    let e2 = blobs.core * blobs.core;
    let mut u = Vec2::zeros();
    for (j, (p, g)) in blobs.positions.iter().zip(&blobs.strengths).enumerate() {
        if skip == Some(j) {
            continue;
        }
        let d = x - p;
        let r2 = d.norm_squared().max(e2);
        u += Vec2::new(-d.y, d.x) * (g / (2.0 * PI * r2));
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_disk() -> ExteriorMap {
        ExteriorMap::disk(Vec2::zeros(), 1.0, 256).unwrap()
    }

    #[test]
    fn zero_strengths_give_zero() {
        let b = VortexBlobs::new(vec![Vec2::new(2.0, 0.0), Vec2::new(0.0, 3.0)], vec![0.0, 0.0], 0.05).unwrap();
        assert_eq!(kernel_psi0_single(&unit_disk(), &b, Vec2::new(-2.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn image_formula_value() {
        let b = VortexBlobs::new(vec![Vec2::new(2.0, 0.0)], vec![2.0 * PI], 0.05).unwrap();
        let v = kernel_psi0_single(&unit_disk(), &b, Vec2::new(3.0, 0.0)).unwrap();
        assert!((v - (1.0f64 / 5.0).ln()).abs() < 1e-14);
        assert!((v + 1.60944).abs() < 1e-5);
    }

    #[test]
    fn rotation_invariance() {
        let b = VortexBlobs::new(vec![Vec2::new(2.0, 0.0)], vec![1.0], 0.05).unwrap();
        let x = Vec2::new(0.0, 3.0);
        let v0 = kernel_psi0_single(&unit_disk(), &b, x).unwrap();
        for k in 1..8 {
            let t = 0.7 * k as f64;
            let (s, c) = t.sin_cos();
            let xr = Vec2::new(c * x.x - s * x.y, s * x.x + c * x.y);
            let v = kernel_psi0_single(&unit_disk(), &b.rotated(t), xr).unwrap();
            assert!((v - v0).abs() < 1e-13);
        }
    }

    #[test]
    fn vanishes_on_the_boundary() {
        let b = VortexBlobs::new(vec![Vec2::new(2.0, 0.5), Vec2::new(-1.5, -1.0)], vec![1.0, -0.3], 0.05).unwrap();
        let map = unit_disk();
        let mapped = map_blobs(&map, &b).unwrap();
        for k in 0..32 {
            let w = Complex64::from_polar(1.0, 0.2 * k as f64);
            assert!(kernel_value(w, &mapped, None).abs() < 1e-14);
        }
    }

    #[test]
    fn core_profile_is_continuous() {
        let eps = 0.1;
        let a = core_log(eps * eps * (1.0 - 1e-12), eps);
        let b = core_log(eps * eps * (1.0 + 1e-12), eps);
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn unit_vortex() {
        let b = VortexBlobs::new(vec![Vec2::zeros()], vec![2.0 * PI], 0.05).unwrap();
        let u = fullplane_biot_savart(&b, Vec2::new(1.0, 0.0));
        assert!((u - Vec2::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn far_field_is_total_circulation() {
        let b = VortexBlobs::new(vec![Vec2::new(0.1, 0.0), Vec2::new(-0.2, 0.3)], vec![1.0, 2.0], 0.05).unwrap();
        for r in [10.0, 100.0] {
            let x = Vec2::new(r, 0.3 * r);
            let u = fullplane_biot_savart(&b, x);
            let lead = Vec2::new(-x.y, x.x) * (3.0 / (2.0 * PI * x.norm_squared()));
            assert!((u - lead).norm() * x.norm_squared() < 2.0);
        }
    }
}
