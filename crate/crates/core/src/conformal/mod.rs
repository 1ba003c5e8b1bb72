//! Exterior conformal maps, the inversion, and convergence checks between map sequences.

mod caratheodory;
mod closed_form;
mod map;

pub use caratheodory::{caratheodory_check, CaratheodoryRow};
pub use closed_form::{CircleMap, EllipseMap};
pub use map::{fit_exterior_map, ExteriorMap, FitOptions, MapRecord};

use num_complex::Complex64;

use crate::{Error, Result, Vec2};

/// A conformal map from the exterior of a curve onto the exterior of the unit disk.
pub trait ConformalMap: Sync {
    fn eval(&self, z: Complex64) -> Complex64;
    fn derivative(&self, z: Complex64) -> Complex64;
    fn is_exterior(&self, x: Vec2) -> bool;
}

/// `x -> x / |x|^2`.
pub fn inversion(x: Vec2) -> Result<Vec2> {
    let r2 = x.norm_squared();
    if r2 == 0.0 {
        return Err(Error::InversionAtOrigin);
    }
    Ok(x / r2)
}

pub(crate) fn to_complex(v: Vec2) -> Complex64 {
    Complex64::new(v.x, v.y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_is_an_involution() {
        let x = Vec2::new(0.3, -2.0);
        let y = inversion(inversion(x).unwrap()).unwrap();
        assert!((x - y).norm() < 1e-15);
        assert!(matches!(inversion(Vec2::zeros()), Err(Error::InversionAtOrigin)));
    }
}
