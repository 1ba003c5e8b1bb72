use num_complex::Complex64;

use super::{to_complex, ConformalMap};
use crate::{Error, Result, Vec2};

/// `T(z) = (z - center) / radius`.
#[derive(Debug, Clone, Copy)]
pub struct CircleMap {
    pub center: Vec2,
    pub radius: f64,
}

impl ConformalMap for CircleMap {
    fn eval(&self, z: Complex64) -> Complex64 {
        (z - to_complex(self.center)) / self.radius
    }

    fn derivative(&self, _z: Complex64) -> Complex64 {
        Complex64::new(1.0 / self.radius, 0.0)
    }

    fn is_exterior(&self, x: Vec2) -> bool {
        (x - self.center).norm() > self.radius
    }
}

/// Exterior map of the axis-aligned ellipse with semi-axes `a >= b >= 0`.
/// `b = 0` gives the segment `[center - a, center + a]`.
#[derive(Debug, Clone, Copy)]
pub struct EllipseMap {
    pub center: Vec2,
    pub a: f64,
    pub b: f64,
}

impl EllipseMap {
    pub fn new(center: Vec2, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b >= 0.0 && a >= b) {
            return Err(Error::InvalidArgument { field: "a", reason: format!("need a >= b >= 0 and a > 0, got a = {a}, b = {b}") });
        }
        Ok(EllipseMap { center, a, b })
    }

    fn focal2(&self) -> f64 {
        self.a * self.a - self.b * self.b
    }

    /// `w (1 + sqrt(1 - f^2 / w^2))`, which behaves like `2w` at infinity.
    fn joukowski_inverse(&self, w: Complex64) -> Complex64 {
        w + w * (Complex64::new(1.0, 0.0) - self.focal2() / (w * w)).sqrt()
    }

    /// Preimage of `w` (`|w| >= 1`).
    pub fn inverse(&self, w: Complex64) -> Vec2 {
        let z = to_complex(self.center) + ((self.a + self.b) * w + (self.a - self.b) / w) * 0.5;
        Vec2::new(z.re, z.im)
    }
}

impl ConformalMap for EllipseMap {
    fn eval(&self, z: Complex64) -> Complex64 {
        let w = z - to_complex(self.center);
        self.joukowski_inverse(w) / (self.a + self.b)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        let w = z - to_complex(self.center);
        let s = (Complex64::new(1.0, 0.0) - self.focal2() / (w * w)).sqrt();
        // d/dw [w + w s] = 1 + s + f^2 / (w^2 s)
        (Complex64::new(1.0, 0.0) + s + self.focal2() / (w * w * s)) / (self.a + self.b)
    }

    fn is_exterior(&self, x: Vec2) -> bool {
        let d = x - self.center;
        if self.b == 0.0 {
            return !(d.y == 0.0 && d.x.abs() <= self.a);
        }
        (d.x / self.a).powi(2) + (d.y / self.b).powi(2) > 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ellipse_map_round_trip_and_boundary() {
        let m = EllipseMap::new(Vec2::new(0.5, -1.0), 2.0, 1.0).unwrap();
        for k in 0..16 {
            let t = 2.0 * PI * k as f64 / 16.0;
            let w = Complex64::from_polar(1.0 + 0.1 * k as f64, t);
            let x = m.inverse(w);
            assert!((m.eval(to_complex(x)) - w).norm() < 1e-12);
            // derivative by central difference
            let z = to_complex(x);
            let h = 1e-6;
            let fd = (m.eval(z + h) - m.eval(z - h)) / (2.0 * h);
            if k > 0 {
                assert!((fd - m.derivative(z)).norm() < 1e-6);
            }
        }
        let boundary = m.inverse(Complex64::from_polar(1.0, 0.7));
        assert!((m.eval(to_complex(boundary)).norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn segment_map_normalization() {
        let m = EllipseMap::new(Vec2::zeros(), 1.0, 0.0).unwrap();
        let z = Complex64::new(1e6, 3.0);
        assert!((m.eval(z) / z - 2.0).norm() < 1e-6);
        assert!((m.eval(Complex64::new(0.3, 1e-300)).norm() - 1.0).abs() < 1e-12);
    }
}
