// Fit the exterior map of an ellipse and compare it with the Joukowski closed form.

use exterior_euler::conformal::{fit_exterior_map, EllipseMap, FitOptions};
use exterior_euler::geometry::JordanCurve;
use exterior_euler::{Result, Vec2};
use num_complex::Complex64;

pub fn run_example() -> Result<()> {
    let curve = JordanCurve::ellipse(Vec2::zeros(), 2.0, 1.0, 512)?;
    let map = fit_exterior_map(&curve, &FitOptions::default())?;
    let exact = EllipseMap::new(Vec2::zeros(), 2.0, 1.0)?;
    println!("beta = {:.12} (exact 2/3)", map.beta);
    println!("boundary residual = {:.2e}", map.residual);
    for (m, c) in map.laurent_coefficients(6).iter().enumerate() {
        println!("c_{m} = {:+.10} {:+.10}i", c.re, c.im);
    }
    let w = Complex64::from_polar(1.5, 0.7);
    let z = map.map_inverse(w)?;
    println!("T^-1({w:.3}) = ({:.10}, {:.10}), Joukowski ({:.10}, {:.10})", z.x, z.y, exact.inverse(w).x, exact.inverse(w).y);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
