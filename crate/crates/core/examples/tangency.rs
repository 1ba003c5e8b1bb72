// Weak tangency residual of a reconstructed flow against a non-tangent control field.

use exterior_euler::diagnostics::TangencyQuadrature;
use exterior_euler::field::{DecompositionOptions, VortexBlobs};
use exterior_euler::geometry::SingularObstacle;
use exterior_euler::transport::{build_decomposition, GeometryOptions};
use exterior_euler::{Result, Vec2};

pub fn run_example() -> Result<()> {
    let obstacles = [
        SingularObstacle::disk(0, Vec2::new(-1.5, 0.0), 0.5)?,
        SingularObstacle::segment(1, Vec2::new(1.0, -0.5), Vec2::new(1.5, 0.5))?,
    ];
    let mut d = build_decomposition(&obstacles, vec![1.0, -0.5], &GeometryOptions::default(), &DecompositionOptions::default())?;
    let blobs = VortexBlobs::new(vec![Vec2::new(0.0, 0.8), Vec2::new(0.2, -0.9)], vec![1.0, -0.3], 0.05)?;
    d.update(&blobs)?;
    let q = TangencyQuadrature::new(d.approximation(), &d.maps, &d.cutoffs, 512, 48)?;
    println!("quadrature nodes: {}", q.len());
    println!("reconstructed flow: {:.3e}", q.residual(|x| d.velocity(x))?);
    println!("uniform stream:     {:.3e}", q.residual(|_| Ok(Vec2::new(1.0, 0.0)))?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
