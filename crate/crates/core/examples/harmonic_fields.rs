// Harmonic stream functions of two disks and their circulation matrix.

use exterior_euler::diagnostics::weak_circulation;
use exterior_euler::field::{map_point, DecompositionOptions, VortexBlobs};
use exterior_euler::geometry::SingularObstacle;
use exterior_euler::transport::{build_decomposition, GeometryOptions};
use exterior_euler::{Result, Vec2};

pub fn run_example() -> Result<()> {
    let obstacles = [SingularObstacle::disk(0, Vec2::new(-3.0, 0.0), 1.0)?, SingularObstacle::disk(1, Vec2::new(3.0, 0.0), 1.0)?];
    let geometry = GeometryOptions { exact_boundaries: true, ..GeometryOptions::default() };
    let d = build_decomposition(&obstacles, vec![0.0, 0.0], &geometry, &DecompositionOptions::default())?;
    let none = VortexBlobs::empty(0.05);
    println!("weak circulation of grad^perp psi^i around obstacle j");
    for (i, h) in d.harmonic_fields.iter().enumerate() {
        let row = d
            .cutoffs
            .iter()
            .map(|c| weak_circulation(|x| Ok(h.velocity(&map_point(&d.maps, x)?)), &none, c, c.eps / 24.0))
            .collect::<Result<Vec<f64>>>()?;
        println!("  i = {i}: {:+.9} {:+.9}   boundary constants {:?}", row[0], row[1], h.boundary_constants);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
