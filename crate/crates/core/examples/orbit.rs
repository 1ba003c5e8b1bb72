// A point vortex orbiting the unit disk under its image.

use std::f64::consts::PI;

use exterior_euler::field::{DecompositionOptions, VortexBlobs};
use exterior_euler::geometry::SingularObstacle;
use exterior_euler::transport::{build_decomposition, integrate, Cadence, GeometryOptions, SimulationState};
use exterior_euler::{Result, Vec2};

pub fn run_example() -> Result<()> {
    let disk = SingularObstacle::disk(0, Vec2::zeros(), 1.0)?;
    let geometry = GeometryOptions { exact_boundaries: true, ..GeometryOptions::default() };
    let decomp = build_decomposition(&[disk], vec![0.0], &geometry, &DecompositionOptions::default())?;
    let blob = VortexBlobs::new(vec![Vec2::new(2.0, 0.0)], vec![2.0 * PI], 0.05)?;
    let mut state = SimulationState::exterior(blob, decomp, 0.05)?;
    println!("initial speed {:.12} (image theory 1/6)", state.blob_velocities()[0].norm());
    let traj = integrate(&mut state, 6.0 * PI, Cadence { snapshots: 75, diagnostics: usize::MAX }, None, |_| Ok(()))?;
    for s in &traj.snapshots {
        let p = s.positions[0];
        println!("t = {:7.3}  x = ({:+.6}, {:+.6})  |x| = {:.9}", s.t, p.x, p.y, p.norm());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
