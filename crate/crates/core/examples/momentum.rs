// Weak momentum residual of a steady circulating flow and of a wrongly advected pair.

use std::f64::consts::PI;

use exterior_euler::diagnostics::{momentum_residual, TestField};
use exterior_euler::field::{fullplane_biot_savart, DecompositionOptions, VortexBlobs};
use exterior_euler::geometry::SingularObstacle;
use exterior_euler::transport::{build_decomposition, integrate, Cadence, GeometryOptions, SimulationState, Snapshot, Trajectory};
use exterior_euler::{Result, Vec2};

pub fn run_example() -> Result<()> {
    let disk = SingularObstacle::disk(0, Vec2::zeros(), 1.0)?;
    let geometry = GeometryOptions { exact_boundaries: true, ..GeometryOptions::default() };
    let d = build_decomposition(&[disk], vec![2.0 * PI], &geometry, &DecompositionOptions::default())?;
    let tracer = VortexBlobs::new(vec![Vec2::new(0.0, 3.0)], vec![0.0], 0.05)?;
    let mut state = SimulationState::exterior(tracer, d.clone(), 0.05)?;
    let traj = integrate(&mut state, 1.0, Cadence { snapshots: 1, diagnostics: usize::MAX }, None, |_| Ok(()))?;
    let phi = TestField { center: [2.0, 0.0], radius: 0.6, time: Some([0.0, 1.0]) };
    println!("steady circulation: {:.3e}", momentum_residual(&traj, Some(&d), &phi, 0.01)?);

    let pair = VortexBlobs::new(vec![Vec2::new(0.0, 0.5), Vec2::new(0.0, -0.5)], vec![2.0 * PI, -2.0 * PI], 0.3)?;
    let v = fullplane_biot_savart(&VortexBlobs::new(vec![pair.positions[1]], vec![pair.strengths[1]], 0.3)?, pair.positions[0]);
    let phi = TestField { center: [0.5 * v.x, 0.6], radius: 1.5, time: Some([0.0, 1.0]) };
    for factor in [1.0, 1.5, 2.0] {
        let mut t = Trajectory::new(&pair);
        for k in 0..=20 {
            let time = k as f64 * 0.05;
            t.snapshots.push(Snapshot { t: time, positions: pair.positions.iter().map(|p| p + v * factor * time).collect() });
        }
        println!("pair at {factor} x its speed: {:.3e}", momentum_residual(&t, None, &phi, 0.02)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
