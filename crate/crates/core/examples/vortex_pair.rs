// A counter-rotating pair translating in the free plane.

use std::f64::consts::PI;

use exterior_euler::field::VortexBlobs;
use exterior_euler::transport::{integrate, Cadence, SimulationState};
use exterior_euler::{Result, Vec2};

pub fn run_example() -> Result<()> {
    let pair = VortexBlobs::new(vec![Vec2::new(0.0, 0.5), Vec2::new(0.0, -0.5)], vec![2.0 * PI, -2.0 * PI], 0.05)?;
    let mut state = SimulationState::free_plane(pair, 0.01)?;
    let traj = integrate(&mut state, 1.0, Cadence { snapshots: 25, diagnostics: usize::MAX }, None, |_| Ok(()))?;
    let mut csv = Vec::new();
    traj.write_csv(&mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
