// Capacity of shrinking disks against a segment.

use exterior_euler::geometry::{capacity_estimate, SingularObstacle};
use exterior_euler::{Result, Vec2};

pub fn run_example() -> Result<()> {
    for r in [0.1, 0.01, 0.001] {
        let c = capacity_estimate(&SingularObstacle::disk(0, Vec2::zeros(), r)?, 2.0, r / 4.0)?;
        println!("disk r = {r:<6} capacity {c:.5}   2 pi / ln(R/r) = {:.5}", 2.0 * std::f64::consts::PI / (2.0 / r).ln());
    }
    let seg = SingularObstacle::segment(0, Vec2::new(-0.5, 0.0), Vec2::new(0.5, 0.0))?;
    for h in [0.04, 0.02] {
        println!("segment h = {h:<5} capacity {:.5}", capacity_estimate(&seg, 2.0, h)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
