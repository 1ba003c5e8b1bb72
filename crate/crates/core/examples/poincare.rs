// Poincare constants of a ball minus approximants of a segment.

use exterior_euler::diagnostics::poincare_estimate;
use exterior_euler::geometry::{approximation_sequence, SingularObstacle};
use exterior_euler::{Result, Vec2};

pub fn run_example() -> Result<()> {
    let seg = SingularObstacle::segment(0, Vec2::new(-0.5, 0.0), Vec2::new(0.5, 0.0))?;
    for n in [4, 8, 16] {
        let curve = approximation_sequence(&seg, n, 1024)?;
        println!("n = {n:>2}: C = {:.4}", poincare_estimate(&curve, 2.0, 0.025)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
