// Smooth approximants of singular obstacles and their Hausdorff distance to the obstacle.

use exterior_euler::geometry::{approximation_sequence, hausdorff_distance, SingularObstacle};
use exterior_euler::{Result, Vec2};

pub fn run_example() -> Result<()> {
    let obstacles = [
        ("segment", SingularObstacle::segment(0, Vec2::new(-0.5, 0.0), Vec2::new(0.5, 0.0))?),
        ("koch level 3", SingularObstacle::koch(1, 3, Vec2::zeros(), 1.0)?),
    ];
    for (name, obstacle) in &obstacles {
        println!("{name}");
        for n in [4, 8, 16, 32] {
            let curve = approximation_sequence(obstacle, n, 1024)?;
            let d = hausdorff_distance(curve.points(), obstacle.sample_points())?;
            println!("  n = {n:>2}: {} points, area {:.5}, Hausdorff {:.5}", curve.len(), curve.signed_area(), d);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
