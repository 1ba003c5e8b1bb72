use rayon::prelude::*;
use rstar::RTree;

use crate::{Error, Result, Vec2};

/// Directed distance `sup_a dist(a, B)` using an R-tree over `b`.
fn directed(a: &[Vec2], b: &[Vec2]) -> f64 {
    let tree = RTree::bulk_load(b.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>());
    a.par_iter()
        .map(|p| {
            let q = tree.nearest_neighbor(&[p.x, p.y]).expect("tree is non-empty");
            (p - Vec2::new(q[0], q[1])).norm()
        })
        .reduce(|| 0.0, f64::max)
}

/// Hausdorff distance between two finite point samplings.
pub fn hausdorff_distance(a: &[Vec2], b: &[Vec2]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    Ok(directed(a, b).max(directed(b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn brute_force(a: &[Vec2], b: &[Vec2]) -> f64 {
        let dir = |a: &[Vec2], b: &[Vec2]| {
            a.iter()
                .map(|p| b.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        dir(a, b).max(dir(b, a))
    }

    fn circle(r: f64, m: usize) -> Vec<Vec2> {
        (0..m)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / m as f64;
                Vec2::new(r * t.cos(), r * t.sin())
            })
            .collect()
    }

    #[test]
    fn identical_sets_are_at_zero() {
        let a = circle(1.0, 100);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn concentric_circles() {
        let h = hausdorff_distance(&circle(1.0, 2000), &circle(1.25, 2000)).unwrap();
        assert!((h - 0.25).abs() < 1e-6);
    }

    #[test]
    fn square_versus_circle_matches_brute_force() {
        let mut square = Vec::new();
        let m = 200;
        for k in 0..m {
            let s = -0.5 + k as f64 / m as f64;
            square.push(Vec2::new(s, -0.5));
            square.push(Vec2::new(0.5, s));
            square.push(Vec2::new(-s, 0.5));
            square.push(Vec2::new(-0.5, -s));
        }
        let circ = circle(0.5, 700);
        let h = hausdorff_distance(&square, &circ).unwrap();
        assert!((h - brute_force(&square, &circ)).abs() < 1e-15);
        // corner of the square to the circle: (sqrt 2 - 1)/2
        assert!((h - (2f64.sqrt() - 1.0) / 2.0).abs() < 1e-3);
    }

    #[test]
    fn empty_set_errors() {
        assert!(matches!(hausdorff_distance(&[], &[Vec2::zeros()]), Err(Error::EmptyPointSet)));
    }

    fn cloud() -> impl Strategy<Value = Vec<Vec2>> {
        prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y)| Vec2::new(x, y)), 1..40)
    }

    proptest! {
        #[test]
        fn triangle_inequality_and_symmetry(a in cloud(), b in cloud(), c in cloud()) {
            let ab = hausdorff_distance(&a, &b).unwrap();
            let ba = hausdorff_distance(&b, &a).unwrap();
            let bc = hausdorff_distance(&b, &c).unwrap();
            let ac = hausdorff_distance(&a, &c).unwrap();
            prop_assert!((ab - ba).abs() < 1e-15);
            prop_assert!(ac <= ab + bc + 1e-12);
            prop_assert!((ab - brute_force(&a, &b)).abs() < 1e-12);
        }
    }
}
