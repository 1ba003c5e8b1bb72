//! Smooth cutoffs equal to one near an obstacle and zero away from it.

use super::obstacle::SingularObstacle;
use crate::{Error, Result, Vec2};

/// `chi(x) = s((d(x) - eps) / eps)` with `d` the distance to the obstacle and
/// `s` a smooth step from 1 (for `t <= 0`) to 0 (for `t >= 1`) whose
/// derivatives of every order vanish at both ends.
#[derive(Debug, Clone)]
pub struct Cutoff {
    pub obstacle: usize,
    pub eps: f64,
    target: SingularObstacle,
}

fn bump(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

fn bump_deriv(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp() / (t * t)
    }
}

/// Smooth step and its derivative.
pub fn smooth_step(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        return (1.0, 0.0);
    }
    if t >= 1.0 {
        return (0.0, 0.0);
    }
    let (a, b) = (bump(1.0 - t), bump(t));
    let (da, db) = (-bump_deriv(1.0 - t), bump_deriv(t));
    let s = a + b;
    (a / s, (da * s - a * (da + db)) / (s * s))
}

impl Cutoff {
    /// Cutoff of obstacle `i` among `obstacles`; the `2 eps` support must not
    /// reach any other obstacle.
    pub fn new(obstacles: &[SingularObstacle], i: usize, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument { field: "eps", reason: "cutoff width must be positive".into() });
        }
        let target = obstacles
            .get(i)
            .ok_or_else(|| Error::InvalidArgument { field: "obstacle", reason: format!("no obstacle with index {i}") })?;
        for (j, other) in obstacles.iter().enumerate() {
            if j == i {
                continue;
            }
            let separation = super::obstacle_separation(&[target.clone(), other.clone()]);
            if 2.0 * eps >= separation {
                return Err(Error::CutoffsOverlap { two_eps: 2.0 * eps, separation });
            }
        }
        Ok(Cutoff { obstacle: i, eps, target: target.clone() })
    }

    /// Checks that the transition band lies outside `curve`, i.e. that the
    /// curve stays within distance `eps` of the obstacle.
    pub fn check_band_outside(&self, curve: &super::JordanCurve) -> Result<()> {
        let gap = curve.points().iter().map(|p| self.target.distance(*p)).fold(0.0, f64::max);
        if gap >= self.eps {
            return Err(Error::CutoffTooNarrow { obstacle: self.obstacle, eps: self.eps, gap });
        }
        Ok(())
    }

    pub fn target(&self) -> &SingularObstacle {
        &self.target
    }

    pub fn value(&self, x: Vec2) -> f64 {
        smooth_step((self.target.distance(x) - self.eps) / self.eps).0
    }

    /// Value and gradient.
    pub fn value_gradient(&self, x: Vec2) -> (f64, Vec2) {
        let (d, nearest) = self.target.nearest(x);
        let t = (d - self.eps) / self.eps;
        let (s, ds) = smooth_step(t);
        if ds == 0.0 || d == 0.0 {
            return (s, Vec2::zeros());
        }
        (s, (x - nearest) * (ds / (self.eps * d)))
    }

    /// Values on a rectilinear grid, row-major in `y`.
    pub fn sample_grid(&self, xs: &[f64], ys: &[f64]) -> Vec<f64> {
        ys.iter().flat_map(|&y| xs.iter().map(move |&x| self.value(Vec2::new(x, y)))).collect()
    }
}
