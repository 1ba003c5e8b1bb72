//! Smooth Jordan-curve approximants of singular obstacles.
//!
//! Every approximant is the outer boundary of the `1/n`-neighbourhood of the
//! obstacle, smoothed by a Gaussian in arclength. Disks and ellipses use their
//! exact parallel curves.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::curve::{resample_polygon_arclength, signed_area, JordanCurve};
use super::obstacle::SingularObstacle;
use crate::{Error, Result, Vec2};

/// Default number of boundary samples per curve.
pub const DEFAULT_CURVE_SAMPLES: usize = 256;

/// Offset length used at approximation index `n`.
pub fn offset_length(n: usize) -> f64 {
    1.0 / n as f64
}

/// Smooth closed curve enclosing `obstacle` at Hausdorff distance about `1/n`.
pub fn approximation_sequence(obstacle: &SingularObstacle, n: usize, samples: usize) -> Result<JordanCurve> {
    if n == 0 {
        return Err(Error::InvalidArgument { field: "n", reason: "approximation index must be >= 1".into() });
    }
    let delta = offset_length(n);
    let curve = if let Some((center, radius)) = obstacle.disk_parameters() {
        JordanCurve::circle(center, radius + delta, samples)?
    } else {
        match &obstacle.kind {
            super::ObstacleKind::Ellipse { center, a, b } if *a > 0.0 && *b > 0.0 => {
                parallel_ellipse(Vec2::new(center[0], center[1]), *a, *b, delta, samples)?
            }
            super::ObstacleKind::Segment { a, b } => {
                stadium(Vec2::new(a[0], a[1]), Vec2::new(b[0], b[1]), delta, samples)?.mollify(delta / 4.0)?
            }
            _ => offset_contour(obstacle, delta, samples)?.mollify(delta / 4.0)?,
        }
    };
    Ok(curve.with_owner(obstacle.id, n))
}

fn parallel_ellipse(c: Vec2, a: f64, b: f64, delta: f64, samples: usize) -> Result<JordanCurve> {
    let points = (0..samples)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / samples as f64;
            let p = Vec2::new(a * t.cos(), b * t.sin());
            let normal = Vec2::new(b * t.cos(), a * t.sin()).normalize();
            c + p + normal * delta
        })
        .collect();
    JordanCurve::new(points, 0, 0)
}

/// Boundary of the `delta`-neighbourhood of the segment `[a, b]`.
fn stadium(a: Vec2, b: Vec2, delta: f64, samples: usize) -> Result<JordanCurve> {
    let axis = (b - a).normalize();
    let normal = Vec2::new(-axis.y, axis.x);
    let len = (b - a).norm();
    let dense = 16 * samples;
    let perimeter = 2.0 * len + 2.0 * PI * delta;
    let mut pts = Vec::with_capacity(dense);
    for j in 0..dense {
        let s = perimeter * j as f64 / dense as f64;
        let p = if s < len {
            a - normal * delta + axis * s
        } else if s < len + PI * delta {
            let t = (s - len) / delta - PI / 2.0;
            b + (axis * t.cos() + normal * t.sin()) * delta
        } else if s < 2.0 * len + PI * delta {
            b + normal * delta - axis * (s - len - PI * delta)
        } else {
            let t = (s - 2.0 * len - PI * delta) / delta + PI / 2.0;
            a + (axis * t.cos() + normal * t.sin()) * delta
        };
        pts.push(p);
    }
    JordanCurve::new(resample_polygon_arclength(&pts, samples), 0, 0)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
enum EdgeKey {
    H(usize, usize),
    V(usize, usize),
}

/// Outer boundary of the `delta`-level set of the distance to the obstacle,
/// extracted by marching squares.
fn offset_contour(obstacle: &SingularObstacle, delta: f64, samples: usize) -> Result<JordanCurve> {
    let (lo, hi) = obstacle.bounding_box();
    let g = delta / 8.0;
    let pad = delta + 4.0 * g;
    let origin = lo - Vec2::new(pad, pad);
    let nx = ((hi.x - lo.x + 2.0 * pad) / g).ceil() as usize + 1;
    let ny = ((hi.y - lo.y + 2.0 * pad) / g).ceil() as usize + 1;
    let far = 2.0 * delta;
    let mut dist = vec![far; nx * ny];
    let reach = 1.5 * delta;
    for (a, b) in obstacle.primitive_segments() {
        let i0 = (((a.x.min(b.x) - reach - origin.x) / g).floor().max(0.0)) as usize;
        let i1 = (((a.x.max(b.x) + reach - origin.x) / g).ceil() as usize).min(nx - 1);
        let j0 = (((a.y.min(b.y) - reach - origin.y) / g).floor().max(0.0)) as usize;
        let j1 = (((a.y.max(b.y) + reach - origin.y) / g).ceil() as usize).min(ny - 1);
        for j in j0..=j1 {
            for i in i0..=i1 {
                let x = origin + Vec2::new(i as f64 * g, j as f64 * g);
                let d = super::curve::point_segment_distance(x, a, b);
                let slot = &mut dist[j * nx + i];
                if d < *slot {
                    *slot = d;
                }
            }
        }
    }
    let f = |i: usize, j: usize| dist[j * nx + i] - delta;
    let pos = |i: usize, j: usize| origin + Vec2::new(i as f64 * g, j as f64 * g);
    let crossing = |key: EdgeKey| -> Vec2 {
        let ((i0, j0), (i1, j1)) = match key {
            EdgeKey::H(i, j) => ((i, j), (i + 1, j)),
            EdgeKey::V(i, j) => ((i, j), (i, j + 1)),
        };
        let (f0, f1) = (f(i0, j0), f(i1, j1));
        let t = f0 / (f0 - f1);
        pos(i0, j0) + (pos(i1, j1) - pos(i0, j0)) * t
    };

    let mut links: BTreeMap<EdgeKey, Vec<EdgeKey>> = BTreeMap::new();
    let mut connect = |p: EdgeKey, q: EdgeKey| {
        links.entry(p).or_default().push(q);
        links.entry(q).or_default().push(p);
    };
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let inside = [f(i, j) < 0.0, f(i + 1, j) < 0.0, f(i + 1, j + 1) < 0.0, f(i, j + 1) < 0.0];
            let bottom = EdgeKey::H(i, j);
            let right = EdgeKey::V(i + 1, j);
            let top = EdgeKey::H(i, j + 1);
            let left = EdgeKey::V(i, j);
            let mut cut = Vec::with_capacity(4);
            if inside[0] != inside[1] {
                cut.push(bottom);
            }
            if inside[1] != inside[2] {
                cut.push(right);
            }
            if inside[2] != inside[3] {
                cut.push(top);
            }
            if inside[3] != inside[0] {
                cut.push(left);
            }
            match cut.len() {
                0 => {}
                2 => connect(cut[0], cut[1]),
                4 => {
                    let center_inside = (f(i, j) + f(i + 1, j) + f(i + 1, j + 1) + f(i, j + 1)) < 0.0;
                    // corners 0 and 2 share a sign in a saddle cell
                    if center_inside == inside[0] {
                        connect(bottom, right);
                        connect(top, left);
                    } else {
                        connect(left, bottom);
                        connect(right, top);
                    }
                }
                _ => unreachable!("marching squares cell with odd crossings"),
            }
        }
    }

    let mut visited: BTreeMap<EdgeKey, bool> = BTreeMap::new();
    let mut best: Option<Vec<Vec2>> = None;
    let keys: Vec<EdgeKey> = links.keys().copied().collect();
    for start in keys {
        if visited.contains_key(&start) {
            continue;
        }
        let mut loop_pts = Vec::new();
        let mut prev = start;
        let mut cur = start;
        loop {
            visited.insert(cur, true);
            loop_pts.push(crossing(cur));
            let next = links[&cur].iter().copied().find(|k| *k != prev && !visited.contains_key(k));
            match next {
                Some(k) => {
                    prev = cur;
                    cur = k;
                }
                None => break,
            }
        }
        if loop_pts.len() >= 3 {
            let area = signed_area(&loop_pts).abs();
            if best.as_ref().map_or(true, |b| area > signed_area(b).abs()) {
                best = Some(loop_pts);
            }
        }
    }
    let outer = best.ok_or(Error::DegenerateObstacle)?;
    JordanCurve::new(resample_polygon_arclength(&outer, samples), 0, 0)
}

/// The `k` approximating curves of a multi-obstacle domain at a common index.
#[derive(Debug, Clone)]
pub struct DomainApproximation {
    pub curves: Vec<JordanCurve>,
    pub n: usize,
    /// Smallest distance between distinct curves (infinite for one curve).
    pub pairwise_separation: f64,
}

impl DomainApproximation {
    pub fn new(obstacles: &[SingularObstacle], n: usize, samples: usize) -> Result<Self> {
        let curves = obstacles
            .iter()
            .map(|o| approximation_sequence(o, n, samples))
            .collect::<Result<Vec<_>>>()?;
        for (o, c) in obstacles.iter().zip(&curves) {
            if o.sample_points().iter().any(|p| c.winding_number(*p) != 1) {
                return Err(Error::CurveDoesNotEnclose { obstacle: o.id });
            }
        }
        Self::from_curves(curves, n)
    }

    pub fn from_curves(curves: Vec<JordanCurve>, n: usize) -> Result<Self> {
        let mut separation = f64::INFINITY;
        for i in 0..curves.len() {
            for j in i + 1..curves.len() {
                let d = curves[i].distance_to_curve(&curves[j]);
                let nested = curves[j].contains(curves[i].points()[0]) || curves[i].contains(curves[j].points()[0]);
                if d <= 0.0 || nested {
                    return Err(Error::CurvesNotDisjoint { first: i, second: j });
                }
                separation = separation.min(d);
            }
        }
        Ok(DomainApproximation { curves, n, pairwise_separation: separation })
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Index of the curve whose closed region contains `x`, if any.
    pub fn obstacle_containing(&self, x: Vec2) -> Option<usize> {
        self.curves.iter().position(|c| c.contains(x))
    }
}

/// Smallest distance between two distinct obstacles (infinite for fewer than two).
pub fn obstacle_separation(obstacles: &[SingularObstacle]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in obstacles.iter().enumerate() {
        for b in &obstacles[i + 1..] {
            for p in a.sample_points() {
                best = best.min(b.distance(*p));
            }
            for p in b.sample_points() {
                best = best.min(a.distance(*p));
            }
        }
    }
    best
}
