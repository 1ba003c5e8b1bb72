use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::curve::{closest_point_on_segment, signed_area, JordanCurve};
use crate::{Error, Result, Vec2};

/// Shape of a (possibly singular) connected compact obstacle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ObstacleKind {
    Segment { a: [f64; 2], b: [f64; 2] },
    Polyline { vertices: Vec<[f64; 2]> },
    KochFlake { level: u32, center: [f64; 2], radius: f64 },
    Disk { center: [f64; 2], radius: f64 },
    Ellipse { center: [f64; 2], a: f64, b: f64 },
    /// User-supplied samples of a connected set.
    CustomPointcloud { points: Vec<[f64; 2]> },
}

/// Geometric primitive used for distance queries.
#[derive(Debug, Clone)]
enum Shape {
    Disk { center: Vec2, radius: f64 },
    /// Filled simple polygon (counterclockwise).
    Region(Vec<Vec2>),
    /// Open chain of segments.
    Chain(Vec<Vec2>),
    Points(Vec<Vec2>),
}

/// A compact connected obstacle, the set the smooth approximants converge to.
#[derive(Debug, Clone)]
pub struct SingularObstacle {
    pub id: usize,
    pub kind: ObstacleKind,
    sample_points: Vec<Vec2>,
    shape: Shape,
}

fn v(p: [f64; 2]) -> Vec2 {
    Vec2::new(p[0], p[1])
}

const DEFAULT_SAMPLES: usize = 256;

impl SingularObstacle {
    pub fn new(id: usize, kind: ObstacleKind) -> Result<Self> {
        let (sample_points, shape) = match &kind {
            ObstacleKind::Segment { a, b } => {
                let chain = vec![v(*a), v(*b)];
                (densify_chain(&chain, DEFAULT_SAMPLES / 2), Shape::Chain(chain))
            }
            ObstacleKind::Polyline { vertices } => {
                if vertices.is_empty() {
                    return Err(Error::EmptyPointSet);
                }
                let chain: Vec<Vec2> = vertices.iter().map(|p| v(*p)).collect();
                (densify_chain(&chain, DEFAULT_SAMPLES), Shape::Chain(chain))
            }
            ObstacleKind::KochFlake { level, center, radius } => {
                let poly = koch_polygon(*level, v(*center), *radius);
                (poly.clone(), Shape::Region(poly))
            }
            ObstacleKind::Disk { center, radius } => {
                if *radius < 0.0 {
                    return Err(Error::InvalidArgument { field: "radius", reason: "negative radius".into() });
                }
                let c = v(*center);
                let pts = ellipse_points(c, *radius, *radius, DEFAULT_SAMPLES);
                (pts, Shape::Disk { center: c, radius: *radius })
            }
            ObstacleKind::Ellipse { center, a, b } => {
                if *a < 0.0 || *b < 0.0 {
                    return Err(Error::InvalidArgument { field: "semi-axes", reason: "negative semi-axis".into() });
                }
                let c = v(*center);
                let pts = ellipse_points(c, *a, *b, DEFAULT_SAMPLES);
                let shape = if *a > 0.0 && *b > 0.0 {
                    Shape::Region(ellipse_points(c, *a, *b, 2048))
                } else {
                    // a flat ellipse is a segment
                    Shape::Chain(vec![c - Vec2::new(*a, *b), c + Vec2::new(*a, *b)])
                };
                (pts, shape)
            }
            ObstacleKind::CustomPointcloud { points } => {
                let pts: Vec<Vec2> = points.iter().map(|p| v(*p)).collect();
                (pts.clone(), Shape::Points(pts))
            }
        };
        if sample_points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let first = sample_points[0];
        if sample_points.iter().all(|p| (p - first).norm() == 0.0) {
            return Err(Error::DegenerateObstacle);
        }
        Ok(SingularObstacle { id, kind, sample_points, shape })
    }

    pub fn disk(id: usize, center: Vec2, radius: f64) -> Result<Self> {
        Self::new(id, ObstacleKind::Disk { center: [center.x, center.y], radius })
    }

    pub fn segment(id: usize, a: Vec2, b: Vec2) -> Result<Self> {
        Self::new(id, ObstacleKind::Segment { a: [a.x, a.y], b: [b.x, b.y] })
    }

    pub fn ellipse(id: usize, center: Vec2, a: f64, b: f64) -> Result<Self> {
        Self::new(id, ObstacleKind::Ellipse { center: [center.x, center.y], a, b })
    }

    pub fn koch(id: usize, level: u32, center: Vec2, radius: f64) -> Result<Self> {
        Self::new(id, ObstacleKind::KochFlake { level, center: [center.x, center.y], radius })
    }

    pub fn sample_points(&self) -> &[Vec2] {
        &self.sample_points
    }

    /// Distance from `x` to the obstacle set, with the nearest point of the set.
    pub fn nearest(&self, x: Vec2) -> (f64, Vec2) {
        match &self.shape {
            Shape::Disk { center, radius } => {
                let r = x - center;
                let d = r.norm();
                if d <= *radius {
                    (0.0, x)
                } else {
                    (d - radius, center + r * (radius / d))
                }
            }
            Shape::Region(poly) => {
                if winding(poly, x) != 0 {
                    return (0.0, x);
                }
                nearest_on_chain(poly, x, true)
            }
            Shape::Chain(chain) => nearest_on_chain(chain, x, false),
            Shape::Points(points) => points
                .iter()
                .map(|p| ((x - p).norm(), *p))
                .fold((f64::INFINITY, x), |a, b| if b.0 < a.0 { b } else { a }),
        }
    }

    pub fn distance(&self, x: Vec2) -> f64 {
        self.nearest(x).0
    }

    /// Axis-aligned bounding box `(min, max)` of the obstacle.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        let pts: &[Vec2] = match &self.shape {
            Shape::Region(p) | Shape::Chain(p) | Shape::Points(p) => p,
            Shape::Disk { center, radius } => {
                return (center - Vec2::new(*radius, *radius), center + Vec2::new(*radius, *radius));
            }
        };
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for p in pts {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        (lo, hi)
    }

    /// Segments describing the obstacle for distance-field construction:
    /// polygon edges, chain edges, or degenerate point segments.
    pub(crate) fn primitive_segments(&self) -> Vec<(Vec2, Vec2)> {
        match &self.shape {
            Shape::Region(p) => (0..p.len()).map(|i| (p[i], p[(i + 1) % p.len()])).collect(),
            Shape::Chain(c) => {
                if c.len() == 1 {
                    vec![(c[0], c[0])]
                } else {
                    c.windows(2).map(|w| (w[0], w[1])).collect()
                }
            }
            Shape::Points(p) => p.iter().map(|q| (*q, *q)).collect(),
            Shape::Disk { center, radius } => {
                let pts = ellipse_points(*center, *radius, *radius, 512);
                (0..pts.len()).map(|i| (pts[i], pts[(i + 1) % pts.len()])).collect()
            }
        }
    }

    /// True for disks and non-degenerate ellipses.
    pub fn is_smooth(&self) -> bool {
        match &self.kind {
            ObstacleKind::Disk { .. } => true,
            ObstacleKind::Ellipse { a, b, .. } => *a > 0.0 && *b > 0.0,
            _ => false,
        }
    }

    /// Center and radius of a disk obstacle.
    pub fn disk_parameters(&self) -> Option<(Vec2, f64)> {
        match self.shape {
            Shape::Disk { center, radius } => Some((center, radius)),
            _ => None,
        }
    }

    /// Boundary of the filled region as a curve, when the obstacle is a region.
    pub fn boundary_curve(&self, samples: usize) -> Option<Result<JordanCurve>> {
        match &self.kind {
            ObstacleKind::Disk { center, radius } => Some(JordanCurve::circle(v(*center), *radius, samples)),
            ObstacleKind::Ellipse { center, a, b } if *a > 0.0 && *b > 0.0 => {
                Some(JordanCurve::ellipse(v(*center), *a, *b, samples))
            }
            ObstacleKind::KochFlake { .. } => match &self.shape {
                Shape::Region(p) => Some(JordanCurve::new(p.clone(), self.id, 0)),
                _ => None,
            },
            _ => None,
        }
    }
}

fn winding(poly: &[Vec2], x: Vec2) -> i32 {
    let m = poly.len();
    let mut w = 0;
    for i in 0..m {
        let a = poly[i];
        let b = poly[(i + 1) % m];
        let c = (b.x - a.x) * (x.y - a.y) - (x.x - a.x) * (b.y - a.y);
        if a.y <= x.y {
            if b.y > x.y && c > 0.0 {
                w += 1;
            }
        } else if b.y <= x.y && c < 0.0 {
            w -= 1;
        }
    }
    w
}

fn nearest_on_chain(chain: &[Vec2], x: Vec2, closed: bool) -> (f64, Vec2) {
    let m = chain.len();
    if m == 1 {
        return ((x - chain[0]).norm(), chain[0]);
    }
    let count = if closed { m } else { m - 1 };
    let mut best = (f64::INFINITY, chain[0]);
    for i in 0..count {
        let p = closest_point_on_segment(x, chain[i], chain[(i + 1) % m]);
        let d = (x - p).norm();
        if d < best.0 {
            best = (d, p);
        }
    }
    best
}

fn ellipse_points(c: Vec2, a: f64, b: f64, m: usize) -> Vec<Vec2> {
    (0..m)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / m as f64;
            c + Vec2::new(a * t.cos(), b * t.sin())
        })
        .collect()
}

/// Evenly spread samples along an open chain, endpoints included.
fn densify_chain(chain: &[Vec2], target: usize) -> Vec<Vec2> {
    if chain.len() == 1 {
        return chain.to_vec();
    }
    let total: f64 = chain.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    if total == 0.0 {
        return chain.to_vec();
    }
    let mut out = Vec::new();
    for w in chain.windows(2) {
        let len = (w[1] - w[0]).norm();
        let pieces = ((target as f64 * len / total).ceil() as usize).max(1);
        for k in 0..pieces {
            out.push(w[0] + (w[1] - w[0]) * (k as f64 / pieces as f64));
        }
    }
    out.push(*chain.last().unwrap());
    out
}

/// Vertices of the Koch snowflake of the given level, counterclockwise,
/// built on an equilateral triangle of circumradius `radius`.
pub fn koch_polygon(level: u32, center: Vec2, radius: f64) -> Vec<Vec2> {
    let mut poly: Vec<Vec2> = (0..3)
        .map(|k| {
            let t = PI / 2.0 + 2.0 * PI * k as f64 / 3.0;
            center + Vec2::new(radius * t.cos(), radius * t.sin())
        })
        .collect();
    let (c, s) = ((-PI / 3.0).cos(), (-PI / 3.0).sin());
    for _ in 0..level {
        let m = poly.len();
        let mut next = Vec::with_capacity(4 * m);
        for i in 0..m {
            let p = poly[i];
            let q = poly[(i + 1) % m];
            let a = p + (q - p) / 3.0;
            let b = p + (q - p) * (2.0 / 3.0);
            let e = b - a;
            // outward bump lies to the right of a counterclockwise edge
            let peak = a + Vec2::new(c * e.x - s * e.y, s * e.x + c * e.y);
            next.extend_from_slice(&[p, a, peak, b]);
        }
        poly = next;
    }
    debug_assert!(signed_area(&poly) > 0.0);
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_obstacle_is_rejected() {
        let err = SingularObstacle::disk(1, Vec2::new(0.3, 0.1), 0.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateObstacle));
        assert_eq!(err.to_string(), "obstacle reduced to a point");
        let err = SingularObstacle::segment(1, Vec2::zeros(), Vec2::zeros()).unwrap_err();
        assert!(matches!(err, Error::DegenerateObstacle));
    }

    #[test]
    fn koch_flake_has_expected_vertex_count_and_area() {
        let poly = koch_polygon(3, Vec2::zeros(), 1.0);
        assert_eq!(poly.len(), 3 * 4usize.pow(3));
        // snowflake area tends to 8/5 of the initial triangle
        let tri = 3.0 * 3.0f64.sqrt() / 4.0;
        let area = signed_area(&poly);
        assert!(area > tri && area < 1.6 * tri);
    }

    #[test]
    fn distances() {
        let seg = SingularObstacle::segment(1, Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0)).unwrap();
        assert!((seg.distance(Vec2::new(0.2, 0.5)) - 0.5).abs() < 1e-15);
        assert!((seg.distance(Vec2::new(2.0, 0.0)) - 1.0).abs() < 1e-15);
        let disk = SingularObstacle::disk(2, Vec2::new(1.0, 1.0), 0.5).unwrap();
        assert!((disk.distance(Vec2::new(1.0, 2.0)) - 0.5).abs() < 1e-15);
        assert_eq!(disk.distance(Vec2::new(1.1, 1.0)), 0.0);
        let koch = SingularObstacle::koch(3, 2, Vec2::zeros(), 1.0).unwrap();
        assert_eq!(koch.distance(Vec2::zeros()), 0.0);
        assert!(koch.distance(Vec2::new(3.0, 0.0)) > 1.5);
    }
}
