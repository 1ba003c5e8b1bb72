use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::spectral::TrigSeries;
use crate::{Error, Result, Vec2};

/// Closed, simple, counterclockwise boundary curve stored as ordered samples.
///
/// The closing edge from the last sample back to the first is implicit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JordanCurve {
    points: Vec<Vec2>,
    /// Obstacle this curve approximates.
    pub owner: usize,
    /// Approximation index.
    pub n: usize,
}

impl JordanCurve {
    /// Builds a curve from samples, reversing them if they run clockwise.
    pub fn new(mut points: Vec<Vec2>, owner: usize, n: usize) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidArgument {
                field: "points",
                reason: format!("a closed curve needs at least 3 samples, got {}", points.len()),
            });
        }
        if signed_area(&points) < 0.0 {
            points.reverse();
            points.rotate_right(1);
        }
        let curve = JordanCurve { points, owner, n };
        if let Some((first, second)) = curve.first_self_intersection() {
            return Err(Error::NonSimpleCurve { first, second });
        }
        if curve.signed_area() <= 0.0 {
            return Err(Error::InvalidArgument {
                field: "points",
                reason: "curve encloses zero area".into(),
            });
        }
        Ok(curve)
    }

    pub fn circle(center: Vec2, radius: f64, samples: usize) -> Result<Self> {
        Self::ellipse(center, radius, radius, samples)
    }

    /// Ellipse with semi-axes `a` (along x) and `b`, sampled uniformly in the
    /// angular parameter.
    pub fn ellipse(center: Vec2, a: f64, b: f64, samples: usize) -> Result<Self> {
        let points = (0..samples)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / samples as f64;
                center + Vec2::new(a * t.cos(), b * t.sin())
            })
            .collect();
        Self::new(points, 0, 0)
    }

    pub fn with_owner(mut self, owner: usize, n: usize) -> Self {
        self.owner = owner;
        self.n = n;
        self
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.points)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| (b - a).norm()).sum()
    }

    /// Area centroid of the enclosed region.
    pub fn centroid(&self) -> Vec2 {
        let mut c = Vec2::zeros();
        let mut area2 = 0.0;
        for (a, b) in self.edges() {
            let cross = a.x * b.y - b.x * a.y;
            area2 += cross;
            c += (a + b) * cross;
        }
        c / (3.0 * area2)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let m = self.points.len();
        (0..m).map(move |i| (self.points[i], self.points[(i + 1) % m]))
    }

    /// Winding number of the polygon around `x`.
    pub fn winding_number(&self, x: Vec2) -> i32 {
        let mut winding = 0;
        for (a, b) in self.edges() {
            if a.y <= x.y {
                if b.y > x.y && cross(b - a, x - a) > 0.0 {
                    winding += 1;
                }
            } else if b.y <= x.y && cross(b - a, x - a) < 0.0 {
                winding -= 1;
            }
        }
        winding
    }

    /// True when `x` lies in the closed region bounded by the curve.
    pub fn contains(&self, x: Vec2) -> bool {
        self.winding_number(x) != 0 || self.distance_to(x) < 1e-14
    }

    /// Euclidean distance from `x` to the polygon.
    pub fn distance_to(&self, x: Vec2) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(x, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest distance between samples of two curves' polygons.
    pub fn distance_to_curve(&self, other: &JordanCurve) -> f64 {
        let mut best = f64::INFINITY;
        for p in &self.points {
            best = best.min(other.distance_to(*p));
        }
        for p in &other.points {
            best = best.min(self.distance_to(*p));
        }
        best
    }

    /// Returns the first pair of non-adjacent intersecting edges, if any.
    pub fn first_self_intersection(&self) -> Option<(usize, usize)> {
        let m = self.points.len();
        let edges: Vec<(Vec2, Vec2)> = self.edges().collect();
        for i in 0..m {
            let (a, b) = edges[i];
            for (j, &(c, d)) in edges.iter().enumerate().skip(i + 2) {
                if i == 0 && j == m - 1 {
                    continue;
                }
                if segments_intersect(a, b, c, d) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn as_complex(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| Complex64::new(p.x, p.y)).collect()
    }

    /// Trigonometric interpolant of the samples in the sample-index parameter.
    pub fn series(&self) -> TrigSeries {
        TrigSeries::from_samples(&self.as_complex())
    }

    /// Unit tangents at the samples (counterclockwise direction), from the
    /// spectral derivative of the samples.
    pub fn tangents(&self) -> Vec<Vec2> {
        self.series()
            .derivative_at_nodes()
            .into_iter()
            .map(|d| {
                let t = d / d.norm();
                Vec2::new(t.re, t.im)
            })
            .collect()
    }

    /// Unit normals pointing out of the enclosed region.
    pub fn outward_normals(&self) -> Vec<Vec2> {
        self.tangents().into_iter().map(|t| Vec2::new(t.y, -t.x)).collect()
    }

    /// Samples of the trigonometric interpolant halfway between the stored samples.
    pub fn midpoint_samples(&self) -> Vec<Vec2> {
        let series = self.series();
        (0..self.points.len())
            .map(|j| {
                let z = series.eval(j as f64 + 0.5);
                Vec2::new(z.re, z.im)
            })
            .collect()
    }

    /// Resamples the trigonometric interpolant at `m` uniform parameter values.
    pub fn resample_parameter(&self, m: usize) -> Result<JordanCurve> {
        if m == self.points.len() {
            return Ok(self.clone());
        }
        let series = self.series();
        let scale = self.points.len() as f64 / m as f64;
        let points = (0..m)
            .map(|j| {
                let z = series.eval(j as f64 * scale);
                Vec2::new(z.re, z.im)
            })
            .collect();
        JordanCurve::new(points, self.owner, self.n)
    }

    /// Resamples at `m` points uniformly spaced in arclength along the
    /// (finely upsampled) trigonometric interpolant.
    pub fn resample_arclength(&self, m: usize) -> Result<JordanCurve> {
        let fine: Vec<Vec2> = self
            .series()
            .upsample(16)
            .into_iter()
            .map(|z| Vec2::new(z.re, z.im))
            .collect();
        JordanCurve::new(resample_polygon_arclength(&fine, m), self.owner, self.n)
    }

    /// Resamples at `m` points equidistributed in `parameter + weight * P/(2 pi) * turning`
    /// (`P` the parameter period), which concentrates samples where the curve
    /// bends. `weight = 0` keeps the parameter spacing.
    pub fn resample_turning(&self, m: usize, weight: f64) -> Result<JordanCurve> {
        const UP: usize = 16;
        let series = self.series();
        let fine: Vec<Vec2> = series.upsample(UP).into_iter().map(|z| Vec2::new(z.re, z.im)).collect();
        let k = fine.len();
        let edge = |i: usize| fine[(i + 1) % k] - fine[i];
        let turn = |i: usize| {
            let (a, b) = (edge((i + k - 1) % k), edge(i));
            cross(a, b).atan2(a.dot(&b)).abs()
        };
        let scale = weight * k as f64 / (2.0 * PI);
        let mut cumulative = Vec::with_capacity(k + 1);
        cumulative.push(0.0);
        for i in 0..k {
            let w = 1.0 + scale * 0.5 * (turn(i) + turn((i + 1) % k));
            cumulative.push(cumulative[i] + w);
        }
        let total = cumulative[k];
        let mut out = Vec::with_capacity(m);
        let mut seg = 0;
        for j in 0..m {
            let s = total * j as f64 / m as f64;
            while seg + 1 < k && cumulative[seg + 1] < s {
                seg += 1;
            }
            let len = cumulative[seg + 1] - cumulative[seg];
            let t = if len > 0.0 { (s - cumulative[seg]) / len } else { 0.0 };
            let z = series.eval((seg as f64 + t) / UP as f64);
            out.push(Vec2::new(z.re, z.im));
        }
        JordanCurve::new(out, self.owner, self.n)
    }

    /// Gaussian smoothing in arclength with standard deviation `sigma`,
    /// followed by uniform arclength resampling.
    pub fn mollify(&self, sigma: f64) -> Result<JordanCurve> {
        let m = self.points.len();
        let uniform = self.resample_arclength(m)?;
        let length = uniform.perimeter();
        let series = uniform.series();
        let smoothed: Vec<Vec2> = series
            .filtered_nodes(|k| {
                let omega = 2.0 * PI * k * sigma / length;
                (-0.5 * omega * omega).exp()
            })
            .into_iter()
            .map(|z| Vec2::new(z.re, z.im))
            .collect();
        JordanCurve::new(smoothed, self.owner, self.n)?.resample_arclength(m)
    }
}

pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

pub(crate) fn signed_area(points: &[Vec2]) -> f64 {
    let m = points.len();
    let mut s = 0.0;
    for i in 0..m {
        let a = points[i];
        let b = points[(i + 1) % m];
        s += a.x * b.y - b.x * a.y;
    }
    0.5 * s
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    (p - closest_point_on_segment(p, a, b)).norm()
}

pub fn closest_point_on_segment(p: Vec2, a: Vec2, b: Vec2) -> Vec2 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return a;
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    a + ab * t
}

/// Closed-segment intersection test (touching counts).
pub fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    if a.x.max(b.x) < c.x.min(d.x)
        || c.x.max(d.x) < a.x.min(b.x)
        || a.y.max(b.y) < c.y.min(d.y)
        || c.y.max(d.y) < a.y.min(b.y)
    {
        return false;
    }
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |p: Vec2, q: Vec2, r: Vec2, o: f64| o == 0.0 && r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y);
    on(a, b, c, d1) || on(a, b, d, d2) || on(c, d, a, d3) || on(c, d, b, d4)
}

/// Uniform arclength resampling of a closed polygon.
pub(crate) fn resample_polygon_arclength(points: &[Vec2], m: usize) -> Vec<Vec2> {
    let n = points.len();
    let mut cumulative = Vec::with_capacity(n + 1);
    cumulative.push(0.0);
    for i in 0..n {
        let d = (points[(i + 1) % n] - points[i]).norm();
        cumulative.push(cumulative[i] + d);
    }
    let total = cumulative[n];
    let mut out = Vec::with_capacity(m);
    let mut seg = 0;
    for j in 0..m {
        let s = total * j as f64 / m as f64;
        while seg + 1 < n && cumulative[seg + 1] < s {
            seg += 1;
        }
        let len = cumulative[seg + 1] - cumulative[seg];
        let t = if len > 0.0 { (s - cumulative[seg]) / len } else { 0.0 };
        out.push(points[seg] + (points[(seg + 1) % n] - points[seg]) * t);
    }
    out
}
