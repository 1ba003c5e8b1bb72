//! Exterior Riemann maps fitted by boundary collocation.
//!
//! `log T(z) = log(beta) + log(z - c) + sum_j q_j log((z - s_j) / (z - c))`
//! where the sources `s_j` sit just inside the curve and `c` is an interior
//! expansion center. The real part is fitted to `log|T| = 0` on the boundary
//! by least squares; the imaginary part (the argument) follows by conjugation.
//! Each `log((z - s_j)/(z - c))` is evaluated as a telescoping chain of
//! principal logarithms over short interior links, so no branch cut reaches
//! the exterior.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ConformalMap;
use crate::geometry::{segments_intersect, JordanCurve};
use crate::{Error, Result, Vec2};

/// Settings for [`fit_exterior_map`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FitOptions {
    /// Laurent degree `N`; the map uses `2N` interior sources.
    pub degree: usize,
    /// Number of collocation points `M` (at least `2N + 2`).
    pub collocation: usize,
    /// Largest accepted boundary residual.
    pub tolerance: f64,
    /// Source depth in units of the local source spacing.
    pub depth_factor: f64,
    /// Largest accepted condition estimate of the collocation matrix.
    pub max_condition: f64,
    /// Concentration of sources and collocation points at bends; 0 keeps
    /// the curve's own parameter.
    pub turning_weight: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { degree: 64, collocation: 256, tolerance: 1e-8, depth_factor: 3.0, max_condition: 1e15, turning_weight: 0.5 }
    }
}

impl FitOptions {
    pub fn with_degree(degree: usize) -> Self {
        FitOptions { degree, collocation: 4 * degree, ..Default::default() }
    }

    /// Tolerance used for approximants of non-smooth obstacles.
    pub const RELAXED_TOLERANCE: f64 = 1e-4;
}

/// Exterior map `T` of one Jordan curve, normalized by `T(inf) = inf`, `T'(inf) = beta > 0`.
#[derive(Debug, Clone)]
pub struct ExteriorMap {
    /// Derivative at infinity.
    pub beta: f64,
    /// Expansion center, inside the curve.
    pub center: Vec2,
    /// Laurent coefficients `c_0..c_N` of `T(z) = beta (z - center) + c_0 + sum c_m (z - center)^-m`.
    pub coeffs: Vec<Complex64>,
    pub degree: usize,
    /// Sup over collocation points of `||T| - 1|`.
    pub residual: f64,
    /// Condition estimate of the collocation matrix.
    pub condition: f64,
    sources: Vec<Complex64>,
    strengths: Vec<f64>,
    /// Source order of the telescoping chain and the tail sums of strengths.
    chain: Vec<usize>,
    tails: Vec<f64>,
    boundary: JordanCurve,
}

fn cx(v: Vec2) -> Complex64 {
    Complex64::new(v.x, v.y)
}

/// Fits the exterior map of `curve`.
pub fn fit_exterior_map(curve: &JordanCurve, options: &FitOptions) -> Result<ExteriorMap> {
    let n = options.degree;
    let m = options.collocation;
    if n == 0 || m < 2 * n + 2 {
        return Err(Error::InvalidArgument {
            field: "collocation",
            reason: format!("need M >= 2N + 2 (N = {n}, M = {m})"),
        });
    }
    if let Some((first, second)) = curve.first_self_intersection() {
        return Err(Error::NonSimpleCurve { first, second });
    }
    let (colloc, source_curve) = if options.turning_weight > 0.0 {
        (curve.resample_turning(m, options.turning_weight)?, curve.resample_turning(2 * n, options.turning_weight)?)
    } else {
        (curve.resample_parameter(m)?, curve.resample_parameter(2 * n)?)
    };
    let sources = place_sources(&source_curve, options.depth_factor)?;
    let center = pick_center(curve, &sources);
    let c = cx(center);

    let z: Vec<Complex64> = colloc.points().iter().map(|p| cx(*p)).collect();
    let cols = sources.len() + 1;
    let mut a = DMatrix::<f64>::zeros(m, cols);
    let mut rhs = DVector::<f64>::zeros(m);
    for (i, zi) in z.iter().enumerate() {
        let lc = (zi - c).norm().ln();
        a[(i, 0)] = 1.0;
        for (j, s) in sources.iter().enumerate() {
            a[(i, j + 1)] = (zi - s).norm().ln() - lc;
        }
        rhs[i] = -lc;
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !condition.is_finite() || condition > options.max_condition {
        return Err(Error::IllConditioned { condition, separation: None });
    }
    let x = svd
        .solve(&rhs, smax * 1e-15)
        .map_err(|_| Error::IllConditioned { condition, separation: None })?;
    let beta = x[0].exp();
    let strengths: Vec<f64> = x.iter().skip(1).copied().collect();

    let (chain, tails) = build_chain(curve, c, &sources, &strengths)?;
    let mut map = ExteriorMap {
        beta,
        center,
        coeffs: Vec::new(),
        degree: n,
        residual: 0.0,
        condition,
        sources,
        strengths,
        chain,
        tails,
        boundary: curve.clone(),
    };
    map.coeffs = map.laurent_coefficients(n);
    map.residual = z.iter().map(|zi| (map.eval_unchecked(*zi).norm() - 1.0).abs()).fold(0.0, f64::max);
    if map.residual > options.tolerance {
        return Err(Error::FitResidual { residual: map.residual, tolerance: options.tolerance });
    }
    map.check_univalent()?;
    Ok(map)
}

/// Sources on an inner parallel curve, kept clear of the opposite side and of
/// the local centre of curvature.
fn place_sources(curve: &JordanCurve, depth_factor: f64) -> Result<Vec<Complex64>> {
    let pts = curve.points();
    let k = pts.len();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let prev = pts[(j + k - 1) % k];
        let next = pts[(j + 1) % k];
        let p = pts[j];
        let spacing = 0.5 * ((p - prev).norm() + (next - p).norm());
        let chord = (next - prev).normalize();
        let inward = Vec2::new(-chord.y, chord.x);
        let mut depth = depth_factor * spacing;
        // turning radius of a convex vertex
        let turn = crate::geometry::cross(p - prev, next - p);
        if turn > 0.0 {
            let a = (p - prev).norm();
            let b = (next - p).norm();
            let cc = (next - prev).norm();
            let radius = a * b * cc / (2.0 * turn.abs());
            depth = depth.min(0.5 * radius);
        }
        // distance to the first crossing of the inward ray
        let far = p + inward * 1e6;
        let mut hit = f64::INFINITY;
        for (e, (a, b)) in curve.edges().enumerate() {
            if e == j || (e + 1) % k == j {
                continue;
            }
            if let Some(t) = ray_segment(p, far, a, b) {
                hit = hit.min(t * 1e6);
            }
        }
        depth = depth.min(0.4 * hit);
        let mut s = p + inward * depth;
        let mut tries = 0;
        while curve.winding_number(s) != 1 || curve.distance_to(s) < 0.25 * depth {
            tries += 1;
            if tries > 8 {
                return Err(Error::InvalidArgument {
                    field: "curve",
                    reason: format!("could not place an interior source near sample {j}"),
                });
            }
            depth *= 0.5;
            s = p + inward * depth;
        }
        out.push(cx(s));
    }
    Ok(out)
}

fn ray_segment(p: Vec2, q: Vec2, a: Vec2, b: Vec2) -> Option<f64> {
    let r = q - p;
    let s = b - a;
    let denom = r.x * s.y - r.y * s.x;
    if denom == 0.0 {
        return None;
    }
    let w = a - p;
    let t = (w.x * s.y - w.y * s.x) / denom;
    let u = (w.x * r.y - w.y * r.x) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some(t)
    } else {
        None
    }
}

fn pick_center(curve: &JordanCurve, sources: &[Complex64]) -> Vec2 {
    let centroid = curve.centroid();
    if curve.winding_number(centroid) == 1 && curve.distance_to(centroid) > 1e-9 {
        return centroid;
    }
    // fall back to the deepest source
    sources
        .iter()
        .map(|s| Vec2::new(s.re, s.im))
        .max_by(|a, b| curve.distance_to(*a).total_cmp(&curve.distance_to(*b)))
        .unwrap_or(centroid)
}

fn link_inside(curve: &JordanCurve, a: Complex64, b: Complex64) -> bool {
    let (a, b) = (Vec2::new(a.re, a.im), Vec2::new(b.re, b.im));
    !curve.edges().any(|(p, q)| segments_intersect(a, b, p, q))
}

fn build_chain(
    curve: &JordanCurve,
    center: Complex64,
    sources: &[Complex64],
    strengths: &[f64],
) -> Result<(Vec<usize>, Vec<f64>)> {
    let k = sources.len();
    let start = (0..k)
        .filter(|&j| link_inside(curve, center, sources[j]))
        .min_by(|&a, &b| (sources[a] - center).norm().total_cmp(&(sources[b] - center).norm()))
        .ok_or_else(|| Error::InvalidArgument {
            field: "curve",
            reason: "no source is visible from the expansion center".into(),
        })?;
    let chain: Vec<usize> = (0..k).map(|l| (start + l) % k).collect();
    for w in chain.windows(2) {
        if !link_inside(curve, sources[w[0]], sources[w[1]]) {
            return Err(Error::InvalidArgument {
                field: "curve",
                reason: format!("source link {}-{} leaves the curve", w[0], w[1]),
            });
        }
    }
    let mut tails = vec![0.0; k];
    let mut acc = 0.0;
    for l in (0..k).rev() {
        acc += strengths[chain[l]];
        tails[l] = acc;
    }
    Ok((chain, tails))
}

impl ExteriorMap {
    /// Map of the unit circle scaled to radius `radius` about `center`: `T(z) = (z - center)/radius`.
    pub fn disk(center: Vec2, radius: f64, samples: usize) -> Result<Self> {
        let boundary = JordanCurve::circle(center, radius, samples)?;
        Ok(ExteriorMap {
            beta: 1.0 / radius,
            center,
            coeffs: vec![Complex64::new(0.0, 0.0)],
            degree: 0,
            residual: 0.0,
            condition: 1.0,
            sources: Vec::new(),
            strengths: Vec::new(),
            chain: Vec::new(),
            tails: Vec::new(),
            boundary,
        })
    }

    pub fn boundary(&self) -> &JordanCurve {
        &self.boundary
    }

    /// Tags the boundary curve with obstacle index `owner`.
    pub fn with_owner(mut self, owner: usize) -> Self {
        self.boundary.owner = owner;
        self
    }

    pub fn sources(&self) -> &[Complex64] {
        &self.sources
    }

    pub fn strengths(&self) -> &[f64] {
        &self.strengths
    }

    /// `log(T(z) / (beta (z - c)))`.
    fn log_ratio(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut prev = cx(self.center);
        for (l, &j) in self.chain.iter().enumerate() {
            let s = self.sources[j];
            acc += ((z - s) / (z - prev)).ln() * self.tails[l];
            prev = s;
        }
        acc
    }

    /// Evaluates `T` without checking that `z` is exterior.
    pub fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        (z - cx(self.center)) * self.beta * self.log_ratio(z).exp()
    }

    /// Evaluates `T'` without checking that `z` is exterior.
    pub fn derivative_unchecked(&self, z: Complex64) -> Complex64 {
        let (t, dt) = self.eval_with_derivative_unchecked(z);
        let _ = t;
        dt
    }

    pub fn eval_with_derivative_unchecked(&self, z: Complex64) -> (Complex64, Complex64) {
        let c = cx(self.center);
        let t = self.eval_unchecked(z);
        let inv_c = (z - c).inv();
        let mut log_deriv = inv_c;
        for (s, q) in self.sources.iter().zip(&self.strengths) {
            log_deriv += ((z - s).inv() - inv_c) * q;
        }
        (t, t * log_deriv)
    }

    /// Outside the sampled boundary polygon, or inside it within one edge
    /// length of the polygon at a point the map sends onto or outside the unit circle.
    pub fn is_exterior_point(&self, x: Vec2) -> bool {
        if !self.boundary.contains(x) {
            return true;
        }
        let slack = self.boundary.edges().map(|(a, b)| (b - a).norm()).fold(0.0, f64::max);
        self.boundary.distance_to(x) <= slack && self.eval_unchecked(cx(x)).norm() >= 1.0
    }

    fn require_exterior(&self, x: Vec2) -> Result<()> {
        if !self.is_exterior_point(x) {
            return Err(Error::NotExterior { x: x.x, y: x.y, obstacle: self.boundary.owner });
        }
        Ok(())
    }

    /// `T(x)` for `x` strictly outside the curve.
    pub fn map_evaluate(&self, x: Vec2) -> Result<Complex64> {
        self.require_exterior(x)?;
        Ok(self.eval_unchecked(cx(x)))
    }

    /// `T'(x)` for `x` strictly outside the curve.
    pub fn map_derivative(&self, x: Vec2) -> Result<Complex64> {
        self.require_exterior(x)?;
        Ok(self.derivative_unchecked(cx(x)))
    }

    /// Preimage of `w` (`|w| > 1`) by damped Newton iteration seeded from the
    /// asymptotic expansion, with a radial continuation fallback. Roots inside
    /// the curve are rejected.
    pub fn map_inverse(&self, w: Complex64) -> Result<Vec2> {
        if w.norm() <= 1.0 {
            return Err(Error::InvalidArgument { field: "w", reason: format!("|w| = {} is not above 1", w.norm()) });
        }
        let seed = cx(self.center) + (w - self.coeffs.first().copied().unwrap_or_default()) / self.beta;
        let first_err = match self.newton(w, seed) {
            Ok(z) if self.is_exterior_point(Vec2::new(z.re, z.im)) => return Ok(Vec2::new(z.re, z.im)),
            Ok(z) => Error::NotExterior { x: z.re, y: z.im, obstacle: self.boundary.owner },
            Err(e) => e,
        };
        // walk in from a far-away target where the seed is accurate
        let steps = 32;
        let mut z = cx(self.center) + w * (8.0 / self.beta);
        for s in 0..=steps {
            let scale = 1.0 + 7.0 * (1.0 - s as f64 / steps as f64).powi(2);
            match self.newton(w * scale, z) {
                Ok(next) => z = next,
                Err(_) => return Err(first_err),
            }
        }
        if self.is_exterior_point(Vec2::new(z.re, z.im)) {
            Ok(Vec2::new(z.re, z.im))
        } else {
            Err(first_err)
        }
    }

    /// Inverse with a caller-supplied starting point, falling back to
    /// [`map_inverse`](Self::map_inverse) when Newton fails from it.
    pub fn map_inverse_from(&self, w: Complex64, seed: Vec2) -> Result<Vec2> {
        match self.newton(w, cx(seed)) {
            Ok(z) if self.is_exterior_point(Vec2::new(z.re, z.im)) => Ok(Vec2::new(z.re, z.im)),
            _ => self.map_inverse(w),
        }
    }

    fn newton(&self, w: Complex64, seed: Complex64) -> Result<Complex64> {
        const MAX_ITER: usize = 50;
        let tol = 1e-12 * w.norm().max(1.0);
        let mut z = seed;
        let (mut t, mut dt) = self.eval_with_derivative_unchecked(z);
        let mut mismatch = (t - w).norm();
        for _ in 0..MAX_ITER {
            if mismatch < tol {
                return Ok(z);
            }
            let step = (t - w) / dt;
            let mut lambda = 1.0;
            loop {
                let cand = z - step * lambda;
                let (tc, dtc) = self.eval_with_derivative_unchecked(cand);
                let mc = (tc - w).norm();
                if mc.is_finite() && mc < mismatch {
                    z = cand;
                    t = tc;
                    dt = dtc;
                    mismatch = mc;
                    break;
                }
                lambda *= 0.5;
                if lambda < 1e-10 {
                    return Err(Error::NewtonDiverged { iterations: MAX_ITER, last: z, mismatch });
                }
            }
        }
        if mismatch < tol {
            Ok(z)
        } else {
            Err(Error::NewtonDiverged { iterations: MAX_ITER, last: z, mismatch })
        }
    }

    /// Laurent coefficients `c_0..c_n` of the expansion about the center,
    /// from the discrete Fourier transform of `T` on an enclosing circle.
    /// Coefficients below the roundoff floor `1e3 eps max|T| rho^m` are set to zero.
    pub fn laurent_coefficients(&self, n: usize) -> Vec<Complex64> {
        let c = cx(self.center);
        let rho = 1.05 * self.boundary.points().iter().map(|p| (p - self.center).norm()).fold(0.0, f64::max);
        let p = (8 * (n + 1)).next_power_of_two().max(64);
        let mut samples: Vec<Complex64> = (0..p)
            .map(|k| {
                let e = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / p as f64);
                self.eval_unchecked(c + e * rho)
            })
            .collect();
        let peak = samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
        // inverse transform gives sum_k T_k e^{+i m theta_k} in slot m
        rustfft::FftPlanner::new().plan_fft_inverse(p).process(&mut samples);
        (0..=n)
            .map(|m| {
                let scale = rho.powi(m as i32);
                let cm = samples[m] * (scale / p as f64);
                if cm.norm() < 1e3 * f64::EPSILON * peak * scale {
                    Complex64::new(0.0, 0.0)
                } else {
                    cm
                }
            })
            .collect()
    }

    /// Boundary image winds once around the origin and the map grows just
    /// outside every sample.
    fn check_univalent(&self) -> Result<()> {
        let pts = self.boundary.points();
        let normals = self.boundary.outward_normals();
        let mut total = 0.0;
        let k = pts.len();
        for j in 0..k {
            let a = self.eval_unchecked(cx(pts[j]));
            let b = self.eval_unchecked(cx(pts[(j + 1) % k]));
            total += (b / a).arg();
            let h = 0.25 * (pts[(j + 1) % k] - pts[j]).norm();
            let out = self.eval_unchecked(cx(pts[j] + normals[j] * h)).norm();
            if !(out > 1.0 - 10.0 * self.residual) {
                return Err(Error::NotUnivalent { sample: j, modulus: out });
            }
        }
        let turns = total / (2.0 * std::f64::consts::PI);
        if (turns - 1.0).abs() > 1e-6 {
            return Err(Error::WindingMismatch { turns });
        }
        Ok(())
    }

    /// Largest `||T| - 1|` over samples of the boundary interpolant halfway
    /// between the stored samples.
    pub fn fresh_boundary_residual(&self) -> f64 {
        self.boundary
            .midpoint_samples()
            .iter()
            .map(|p| (self.eval_unchecked(cx(*p)).norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_record(&self) -> MapRecord {
        MapRecord {
            beta: self.beta,
            center: [self.center.x, self.center.y],
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            residual: self.residual,
            degree: self.degree,
            sources: self.sources.iter().zip(&self.strengths).map(|(s, q)| [s.re, s.im, *q]).collect(),
            boundary: self.boundary.points().iter().map(|p| [p.x, p.y]).collect(),
        }
    }

    pub fn from_record(record: &MapRecord) -> Result<Self> {
        let boundary = JordanCurve::new(record.boundary.iter().map(|p| Vec2::new(p[0], p[1])).collect(), 0, 0)?;
        let center = Vec2::new(record.center[0], record.center[1]);
        let sources: Vec<Complex64> = record.sources.iter().map(|s| Complex64::new(s[0], s[1])).collect();
        let strengths: Vec<f64> = record.sources.iter().map(|s| s[2]).collect();
        let (chain, tails) = if sources.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            build_chain(&boundary, cx(center), &sources, &strengths)?
        };
        Ok(ExteriorMap {
            beta: record.beta,
            center,
            coeffs: record.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
            degree: record.degree,
            residual: record.residual,
            condition: f64::NAN,
            sources,
            strengths,
            chain,
            tails,
            boundary,
        })
    }
}

/// JSON form of an [`ExteriorMap`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MapRecord {
    pub beta: f64,
    pub center: [f64; 2],
    /// `(re, im)` pairs of `c_0..c_N`.
    pub coeffs: Vec<[f64; 2]>,
    pub residual: f64,
    pub degree: usize,
    /// `(x, y, strength)` of the interior sources.
    pub sources: Vec<[f64; 3]>,
    pub boundary: Vec<[f64; 2]>,
}

impl ConformalMap for ExteriorMap {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_unchecked(z)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        self.derivative_unchecked(z)
    }

    fn is_exterior(&self, x: Vec2) -> bool {
        self.is_exterior_point(x)
    }
}
