//! Harmonic stream functions in the exterior of several curves.
//!
//! Fields are expanded as `sum_l sum_m Re(a_lm T_l(x)^-m)` plus logarithms
//! `ln|T_j|` and constants, and fitted by least squares at boundary
//! collocation points.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel::{kernel_value, MappedBlob};
use crate::conformal::ExteriorMap;
use crate::geometry::{DomainApproximation, JordanCurve};
use crate::{Error, Result, Vec2};

/// All maps evaluated at one point.
#[derive(Debug, Clone)]
pub struct MappedPoint {
    pub x: Vec2,
    pub t: Vec<Complex64>,
    pub dt: Vec<Complex64>,
}

/// Evaluates every map at `x`, failing if `x` is inside any map's domain boundary.
pub fn map_point(maps: &[ExteriorMap], x: Vec2) -> Result<MappedPoint> {
    let z = Complex64::new(x.x, x.y);
    let mut t = Vec::with_capacity(maps.len());
    let mut dt = Vec::with_capacity(maps.len());
    for m in maps {
        if !m.is_exterior_point(x) {
            return Err(Error::NotExterior { x: x.x, y: x.y, obstacle: m.boundary().owner });
        }
        let (a, b) = m.eval_with_derivative_unchecked(z);
        t.push(a);
        dt.push(b);
    }
    Ok(MappedPoint { x, t, dt })
}

/// Same as [`map_point`] without the containment test (for boundary samples).
pub(crate) fn map_point_unchecked(maps: &[ExteriorMap], x: Vec2) -> MappedPoint {
    let z = Complex64::new(x.x, x.y);
    let (t, dt) = maps.iter().map(|m| m.eval_with_derivative_unchecked(z)).unzip();
    MappedPoint { x, t, dt }
}

/// Settings for the boundary collocation of harmonic fields and corrections.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HarmonicOptions {
    /// Number of decaying terms per obstacle.
    pub degree: usize,
    /// Collocation points per curve.
    pub collocation: usize,
    pub max_condition: f64,
}

impl Default for HarmonicOptions {
    fn default() -> Self {
        HarmonicOptions { degree: 32, collocation: 160, max_condition: 1e13 }
    }
}

/// Decaying series `sum_l sum_m Re(a_lm T_l^-m)`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Series {
    /// `coeffs[l][m - 1] = a_lm`.
    pub coeffs: Vec<Vec<Complex64>>,
}

impl Series {
    fn from_real(k: usize, degree: usize, x: &[f64]) -> Self {
        let coeffs = (0..k)
            .map(|l| (0..degree).map(|m| Complex64::new(x[2 * (l * degree + m)], x[2 * (l * degree + m) + 1])).collect())
            .collect();
        Series { coeffs }
    }

    pub fn value(&self, p: &MappedPoint) -> f64 {
        let mut acc = 0.0;
        for (l, a) in self.coeffs.iter().enumerate() {
            if a.is_empty() {
                continue;
            }
            let inv = p.t[l].inv();
            let mut pow = inv;
            for c in a {
                acc += (c * pow).re;
                pow *= inv;
            }
        }
        acc
    }

    /// Gradient `d/dx + i d/dy`.
    pub fn gradient(&self, p: &MappedPoint) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (l, a) in self.coeffs.iter().enumerate() {
            if a.is_empty() {
                continue;
            }
            let inv = p.t[l].inv();
            // d/dz sum a_m T^-m = -T' sum m a_m T^-(m+1)
            let mut pow = inv * inv;
            let mut d = Complex64::new(0.0, 0.0);
            for (m, c) in a.iter().enumerate() {
                d += c * pow * (m + 1) as f64;
                pow *= inv;
            }
            acc -= d * p.dt[l];
        }
        acc.conj()
    }
}

/// Fills the real basis row `Re T_l^-m, -Im T_l^-m` for all `l, m`.
fn basis_row(p: &MappedPoint, degree: usize, out: &mut [f64]) {
    for (l, t) in p.t.iter().enumerate() {
        let inv = t.inv();
        let mut pow = inv;
        for m in 0..degree {
            out[2 * (l * degree + m)] = pow.re;
            out[2 * (l * degree + m) + 1] = -pow.im;
            pow *= inv;
        }
    }
}

fn log_abs(p: &MappedPoint, j: usize) -> f64 {
    p.t[j].norm().ln() / (2.0 * PI)
}

fn log_grad(p: &MappedPoint, j: usize) -> Complex64 {
    (p.dt[j] / p.t[j]).conj() / (2.0 * PI)
}

fn collocation_points(curve: &JordanCurve, count: usize) -> Result<Vec<Vec2>> {
    Ok(curve.resample_turning(count, 0.5)?.points().to_vec())
}

struct LeastSquares {
    svd: nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>,
    condition: f64,
}

fn factor(a: DMatrix<f64>, max_condition: f64, separation: f64) -> Result<LeastSquares> {
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= max_condition) {
        return Err(Error::IllConditioned { condition, separation: Some(separation) });
    }
    Ok(LeastSquares { svd, condition })
}

/// Stream function of the circulation-carrying field around obstacle `owner`:
/// `(1/2pi) ln|T_owner| + constant + series`, constant on every curve, zero on
/// the owner's curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HarmonicField {
    pub owner: usize,
    /// Logarithm strengths `d_j` (one-hot at `owner`, summing to one).
    pub log_coeffs: Vec<f64>,
    pub constant: f64,
    pub correction_coeffs: Series,
    /// Value attained on each curve (`0` on the owner's curve).
    pub boundary_constants: Vec<f64>,
    /// Largest collocation misfit.
    pub residual: f64,
    pub condition: f64,
}

impl HarmonicField {
    pub fn value(&self, p: &MappedPoint) -> f64 {
        let logs: f64 = self.log_coeffs.iter().enumerate().filter(|(_, d)| **d != 0.0).map(|(j, d)| d * log_abs(p, j)).sum();
        logs + self.constant + self.correction_coeffs.value(p)
    }

    /// Gradient `d/dx + i d/dy`.
    pub fn gradient(&self, p: &MappedPoint) -> Complex64 {
        let mut g = self.correction_coeffs.gradient(p);
        for (j, d) in self.log_coeffs.iter().enumerate() {
            if *d != 0.0 {
                g += log_grad(p, j) * *d;
            }
        }
        g
    }

    /// Velocity `grad^perp psi`.
    pub fn velocity(&self, p: &MappedPoint) -> Vec2 {
        let g = self.gradient(p);
        Vec2::new(-g.im, g.re)
    }
}

/// `(1/2pi) ln|T(x)|`.
pub fn harmonic_psi_single(map: &ExteriorMap, x: Vec2) -> Result<f64> {
    Ok(map.map_evaluate(x)?.norm().ln() / (2.0 * PI))
}

/// Harmonic field of obstacle `i` for the approximation `approx` with maps `maps`.
pub fn solve_harmonic_multi(
    approx: &DomainApproximation,
    i: usize,
    maps: &[ExteriorMap],
    options: &HarmonicOptions,
) -> Result<HarmonicField> {
    let k = maps.len();
    if k != approx.len() || i >= k {
        return Err(Error::InvalidArgument { field: "obstacle", reason: format!("index {i} with {k} maps") });
    }
    let mut log_coeffs = vec![0.0; k];
    log_coeffs[i] = 1.0;
    if k == 1 {
        return Ok(HarmonicField {
            owner: i,
            log_coeffs,
            constant: 0.0,
            correction_coeffs: Series::default(),
            boundary_constants: vec![0.0],
            residual: maps[0].residual,
            condition: 1.0,
        });
    }
    let deg = options.degree;
    // unknowns: constant, C_j for j != i, series
    let others: Vec<usize> = (0..k).filter(|&j| j != i).collect();
    let ncols = 1 + others.len() + 2 * k * deg;
    let mut rows: Vec<(usize, MappedPoint)> = Vec::new();
    for (j, c) in approx.curves.iter().enumerate() {
        for x in collocation_points(c, options.collocation)? {
            rows.push((j, map_point_unchecked(maps, x)));
        }
    }
    let mut a = DMatrix::<f64>::zeros(rows.len(), ncols);
    let mut rhs = DVector::<f64>::zeros(rows.len());
    let mut buf = vec![0.0; 2 * k * deg];
    for (r, (j, p)) in rows.iter().enumerate() {
        a[(r, 0)] = 1.0;
        if let Some(pos) = others.iter().position(|o| o == j) {
            a[(r, 1 + pos)] = -1.0;
        }
        basis_row(p, deg, &mut buf);
        for (c, v) in buf.iter().enumerate() {
            a[(r, 1 + others.len() + c)] = *v;
        }
        rhs[r] = -log_abs(p, i);
    }
    let ls = factor(a.clone(), options.max_condition, approx.pairwise_separation)?;
    let x = ls.svd.solve(&rhs, 0.0).map_err(|e| Error::InvalidArgument { field: "harmonic", reason: e.into() })?;
    let misfit = &a * &x - &rhs;
    let mut boundary_constants = vec![0.0; k];
    for (pos, j) in others.iter().enumerate() {
        boundary_constants[*j] = x[1 + pos];
    }
    Ok(HarmonicField {
        owner: i,
        log_coeffs,
        constant: x[0],
        correction_coeffs: Series::from_real(k, deg, &x.as_slice()[1 + others.len()..]),
        boundary_constants,
        residual: misfit.amax(),
        condition: ls.condition,
    })
}

/// Bounded harmonic correction `const + sum_{j>=2} d_j (ln|T_j| - ln|T_1|)/(2pi) + series`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CorrectionField {
    pub constant: f64,
    /// `d_j`, with `d_1 = 0`.
    pub log_coeffs: Vec<f64>,
    pub series: Series,
}

impl CorrectionField {
    pub fn zero(k: usize) -> Self {
        CorrectionField { constant: 0.0, log_coeffs: vec![0.0; k], series: Series { coeffs: vec![Vec::new(); k] } }
    }

    pub fn value(&self, p: &MappedPoint) -> f64 {
        let mut v = self.constant + self.series.value(p);
        for (j, d) in self.log_coeffs.iter().enumerate().skip(1) {
            if *d != 0.0 {
                v += d * (log_abs(p, j) - log_abs(p, 0));
            }
        }
        v
    }

    pub fn gradient(&self, p: &MappedPoint) -> Complex64 {
        let mut g = self.series.gradient(p);
        for (j, d) in self.log_coeffs.iter().enumerate().skip(1) {
            if *d != 0.0 {
                g += (log_grad(p, j) - log_grad(p, 0)) * *d;
            }
        }
        g
    }

    /// Boundary circulation around each obstacle.
    pub fn circulations(&self) -> Vec<f64> {
        let mut c = self.log_coeffs.clone();
        if !c.is_empty() {
            c[0] = -self.log_coeffs.iter().skip(1).sum::<f64>();
        }
        c
    }
}

/// Precomputed least-squares solver for the correction: the boundary data is
/// linear in the blobs, so the pseudo-inverse is formed once per geometry.
#[derive(Debug, Clone)]
pub struct CorrectionSolver {
    k: usize,
    degree: usize,
    /// Collocation points with the first map's value there.
    colloc: Vec<(Vec2, Complex64)>,
    pinv: DMatrix<f64>,
    pub condition: f64,
}

impl CorrectionSolver {
    pub fn new(approx: &DomainApproximation, maps: &[ExteriorMap], options: &HarmonicOptions) -> Result<Self> {
        let k = maps.len();
        let deg = options.degree;
        if k < 2 {
            return Ok(CorrectionSolver { k, degree: 0, colloc: Vec::new(), pinv: DMatrix::zeros(0, 0), condition: 1.0 });
        }
        let ncols = 1 + (k - 1) + 2 * k * deg;
        let mut points = Vec::new();
        for c in &approx.curves {
            points.extend(collocation_points(c, options.collocation)?);
        }
        let mut a = DMatrix::<f64>::zeros(points.len(), ncols);
        let mut colloc = Vec::with_capacity(points.len());
        let mut buf = vec![0.0; 2 * k * deg];
        for (r, x) in points.iter().enumerate() {
            let p = map_point_unchecked(maps, *x);
            a[(r, 0)] = 1.0;
            for j in 1..k {
                a[(r, j)] = log_abs(&p, j) - log_abs(&p, 0);
            }
            basis_row(&p, deg, &mut buf);
            for (c, v) in buf.iter().enumerate() {
                a[(r, k + c)] = *v;
            }
            colloc.push((*x, p.t[0]));
        }
        let ls = factor(a, options.max_condition, approx.pairwise_separation)?;
        let pinv = ls.svd.pseudo_inverse(0.0).map_err(|e| Error::InvalidArgument { field: "correction", reason: e.into() })?;
        Ok(CorrectionSolver { k, degree: deg, colloc, pinv, condition: ls.condition })
    }

    /// Correction matching `-psi0_tilde` on every curve.
    pub(crate) fn solve(&self, mapped: &[MappedBlob]) -> CorrectionField {
        if self.k < 2 || mapped.is_empty() {
            return CorrectionField::zero(self.k);
        }
        let data = DVector::from_iterator(self.colloc.len(), self.colloc.iter().map(|(_, w)| -kernel_value(*w, mapped, None)));
        let x = &self.pinv * data;
        let mut log_coeffs = vec![0.0; self.k];
        log_coeffs[1..self.k].copy_from_slice(&x.as_slice()[1..self.k]);
        CorrectionField { constant: x[0], log_coeffs, series: Series::from_real(self.k, self.degree, &x.as_slice()[self.k..]) }
    }

    pub fn collocation_points(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.colloc.iter().map(|(x, _)| *x)
    }
}

/// Harmonic correction for the blobs `blobs` in the multi-obstacle domain.
pub fn solve_correction_multi(
    approx: &DomainApproximation,
    maps: &[ExteriorMap],
    blobs: &super::VortexBlobs,
    options: &HarmonicOptions,
) -> Result<CorrectionField> {
    if maps.len() < 2 || blobs.is_empty() {
        return Ok(CorrectionField::zero(maps.len()));
    }
    let solver = CorrectionSolver::new(approx, maps, options)?;
    let mapped = super::kernel::map_blobs(&maps[0], blobs)?;
    for x in &blobs.positions {
        map_point(maps, *x)?;
    }
    Ok(solver.solve(&mapped))
}
