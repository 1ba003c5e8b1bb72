use std::f64::consts::PI;

use num_complex::Complex64;

use super::*;
use crate::conformal::{fit_exterior_map, ExteriorMap, FitOptions};
use crate::geometry::{DomainApproximation, JordanCurve, SingularObstacle};
use crate::Vec2;

fn disks(centers: &[Vec2]) -> (Vec<SingularObstacle>, DomainApproximation, Vec<ExteriorMap>) {
    let obstacles: Vec<_> = centers.iter().enumerate().map(|(i, c)| SingularObstacle::disk(i, *c, 1.0).unwrap()).collect();
    let maps: Vec<_> = centers.iter().enumerate().map(|(i, c)| ExteriorMap::disk(*c, 1.0, 512).unwrap().with_owner(i)).collect();
    let approx = DomainApproximation::from_curves(maps.iter().map(|m| m.boundary().clone()).collect(), 0).unwrap();
    (obstacles, approx, maps)
}

fn decomposition(centers: &[Vec2], gamma: Vec<f64>) -> StreamDecomposition {
    let (obs, approx, maps) = disks(centers);
    StreamDecomposition::new(&obs, approx, maps, gamma, &DecompositionOptions::default()).unwrap()
}

fn ellipse_setup() -> (Vec<SingularObstacle>, DomainApproximation, Vec<ExteriorMap>) {
    let obs = vec![SingularObstacle::ellipse(0, Vec2::zeros(), 2.0, 1.0).unwrap()];
    let curve = JordanCurve::ellipse(Vec2::zeros(), 2.0, 1.0, 512).unwrap();
    let map = fit_exterior_map(&curve, &FitOptions::default()).unwrap();
    let approx = DomainApproximation::from_curves(vec![curve], 0).unwrap();
    (obs, approx, vec![map])
}

#[test]
fn harmonic_single_on_circles() {
    let unit = ExteriorMap::disk(Vec2::zeros(), 1.0, 256).unwrap();
    let v = harmonic_psi_single(&unit, Vec2::new(2.0, 0.0)).unwrap();
    assert!((v - 2f64.ln() / (2.0 * PI)).abs() < 1e-15);
    assert!((v - 0.1103178).abs() < 1e-7);
    let r = 0.7;
    let m = ExteriorMap::disk(Vec2::zeros(), r, 256).unwrap();
    let x = Vec2::new(1.5, 2.0);
    let v = harmonic_psi_single(&m, x).unwrap();
    assert!((v - (x.norm() / r).ln() / (2.0 * PI)).abs() < 1e-14);
    assert!(harmonic_psi_single(&unit, Vec2::new(0.2, 0.1)).is_err());
}

#[test]
fn ellipse_harmonic_has_unit_circulation() {
    let (_, _, maps) = ellipse_setup();
    let m = 512;
    let r = 3.0;
    let mut circ = 0.0;
    for j in 0..m {
        let t = 2.0 * PI * j as f64 / m as f64;
        let z = Complex64::from_polar(r, t);
        let (w, dw) = maps[0].eval_with_derivative_unchecked(z);
        // grad psi = conj(T'/T) / 2pi, u = grad^perp psi
        let g = (dw / w).conj() / (2.0 * PI);
        let u = Vec2::new(-g.im, g.re);
        let tau = Vec2::new(-t.sin(), t.cos());
        circ += u.dot(&tau) * r * 2.0 * PI / m as f64;
    }
    assert!((circ - 1.0).abs() < 1e-6, "{circ}");
}

#[test]
fn single_obstacle_harmonic_reduces_to_the_log() {
    let (_, approx, maps) = ellipse_setup();
    let h = solve_harmonic_multi(&approx, 0, &maps, &HarmonicOptions::default()).unwrap();
    for x in [Vec2::new(3.0, 0.5), Vec2::new(-1.0, 2.0)] {
        let p = map_point(&maps, x).unwrap();
        assert!((h.value(&p) - harmonic_psi_single(&maps[0], x).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn two_disk_harmonic_fields() {
    let (_, approx, maps) = disks(&[Vec2::new(-3.0, 0.0), Vec2::new(3.0, 0.0)]);
    let h = solve_harmonic_multi(&approx, 0, &maps, &HarmonicOptions::default()).unwrap();
    assert!((h.log_coeffs.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    for (j, curve) in approx.curves.iter().enumerate() {
        let vals: Vec<f64> = curve
            .resample_parameter(97)
            .unwrap()
            .points()
            .iter()
            .map(|x| h.value(&map_point(&maps, *x * (1.0 + 1e-12) - curve.centroid() * 1e-12).unwrap()))
            .collect();
        let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
        let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(hi - lo < 1e-6, "curve {j}: spread {}", hi - lo);
        if j == 0 {
            assert!(hi.abs() < 1e-8 && lo.abs() < 1e-8);
        } else {
            assert!((vals[0] - h.boundary_constants[1]).abs() < 1e-6);
        }
    }
}

#[test]
fn weak_circulations_of_harmonic_fields_are_kronecker() {
    let d = decomposition(&[Vec2::new(-3.0, 0.0), Vec2::new(3.0, 0.0)], vec![0.0, 0.0]);
    for i in 0..2 {
        for j in 0..2 {
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((d.harmonic_weak[i][j] - expect).abs() < 1e-6, "{i}{j}: {}", d.harmonic_weak[i][j]);
        }
    }
}

#[test]
fn correction_trivial_cases() {
    let (_, approx, maps) = disks(&[Vec2::new(-3.0, 0.0), Vec2::new(3.0, 0.0)]);
    let empty = VortexBlobs::empty(0.05);
    let c = solve_correction_multi(&approx, &maps, &empty, &HarmonicOptions::default()).unwrap();
    let p = map_point(&maps, Vec2::new(0.0, 2.0)).unwrap();
    assert_eq!(c.value(&p), 0.0);
    let (_, approx1, maps1) = disks(&[Vec2::zeros()]);
    let b = VortexBlobs::new(vec![Vec2::new(2.0, 0.0)], vec![1.0], 0.05).unwrap();
    let c = solve_correction_multi(&approx1, &maps1, &b, &HarmonicOptions::default()).unwrap();
    assert_eq!(c.value(&map_point(&maps1, Vec2::new(0.0, 2.0)).unwrap()), 0.0);
}

#[test]
fn correction_obeys_the_maximum_principle() {
    let (_, approx, maps) = disks(&[Vec2::new(-3.0, 0.0), Vec2::new(3.0, 0.0)]);
    let b = VortexBlobs::new(vec![Vec2::new(0.0, 10.0)], vec![1.0], 0.05).unwrap();
    let c = solve_correction_multi(&approx, &maps, &b, &HarmonicOptions::default()).unwrap();
    let mut boundary_sup: f64 = 0.0;
    let mut boundary_misfit: f64 = 0.0;
    for curve in &approx.curves {
        for x in curve.points() {
            let x = *x + (*x - curve.centroid()) * 1e-12;
            let data = kernel_psi0_single(&maps[0], &b, x).unwrap();
            boundary_sup = boundary_sup.max(data.abs());
            let p = map_point(&maps, x).unwrap();
            boundary_misfit = boundary_misfit.max((c.value(&p) + data).abs());
        }
    }
    assert!(boundary_misfit < 1e-8 * boundary_sup.max(1.0), "{boundary_misfit}");
    let mut interior_sup: f64 = 0.0;
    for i in -20..=20 {
        for j in -20..=20 {
            let x = Vec2::new(0.5 * i as f64, 0.5 * j as f64);
            if let Ok(p) = map_point(&maps, x) {
                interior_sup = interior_sup.max(c.value(&p).abs());
            }
        }
    }
    assert!(interior_sup <= boundary_sup * 1.05, "{interior_sup} vs {boundary_sup}");
}

#[test]
fn pure_circulation_velocity() {
    let d = decomposition(&[Vec2::zeros()], vec![2.0 * PI]);
    let u = d.velocity(Vec2::new(2.0, 0.0)).unwrap();
    assert!((u - Vec2::new(0.0, 0.5)).norm() < 1e-12);
    assert!(d.velocity(Vec2::new(0.5, 0.0)).is_err());
}

#[test]
fn alpha_for_empty_and_single_blob() {
    let d = decomposition(&[Vec2::zeros()], vec![2.0 * PI]);
    assert_eq!(d.compute_alpha(&VortexBlobs::empty(0.05)).unwrap(), vec![2.0 * PI]);
    let b = VortexBlobs::new(vec![Vec2::new(2.0, 0.5)], vec![1.0], 0.05).unwrap();
    let a = d.compute_alpha(&b).unwrap();
    // the kernel carries boundary circulation -sum(Gamma) around the obstacle
    assert!((a[0] - (2.0 * PI + 1.0)).abs() < 1e-12, "{a:?}");
    let weak = d.kernel_circulations_for(&b).unwrap();
    assert!((weak[0] + 1.0).abs() < 1e-6, "{weak:?}");
}

#[test]
fn weak_form_alpha_matches_the_analytic_circulation_for_two_disks() {
    let (obs, approx, maps) = disks(&[Vec2::new(-3.0, 0.0), Vec2::new(3.0, 0.0)]);
    let options = DecompositionOptions { alpha: AlphaMethod::WeakForm, ..Default::default() };
    let mut d = StreamDecomposition::new(&obs, approx, maps, vec![0.5, -1.0], &options).unwrap();
    let b = VortexBlobs::new(
        vec![Vec2::new(0.0, 1.0), Vec2::new(-3.0, 2.5), Vec2::new(4.5, -0.5)],
        vec![1.0, -0.4, 0.7],
        0.05,
    )
    .unwrap();
    d.update(&b).unwrap();
    let circ = d.correction.circulations();
    let total: f64 = b.strengths.iter().sum();
    let analytic = [0.5 + total - circ[0], -1.0 - circ[1]];
    for i in 0..2 {
        assert!((d.alpha[i] - analytic[i]).abs() < 1e-6, "{:?} vs {analytic:?}", d.alpha);
    }
    let weak = d.weak_circulations();
    assert!((weak[0] - 0.5).abs() < 1e-6 && (weak[1] + 1.0).abs() < 1e-6, "{weak:?}");
}

#[test]
fn blob_outside_unit_disk_moves_with_its_images() {
    let mut d = decomposition(&[Vec2::zeros()], vec![0.0]);
    for (dist, gamma) in [(2.0, 2.0 * PI), (1.5, 1.0), (3.0, -0.5)] {
        let b = VortexBlobs::new(vec![Vec2::new(dist, 0.0)], vec![gamma], 0.05).unwrap();
        d.update(&b).unwrap();
        let u = d.blob_velocities().unwrap()[0];
        let expect = -gamma / (2.0 * PI * dist * (dist * dist - 1.0));
        assert!(u.x.abs() < 1e-12 && (u.y - expect).abs() < 1e-12, "{u:?} vs {expect}");
    }
}

#[test]
fn velocity_is_tangent_on_two_disks() {
    let mut d = decomposition(&[Vec2::new(-3.0, 0.0), Vec2::new(3.0, 0.0)], vec![1.0, 0.3]);
    let b = VortexBlobs::new(
        vec![Vec2::new(0.0, 1.0), Vec2::new(-1.0, -2.0), Vec2::new(2.0, 2.0), Vec2::new(4.0, -1.5)],
        vec![0.8, -0.3, 0.5, 1.1],
        0.05,
    )
    .unwrap();
    d.update(&b).unwrap();
    let mut max_u: f64 = 0.0;
    let mut max_normal: f64 = 0.0;
    for c in &d.approximation().curves.clone() {
        let normals = c.outward_normals();
        for (x, nu) in c.points().iter().zip(normals) {
            let x = *x + nu * 1e-9;
            let u = d.velocity(x).unwrap();
            max_u = max_u.max(u.norm());
            max_normal = max_normal.max(u.dot(&nu).abs());
        }
    }
    assert!(max_normal <= 1e-3 * max_u, "{max_normal} vs {max_u}");
}

#[test]
fn velocity_is_divergence_free_and_irrotational() {
    let mut d = decomposition(&[Vec2::new(-3.0, 0.0), Vec2::new(3.0, 0.0)], vec![1.0, 0.0]);
    let b = VortexBlobs::new(vec![Vec2::new(0.0, 1.5), Vec2::new(1.0, -2.0)], vec![1.0, -0.5], 0.05).unwrap();
    d.update(&b).unwrap();
    let h = 1e-4;
    for x in [Vec2::new(0.3, 0.2), Vec2::new(-3.0, 2.0), Vec2::new(5.0, 1.0)] {
        let ux = (d.velocity(x + Vec2::new(h, 0.0)).unwrap() - d.velocity(x - Vec2::new(h, 0.0)).unwrap()) / (2.0 * h);
        let uy = (d.velocity(x + Vec2::new(0.0, h)).unwrap() - d.velocity(x - Vec2::new(0.0, h)).unwrap()) / (2.0 * h);
        let u = d.velocity(x).unwrap().norm();
        assert!((ux.x + uy.y).abs() <= 1e-5 * u / h, "div at {x:?}");
        assert!((ux.y - uy.x).abs() < 1e-6, "curl at {x:?}: {}", ux.y - uy.x);
    }
}

#[test]
fn disk_velocity_is_rotation_equivariant() {
    let mut d = decomposition(&[Vec2::zeros()], vec![0.7]);
    let b = VortexBlobs::new(vec![Vec2::new(2.0, 0.3), Vec2::new(-1.2, 1.4)], vec![1.0, -0.6], 0.05).unwrap();
    let x = Vec2::new(0.4, -2.2);
    d.update(&b).unwrap();
    let u0 = d.velocity(x).unwrap();
    for k in 1..5 {
        let t = 1.3 * k as f64;
        let (s, c) = t.sin_cos();
        let rot = |v: Vec2| Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y);
        d.update(&b.rotated(t)).unwrap();
        let u = d.velocity(rot(x)).unwrap();
        assert!((u - rot(u0)).norm() < 1e-10, "{}", (u - rot(u0)).norm());
    }
}

#[test]
fn ellipse_velocity_matches_images_through_the_map() {
    let (obs, approx, maps) = ellipse_setup();
    let map = maps[0].clone();
    let mut d = StreamDecomposition::new(&obs, approx, maps, vec![0.0], &DecompositionOptions::default()).unwrap();
    let b = VortexBlobs::new(vec![Vec2::new(3.0, 0.5), Vec2::new(-1.0, 2.0)], vec![1.0, 0.4], 0.05).unwrap();
    d.update(&b).unwrap();
    for x in [Vec2::new(0.0, -2.0), Vec2::new(4.0, 3.0), Vec2::new(-2.5, 0.2)] {
        let (w, dw) = map.eval_with_derivative_unchecked(Complex64::new(x.x, x.y));
        // conj(u1 - i u2) = sum Gamma/(2 pi i) (1/(w - w_j) - 1/(w - w_j*) + 1/w) T'
        let mut f = Complex64::new(0.0, 0.0);
        for (p, g) in b.positions.iter().zip(&b.strengths) {
            let wj = map.eval_unchecked(Complex64::new(p.x, p.y));
            let ws = wj / wj.norm_sqr();
            f += (1.0 / (w - wj) - 1.0 / (w - ws) + 1.0 / w) * *g;
        }
        let f = f * dw / Complex64::new(0.0, 2.0 * PI);
        let expect = Vec2::new(f.re, -f.im);
        let u = d.velocity(x).unwrap();
        assert!((u - expect).norm() < 1e-8, "{u:?} vs {expect:?}");
    }
}
