use std::f64::consts::PI;

use super::*;
use crate::conformal::ExteriorMap;
use crate::field::{map_point, DecompositionOptions, StreamDecomposition};
use crate::geometry::{DomainApproximation, SingularObstacle};
use crate::transport::{integrate, Cadence, SimulationState};

fn two_disks() -> (Vec<SingularObstacle>, DomainApproximation, Vec<ExteriorMap>) {
    let centers = [Vec2::new(-3.0, 0.0), Vec2::new(3.0, 0.0)];
    let obstacles: Vec<_> = centers.iter().enumerate().map(|(i, c)| SingularObstacle::disk(i, *c, 1.0).unwrap()).collect();
    let maps: Vec<_> = centers.iter().enumerate().map(|(i, c)| ExteriorMap::disk(*c, 1.0, 512).unwrap().with_owner(i)).collect();
    let approx = DomainApproximation::from_curves(maps.iter().map(|m| m.boundary().clone()).collect(), 0).unwrap();
    (obstacles, approx, maps)
}

fn decomposition(gamma: Vec<f64>, blobs: &VortexBlobs) -> StreamDecomposition {
    let (obs, approx, maps) = two_disks();
    let mut d = StreamDecomposition::new(&obs, approx, maps, gamma, &DecompositionOptions::default()).unwrap();
    d.update(blobs).unwrap();
    d
}

fn blobs() -> VortexBlobs {
    VortexBlobs::new(
        vec![Vec2::new(0.0, 1.5), Vec2::new(0.5, -2.0), Vec2::new(-1.0, 2.5)],
        vec![1.0, -0.4, 0.7],
        0.05,
    )
    .unwrap()
}

#[test]
fn weak_circulation_of_zero_field_is_zero() {
    let d = decomposition(vec![0.0, 0.0], &VortexBlobs::empty(0.05));
    for c in &d.cutoffs {
        let w = weak_circulation(|_| Ok(Vec2::zeros()), &VortexBlobs::empty(0.05), c, c.eps / 24.0).unwrap();
        assert_eq!(w, 0.0);
    }
}

#[test]
fn harmonic_fields_have_kronecker_circulations() {
    let d = decomposition(vec![0.0, 0.0], &VortexBlobs::empty(0.05));
    let none = VortexBlobs::empty(0.05);
    for (i, h) in d.harmonic_fields.iter().enumerate() {
        for (j, c) in d.cutoffs.iter().enumerate() {
            let w = weak_circulation(|x| Ok(h.velocity(&map_point(&d.maps, x)?)), &none, c, c.eps / 24.0).unwrap();
            let delta = if i == j { 1.0 } else { 0.0 };
            assert!((w - delta).abs() < 1e-6, "{i} {j} {w}");
        }
    }
}

#[test]
fn circulation_is_cutoff_independent() {
    let b = blobs();
    let d = decomposition(vec![0.3, -0.8], &b);
    let (obs, _, _) = two_disks();
    for i in 0..2 {
        let eps = d.cutoffs[i].eps;
        let half = crate::geometry::Cutoff::new(&obs, i, eps / 2.0).unwrap();
        let a = weak_circulation(|x| d.velocity(x), &b, &d.cutoffs[i], eps / 24.0).unwrap();
        let c = weak_circulation(|x| d.velocity(x), &b, &half, eps / 48.0).unwrap();
        assert!((a - c).abs() < 1e-4, "{a} {c}");
        assert!((a - d.gamma[i]).abs() < 1e-4, "{a}");
    }
}

#[test]
fn free_blob_far_away_has_no_circulation() {
    let (obs, _, _) = two_disks();
    let c = crate::geometry::Cutoff::new(&obs, 0, 0.5).unwrap();
    let b = VortexBlobs::new(vec![Vec2::new(10.0, 0.0)], vec![2.0], 0.05).unwrap();
    let w = weak_circulation(|x| Ok(crate::field::fullplane_biot_savart(&b, x)), &b, &c, 0.5 / 24.0).unwrap();
    assert!(w.abs() < 1e-8, "{w}");
}

#[test]
fn tangency_separates_tangent_and_normal_fields() {
    let b = blobs();
    let d = decomposition(vec![0.3, -0.8], &b);
    let q = TangencyQuadrature::new(d.approximation(), &d.maps, &d.cutoffs, 512, 48).unwrap();
    let good = q.residual(|x| d.velocity(x)).unwrap();
    assert!(good < 1e-3, "{good}");
    let control = q.residual(|_| Ok(Vec2::new(1.0, 0.0))).unwrap();
    assert!(control > 0.1, "{control}");
    // radial outflow from each disk
    let radial = q
        .residual(|x| {
            let c = if x.x < 0.0 { Vec2::new(-3.0, 0.0) } else { Vec2::new(3.0, 0.0) };
            let r = x - c;
            Ok(r / r.norm_squared())
        })
        .unwrap();
    assert!(radial > 0.1, "{radial}");
}

#[test]
fn tangency_of_a_compactly_supported_curl() {
    // u = grad^perp of a bump overlapping the test band of the first disk
    let d = decomposition(vec![0.0, 0.0], &VortexBlobs::empty(0.05));
    let q = TangencyQuadrature::new(d.approximation(), &d.maps, &d.cutoffs, 512, 48).unwrap();
    let r = q
        .residual(|x| {
            let d = x - Vec2::new(-3.0, 2.3);
            let s = d.norm_squared();
            if s >= 1.0 {
                return Ok(Vec2::zeros());
            }
            let g = -(-1.0 / (1.0 - s)).exp() / (1.0 - s).powi(2) * 2.0;
            Ok(Vec2::new(-g * d.y, g * d.x))
        })
        .unwrap();
    assert!(r < 1e-6, "{r}");
}

#[test]
fn records_and_conservation_report() {
    let b = blobs();
    let d = decomposition(vec![0.3, -0.8], &b);
    let mut state = SimulationState::exterior(b, d, 0.05).unwrap();
    let diag = Diagnostician::new(&state, &DiagnosticsConfig::default()).unwrap();
    let traj = integrate(&mut state, 0.2, Cadence { snapshots: 1, diagnostics: 2 }, Some(&diag), |_| Ok(())).unwrap();
    assert_eq!(traj.diagnostics.len(), 3);
    let table = conservation_report(&traj).unwrap();
    assert_eq!(table.get("signed_mass").unwrap().max_abs_drift, 0.0);
    assert_eq!(table.get("l1_mass").unwrap().max_abs_drift, 0.0);
    for i in 1..=2 {
        assert!(table.get(&format!("circ_{i}")).unwrap().max_abs_drift < 1e-6);
    }
    let r = &traj.diagnostics[0];
    assert!((r.signed_mass - 1.3).abs() < 1e-12);
    assert!((r.l1_mass - 2.1).abs() < 1e-12);
    assert!(r.tangency_residual < 1e-3);
    let mut csv = Vec::new();
    write_diagnostics_csv(&traj.diagnostics, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("t,l1_mass,signed_mass,l2_norm,linf_norm,circ_1,circ_2,alpha_1,alpha_2,tangency\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn report_needs_two_records() {
    let b = blobs();
    let traj = crate::transport::Trajectory::new(&b);
    assert!(matches!(conservation_report(&traj), Err(Error::NotEnoughRecords { needed: 2, got: 0 })));
}

#[test]
fn momentum_residual_of_rest_is_zero() {
    let b = VortexBlobs::empty(0.05);
    let mut state = SimulationState::free_plane(b, 0.1).unwrap();
    let traj = integrate(&mut state, 0.5, Cadence { snapshots: 1, diagnostics: 1 }, None, |_| Ok(())).unwrap();
    let phi = TestField { center: [0.0, 0.0], radius: 0.5, time: Some([0.0, 0.5]) };
    assert_eq!(momentum_residual(&traj, None, &phi, 0.02).unwrap(), 0.0);
}

#[test]
fn momentum_residual_of_a_steady_circulation_is_small() {
    // pure circulation around a disk is a steady Euler flow
    let disk = SingularObstacle::disk(0, Vec2::zeros(), 1.0).unwrap();
    let map = ExteriorMap::disk(Vec2::zeros(), 1.0, 512).unwrap().with_owner(0);
    let approx = DomainApproximation::from_curves(vec![map.boundary().clone()], 0).unwrap();
    let d = StreamDecomposition::new(&[disk], approx, vec![map], vec![2.0 * PI], &DecompositionOptions::default()).unwrap();
    let tracer = VortexBlobs::new(vec![Vec2::new(0.0, 3.0)], vec![0.0], 0.05).unwrap();
    let mut state = SimulationState::exterior(tracer, d.clone(), 0.05).unwrap();
    let traj = integrate(&mut state, 1.0, Cadence { snapshots: 1, diagnostics: 1 }, None, |_| Ok(())).unwrap();
    let phi = TestField { center: [2.0, 0.0], radius: 0.6, time: Some([0.0, 1.0]) };
    let r = momentum_residual(&traj, Some(&d), &phi, 0.01).unwrap();
    assert!(r < 1e-4, "{r}");
    let inside = TestField { center: [1.2, 0.0], radius: 0.6, time: None };
    assert!(matches!(momentum_residual(&traj, Some(&d), &inside, 0.01), Err(Error::SupportIntersectsObstacle { obstacle: 0 })));
}

#[test]
fn momentum_residual_detects_a_wrong_velocity() {
    // a pair moving with twice its true speed violates the momentum balance
    let b = VortexBlobs::new(vec![Vec2::new(0.0, 0.5), Vec2::new(0.0, -0.5)], vec![2.0 * PI, -2.0 * PI], 0.3).unwrap();
    let v = crate::field::fullplane_biot_savart(&VortexBlobs::new(vec![b.positions[1]], vec![b.strengths[1]], 0.3).unwrap(), b.positions[0]);
    let make = |factor: f64| {
        let mut t = crate::transport::Trajectory::new(&b);
        for k in 0..=20 {
            let time = k as f64 * 0.05;
            let shift = v * factor * time;
            t.snapshots.push(crate::transport::Snapshot { t: time, positions: b.positions.iter().map(|p| p + shift).collect() });
        }
        t
    };
    let phi = TestField { center: [0.5 * v.x, 0.6], radius: 1.5, time: Some([0.0, 1.0]) };
    let exact = momentum_residual(&make(1.0), None, &phi, 0.02).unwrap();
    let wrong = momentum_residual(&make(2.0), None, &phi, 0.02).unwrap();
    assert!(wrong > 5.0 * exact, "{exact} {wrong}");
}
