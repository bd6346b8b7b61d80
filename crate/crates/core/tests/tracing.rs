//! Laws satisfied by traced characteristic and principal curves.

use isocrpc::curves::{
    angle_law_residual, included_angle_topview, intersect_traces, sphere_membership, trace_direction_field, CurveTrace,
    TraceKind,
};
use isocrpc::families::{FamilyId, FamilySpec};
use isocrpc::geometry::{height_jet_from_param, isotropic_curvatures};
use isocrpc::spheres::curvature_center;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PLUS: TraceKind = TraceKind::CharacteristicPlus;
const MINUS: TraceKind = TraceKind::CharacteristicMinus;

fn polar(c: &CurveTrace) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for s in &c.samples {
        let (r, mut phi) = (s.point.x.hypot(s.point.y), s.point.y.atan2(s.point.x));
        if let Some(&(_, prev)) = out.last() {
            phi += ((prev - phi) / std::f64::consts::TAU).round() * std::f64::consts::TAU;
        }
        out.push((r, phi));
    }
    out
}

#[test]
fn rotational_characteristics_are_log_spirals() {
    for a in [-2.0, -0.5, 0.5, 2.0] {
        let s = FamilySpec::with_a(FamilyId::RotationalPower1, a).unwrap();
        for kind in [PLUS, MINUS] {
            let c = trace_direction_field(&s, (1.0, 0.3), kind, 4000, 1e-3).unwrap();
            let pts = polar(&c);
            let (r0, phi0) = pts[0];
            let end = pts.iter().position(|p| (p.1 - phi0).abs() >= 1.0).expect("turns by a radian");
            let slope = (pts[end].0 / r0).ln() / (pts[end].1 - phi0);
            assert!((slope.abs() - 1.0 / a.abs().sqrt()).abs() < 1e-6, "a={a} {kind}: {slope}");
            for &(r, phi) in &pts[..=end] {
                let predicted = r0 * (slope.signum() * (phi - phi0) / a.abs().sqrt()).exp();
                assert!((r - predicted).abs() / r <= 1e-6, "a={a} {kind}");
            }
        }
    }
}

/// A `kind` trace running `steps` steps either side of `center`.
fn crossing_trace(s: &FamilySpec, center: (f64, f64), kind: TraceKind, steps: usize, dt: f64) -> Option<CurveTrace> {
    let behind = trace_direction_field(s, center, kind, steps, -dt).ok()?;
    let ahead = trace_direction_field(s, center, kind, steps, dt).ok()?;
    if behind.stop.is_some() || ahead.stop.is_some() {
        return None;
    }
    let mut samples: Vec<_> = behind.samples.into_iter().rev().collect();
    samples.extend(ahead.samples.into_iter().skip(1));
    Some(CurveTrace { samples, ..ahead })
}

#[test]
fn characteristic_pairs_meet_at_the_predicted_angle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for id in FamilyId::ALL.into_iter().filter(|id| !id.is_euclidean()) {
        for a in [-2.0, 2.0] {
            let Ok(s) = FamilySpec::with_a(id, a) else { continue };
            let mut pairs = 0;
            for _ in 0..200 {
                if pairs == 5 {
                    break;
                }
                let (u, v) = s.domain.point(rng.gen_range(0.2..0.8), rng.gen_range(0.2..0.8));
                let (Some(c1), Some(c2)) = (crossing_trace(&s, (u, v), PLUS, 60, 1e-3), crossing_trace(&s, (u, v), MINUS, 60, 1e-3))
                else {
                    continue;
                };
                let gamma = included_angle_topview(&c1, &c2).unwrap_or_else(|e| panic!("{id} a={a} ({u}, {v}): {e}"));
                let r = angle_law_residual(gamma, s.expected_ratio());
                assert!(r <= 1e-6, "{id} a={a} at ({u}, {v}): gamma={gamma} residual={r:e}");
                pairs += 1;
            }
            assert_eq!(pairs, 5, "{id} a={a}");
        }
    }
}

#[test]
fn intersection_lies_on_both_traces() {
    let s = FamilySpec::with_a(FamilyId::Paraboloid, 2.0).unwrap();
    let c1 = crossing_trace(&s, (0.2, 0.1), PLUS, 100, 2e-3).unwrap();
    let c2 = crossing_trace(&s, (0.2, 0.1), MINUS, 100, 2e-3).unwrap();
    let x = intersect_traces(&c1, &c2).unwrap();
    // both traces pass through the seed at t = 0
    assert!((x.point[0] - 0.2).abs() < 1e-9 && (x.point[1] - 0.1).abs() < 1e-9);
    assert!(x.t1.abs() < 1e-9 && x.t2.abs() < 1e-9, "{x:?}");
}

#[test]
fn rk4_converges_at_fourth_order() {
    let s = FamilySpec::with_a(FamilyId::RotationalPower1, 2.0).unwrap();
    let end = |dt: f64| {
        let n = (0.8 / dt).round() as usize;
        let c = trace_direction_field(&s, (1.0, 0.0), PLUS, n, dt).unwrap();
        let p = c.samples.last().unwrap().point;
        [p.x, p.y]
    };
    let exact = end(0.1 / 64.0);
    let err = |dt: f64| {
        let p = end(dt);
        (p[0] - exact[0]).hypot(p[1] - exact[1])
    };
    let (e1, e2) = (err(0.1), err(0.05));
    assert!(e1 / e2 > 12.0, "{e1:e} {e2:e}");
}

#[test]
fn principal_lines_of_the_translational_paraboloid_are_straight() {
    let s = FamilySpec::with_a(FamilyId::TransParaboloid, 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let seed = (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        for kind in [TraceKind::Principal1, TraceKind::Principal2] {
            let c = trace_direction_field(&s, seed, kind, 300, 1e-3).unwrap();
            let p0 = c.samples[0].point;
            // z = 2 x^2 + y^2: k1 = 4 along x, k2 = 2 along y
            let (along_x, kappa) = if kind == TraceKind::Principal1 { (true, 4.0) } else { (false, 2.0) };
            let mut center0 = None;
            for smp in &c.samples {
                let off = if along_x { smp.point.y - p0.y } else { smp.point.x - p0.x };
                assert!(off.abs() <= 1e-12);
                let h = height_jet_from_param(&s.chart(smp.u, smp.v).unwrap()).unwrap();
                assert!((isotropic_curvatures(&h).k1 - 4.0).abs() < 1e-12);
                let cc = curvature_center(&h, kappa).unwrap();
                let c0 = *center0.get_or_insert(cc);
                // the center moves with the line but keeps its offset from the curve
                let drift = if along_x { cc.y - c0.y } else { cc.x - c0.x };
                assert!(drift.abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn rotational_parallels_stay_circles() {
    let s = FamilySpec::with_a(FamilyId::RotationalPower2, 2.0).unwrap();
    let h = height_jet_from_param(&s.chart(1.5, 0.0).unwrap()).unwrap();
    // k_tan = h'/r exceeds k_rad = h'' here, so the first field runs along the parallel
    assert!(isotropic_curvatures(&h).d1.t1.abs() < 1e-12);
    let c = trace_direction_field(&s, (1.5, 0.0), TraceKind::Principal1, 2000, 1e-3).unwrap();
    for smp in &c.samples {
        assert!((smp.point.x.hypot(smp.point.y) - 1.5).abs() < 1e-9);
    }
}

#[test]
fn spiral_characteristics_lie_on_a_sphere() {
    for a in [-2.0, -0.5, -3.0] {
        let s = FamilySpec::with_a(FamilyId::SpiralRuled, a).unwrap();
        for kind in [PLUS, MINUS] {
            let c = trace_direction_field(&s, (1.0, 0.0), kind, 800, 1e-3).unwrap();
            // skip the radial ruling
            if c.samples[0].top_dir.t2.abs() < 1e-6 {
                continue;
            }
            let fit = sphere_membership(&c).unwrap();
            assert!(fit.max_residual <= 1e-8, "a={a}");
            assert!((fit.sphere.a - 2.0).abs() <= 1e-6);
            for x in [fit.sphere.b, fit.sphere.c, fit.sphere.d] {
                assert!(x.abs() <= 1e-6);
            }
        }
    }
}
