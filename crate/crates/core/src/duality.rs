//! Metric duality: polarity with respect to the unit isotropic sphere `2z = x^2 + y^2`.

use crate::error::{Error, Result};
use crate::families::{FamilySpec, EPS_SING};
use crate::geometry::{
    fd_param_jet, height_jet_from_param, isotropic_curvatures, isotropic_norm, ParamJet2, Point3, FD_STEP, K_EPS,
};

/// The plane `z = p1 x + p2 y - p3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonIsoPlane {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl NonIsoPlane {
    pub fn height(&self, x: f64, y: f64) -> f64 {
        self.p1 * x + self.p2 * y - self.p3
    }
}

pub fn dual_point(p: Point3) -> NonIsoPlane {
    NonIsoPlane { p1: p.x, p2: p.y, p3: p.z }
}

pub fn dual_plane(e: NonIsoPlane) -> Point3 {
    Point3::new(e.p1, e.p2, e.p3)
}

/// Slope difference of the two planes in an isotropic section orthogonal to
/// their common line. Parallel planes meet at angle zero.
pub fn isotropic_angle(e1: NonIsoPlane, e2: NonIsoPlane) -> f64 {
    let (g1, g2) = (e1.p1 - e2.p1, e1.p2 - e2.p2);
    let n = g1.hypot(g2);
    if n == 0.0 {
        return 0.0;
    }
    // section direction is the gradient difference itself
    let (d1, d2) = (g1 / n, g2 / n);
    (e1.p1 * d1 + e1.p2 * d2) - (e2.p1 * d1 + e2.p2 * d2)
}

/// Top-view distance.
pub fn isotropic_distance(p: Point3, q: Point3) -> f64 {
    isotropic_norm(p - q)
}

/// Point dual to the tangent plane of the surface jet.
pub fn dual_surface_point(j: &ParamJet2) -> Result<Point3> {
    let h = height_jet_from_param(j)?;
    Ok(Point3::new(h.fx, h.fy, h.x0 * h.fx + h.y0 * h.fy - h.f))
}

/// The dual map `(u, v) -> dual point of the tangent plane at r(u, v)`.
pub fn dual_chart(spec: &FamilySpec, u: f64, v: f64) -> Option<Point3> {
    spec.chart(u, v).ok().and_then(|j| dual_surface_point(&j).ok())
}

/// Finite-difference jet of the dual surface at `(u, v)`.
pub fn dual_jet(spec: &FamilySpec, u: f64, v: f64, h: f64) -> Result<ParamJet2> {
    fd_param_jet(|u, v| dual_chart(spec, u, v), u, v, h)
}

/// Uniform `nu x nv` grid nodes of `spec.domain` at least `EPS_SING` from every
/// singular locus.
pub fn grid_nodes(spec: &FamilySpec, nu: usize, nv: usize) -> Result<Vec<(f64, f64)>> {
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidGrid { nu, nv });
    }
    let d = spec.domain;
    let nodes: Vec<(f64, f64)> = (0..nu)
        .flat_map(|i| (0..nv).map(move |k| (d.u_at(i, nu), d.v_at(k, nv))))
        .filter(|&(u, v)| spec.locus_distance(u, v) >= EPS_SING)
        .collect();
    if nodes.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok(nodes)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualReport {
    pub nodes: usize,
    /// max `|K* K - 1|`
    pub k_residual: f64,
    /// max `|H* - H/K| / max(1, |H/K|)`
    pub h_residual: f64,
    /// max `|H*^2/K* - H^2/K| / max(1, |H^2/K|)`
    pub ratio_residual: f64,
    /// max distance between a point and the dual of its dual's tangent plane,
    /// relative to `max(1, |r|)`
    pub involution_error: f64,
    /// nodes where the dual top-view Jacobian has the minority sign
    pub orientation_flips: usize,
}

/// Dual curvatures from fd jets of the dual map, compared with `H* = H/K`, `K* = 1/K`.
///
/// Fails with `DegenerateK` if some node is parabolic: the dual is singular there.
pub fn dual_curvature_check(spec: &FamilySpec, nu: usize, nv: usize) -> Result<DualReport> {
    let nodes = grid_nodes(spec, nu, nv)?;
    let mut rep = DualReport { nodes: nodes.len(), ..DualReport::default() };
    let (mut pos, mut neg) = (0usize, 0usize);
    for (u, v) in nodes {
        let j = spec.chart(u, v)?;
        let c = isotropic_curvatures(&height_jet_from_param(&j)?);
        if c.k.abs() < K_EPS {
            return Err(Error::DegenerateK { k: c.k });
        }
        let dj = dual_jet(spec, u, v, FD_STEP)?;
        let det = dj.det_j();
        if det > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
        let dc = isotropic_curvatures(&height_jet_from_param(&dj)?);
        rep.k_residual = rep.k_residual.max((dc.k * c.k - 1.0).abs());
        let hk = c.h / c.k;
        rep.h_residual = rep.h_residual.max((dc.h - hk).abs() / hk.abs().max(1.0));
        let q = c.h * c.h / c.k;
        rep.ratio_residual = rep.ratio_residual.max((dc.h * dc.h / dc.k - q).abs() / q.abs().max(1.0));
        let back = dual_surface_point(&dj)?;
        rep.involution_error = rep.involution_error.max((back - j.r).norm() / j.r.norm().max(1.0));
    }
    rep.orientation_flips = pos.min(neg);
    Ok(rep)
}

/// Largest distance of the points from their total-least-squares line.
pub fn line_fit_deviation(pts: &[[f64; 2]]) -> f64 {
    if pts.len() < 3 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p[0] / n, b + p[1] / n));
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in pts {
        let (dx, dy) = (p[0] - mx, p[1] - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // the smaller eigenvector of the scatter matrix is the line normal
    let th = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (nx, ny) = (-th.sin(), th.cos());
    pts.iter().map(|p| ((p[0] - mx) * nx + (p[1] - my) * ny).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NetReport {
    /// max straightness deviation of isoline top views, relative to `max(1, extent)`
    pub straightness: f64,
    /// max `|II(r_u, r_v)| / max(1, |II(r_u, r_u)|, |II(r_v, r_v)|)`
    pub conjugacy: f64,
    pub isolines: usize,
}

/// Checks that the parameter lines form a conjugate net of isotropic geodesics.
pub fn conjugate_geodesic_net_check(spec: &FamilySpec, nu: usize, nv: usize) -> Result<NetReport> {
    if nu < 3 || nv < 3 {
        return Err(Error::InvalidGrid { nu, nv });
    }
    let d = spec.domain;
    let mut rep = NetReport::default();
    let mut grid = vec![vec![None; nv]; nu];
    for (i, row) in grid.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            let (u, v) = (d.u_at(i, nu), d.v_at(k, nv));
            if spec.locus_distance(u, v) < EPS_SING {
                continue;
            }
            let j = spec.chart(u, v)?;
            let h = height_jet_from_param(&j)?;
            let s = |p: Point3| p.z - h.fx * p.x - h.fy * p.y;
            let scale = 1f64.max(s(j.ruu).abs()).max(s(j.rvv).abs());
            rep.conjugacy = rep.conjugacy.max(s(j.ruv).abs() / scale);
            *cell = Some([j.r.x, j.r.y]);
        }
    }
    let mut line = |pts: Vec<[f64; 2]>| {
        if pts.len() >= 3 {
            let ext = pts.iter().fold(1f64, |m, p| m.max(p[0].abs()).max(p[1].abs()));
            rep.straightness = rep.straightness.max(line_fit_deviation(&pts) / ext);
            rep.isolines += 1;
        }
    };
    for row in &grid {
        line(row.iter().flatten().copied().collect());
    }
    for k in 0..nv {
        line(grid.iter().filter_map(|row| row[k]).collect());
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{apply_similarity, evaluate, FamilyId, G8Element};

    #[test]
    fn points_and_planes() {
        let e = dual_point(Point3::new(1.0, 2.0, 3.0));
        assert_eq!(e, NonIsoPlane { p1: 1.0, p2: 2.0, p3: 3.0 });
        assert_eq!(e.height(1.0, 1.0), 0.0);
        assert_eq!(dual_plane(dual_point(Point3::ZERO)), Point3::ZERO);
        let f = dual_point(Point3::new(1.0, 2.0, 5.0));
        assert_eq!((e.p1, e.p2), (f.p1, f.p2));
        assert_eq!(isotropic_angle(e, f), 0.0);
    }

    #[test]
    fn angle_equals_distance() {
        let (p, q) = (Point3::new(3.0, 4.0, 0.0), Point3::new(0.0, 0.0, 9.0));
        assert_eq!(isotropic_distance(p, q), 5.0);
        assert_eq!(isotropic_angle(dual_point(p), dual_point(q)), 5.0);
        let (p, q) = (Point3::new(1.0, 0.0, 0.0), Point3::new(2.0, 0.0, 0.0));
        assert_eq!(isotropic_angle(dual_point(p), dual_point(q)).abs(), 1.0);
        assert_eq!(isotropic_distance(Point3::new(1.0, 1.0, 0.0), Point3::new(1.0, 1.0, 7.0)), 0.0);
    }

    #[test]
    fn paraboloid_dual_is_a_paraboloid() {
        let s = FamilySpec::with_a(FamilyId::Paraboloid, 2.0).unwrap();
        let (x, y) = (0.3, -0.7);
        let j = evaluate(&s, x, y).unwrap();
        let d = dual_surface_point(&j).unwrap();
        // z = x^2 + 2 y^2
        assert!((d - Point3::new(2.0 * x, 4.0 * y, x * x + 2.0 * y * y)).norm() < 1e-14);
        assert!((d.z - (d.x * d.x / 4.0 + d.y * d.y / 8.0)).abs() < 1e-14);
    }

    #[test]
    fn unit_sphere_is_self_dual() {
        let s = FamilySpec::with_a(FamilyId::Paraboloid, 1.0).unwrap();
        // graph 2z = x^2 + y^2 is the paraboloid scaled by 1/2
        let half = G8Element { c3: 0.5, ..G8Element::IDENTITY };
        let j = apply_similarity(&half, &evaluate(&s, 0.4, 0.9).unwrap()).unwrap();
        let d = dual_surface_point(&j).unwrap();
        assert!((d - j.r).norm() < 1e-14, "{d:?} vs {:?}", j.r);
    }

    #[test]
    fn vertical_tangent_plane_is_refused() {
        let j = ParamJet2::first_order(Point3::ZERO, Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 0.0, 1.0));
        assert!(matches!(dual_surface_point(&j), Err(Error::NonAdmissiblePoint { .. })));
    }

    #[test]
    fn dual_curvature_relations() {
        let s = FamilySpec::with_a(FamilyId::TransParaboloid, 2.0).unwrap();
        let r = dual_curvature_check(&s, 8, 8).unwrap();
        assert!(r.k_residual < 1e-6 && r.h_residual < 1e-6, "{r:?}");
        assert_eq!(r.orientation_flips, 0);

        let s = FamilySpec::with_a(FamilyId::Helicoid, -1.0).unwrap();
        let r = dual_curvature_check(&s, 8, 8).unwrap();
        assert!(r.h_residual < 1e-6, "{r:?}");

        let s = FamilySpec::with_a(FamilyId::SpiralRuled, -2.0).unwrap();
        let r = dual_curvature_check(&s, 8, 8).unwrap();
        assert!(r.k_residual < 1e-4 && r.ratio_residual < 1e-4, "{r:?}");
        assert!(r.involution_error < 1e-6, "{r:?}");
    }

    #[test]
    fn parabolic_grid_is_refused() {
        let s = FamilySpec::with_a(FamilyId::TransParaboloid, 1e-14).unwrap();
        assert!(matches!(dual_curvature_check(&s, 4, 4), Err(Error::DegenerateK { .. })));
    }

    #[test]
    fn dual_translational_nets() {
        for s in [
            FamilySpec::with_a(FamilyId::DualTransMinimal, -1.0).unwrap(),
            FamilySpec::with_a(FamilyId::DualTransIsoNoniso, 2.0).unwrap(),
            FamilySpec::with_a(FamilyId::TransParaboloid, 2.0).unwrap(),
        ] {
            let r = conjugate_geodesic_net_check(&s, 20, 20).unwrap();
            assert!(r.straightness <= 1e-8 && r.conjugacy <= 1e-8, "{:?}: {r:?}", s.id);
            assert_eq!(r.isolines, 40);
        }
        // the primal translational surfaces are conjugate but not geodesic
        let s = FamilySpec::with_a(FamilyId::TransNonisoNoniso, -1.0).unwrap();
        let r = conjugate_geodesic_net_check(&s, 20, 20).unwrap();
        assert!(r.conjugacy <= 1e-8 && r.straightness > 1e-3, "{r:?}");
    }

    #[test]
    fn line_fit() {
        let pts: Vec<[f64; 2]> = (0..5).map(|k| [k as f64, 2.0 * k as f64 + 1.0]).collect();
        assert!(line_fit_deviation(&pts) < 1e-14);
        assert!((line_fit_deviation(&[[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]]) - 2.0 / 3.0).abs() < 1e-14);
    }
}
