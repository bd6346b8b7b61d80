//! Points, 2-jets and curvature in isotropic 3-space.
//!
//! The isotropic metric only sees the top view `(x, y)`. An admissible surface
//! is locally a graph `z = f(x, y)` and all of its isotropic curvature lives in
//! the Hessian of `f`: the principal curvatures are the Hessian eigenvalues,
//! `H = (fxx + fyy) / 2` and `K = fxx fyy - fxy^2`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Relative floor for the top-view Jacobian, scaled by `|ru| |rv|`.
pub const JACOBIAN_EPS: f64 = 1e-12;
/// Below this `|K|` a Gaussian curvature counts as zero.
pub const K_EPS: f64 = 1e-12;
/// Two principal curvatures closer than this (relative) mark an umbilic.
pub const UMBILIC_TOL: f64 = 1e-10;
/// Default finite-difference step in model units.
pub const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ZERO: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Euclidean length, used only for scale estimates.
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn top(self) -> [f64; 2] {
        [self.x, self.y]
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// The isotropic semi-norm `sqrt(x^2 + y^2)`.
pub fn isotropic_norm(v: Point3) -> f64 {
    v.x.hypot(v.y)
}

/// A unit vector of the top view.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopDir {
    pub t1: f64,
    pub t2: f64,
}

impl TopDir {
    /// Normalizes `(t1, t2)`; `None` for the zero vector.
    pub fn new(t1: f64, t2: f64) -> Option<Self> {
        let n = t1.hypot(t2);
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        Some(TopDir { t1: t1 / n, t2: t2 / n })
    }

    pub fn from_angle(phi: f64) -> Self {
        TopDir { t1: phi.cos(), t2: phi.sin() }
    }

    pub fn dot(self, o: TopDir) -> f64 {
        self.t1 * o.t1 + self.t2 * o.t2
    }

    /// Signed `self x o`.
    pub fn cross(self, o: TopDir) -> f64 {
        self.t1 * o.t2 - self.t2 * o.t1
    }

    pub fn neg(self) -> TopDir {
        TopDir { t1: -self.t1, t2: -self.t2 }
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> TopDir {
        TopDir { t1: -self.t2, t2: self.t1 }
    }

    /// Flips the sign so the first nonzero component is positive.
    pub fn canonical(self) -> TopDir {
        if self.t1 < 0.0 || (self.t1 == 0.0 && self.t2 < 0.0) {
            self.neg()
        } else {
            self
        }
    }
}

/// Value and partials up to order two of a height function at `(x0, y0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2Height {
    pub x0: f64,
    pub y0: f64,
    pub f: f64,
    pub fx: f64,
    pub fy: f64,
    pub fxx: f64,
    pub fxy: f64,
    pub fyy: f64,
}

impl Jet2Height {
    /// Jet with only second partials, based at the origin.
    pub fn hessian(fxx: f64, fxy: f64, fyy: f64) -> Self {
        Jet2Height { x0: 0.0, y0: 0.0, f: 0.0, fx: 0.0, fy: 0.0, fxx, fxy, fyy }
    }

    pub fn base_point(&self) -> Point3 {
        Point3::new(self.x0, self.y0, self.f)
    }

    /// Second fundamental form `t1^T Hess t2` on top-view vectors.
    pub fn second_form(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        a[0] * (self.fxx * b[0] + self.fxy * b[1]) + a[1] * (self.fxy * b[0] + self.fyy * b[1])
    }

    /// Isotropic normal curvature in the unit top-view direction `t`.
    pub fn normal_curvature(&self, t: TopDir) -> f64 {
        self.second_form([t.t1, t.t2], [t.t1, t.t2])
    }

    /// The largest absolute first or second partial, a scale for relative errors.
    pub fn derivative_scale(&self) -> f64 {
        [self.fx, self.fy, self.fxx, self.fxy, self.fyy]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Position and partials of a parametric surface at `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamJet2 {
    pub r: Point3,
    pub ru: Point3,
    pub rv: Point3,
    pub ruu: Point3,
    pub ruv: Point3,
    pub rvv: Point3,
}

impl ParamJet2 {
    /// Top-view Jacobian determinant `x_u y_v - x_v y_u`.
    pub fn det_j(&self) -> f64 {
        self.ru.x * self.rv.y - self.rv.x * self.ru.y
    }

    /// Whether the tangent plane is non-isotropic up to [`JACOBIAN_EPS`].
    pub fn is_admissible(&self) -> bool {
        self.det_j().abs() > JACOBIAN_EPS * self.ru.norm() * self.rv.norm()
    }

    /// Solves `J (du, dv) = t` for the parameter velocity with top-view velocity `t`.
    pub fn lift(&self, t: [f64; 2]) -> Result<[f64; 2]> {
        if !self.is_admissible() {
            return Err(Error::NonAdmissiblePoint { det: self.det_j() });
        }
        let d = self.det_j();
        Ok([
            (self.rv.y * t[0] - self.rv.x * t[1]) / d,
            (-self.ru.y * t[0] + self.ru.x * t[1]) / d,
        ])
    }

    /// The same jet with first derivatives only, as fed to first-order maps.
    pub fn first_order(r: Point3, ru: Point3, rv: Point3) -> Self {
        ParamJet2 { r, ru, rv, ruu: Point3::ZERO, ruv: Point3::ZERO, rvv: Point3::ZERO }
    }
}

/// Converts a parametric 2-jet into the 2-jet of the height function `z = f(x, y)`.
///
/// With `M = [[x_u, y_u], [x_v, y_v]]` the gradient solves `M grad f = (z_u, z_v)`
/// and the Hessian is `M^-1 S M^-T`, where `S` holds the second partials of `z`
/// with the gradient terms removed (the second fundamental form in `(u, v)`).
pub fn height_jet_from_param(j: &ParamJet2) -> Result<Jet2Height> {
    if !j.is_admissible() {
        return Err(Error::NonAdmissiblePoint { det: j.det_j() });
    }
    let d = j.det_j();
    let (xu, yu, xv, yv) = (j.ru.x, j.ru.y, j.rv.x, j.rv.y);
    // M^-1 = [[yv, -yu], [-xv, xu]] / d
    let inv = [[yv / d, -yu / d], [-xv / d, xu / d]];
    let fx = inv[0][0] * j.ru.z + inv[0][1] * j.rv.z;
    let fy = inv[1][0] * j.ru.z + inv[1][1] * j.rv.z;
    let s = |p: Point3| p.z - fx * p.x - fy * p.y;
    let s_uu = s(j.ruu);
    let s_uv = s(j.ruv);
    let s_vv = s(j.rvv);
    // Hess = inv * S * inv^T
    let row = |i: usize| {
        [
            inv[i][0] * s_uu + inv[i][1] * s_uv,
            inv[i][0] * s_uv + inv[i][1] * s_vv,
        ]
    };
    let r0 = row(0);
    let r1 = row(1);
    let fxx = r0[0] * inv[0][0] + r0[1] * inv[0][1];
    let fxy = r0[0] * inv[1][0] + r0[1] * inv[1][1];
    let fyy = r1[0] * inv[1][0] + r1[1] * inv[1][1];
    Ok(Jet2Height { x0: j.r.x, y0: j.r.y, f: j.r.z, fx, fy, fxx, fxy, fyy })
}

/// Isotropic mean, Gaussian and principal curvatures with principal directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoCurvature {
    pub h: f64,
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
    pub d1: TopDir,
    pub d2: TopDir,
    /// Set when `k1` and `k2` agree to [`UMBILIC_TOL`]; `d1, d2` are then the axes.
    pub umbilic: bool,
}

impl IsoCurvature {
    /// `H^2 / K`, the quantity fixed by a constant principal-curvature ratio.
    pub fn ratio_invariant(&self) -> Result<f64> {
        if self.k.abs() < K_EPS {
            return Err(Error::DegenerateK { k: self.k });
        }
        Ok(self.h * self.h / self.k)
    }
}

pub fn isotropic_curvatures(j: &Jet2Height) -> IsoCurvature {
    let (p, q, r) = (j.fxx, j.fxy, j.fyy);
    let h = 0.5 * (p + r);
    let k = p * r - q * q;
    let half = 0.5 * (p - r);
    let disc = half.hypot(q);
    let k1 = h + disc;
    let k2 = h - disc;
    let umbilic = (k1 - k2).abs() <= UMBILIC_TOL * k1.abs().max(k2.abs()).max(1.0);
    let (d1, d2) = if umbilic {
        (TopDir { t1: 1.0, t2: 0.0 }, TopDir { t1: 0.0, t2: 1.0 })
    } else {
        // Use the larger of the two algebraically equivalent eigenvector forms.
        let raw = if half >= 0.0 { (disc + half, q) } else { (q, disc - half) };
        let d1 = TopDir::new(raw.0, raw.1).expect("nonzero eigenvector").canonical();
        (d1, d1.perp().canonical())
    };
    IsoCurvature { h, k, k1, k2, d1, d2, umbilic }
}

/// Euclidean curvatures of the graph surface, `(H_e, K_e, k1_e, k2_e)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanCurvature {
    pub h: f64,
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
}

pub fn euclidean_curvatures(j: &Jet2Height) -> EuclideanCurvature {
    let w = 1.0 + j.fx * j.fx + j.fy * j.fy;
    let k = (j.fxx * j.fyy - j.fxy * j.fxy) / (w * w);
    let h = ((1.0 + j.fy * j.fy) * j.fxx - 2.0 * j.fx * j.fy * j.fxy + (1.0 + j.fx * j.fx) * j.fyy)
        / (2.0 * w.powf(1.5));
    let disc = (h * h - k).max(0.0).sqrt();
    EuclideanCurvature { h, k, k1: h + disc, k2: h - disc }
}

/// Residual `H^2/K - (a+1)^2/(4a)` of the constant-ratio condition.
pub fn crpc_residual(j: &Jet2Height, a: f64) -> Result<f64> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidParams(format!("ratio a must be nonzero and finite, got {a}")));
    }
    Ok(isotropic_curvatures(j).ratio_invariant()? - ratio_target(a))
}

/// `(a+1)^2 / (4a)`.
pub fn ratio_target(a: f64) -> f64 {
    (a + 1.0) * (a + 1.0) / (4.0 * a)
}

/// The two characteristic directions `(t+, t-)`.
///
/// In the principal frame they are `(cos phi, +-sin phi)`: conjugate and
/// mirror-symmetric when `K > 0` (`tan^2 phi = k1/k2`), asymptotic when `K < 0`
/// (`tan^2 phi = -k1/k2`).
pub fn characteristic_directions(j: &Jet2Height) -> Result<(TopDir, TopDir)> {
    let c = isotropic_curvatures(j);
    if c.k.abs() < K_EPS {
        return Err(Error::DegenerateK { k: c.k });
    }
    if c.umbilic {
        return Err(Error::Umbilic);
    }
    let tan2 = (c.k1 / c.k2).abs();
    let phi = tan2.sqrt().atan();
    let (cp, sp) = (phi.cos(), phi.sin());
    let comb = |s: f64| {
        TopDir::new(cp * c.d1.t1 + s * sp * c.d2.t1, cp * c.d1.t2 + s * sp * c.d2.t2)
            .expect("unit combination")
    };
    Ok((comb(1.0), comb(-1.0)))
}

/// Central-difference 2-jet of a height field on the 9-point stencil of step `h`.
///
/// The callable returns `None` where the field is undefined.
pub fn fd_jet<F>(f: F, x0: f64, y0: f64, h: f64) -> Result<Jet2Height>
where
    F: Fn(f64, f64) -> Option<f64>,
{
    let at = |i: i32, j: i32| -> Result<f64> {
        match f(x0 + i as f64 * h, y0 + j as f64 * h) {
            Some(z) if z.is_finite() => Ok(z),
            _ => Err(Error::StencilOutOfDomain),
        }
    };
    let c = at(0, 0)?;
    let (e, w, n, s) = (at(1, 0)?, at(-1, 0)?, at(0, 1)?, at(0, -1)?);
    let (ne, nw, se, sw) = (at(1, 1)?, at(-1, 1)?, at(1, -1)?, at(-1, -1)?);
    Ok(Jet2Height {
        x0,
        y0,
        f: c,
        fx: (e - w) / (2.0 * h),
        fy: (n - s) / (2.0 * h),
        fxx: (e - 2.0 * c + w) / (h * h),
        fxy: (ne - nw - se + sw) / (4.0 * h * h),
        fyy: (n - 2.0 * c + s) / (h * h),
    })
}

/// Central-difference parametric 2-jet of `r(u, v)`, second order in `h`.
pub fn fd_param_jet<F>(r: F, u: f64, v: f64, h: f64) -> Result<ParamJet2>
where
    F: Fn(f64, f64) -> Option<Point3>,
{
    let at = |i: i32, j: i32| -> Result<Point3> {
        match r(u + i as f64 * h, v + j as f64 * h) {
            Some(p) if p.is_finite() => Ok(p),
            _ => Err(Error::StencilOutOfDomain),
        }
    };
    let c = at(0, 0)?;
    let (e, w, n, s) = (at(1, 0)?, at(-1, 0)?, at(0, 1)?, at(0, -1)?);
    let (ne, nw, se, sw) = (at(1, 1)?, at(-1, 1)?, at(1, -1)?, at(-1, -1)?);
    let h2 = h * h;
    Ok(ParamJet2 {
        r: c,
        ru: (e - w) * (0.5 / h),
        rv: (n - s) * (0.5 / h),
        ruu: (e - c * 2.0 + w) * (1.0 / h2),
        ruv: (ne - nw - se + sw) * (0.25 / h2),
        rvv: (n - c * 2.0 + s) * (1.0 / h2),
    })
}

/// Fourth-order version of [`fd_param_jet`] on a 5x5 stencil.
pub fn fd_param_jet4<F>(r: F, u: f64, v: f64, h: f64) -> Result<ParamJet2>
where
    F: Fn(f64, f64) -> Option<Point3>,
{
    let at = |i: i32, j: i32| -> Result<Point3> {
        match r(u + i as f64 * h, v + j as f64 * h) {
            Some(p) if p.is_finite() => Ok(p),
            _ => Err(Error::StencilOutOfDomain),
        }
    };
    let c = at(0, 0)?;
    let d1 = |p1: Point3, m1: Point3, p2: Point3, m2: Point3| {
        ((p1 - m1) * 8.0 - (p2 - m2)) * (1.0 / (12.0 * h))
    };
    let d2 = |p1: Point3, m1: Point3, p2: Point3, m2: Point3| {
        ((p1 + m1) * 16.0 - (p2 + m2) - c * 30.0) * (1.0 / (12.0 * h * h))
    };
    let (up1, um1, up2, um2) = (at(1, 0)?, at(-1, 0)?, at(2, 0)?, at(-2, 0)?);
    let (vp1, vm1, vp2, vm2) = (at(0, 1)?, at(0, -1)?, at(0, 2)?, at(0, -2)?);
    let cross = |k: i32| -> Result<Point3> { Ok(at(k, k)? - at(k, -k)? - at(-k, k)? + at(-k, -k)?) };
    let s1 = cross(1)?;
    let s2 = cross(2)?;
    Ok(ParamJet2 {
        r: c,
        ru: d1(up1, um1, up2, um2),
        rv: d1(vp1, vm1, vp2, vm2),
        ruu: d2(up1, um1, up2, um2),
        ruv: (s1 * 16.0 - s2) * (1.0 / (48.0 * h * h)),
        rvv: d2(vp1, vm1, vp2, vm2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_jet(f: impl Fn(f64, f64) -> [f64; 6], u: f64, v: f64) -> ParamJet2 {
        let [z, zu, zv, zuu, zuv, zvv] = f(u, v);
        ParamJet2 {
            r: Point3::new(u, v, z),
            ru: Point3::new(1.0, 0.0, zu),
            rv: Point3::new(0.0, 1.0, zv),
            ruu: Point3::new(0.0, 0.0, zuu),
            ruv: Point3::new(0.0, 0.0, zuv),
            rvv: Point3::new(0.0, 0.0, zvv),
        }
    }

    #[test]
    fn semi_norm_ignores_height() {
        assert_eq!(isotropic_norm(Point3::new(3.0, 4.0, 100.0)), 5.0);
        assert_eq!(isotropic_norm(Point3::new(0.0, 0.0, 7.0)), 0.0);
        assert!((isotropic_norm(Point3::new(1.0, 1.0, 0.0)) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn identity_chart_passes_hessian_through() {
        let j = graph_jet(|u, v| [u * u + 2.0 * v * v, 2.0 * u, 4.0 * v, 2.0, 0.0, 4.0], 0.3, -0.7);
        let h = height_jet_from_param(&j).unwrap();
        assert!((h.fxx - 2.0).abs() < 1e-15);
        assert!(h.fxy.abs() < 1e-15);
        assert!((h.fyy - 4.0).abs() < 1e-15);
    }

    #[test]
    fn vertical_tangent_plane_is_rejected() {
        let j = ParamJet2 {
            r: Point3::ZERO,
            ru: Point3::new(1.0, 0.0, 0.0),
            rv: Point3::new(0.0, 0.0, 1.0),
            ruu: Point3::ZERO,
            ruv: Point3::ZERO,
            rvv: Point3::ZERO,
        };
        assert!(matches!(height_jet_from_param(&j), Err(Error::NonAdmissiblePoint { .. })));
    }

    #[test]
    fn helicoid_is_isotropic_minimal() {
        // r = (u cos v, u sin v, v) at (1, 0)
        let j = ParamJet2 {
            r: Point3::new(1.0, 0.0, 0.0),
            ru: Point3::new(1.0, 0.0, 0.0),
            rv: Point3::new(0.0, 1.0, 1.0),
            ruu: Point3::ZERO,
            ruv: Point3::new(0.0, 1.0, 0.0),
            rvv: Point3::new(-1.0, 0.0, 0.0),
        };
        let h = height_jet_from_param(&j).unwrap();
        // Oracle: z = atan2(y, x) re-solved as a height field.
        let fd = fd_jet(|x, y| Some(y.atan2(x)), 1.0, 0.0, 1e-4).unwrap();
        for (a, b) in [(h.fx, fd.fx), (h.fy, fd.fy), (h.fxx, fd.fxx), (h.fxy, fd.fxy), (h.fyy, fd.fyy)] {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
        assert!(isotropic_curvatures(&h).h.abs() < 1e-15);
        assert!(euclidean_curvatures(&h).h.abs() < 1e-15);
    }

    #[test]
    fn paraboloid_curvatures() {
        let c = isotropic_curvatures(&Jet2Height::hessian(2.0, 0.0, 4.0));
        assert_eq!((c.h, c.k), (3.0, 8.0));
        assert!((c.ratio_invariant().unwrap() - 9.0 / 8.0).abs() < 1e-15);
        assert_eq!((c.k1, c.k2), (4.0, 2.0));
        assert_eq!(c.d1, TopDir { t1: 0.0, t2: 1.0 });
    }

    #[test]
    fn logarithmoid_at_unit_point() {
        let fd = fd_jet(|x, y| Some((x * x + y * y).ln()), 1.0, 0.0, 1e-4).unwrap();
        assert!((fd.fxx + 2.0).abs() < 1e-5);
        let c = isotropic_curvatures(&fd);
        assert!(c.h.abs() < 1e-5);
        assert!((c.k + 4.0).abs() < 1e-5);
    }

    #[test]
    fn unit_sphere_is_umbilic() {
        let c = isotropic_curvatures(&Jet2Height::hessian(1.0, 0.0, 1.0));
        assert_eq!((c.h, c.k), (1.0, 1.0));
        assert!(c.umbilic);
        assert_eq!(characteristic_directions(&Jet2Height::hessian(1.0, 0.0, 1.0)), Err(Error::Umbilic));
    }

    #[test]
    fn euclidean_plane_and_sphere_cap() {
        let e = euclidean_curvatures(&Jet2Height::hessian(0.0, 0.0, 0.0));
        assert_eq!((e.h, e.k), (0.0, 0.0));
        let e = euclidean_curvatures(&Jet2Height::hessian(1.0, 0.0, 1.0));
        assert!((e.k1 - 1.0).abs() < 1e-15 && (e.k2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn crpc_residual_examples() {
        let j = Jet2Height::hessian(2.0, 0.0, 4.0);
        assert!(crpc_residual(&j, 2.0).unwrap().abs() < 1e-15);
        assert!((crpc_residual(&j, 3.0).unwrap() + 5.0 / 24.0).abs() < 1e-15);
        assert!(matches!(crpc_residual(&j, 0.0), Err(Error::InvalidParams(_))));
        assert!(matches!(crpc_residual(&Jet2Height::hessian(1.0, 0.0, 0.0), 2.0), Err(Error::DegenerateK { .. })));
    }

    #[test]
    fn quarter_power_rotational_surface() {
        // z = (x^2+y^2)^(1/4) has ratio -1/2.
        let fd = fd_jet(|x, y| Some((x * x + y * y).powf(0.25)), 1.0, 0.0, 1e-4).unwrap();
        assert!(crpc_residual(&fd, -0.5).unwrap().abs() < 1e-7);
        // exact jet: h = r^(1/2) on the x-axis, h' = 1/2, h'' = -1/4
        let exact = Jet2Height { x0: 1.0, y0: 0.0, f: 1.0, fx: 0.5, fy: 0.0, fxx: -0.25, fxy: 0.0, fyy: 0.5 };
        assert!(crpc_residual(&exact, -0.5).unwrap().abs() < 1e-15);
    }

    #[test]
    fn saddle_characteristics() {
        let (p, m) = characteristic_directions(&Jet2Height::hessian(1.0, 0.0, -1.0)).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.t1 - s).abs() < 1e-15 && (p.t2.abs() - s).abs() < 1e-15);
        assert!((p.t2 + m.t2).abs() < 1e-15);
        assert!(p.dot(m).abs() < 1e-15);
    }

    #[test]
    fn elliptic_characteristics_match_angle_scan() {
        // fxx = 2, fyy = 1: scan phi for the symmetric conjugate pair.
        let j = Jet2Height::hessian(2.0, 0.0, 1.0);
        let mut best = (f64::INFINITY, 0.0);
        let n = 2_000_000;
        for i in 1..n {
            let phi = i as f64 / n as f64 * std::f64::consts::FRAC_PI_2;
            let ii = j.second_form([phi.cos(), phi.sin()], [phi.cos(), -phi.sin()]).abs();
            if ii < best.0 {
                best = (ii, phi);
            }
        }
        let (p, m) = characteristic_directions(&j).unwrap();
        let gamma = p.dot(m).clamp(-1.0, 1.0).acos();
        assert!((gamma - 2.0 * best.1).abs() < 1e-5);
        let half = 0.5 * gamma;
        assert!((1.0 / half.tan().powi(2) - 0.5).abs() < 1e-12 || (half.tan().powi(2) - 2.0).abs() < 1e-12);
        assert!(j.second_form([p.t1, p.t2], [m.t1, m.t2]).abs() < 1e-12);
    }

    #[test]
    fn fd_jet_examples() {
        let j = fd_jet(|x, y| Some(x * x + y * y), 0.4, -1.2, 1e-4).unwrap();
        assert!((j.fxx - 2.0).abs() < 1e-6);
        let log = |x: f64, y: f64| {
            let r2 = x * x + y * y;
            (r2 > 0.0).then(|| r2.ln())
        };
        assert_eq!(fd_jet(log, 0.0, 0.0, 1e-4), Err(Error::StencilOutOfDomain));
    }

    #[test]
    fn fourth_order_param_jet_beats_second_order() {
        let r = |u: f64, v: f64| Some(Point3::new(u.sin() * v, u.cos() + v * v, (u * v).exp()));
        let exact_uv = (0.7f64 * 0.3).exp() * (1.0 + 0.7 * 0.3);
        let j2 = fd_param_jet(r, 0.7, 0.3, 1e-3).unwrap();
        let j4 = fd_param_jet4(r, 0.7, 0.3, 1e-3).unwrap();
        assert!((j4.ruv.z - exact_uv).abs() < (j2.ruv.z - exact_uv).abs());
        assert!((j4.ruu.x + 0.7f64.sin() * 0.3).abs() < 1e-9);
    }
}
