//! Curve tracing on surfaces, osculating isotropic circles and contact checks.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::families::{FamilyId, FamilySpec};
use crate::geometry::{
    characteristic_directions, height_jet_from_param, isotropic_curvatures, ParamJet2, Point3, TopDir, K_EPS,
};
use crate::spheres::{tangent_sphere, CircleKind, ParabolicSphere, CIRCLE_SAMPLES};

/// Which direction field a trace follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    CharacteristicPlus,
    CharacteristicMinus,
    Principal1,
    Principal2,
}

impl TraceKind {
    pub fn label(self) -> &'static str {
        match self {
            TraceKind::CharacteristicPlus => "char+",
            TraceKind::CharacteristicMinus => "char-",
            TraceKind::Principal1 => "principal1",
            TraceKind::Principal2 => "principal2",
        }
    }

    /// The field crossing this one at the characteristic angle, or orthogonally.
    pub fn partner(self) -> TraceKind {
        match self {
            TraceKind::CharacteristicPlus => TraceKind::CharacteristicMinus,
            TraceKind::CharacteristicMinus => TraceKind::CharacteristicPlus,
            TraceKind::Principal1 => TraceKind::Principal2,
            TraceKind::Principal2 => TraceKind::Principal1,
        }
    }
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TraceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "char+" | "characteristic+" => Ok(TraceKind::CharacteristicPlus),
            "char-" | "char\u{2212}" | "characteristic-" => Ok(TraceKind::CharacteristicMinus),
            "principal1" => Ok(TraceKind::Principal1),
            "principal2" => Ok(TraceKind::Principal2),
            _ => Err(Error::InvalidParams(format!("unknown trace kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    /// Top-view arclength from the seed.
    pub t: f64,
    pub point: Point3,
    pub top_dir: TopDir,
    pub u: f64,
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTrace {
    pub family: FamilyId,
    pub kind: TraceKind,
    pub dt: f64,
    pub samples: Vec<TraceSample>,
    /// Why integration ended early, if it did.
    pub stop: Option<Error>,
}

/// The two line fields of `kind` at a point: the preferred one first.
fn line_pair(j: &ParamJet2, kind: TraceKind) -> Result<[TopDir; 2]> {
    let h = height_jet_from_param(j)?;
    match kind {
        TraceKind::CharacteristicPlus | TraceKind::CharacteristicMinus => {
            let (p, m) = characteristic_directions(&h)?;
            Ok(if kind == TraceKind::CharacteristicPlus { [p, m] } else { [m, p] })
        }
        TraceKind::Principal1 | TraceKind::Principal2 => {
            let c = isotropic_curvatures(&h);
            if c.umbilic {
                return Err(Error::Umbilic);
            }
            Ok(if kind == TraceKind::Principal1 { [c.d1, c.d2] } else { [c.d2, c.d1] })
        }
    }
}

/// Direction of `kind` at `(u, v)`, continued from `reference` when given.
fn direction(spec: &FamilySpec, u: f64, v: f64, kind: TraceKind, reference: Option<TopDir>) -> Result<(ParamJet2, TopDir)> {
    let j = spec.chart(u, v)?;
    let lines = line_pair(&j, kind)?;
    let d = match reference {
        None => lines[0],
        Some(r) => {
            let best = if lines[0].dot(r).abs() >= lines[1].dot(r).abs() { lines[0] } else { lines[1] };
            if best.dot(r) < 0.0 {
                best.neg()
            } else {
                best
            }
        }
    };
    Ok((j, d))
}

fn velocity(spec: &FamilySpec, u: f64, v: f64, kind: TraceKind, reference: TopDir) -> Result<([f64; 2], TopDir)> {
    let (j, d) = direction(spec, u, v, kind, Some(reference))?;
    Ok((j.lift([d.t1, d.t2])?, d))
}

fn stop_reason(e: Error) -> Error {
    match e {
        Error::Umbilic | Error::UmbilicEncountered => Error::UmbilicEncountered,
        other => Error::SingularEncountered(other.to_string()),
    }
}

/// Integrates the unit top-view field `kind` with fixed-step RK4 in `(u, v)`.
///
/// `t` advances by `dt` per step in top-view arclength; a negative `dt`
/// runs backwards along the field. Integration stops at the first singular
/// or umbilic point and returns the samples reached so far.
pub fn trace_direction_field(spec: &FamilySpec, seed: (f64, f64), kind: TraceKind, steps: usize, dt: f64) -> Result<CurveTrace> {
    let (u0, v0) = seed;
    let (j0, d0) = direction(spec, u0, v0, kind, None).map_err(|e| match e {
        Error::Umbilic => Error::UmbilicEncountered,
        other => other,
    })?;
    let mut samples = vec![TraceSample { t: 0.0, point: j0.r, top_dir: d0, u: u0, v: v0 }];
    let mut stop = None;
    let (mut u, mut v, mut d) = (u0, v0, d0);
    for n in 1..=steps {
        let step = (|| -> Result<(f64, f64, ParamJet2, TopDir)> {
            let (k1, d1) = velocity(spec, u, v, kind, d)?;
            let (k2, d2) = velocity(spec, u + 0.5 * dt * k1[0], v + 0.5 * dt * k1[1], kind, d1)?;
            let (k3, d3) = velocity(spec, u + 0.5 * dt * k2[0], v + 0.5 * dt * k2[1], kind, d2)?;
            let (k4, _) = velocity(spec, u + dt * k3[0], v + dt * k3[1], kind, d3)?;
            let un = u + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
            let vn = v + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
            let (j, dn) = direction(spec, un, vn, kind, Some(d))?;
            Ok((un, vn, j, dn))
        })();
        match step {
            Ok((un, vn, j, dn)) => {
                u = un;
                v = vn;
                d = dn;
                samples.push(TraceSample { t: n as f64 * dt, point: j.r, top_dir: dn, u, v });
            }
            Err(e) => {
                stop = Some(stop_reason(e));
                break;
            }
        }
    }
    Ok(CurveTrace { family: spec.id, kind, dt, samples, stop })
}

/// Where two traces cross in the top view.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intersection {
    pub point: [f64; 2],
    /// Trace parameters `t` on the first and second curve.
    pub t1: f64,
    pub t2: f64,
    /// Unit top-view tangents of both curves at the crossing.
    pub tangent1: TopDir,
    pub tangent2: TopDir,
}

/// Cubic Hermite piece through two consecutive samples.
struct Piece {
    p0: [f64; 2],
    p1: [f64; 2],
    m0: [f64; 2],
    m1: [f64; 2],
}

impl Piece {
    fn new(a: &TraceSample, b: &TraceSample) -> Self {
        let h = b.t - a.t;
        Piece {
            p0: [a.point.x, a.point.y],
            p1: [b.point.x, b.point.y],
            m0: [a.top_dir.t1 * h, a.top_dir.t2 * h],
            m1: [b.top_dir.t1 * h, b.top_dir.t2 * h],
        }
    }

    fn at(&self, s: f64) -> [f64; 2] {
        let (s2, s3) = (s * s, s * s * s);
        let (h00, h10, h01, h11) = (2.0 * s3 - 3.0 * s2 + 1.0, s3 - 2.0 * s2 + s, -2.0 * s3 + 3.0 * s2, s3 - s2);
        [0, 1].map(|k| h00 * self.p0[k] + h10 * self.m0[k] + h01 * self.p1[k] + h11 * self.m1[k])
    }

    fn tangent(&self, s: f64) -> [f64; 2] {
        let s2 = s * s;
        let (d00, d10, d01, d11) = (6.0 * s2 - 6.0 * s, 3.0 * s2 - 4.0 * s + 1.0, -6.0 * s2 + 6.0 * s, 3.0 * s2 - 2.0 * s);
        [0, 1].map(|k| d00 * self.p0[k] + d10 * self.m0[k] + d01 * self.p1[k] + d11 * self.m1[k])
    }
}

fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub2(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

/// Root of `g` on `[lo, hi]` by bisection; `None` without a sign change.
fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let (mut glo, ghi) = (g(lo), g(hi));
    if glo == 0.0 {
        return Some(lo);
    }
    if ghi == 0.0 {
        return Some(hi);
    }
    if glo.signum() == ghi.signum() {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return Some(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Tolerance of the intersection refinement in piece parameters.
pub const INTERSECTION_TOL: f64 = 1e-10;

/// First top-view crossing of two traces, refined on cubic Hermite pieces.
///
/// Chords are tested for a proper crossing; the crossing is then refined by
/// alternating bisection on the signed cross product of each piece against the
/// tangent line of the other.
pub fn intersect_traces(c1: &CurveTrace, c2: &CurveTrace) -> Result<Intersection> {
    let top = |s: &TraceSample| [s.point.x, s.point.y];
    for w1 in c1.samples.windows(2) {
        let (a0, a1) = (top(&w1[0]), top(&w1[1]));
        for w2 in c2.samples.windows(2) {
            let (b0, b1) = (top(&w2[0]), top(&w2[1]));
            let da = sub2(a1, a0);
            let db = sub2(b1, b0);
            let den = cross2(da, db);
            if den == 0.0 {
                continue;
            }
            let s = cross2(sub2(b0, a0), db) / den;
            let r = cross2(sub2(b0, a0), da) / den;
            if !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&r) {
                continue;
            }
            let (p1, p2) = (Piece::new(&w1[0], &w1[1]), Piece::new(&w2[0], &w2[1]));
            let (mut s1, mut s2) = (s, r);
            for _ in 0..50 {
                let (q, tq) = (p2.at(s2), p2.tangent(s2));
                let n1 = bisect(|x| cross2(tq, sub2(p1.at(x), q)), -0.5, 1.5, INTERSECTION_TOL).unwrap_or(s1);
                let (q, tq) = (p1.at(n1), p1.tangent(n1));
                let n2 = bisect(|x| cross2(tq, sub2(p2.at(x), q)), -0.5, 1.5, INTERSECTION_TOL).unwrap_or(s2);
                let done = (n1 - s1).abs() < INTERSECTION_TOL && (n2 - s2).abs() < INTERSECTION_TOL;
                s1 = n1;
                s2 = n2;
                if done {
                    break;
                }
            }
            let t1 = p1.tangent(s1);
            let t2 = p2.tangent(s2);
            return Ok(Intersection {
                point: p1.at(s1),
                t1: w1[0].t + s1 * (w1[1].t - w1[0].t),
                t2: w2[0].t + s2 * (w2[1].t - w2[0].t),
                tangent1: TopDir::new(t1[0], t1[1]).ok_or(Error::DegenerateJet)?,
                tangent2: TopDir::new(t2[0], t2[1]).ok_or(Error::DegenerateJet)?,
            });
        }
    }
    Err(Error::NoIntersection)
}

/// Euclidean angle in `[0, pi]` between the top-view tangents where the traces cross.
pub fn included_angle_topview(c1: &CurveTrace, c2: &CurveTrace) -> Result<f64> {
    let x = intersect_traces(c1, c2)?;
    Ok(x.tangent1.cross(x.tangent2).abs().atan2(x.tangent1.dot(x.tangent2)))
}

/// Deviation from `cot^2(gamma/2) = |a|`, taking the better of the two
/// supplementary angles between the lines (the ratio is defined up to `a <-> 1/a`).
pub fn angle_law_residual(gamma: f64, a: f64) -> f64 {
    let t2 = (0.5 * gamma).tan().powi(2);
    (1.0 / t2 - a.abs()).abs().min((t2 - a.abs()).abs())
}

/// 2-jet `(p, p', p'')` of a spatial curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub p: Point3,
    pub d1: Point3,
    pub d2: Point3,
}

/// Jet of `t -> r(u(t), v(t))` from the surface jet and `(u', v')`, `(u'', v'')`.
pub fn curve_jet_on_surface(j: &ParamJet2, du: [f64; 2], ddu: [f64; 2]) -> CurveJet {
    CurveJet {
        p: j.r,
        d1: j.ru * du[0] + j.rv * du[1],
        d2: j.ruu * (du[0] * du[0]) + j.ruv * (2.0 * du[0] * du[1]) + j.rvv * (du[1] * du[1]) + j.ru * ddu[0]
            + j.rv * ddu[1],
    }
}

/// Threshold below which a curvature counts as zero.
pub const INFLECTION_TOL: f64 = 1e-10;

/// An isotropic circle in second-order contact with a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OsculatingCircle {
    /// Top-view circle with signed `center`, lifted to `z = alpha x + beta y + delta`.
    Elliptic { contact: Point3, center: [f64; 2], radius: f64, alpha: f64, beta: f64, delta: f64 },
    /// Parabola `z = z0 + slope s + curvature s^2 / 2` over the top-view line `contact + s dir`.
    Parabolic { contact: Point3, dir: TopDir, slope: f64, curvature: f64 },
    /// Vertical line through `contact`.
    Cylindric { contact: Point3 },
}

impl OsculatingCircle {
    pub fn kind(&self) -> CircleKind {
        match self {
            OsculatingCircle::Elliptic { .. } => CircleKind::Elliptic,
            OsculatingCircle::Parabolic { .. } => CircleKind::Parabolic,
            OsculatingCircle::Cylindric { .. } => CircleKind::Cylindric,
        }
    }

    /// `n` points: a full turn of an elliptic circle, or `s` in `[-1, 1]` on a parabola.
    pub fn samples(&self, n: usize) -> Vec<Point3> {
        match *self {
            OsculatingCircle::Elliptic { center, radius, alpha, beta, delta, .. } => (0..n)
                .map(|k| {
                    let th = std::f64::consts::TAU * k as f64 / n as f64;
                    let (x, y) = (center[0] + radius * th.cos(), center[1] + radius * th.sin());
                    Point3::new(x, y, alpha * x + beta * y + delta)
                })
                .collect(),
            OsculatingCircle::Parabolic { contact, dir, slope, curvature } => (0..n)
                .map(|k| {
                    let s = -1.0 + 2.0 * k as f64 / (n.max(2) - 1) as f64;
                    Point3::new(
                        contact.x + s * dir.t1,
                        contact.y + s * dir.t2,
                        contact.z + slope * s + 0.5 * curvature * s * s,
                    )
                })
                .collect(),
            OsculatingCircle::Cylindric { contact } => vec![contact; n.min(1)],
        }
    }

    /// Largest `|2z - A(x^2+y^2) - Bx - Cy - D|` over samples of the circle.
    pub fn sphere_residual(&self, s: &ParabolicSphere) -> Result<f64> {
        if let OsculatingCircle::Cylindric { .. } = self {
            return Err(Error::DegenerateJet);
        }
        Ok(self.samples(CIRCLE_SAMPLES).iter().map(|p| s.residual(*p).abs()).fold(0.0, f64::max))
    }
}

/// The isotropic circle with second-order contact to the curve jet.
pub fn osculating_isotropic_circle(c: &CurveJet) -> Result<OsculatingCircle> {
    let speed = c.d1.norm();
    if speed == 0.0 || !c.d1.is_finite() || !c.d2.is_finite() {
        return Err(Error::DegenerateJet);
    }
    let n1 = c.d1.x.hypot(c.d1.y);
    if n1 <= 1e-12 * speed {
        // vertical tangent: only a vertical line can osculate, and only if the
        // acceleration has no horizontal part
        let horiz = c.d2.x.hypot(c.d2.y);
        return if horiz <= INFLECTION_TOL * (c.d2.norm() + speed) {
            Ok(OsculatingCircle::Cylindric { contact: c.p })
        } else {
            Err(Error::DegenerateJet)
        };
    }
    let t = TopDir::new(c.d1.x, c.d1.y).expect("nonzero top tangent");
    let kappa = (c.d1.x * c.d2.y - c.d1.y * c.d2.x) / (n1 * n1 * n1);
    let ds2 = (c.d1.x * c.d2.x + c.d1.y * c.d2.y) / n1;
    let zs = c.d1.z / n1;
    let zss = (c.d2.z - zs * ds2) / (n1 * n1);
    if kappa.abs() < INFLECTION_TOL {
        if zss.abs() < INFLECTION_TOL {
            return Err(Error::InflectionPoint);
        }
        return Ok(OsculatingCircle::Parabolic { contact: c.p, dir: t, slope: zs, curvature: zss });
    }
    let n = t.perp();
    let center = [c.p.x + n.t1 / kappa, c.p.y + n.t2 / kappa];
    let g = zss / kappa;
    let (alpha, beta) = (zs * t.t1 + g * n.t1, zs * t.t2 + g * n.t2);
    Ok(OsculatingCircle::Elliptic {
        contact: c.p,
        center,
        radius: 1.0 / kappa.abs(),
        alpha,
        beta,
        delta: c.p.z - alpha * c.p.x - beta * c.p.y,
    })
}

/// Largest deviation of the osculating circles of `curves` from the parabolic
/// sphere of radius `1/kappa_n(T)` touching the surface at `p`.
pub fn meusnier_check(spec: &FamilySpec, p: (f64, f64), t: TopDir, curves: &[CurveJet]) -> Result<f64> {
    let j = crate::families::evaluate(spec, p.0, p.1)?;
    let h = height_jet_from_param(&j)?;
    let kn = h.normal_curvature(t);
    if kn.abs() < K_EPS {
        return Err(Error::ZeroNormalCurvature);
    }
    let sphere = tangent_sphere(&h, 1.0 / kn)?;
    let mut worst = 0.0_f64;
    for c in curves {
        let top = TopDir::new(c.d1.x, c.d1.y).ok_or(Error::DegenerateInput("curve tangent is vertical"))?;
        if top.cross(t).abs() > 1e-9 || (c.p - j.r).norm() > 1e-9 * (1.0 + j.r.norm()) {
            return Err(Error::DegenerateInput("curve is not tangent to T at p"));
        }
        worst = worst.max(osculating_isotropic_circle(c)?.sphere_residual(&sphere)?);
    }
    Ok(worst)
}

/// Least-squares parabolic sphere through the trace points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereFit {
    pub sphere: ParabolicSphere,
    pub max_residual: f64,
}

/// Fits `2z = A(x^2+y^2) + Bx + Cy + D` to the samples of `curve`.
///
/// Fails with `DegenerateFit` when the samples do not determine the sphere,
/// e.g. for straight top views or for a single parallel circle.
pub fn sphere_membership(curve: &CurveTrace) -> Result<SphereFit> {
    fit_sphere(&curve.samples.iter().map(|s| s.point).collect::<Vec<_>>())
}

pub fn fit_sphere(points: &[Point3]) -> Result<SphereFit> {
    if points.len() < 4 {
        return Err(Error::DegenerateFit);
    }
    let n = points.len();
    let mut m = DMatrix::<f64>::zeros(n, 4);
    let mut rhs = DVector::<f64>::zeros(n);
    for (i, p) in points.iter().enumerate() {
        m[(i, 0)] = p.x * p.x + p.y * p.y;
        m[(i, 1)] = p.x;
        m[(i, 2)] = p.y;
        m[(i, 3)] = 1.0;
        rhs[i] = 2.0 * p.z;
    }
    let scale: Vec<f64> = (0..4).map(|k| m.column(k).norm().max(f64::MIN_POSITIVE)).collect();
    for k in 0..4 {
        m.column_mut(k).scale_mut(1.0 / scale[k]);
    }
    let svd = m.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if smin <= 1e-10 * smax {
        return Err(Error::DegenerateFit);
    }
    let x = svd.solve(&rhs, 0.0).map_err(|_| Error::DegenerateFit)?;
    let c: Vec<f64> = (0..4).map(|k| x[k] / scale[k]).collect();
    let sphere = ParabolicSphere::new(c[0], c[1], c[2], c[3]);
    if sphere.a == 0.0 {
        return Err(Error::DegenerateFit);
    }
    let max_residual = points.iter().map(|p| sphere.residual(*p).abs()).fold(0.0, f64::max);
    Ok(SphereFit { sphere, max_residual })
}
