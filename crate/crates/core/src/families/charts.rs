//! Hand-differentiated charts. Each returns `r` with its first and second partials.

use super::{FamilyId, FamilySpec};
use crate::error::{Error, Result};
use crate::geometry::{ParamJet2, Point3};
use crate::quadrature::integrate;

/// `(value, first, second)` derivative triple of a function of one variable.
type D2 = [f64; 3];

pub(super) fn eval(spec: &FamilySpec, u: f64, v: f64) -> Result<ParamJet2> {
    let a = spec.param("a");
    let out = |ok: bool| if ok { Ok(()) } else { Err(Error::OutOfDomain { u, v }) };
    Ok(match spec.id {
        FamilyId::Paraboloid => graph(u, v, [u * u + a * v * v, 2.0 * u, 2.0 * a * v, 2.0, 0.0, 2.0 * a]),
        FamilyId::TransParaboloid => graph(u, v, [v * v + a * u * u, 2.0 * a * u, 2.0 * v, 2.0 * a, 0.0, 2.0]),
        FamilyId::RotationalPower1 => {
            out(u > 0.0)?;
            polar(ident(u), power(u, 1.0 + a), [0.0; 3], v)
        }
        FamilyId::RotationalPower2 => {
            out(u > 0.0)?;
            polar(ident(u), power(u, (1.0 + a) / a), [0.0; 3], v)
        }
        FamilyId::Logarithmoid => {
            out(u > 0.0)?;
            polar(ident(u), [2.0 * u.ln(), 2.0 / u, -2.0 / (u * u)], [0.0; 3], v)
        }
        FamilyId::EuclideanRotational => {
            out(if a > 0.0 { u > 0.0 && u < 1.0 } else { u > 1.0 })?;
            let w = 1.0 - u.powf(2.0 * a);
            let h1 = u.powf(a) / w.sqrt();
            let h2 = a * u.powf(a - 1.0) / w.powf(1.5);
            polar(ident(u), [euclidean_profile(a, u), h1, h2], [0.0; 3], v)
        }
        FamilyId::Helicoid => {
            out(u > 0.0)?;
            polar(ident(u), [0.0; 3], [v, 1.0, 0.0], v)
        }
        FamilyId::HelicalLog => {
            out(u > 0.0)?;
            let c = spec.param("c");
            polar(ident(u), [c * u.ln(), c / u, -c / (u * u)], [v, 1.0, 0.0], v)
        }
        FamilyId::SpiralRuled => {
            out(u > 0.0)?;
            let k = (a + 1.0) / a.abs().sqrt();
            let e = (k * v).exp();
            polar(ident(u), [0.0; 3], [e, k * e, k * k * e], v)
        }
        FamilyId::HelicalGeneral => {
            out(u > 0.0 && u < std::f64::consts::FRAC_PI_2)?;
            let (rho, f) = helical_general_profile(a, u);
            polar(rho, f, [v, 1.0, 0.0], v)
        }
        FamilyId::TransIsoNoniso => trans_iso_noniso(spec.param("b"), u, v),
        FamilyId::TransNonisoNoniso => {
            let (tu, tv) = (u.tan(), v.tan());
            let (su, sv) = (1.0 + tu * tu, 1.0 + tv * tv);
            ParamJet2 {
                r: Point3::new(u + v, u.cos().abs().ln() - v.cos().abs().ln(), u),
                ru: Point3::new(1.0, -tu, 1.0),
                rv: Point3::new(1.0, tv, 0.0),
                ruu: Point3::new(0.0, -su, 0.0),
                ruv: Point3::ZERO,
                rvv: Point3::new(0.0, sv, 0.0),
            }
        }
        FamilyId::DualTransIsoNoniso => dual_trans_iso_noniso(spec.param("b"), u, v),
        FamilyId::DualTransMinimal => dual_trans_minimal(u, v),
    })
}

fn ident(u: f64) -> D2 {
    [u, 1.0, 0.0]
}

fn power(u: f64, p: f64) -> D2 {
    [u.powf(p), p * u.powf(p - 1.0), p * (p - 1.0) * u.powf(p - 2.0)]
}

/// Chart over the identity top view with `z` jet `[z, zu, zv, zuu, zuv, zvv]`.
fn graph(u: f64, v: f64, z: [f64; 6]) -> ParamJet2 {
    ParamJet2 {
        r: Point3::new(u, v, z[0]),
        ru: Point3::new(1.0, 0.0, z[1]),
        rv: Point3::new(0.0, 1.0, z[2]),
        ruu: Point3::new(0.0, 0.0, z[3]),
        ruv: Point3::new(0.0, 0.0, z[4]),
        rvv: Point3::new(0.0, 0.0, z[5]),
    }
}

/// `(rho(u) cos v, rho(u) sin v, h(u) + g(v))`.
fn polar(rho: D2, h: D2, g: D2, v: f64) -> ParamJet2 {
    let (s, c) = v.sin_cos();
    ParamJet2 {
        r: Point3::new(rho[0] * c, rho[0] * s, h[0] + g[0]),
        ru: Point3::new(rho[1] * c, rho[1] * s, h[1]),
        rv: Point3::new(-rho[0] * s, rho[0] * c, g[1]),
        ruu: Point3::new(rho[2] * c, rho[2] * s, h[2]),
        ruv: Point3::new(-rho[1] * s, rho[1] * c, 0.0),
        rvv: Point3::new(-rho[0] * c, -rho[0] * s, g[2]),
    }
}

/// Radius `(cos u sin^a u)^(-1/(a+1))` and height `u + cot 2u + (a^2+1)/(a^2-1) csc 2u`.
pub(crate) fn helical_general_profile(a: f64, u: f64) -> (D2, D2) {
    let (su, cu) = u.sin_cos();
    let rho = (-(cu.ln() + a * su.ln()) / (a + 1.0)).exp();
    let (tan, cot) = (su / cu, cu / su);
    let q = (tan - a * cot) / (a + 1.0);
    let dq = (1.0 / (cu * cu) + a / (su * su)) / (a + 1.0);
    let rho3 = [rho, rho * q, rho * (q * q + dq)];

    let bb = (a * a + 1.0) / (a * a - 1.0);
    let (s2, c2) = (2.0 * u).sin_cos();
    let (csc, cot2) = (1.0 / s2, c2 / s2);
    let f = u + cot2 + bb * csc;
    let f1 = 1.0 - 2.0 * csc * csc - 2.0 * bb * csc * cot2;
    let f2 = 8.0 * csc * csc * cot2 + 4.0 * bb * csc * (cot2 * cot2 + csc * csc);
    (rho3, [f, f1, f2])
}

/// The two profile curves of the translational family with one isotropic generator:
/// `X(v) = v + b cos v`, `Y(v) = b sin v + (b^2-1) log|b - sin v|`.
pub(crate) fn iso_noniso_profile(b: f64, v: f64) -> (D2, D2) {
    let (s, c) = v.sin_cos();
    let w = b - s;
    let x = [v + b * c, 1.0 - b * s, -b * c];
    let y = [
        b * s + (b * b - 1.0) * w.abs().ln(),
        c * (1.0 - b * s) / w,
        -b * s - (b * b - 1.0) * (1.0 - b * s) / (w * w),
    ];
    (x, y)
}

fn trans_iso_noniso(b: f64, u: f64, v: f64) -> ParamJet2 {
    let (x, y) = iso_noniso_profile(b, v);
    let e = u.exp();
    ParamJet2 {
        r: Point3::new(x[0], y[0] + (1.0 - b * b) * u, e),
        ru: Point3::new(0.0, 1.0 - b * b, e),
        rv: Point3::new(x[1], y[1], 0.0),
        ruu: Point3::new(0.0, 0.0, e),
        ruv: Point3::ZERO,
        rvv: Point3::new(x[2], y[2], 0.0),
    }
}

/// Quotient rule for derivative triples.
fn quot(n: D2, d: D2) -> D2 {
    let q = n[0] / d[0];
    let q1 = (n[1] - q * d[1]) / d[0];
    let q2 = (n[2] - 2.0 * q1 * d[1] - q * d[2]) / d[0];
    [q, q1, q2]
}

/// `e^u (cos v/(b - sin v), 1, (b - b^3 + v cos v)/((b^2-1)(b - sin v)) - log|b - sin v| + u)`.
fn dual_trans_iso_noniso(b: f64, u: f64, v: f64) -> ParamJet2 {
    let (s, c) = v.sin_cos();
    let w = [b - s, -c, s];
    let p = quot([c, -s, -c], w);
    let r = quot([b - b * b * b + v * c, c - v * s, -2.0 * s - v * c], w);
    let k = b * b - 1.0;
    let q = [
        r[0] / k - w[0].abs().ln(),
        r[1] / k - w[1] / w[0],
        r[2] / k - (w[2] * w[0] - w[1] * w[1]) / (w[0] * w[0]),
    ];
    let e = u.exp();
    let z = q[0] + u;
    ParamJet2 {
        r: Point3::new(e * p[0], e, e * z),
        ru: Point3::new(e * p[0], e, e * (z + 1.0)),
        rv: Point3::new(e * p[1], 0.0, e * q[1]),
        ruu: Point3::new(e * p[0], e, e * (z + 2.0)),
        ruv: Point3::new(e * p[1], 0.0, e * q[1]),
        rvv: Point3::new(e * p[2], 0.0, e * q[2]),
    }
}

/// `(tan v, 1, log|cos v / cos u| - u tan u + v tan v) / (tan u + tan v)`.
fn dual_trans_minimal(u: f64, v: f64) -> ParamJet2 {
    let (tu, tv) = (u.tan(), v.tan());
    let (su, sv) = (1.0 + tu * tu, 1.0 + tv * tv);
    // scalar jets [f, fu, fv, fuu, fuv, fvv]
    let t = [tu + tv, su, sv, 2.0 * su * tu, 0.0, 2.0 * sv * tv];
    let nx = [tv, 0.0, sv, 0.0, 0.0, 2.0 * sv * tv];
    let ny = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let nz = [
        v.cos().abs().ln() - u.cos().abs().ln() - u * tu + v * tv,
        -u * su,
        v * sv,
        -su - 2.0 * u * su * tu,
        0.0,
        sv + 2.0 * v * sv * tv,
    ];
    let (x, y, z) = (quot2(nx, t), quot2(ny, t), quot2(nz, t));
    let p = |i: usize| Point3::new(x[i], y[i], z[i]);
    ParamJet2 { r: p(0), ru: p(1), rv: p(2), ruu: p(3), ruv: p(4), rvv: p(5) }
}

/// Quotient rule for bivariate jets `[f, fu, fv, fuu, fuv, fvv]`.
fn quot2(n: [f64; 6], d: [f64; 6]) -> [f64; 6] {
    let q = n[0] / d[0];
    let qu = (n[1] - q * d[1]) / d[0];
    let qv = (n[2] - q * d[2]) / d[0];
    let quu = (n[3] - 2.0 * qu * d[1] - q * d[3]) / d[0];
    let quv = (n[4] - qu * d[2] - qv * d[1] - q * d[4]) / d[0];
    let qvv = (n[5] - 2.0 * qv * d[2] - q * d[5]) / d[0];
    [q, qu, qv, quu, quv, qvv]
}

/// Cell width of the fixed quadrature partition used by [`euclidean_profile`].
const PROFILE_CELL: f64 = 1.0 / 64.0;
const PROFILE_TOL: f64 = 1e-12;

/// Meridian height `h(r)` of the Euclidean rotational surface with principal
/// curvature ratio `a`, where `h'(r) = r^a / sqrt(1 - r^(2a))`.
///
/// For `a > 0` the profile is anchored at `h(0) = 0` and defined on `0 <= r < 1`.
/// For `a < 0` it lives on `r > 1`; it is anchored at `h(1) = 0` and integrated in
/// `t = sqrt(r - 1)`, which removes the square-root singularity at `r = 1`.
///
/// The integral is summed over a fixed partition of width 1/64 in the
/// integration variable, so the result is a smooth function of `r` to rounding
/// and can be finite-differenced.
pub fn euclidean_profile(a: f64, r: f64) -> f64 {
    if a > 0.0 {
        let g = |s: f64| s.powf(a) / (1.0 - s.powf(2.0 * a)).sqrt();
        partitioned(g, r)
    } else {
        let g = |t: f64| {
            let t2 = t * t;
            2.0 * t * (a * t2.ln_1p()).exp() / (-(2.0 * a * t2.ln_1p()).exp_m1()).sqrt()
        };
        partitioned(g, (r - 1.0).sqrt())
    }
}

fn partitioned<F: Fn(f64) -> f64>(g: F, x: f64) -> f64 {
    let cells = (x / PROFILE_CELL).floor() as usize;
    let mut sum = 0.0;
    for i in 0..cells {
        sum += integrate(&g, i as f64 * PROFILE_CELL, (i + 1) as f64 * PROFILE_CELL, PROFILE_TOL).value;
    }
    sum + integrate(&g, cells as f64 * PROFILE_CELL, x, PROFILE_TOL).value
}
