//! Parabolic isotropic spheres, curvature centers and envelopes of sphere families.
//!
//! A parabolic sphere is `2z = A(x^2+y^2) + Bx + Cy + D` with radius `1/A`.
//! The characteristic of a one-parameter family at `t` solves that equation
//! together with its `t`-derivative; when `A'(t) != 0` the pair reduces to a
//! non-isotropic plane (elliptic circle), otherwise to an isotropic plane
//! (parabolic circle).

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{fd_param_jet4, height_jet_from_param, Jet2Height, Point3, TopDir};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolicSphere {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl ParabolicSphere {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        ParabolicSphere { a, b, c, d }
    }

    pub fn radius(&self) -> f64 {
        1.0 / self.a
    }

    /// Height of the sphere over `(x, y)`.
    pub fn height(&self, x: f64, y: f64) -> f64 {
        0.5 * (self.a * (x * x + y * y) + self.b * x + self.c * y + self.d)
    }

    /// `2z - A(x^2+y^2) - Bx - Cy - D`.
    pub fn residual(&self, p: Point3) -> f64 {
        2.0 * p.z - self.a * (p.x * p.x + p.y * p.y) - self.b * p.x - self.c * p.y - self.d
    }

    pub fn vertex(&self) -> Point3 {
        let (x, y) = (-self.b / (2.0 * self.a), -self.c / (2.0 * self.a));
        Point3::new(x, y, self.height(x, y))
    }

    /// Vertex translated by `(0, 0, r)`.
    pub fn center(&self) -> Point3 {
        self.vertex() + Point3::new(0.0, 0.0, self.radius())
    }
}

/// The parabolic sphere of radius `r` sharing value and gradient with `j` at its base point.
pub fn tangent_sphere(j: &Jet2Height, r: f64) -> Result<ParabolicSphere> {
    if r == 0.0 || !r.is_finite() {
        return Err(Error::ZeroRadius);
    }
    let a = 1.0 / r;
    let b = 2.0 * (j.fx - a * j.x0);
    let c = 2.0 * (j.fy - a * j.y0);
    let d = 2.0 * j.f - a * (j.x0 * j.x0 + j.y0 * j.y0) - b * j.x0 - c * j.y0;
    Ok(ParabolicSphere { a, b, c, d })
}

/// Center of the tangent sphere with curvature `kappa`.
pub fn curvature_center(j: &Jet2Height, kappa: f64) -> Result<Point3> {
    if kappa == 0.0 || !kappa.is_finite() {
        return Err(Error::ZeroCurvature);
    }
    Ok(Point3::new(
        j.x0 - j.fx / kappa,
        j.y0 - j.fy / kappa,
        j.f - (j.fx * j.fx + j.fy * j.fy - 2.0) / (2.0 * kappa),
    ))
}

/// Kind of a plane section of an isotropic sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleKind {
    Elliptic,
    Parabolic,
    Cylindric,
}

/// Plane carrying an isotropic circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CarrierPlane {
    /// `z = alpha x + beta y + delta`.
    NonIsotropic { alpha: f64, beta: f64, delta: f64 },
    /// `n . (x, y) + c = 0` with unit `n`.
    Isotropic { n: [f64; 2], c: f64 },
}

impl CarrierPlane {
    pub fn is_isotropic(&self) -> bool {
        matches!(self, CarrierPlane::Isotropic { .. })
    }

    pub fn residual(&self, p: Point3) -> f64 {
        match *self {
            CarrierPlane::NonIsotropic { alpha, beta, delta } => p.z - alpha * p.x - beta * p.y - delta,
            CarrierPlane::Isotropic { n, c } => n[0] * p.x + n[1] * p.y + c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoCircleClass {
    pub kind: CircleKind,
    pub plane: CarrierPlane,
    pub sphere: ParabolicSphere,
}

/// Explicit parameterization of a characteristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CharacteristicCurve {
    /// Top view `center + radius (cos th, sin th)`, lifted to the carrier plane.
    Elliptic { center: [f64; 2], radius: f64, alpha: f64, beta: f64, delta: f64 },
    /// Top view `origin + s dir`, lifted to the sphere.
    Parabolic { origin: [f64; 2], dir: [f64; 2], sphere: ParabolicSphere },
}

impl CharacteristicCurve {
    pub fn point(&self, s: f64) -> Point3 {
        match *self {
            CharacteristicCurve::Elliptic { center, radius, alpha, beta, delta } => {
                let (x, y) = (center[0] + radius * s.cos(), center[1] + radius * s.sin());
                Point3::new(x, y, alpha * x + beta * y + delta)
            }
            CharacteristicCurve::Parabolic { origin, dir, sphere } => {
                let (x, y) = (origin[0] + s * dir[0], origin[1] + s * dir[1]);
                Point3::new(x, y, sphere.height(x, y))
            }
        }
    }

    /// `n` samples: full turn for elliptic circles, `s` in `[-1, 1]` for parabolic ones.
    pub fn samples(&self, n: usize) -> Vec<Point3> {
        (0..n)
            .map(|k| match self {
                CharacteristicCurve::Elliptic { .. } => self.point(TAU * k as f64 / n as f64),
                CharacteristicCurve::Parabolic { .. } => {
                    self.point(-1.0 + 2.0 * k as f64 / (n.max(2) - 1) as f64)
                }
            })
            .collect()
    }
}

/// Default sample count for elliptic characteristics.
pub const CIRCLE_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Characteristic {
    pub t: f64,
    pub class: IsoCircleClass,
    pub curve: CharacteristicCurve,
}

type Coeffs = Box<dyn Fn(f64) -> [f64; 4] + Send + Sync>;

/// One-parameter family `t -> (A, B, C, D)(t)` with caller-supplied derivatives.
///
/// The callables must be safe to call concurrently.
pub struct SphereFamily {
    coeffs: Coeffs,
    derivs: Coeffs,
    pub t_range: (f64, f64),
}

/// Tolerance of the finite-difference audit of supplied derivatives.
pub const DERIVATIVE_AUDIT_TOL: f64 = 1e-6;

impl SphereFamily {
    pub fn new<F, G>(coeffs: F, derivs: G, t_range: (f64, f64)) -> Self
    where
        F: Fn(f64) -> [f64; 4] + Send + Sync + 'static,
        G: Fn(f64) -> [f64; 4] + Send + Sync + 'static,
    {
        SphereFamily { coeffs: Box::new(coeffs), derivs: Box::new(derivs), t_range }
    }

    pub fn coefficients(&self, t: f64) -> [f64; 4] {
        (self.coeffs)(t)
    }

    pub fn derivatives(&self, t: f64) -> [f64; 4] {
        (self.derivs)(t)
    }

    pub fn sphere(&self, t: f64) -> ParabolicSphere {
        let [a, b, c, d] = self.coefficients(t);
        ParabolicSphere { a, b, c, d }
    }

    /// Compares the supplied derivatives with central differences at `t`.
    pub fn audit(&self, t: f64) -> Result<f64> {
        let h = 1e-5;
        let (p, m) = (self.coefficients(t + h), self.coefficients(t - h));
        let d = self.derivatives(t);
        let mut worst = 0.0_f64;
        for (k, name) in ["A'", "B'", "C'", "D'"].into_iter().enumerate() {
            let err = ((p[k] - m[k]) / (2.0 * h) - d[k]).abs() / d[k].abs().max(1.0);
            if err > DERIVATIVE_AUDIT_TOL {
                return Err(Error::InconsistentDerivative { which: name, err });
            }
            worst = worst.max(err);
        }
        Ok(worst)
    }
}

/// Classifies and parameterizes the characteristic of `fam` at `t`.
pub fn envelope_characteristic(fam: &SphereFamily, t: f64) -> Result<Characteristic> {
    let sphere = fam.sphere(t);
    if sphere.a == 0.0 {
        return Err(Error::ZeroRadius);
    }
    let [da, db, dc, dd] = fam.derivatives(t);
    if [da, db, dc, dd].iter().all(|x| *x == 0.0) {
        return Err(Error::StationaryFamily { t });
    }
    let ParabolicSphere { a, b, c, d } = sphere;
    if da != 0.0 {
        // second equation minus (A'/A) times the first: a plane with z-coefficient 2A'/A
        let alpha = -(a * db - da * b) / (2.0 * da);
        let beta = -(a * dc - da * c) / (2.0 * da);
        let delta = -(a * dd - da * d) / (2.0 * da);
        let center = [-db / (2.0 * da), -dc / (2.0 * da)];
        let r2 = center[0] * center[0] + center[1] * center[1] - dd / da;
        if r2 < 0.0 {
            return Err(Error::EmptyCharacteristic { t });
        }
        Ok(Characteristic {
            t,
            class: IsoCircleClass {
                kind: CircleKind::Elliptic,
                plane: CarrierPlane::NonIsotropic { alpha, beta, delta },
                sphere,
            },
            curve: CharacteristicCurve::Elliptic { center, radius: r2.sqrt(), alpha, beta, delta },
        })
    } else {
        let nn = db.hypot(dc);
        if nn == 0.0 {
            return Err(Error::EmptyCharacteristic { t });
        }
        let n = [db / nn, dc / nn];
        let c0 = dd / nn;
        Ok(Characteristic {
            t,
            class: IsoCircleClass {
                kind: CircleKind::Parabolic,
                plane: CarrierPlane::Isotropic { n, c: c0 },
                sphere,
            },
            curve: CharacteristicCurve::Parabolic {
                origin: [-c0 * n[0], -c0 * n[1]],
                dir: [-n[1], n[0]],
                sphere,
            },
        })
    }
}

/// Worst deviations found by [`channel_checks`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelReport {
    /// `|Hess d - (d^T Hess d) d|` for the characteristic tangent `d`.
    pub max_eigen_residual: f64,
    /// `|d^T Hess d - A(t)|`.
    pub max_curvature_residual: f64,
    pub samples: usize,
    /// Sample points where the swept surface was not admissible.
    pub skipped: usize,
}

/// Checks along sampled characteristics that the envelope has a principal
/// direction tangent to them with principal curvature `A(t)`.
///
/// The envelope is swept as `(t, s) -> c(t)(s)` and differentiated with a
/// fourth-order stencil.
pub fn channel_checks(fam: &SphereFamily, ts: &[f64], per_curve: usize) -> Result<ChannelReport> {
    let mut rep = ChannelReport { max_eigen_residual: 0.0, max_curvature_residual: 0.0, samples: 0, skipped: 0 };
    let sweep = |t: f64, s: f64| envelope_characteristic(fam, t).ok().map(|c| c.curve.point(s));
    for &t in ts {
        let ch = envelope_characteristic(fam, t)?;
        let params: Vec<f64> = match ch.curve {
            CharacteristicCurve::Elliptic { .. } => {
                (0..per_curve).map(|k| TAU * (k as f64 + 0.5) / per_curve as f64).collect()
            }
            CharacteristicCurve::Parabolic { .. } => {
                (0..per_curve).map(|k| -1.0 + 2.0 * (k as f64 + 0.5) / per_curve as f64).collect()
            }
        };
        for s in params {
            let j = fd_param_jet4(sweep, t, s, 1e-3)?;
            let Ok(h) = height_jet_from_param(&j) else {
                rep.skipped += 1;
                continue;
            };
            let Some(d) = TopDir::new(j.rv.x, j.rv.y) else {
                rep.skipped += 1;
                continue;
            };
            let kn = h.normal_curvature(d);
            let hd = [h.fxx * d.t1 + h.fxy * d.t2, h.fxy * d.t1 + h.fyy * d.t2];
            let eig = (hd[0] - kn * d.t1).hypot(hd[1] - kn * d.t2);
            rep.max_eigen_residual = rep.max_eigen_residual.max(eig);
            rep.max_curvature_residual = rep.max_curvature_residual.max((kn - fam.sphere(t).a).abs());
            rep.samples += 1;
        }
    }
    Ok(rep)
}
