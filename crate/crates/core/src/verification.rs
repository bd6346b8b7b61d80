//! Residuals of the governing ODEs and identities behind each family.

use crate::error::{Error, Result};
use crate::families::{helical_general_profile, iso_noniso_profile, FamilyId, FamilySpec};

/// Both sides of an identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub lhs: f64,
    pub rhs: f64,
}

impl Residual {
    pub fn raw(&self) -> f64 {
        self.lhs - self.rhs
    }

    /// `|lhs - rhs| / max(|lhs|, |rhs|, 1)`.
    pub fn normalized(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.lhs.abs().max(self.rhs.abs()).max(1.0)
    }
}

/// `a u^2 (f' + u f'')^2 = (a+1)^2 (u^3 f'' f' - 1)` for a helical surface
/// `(u cos v, u sin v, f(u) + v)`.
pub fn helical_ode_residual(u: f64, f1: f64, f2: f64, a: f64) -> Residual {
    let s = f1 + u * f2;
    Residual { lhs: a * u * u * s * s, rhs: (a + 1.0) * (a + 1.0) * (u * u * u * f2 * f1 - 1.0) }
}

/// Five-point central derivative.
fn deriv5(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
}

/// Differentiation step for [`helical_substitution_check`].
pub const SUBSTITUTION_STEP: f64 = 1e-4;

/// Checks the substitution behind the general helical family at parameter `s`:
/// the radius obeys `rho'/rho = (tan s - a cot s)/(a+1)` and the height obeys
/// `F'(s) = (tan s + a cot s)(tan s - a cot s)/((a-1)(a+1))`, both differentiated
/// numerically from the chart profile.
pub fn helical_substitution_check(s: f64, a: f64) -> Result<(Residual, Residual)> {
    let locus = |what: &str| Error::SingularLocus { locus: what.to_string(), u: s, v: 0.0 };
    if (a.abs() - 1.0).abs() < 1e-12 || a == 0.0 {
        return Err(locus("a = +-1"));
    }
    let h = SUBSTITUTION_STEP;
    if s - 2.0 * h <= 0.0 || s + 2.0 * h >= std::f64::consts::FRAC_PI_2 {
        return Err(locus("s outside (0, pi/2)"));
    }
    let (t, c) = (s.tan(), 1.0 / s.tan());
    if a > 0.0 && (t * t - a).abs() < 1e-6 {
        return Err(locus("tan^2 s = a"));
    }
    let rho = |x: f64| helical_general_profile(a, x).0[0];
    let height = |x: f64| helical_general_profile(a, x).1[0];
    let r0 = rho(s);
    let radius = Residual { lhs: deriv5(rho, s, h), rhs: r0 * (t - a * c) / (a + 1.0) };
    let slope = Residual { lhs: deriv5(height, s, h), rhs: (t + a * c) * (t - a * c) / ((a - 1.0) * (a + 1.0)) };
    Ok((radius, slope))
}

/// Derivative data of the profile curves of a translational surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TranslationalCase {
    /// `(u, k u + v, f(u) + g(v))`
    TwoIso { k: f64, f2: f64, g2: f64 },
    /// `(v, -u + g(v), f(u))`
    IsoNoniso { f1: f64, f2: f64, g1: f64, g2: f64 },
    /// `(u + v, f(u) + g(v), u)`
    NonisoNoniso { f1: f64, f2: f64, g1: f64, g2: f64 },
}

/// Residual of the constant-ratio ODE for a translational surface.
pub fn translational_residual(case: TranslationalCase, a: f64) -> Result<Residual> {
    if a == 0.0 {
        return Err(Error::InvalidParams("ratio a must be nonzero".into()));
    }
    let m = (a + 1.0) * (a + 1.0) / a;
    match case {
        TranslationalCase::TwoIso { k, f2, g2 } => {
            if f2 * g2 == 0.0 {
                return Err(Error::DegenerateInput("f'' g'' = 0"));
            }
            let q = f2 / g2;
            let l = k * k + 1.0 + q;
            Ok(Residual { lhs: l * l, rhs: m * q })
        }
        TranslationalCase::IsoNoniso { f1, f2, g1, g2 } => {
            if f1 * f2 * g2 == 0.0 {
                return Err(Error::DegenerateInput("f' f'' g'' = 0"));
            }
            let q = f2 / f1;
            let l = (1.0 + g1 * g1) * q + g2;
            Ok(Residual { lhs: l * l, rhs: m * q * g2 })
        }
        TranslationalCase::NonisoNoniso { f1, f2, g1, g2 } => {
            if f2 * g2 == 0.0 {
                return Err(Error::DegenerateInput("f'' g'' = 0"));
            }
            if f1 == g1 {
                return Err(Error::DegenerateInput("f' = g'"));
            }
            let l = (1.0 + f1 * f1) * g2 + (1.0 + g1 * g1) * f2;
            Ok(Residual { lhs: l * l, rhs: m * f2 * g2 * (f1 - g1) * (f1 - g1) })
        }
    }
}

/// Both sides of the discriminant factorization for the conic in `X`
/// `a((g'^2+1) X + (Y^2+1) L)^2 - (a+1)^2 X (Y - g')^2 L`, with `L = L0 + L1 Y`.
///
/// Returns `(lhs, rhs, |lhs - rhs|)`.
pub fn discriminant_identity_check(a: f64, gp: f64, l0: f64, l1: f64, y: f64) -> (f64, f64, f64) {
    let l = l0 + l1 * y;
    let (p, w, d) = (gp * gp + 1.0, y * y + 1.0, y - gp);
    let qa = a * p * p;
    let qb = l * (2.0 * a * p * w - (a + 1.0) * (a + 1.0) * d * d);
    let qc = a * w * w * l * l;
    let lhs = qb * qb - 4.0 * qa * qc;
    let am1 = (a - 1.0) * (a - 1.0);
    let last = am1 * gp * gp - 4.0 * a - 2.0 * (a + 1.0) * (a + 1.0) * gp * y + (am1 - 4.0 * a * gp * gp) * y * y;
    let rhs = (a + 1.0) * (a + 1.0) * d * d * l * l * last;
    (lhs, rhs, (lhs - rhs).abs())
}

/// Scale for comparing the two sides of [`discriminant_identity_check`].
pub fn discriminant_scale(a: f64, gp: f64, l0: f64, l1: f64, y: f64) -> f64 {
    let l = l0 + l1 * y;
    let (p, w, d) = (gp * gp + 1.0, y * y + 1.0, y - gp);
    let qb = l * (2.0 * a * p * w - (a + 1.0) * (a + 1.0) * d * d);
    let four_ac = 4.0 * a * p * p * a * w * w * l * l;
    1f64.max(qb * qb).max(four_ac.abs())
}

/// `(f'(x), f''(x))` of the profile `z = f(x)` of a curve `(x(s), z(s))`.
fn graph_derivatives(x: [f64; 3], z: [f64; 3]) -> Result<(f64, f64)> {
    if x[1] == 0.0 {
        return Err(Error::DegenerateInput("profile has a vertical tangent"));
    }
    Ok((z[1] / x[1], (z[2] * x[1] - z[1] * x[2]) / (x[1] * x[1] * x[1])))
}

/// Residual of the governing ODE of the family at `(u, v)`, from analytic jets.
///
/// `None` for families verified only through their curvature ratio.
pub fn family_ode_residual(spec: &FamilySpec, u: f64, v: f64) -> Option<Result<Residual>> {
    let a = spec.expected_ratio();
    let rotational = |h1: f64, h2: f64, ratio: f64| Residual { lhs: ratio * h1, rhs: u * h2 };
    Some(match spec.id {
        FamilyId::Paraboloid => translational_residual(TranslationalCase::TwoIso { k: 0.0, f2: 2.0, g2: 2.0 * a }, a),
        FamilyId::TransParaboloid => {
            translational_residual(TranslationalCase::TwoIso { k: 0.0, f2: 2.0 * a, g2: 2.0 }, a)
        }
        FamilyId::RotationalPower1 | FamilyId::RotationalPower2 | FamilyId::Logarithmoid | FamilyId::EuclideanRotational => {
            spec.chart(u, 0.0).map(|j| {
                let (h1, h2) = (j.ru.z, j.ruu.z);
                match spec.id {
                    FamilyId::RotationalPower2 => rotational(h1, h2, 1.0 / a),
                    FamilyId::EuclideanRotational => rotational(h1 * (1.0 + h1 * h1), h2, a),
                    _ => rotational(h1, h2, a),
                }
            })
        }
        FamilyId::Helicoid | FamilyId::HelicalLog => {
            spec.chart(u, 0.0).map(|j| helical_ode_residual(u, j.ru.z, j.ruu.z, a))
        }
        FamilyId::HelicalGeneral => {
            let (rho, f) = helical_general_profile(a, u);
            graph_derivatives(rho, f).map(|(f1, f2)| helical_ode_residual(rho[0], f1, f2, a))
        }
        FamilyId::TransIsoNoniso => {
            // (X(v), Y(v) + (1-b^2) u, e^u) is the standard form with
            // u' = (b^2-1) u, f(u') = exp(u'/(b^2-1)), g = Y o X^-1
            let b = spec.param("b");
            let (x, y) = iso_noniso_profile(b, v);
            let n = b * b - 1.0;
            let e = u.exp();
            graph_derivatives(x, y).and_then(|(g1, g2)| {
                translational_residual(TranslationalCase::IsoNoniso { f1: e / n, f2: e / (n * n), g1, g2 }, a)
            })
        }
        FamilyId::TransNonisoNoniso => {
            let (tu, tv) = (u.tan(), v.tan());
            translational_residual(
                TranslationalCase::NonisoNoniso { f1: -tu, f2: -(1.0 + tu * tu), g1: tv, g2: 1.0 + tv * tv },
                a,
            )
        }
        FamilyId::SpiralRuled | FamilyId::DualTransIsoNoniso | FamilyId::DualTransMinimal => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::params_a;

    #[test]
    fn helical_log_solves_the_ode_at_a_minus_one() {
        for &u in &[0.3, 1.0, 2.5] {
            let c = 1.7;
            let r = helical_ode_residual(u, c / u, -c / (u * u), -1.0);
            assert!(r.lhs.abs() < 1e-14 && r.rhs == 0.0, "{r:?}");
        }
    }

    #[test]
    fn quadratic_profile_is_not_a_solution() {
        // f = u^2 at u = 1.5
        let r = helical_ode_residual(1.5, 3.0, 2.0, 3.0);
        assert!(r.normalized() > 0.1, "{r:?}");
    }

    #[test]
    fn general_helical_satisfies_the_ode() {
        let s = FamilySpec::with_a(FamilyId::HelicalGeneral, 2.0).unwrap();
        let d = s.domain;
        for k in 0..=20 {
            let u = d.u_at(k, 21);
            let r = family_ode_residual(&s, u, 0.0).unwrap().unwrap();
            assert!(r.normalized() <= 1e-8, "u={u}: {r:?}");
        }
    }

    #[test]
    fn substitution_identities() {
        for (s, a) in [(std::f64::consts::FRAC_PI_6, 2.0), (std::f64::consts::FRAC_PI_3, -2.0)] {
            let (r1, r2) = helical_substitution_check(s, a).unwrap();
            assert!(r1.normalized() <= 1e-8 && r2.normalized() <= 1e-8, "{r1:?} {r2:?}");
        }
        assert!(matches!(
            helical_substitution_check(std::f64::consts::FRAC_PI_4, 1.0),
            Err(Error::SingularLocus { .. })
        ));
        assert!(matches!(helical_substitution_check(2.0_f64.sqrt().atan(), 2.0), Err(Error::SingularLocus { .. })));
    }

    #[test]
    fn translational_examples() {
        let a = 2.5;
        let r = translational_residual(TranslationalCase::TwoIso { k: 0.0, f2: 2.0 * a, g2: 2.0 }, a).unwrap();
        assert!(r.raw().abs() <= 1e-12);

        let s = FamilySpec::with_a(FamilyId::TransIsoNoniso, 2.0).unwrap();
        let d = s.domain;
        for (i, k) in [(0, 0), (3, 7), (10, 10)] {
            let (u, v) = (d.u_at(i, 11), d.v_at(k, 11));
            let r = family_ode_residual(&s, u, v).unwrap().unwrap();
            assert!(r.normalized() <= 1e-8, "{r:?}");
        }

        for &(u, v) in &[(0.1_f64, 0.2_f64), (0.7, -0.3), (1.2, 0.4)] {
            let (tu, tv) = (u.tan(), v.tan());
            let case = TranslationalCase::NonisoNoniso { f1: -tu, f2: -(1.0 + tu * tu), g1: tv, g2: 1.0 + tv * tv };
            let r = translational_residual(case, -1.0).unwrap();
            assert!(r.raw().abs() <= 1e-10, "{r:?}");
        }
    }

    #[test]
    fn translational_degenerate_inputs() {
        let e = translational_residual(TranslationalCase::TwoIso { k: 0.0, f2: 0.0, g2: 1.0 }, 2.0);
        assert!(matches!(e, Err(Error::DegenerateInput(_))));
        let e = translational_residual(TranslationalCase::NonisoNoniso { f1: 1.0, f2: 1.0, g1: 1.0, g2: 1.0 }, 2.0);
        assert!(matches!(e, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn discriminant_examples() {
        let (l, r, d) = discriminant_identity_check(2.0, 0.0, 1.0, 0.0, 1.0);
        assert_eq!((l, r, d), (-63.0, -63.0, 0.0));
        let (l, r, _) = discriminant_identity_check(1.3, 0.4, 0.0, 0.0, 2.0);
        assert_eq!((l, r), (0.0, 0.0));
    }

    #[test]
    fn every_family_with_an_ode_satisfies_it() {
        for id in FamilyId::ALL {
            let a = id.fixed_ratio().unwrap_or(if id == FamilyId::SpiralRuled { -2.0 } else { 2.0 });
            let s = FamilySpec::new(id, params_a(a)).unwrap();
            let d = s.domain;
            for i in 0..9 {
                for k in 0..9 {
                    let (u, v) = (d.u_at(i, 9), d.v_at(k, 9));
                    if s.locus_distance(u, v) < crate::families::EPS_SING {
                        continue;
                    }
                    if let Some(r) = family_ode_residual(&s, u, v) {
                        let r = r.unwrap();
                        assert!(r.normalized() <= 1e-8, "{id} at ({u}, {v}): {r:?}");
                    }
                }
            }
        }
    }
}
