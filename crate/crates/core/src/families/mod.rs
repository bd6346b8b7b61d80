//! Closed-form surface families with constant principal-curvature ratio.
//!
//! Every family is a parametric chart `r(u, v)` with hand-differentiated first
//! and second partials. A [`FamilySpec`] bundles the chart with its parameters,
//! a parameter box and the singular loci that sampling must stay away from.

mod charts;
mod similarity;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{ParamJet2, Point3};

pub use charts::euclidean_profile;
pub(crate) use charts::{helical_general_profile, iso_noniso_profile};
pub use similarity::{apply_similarity, G8Element};

/// Distance in parameter units below which a point counts as singular.
pub const EPS_SING: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    Paraboloid,
    RotationalPower1,
    RotationalPower2,
    Logarithmoid,
    EuclideanRotational,
    Helicoid,
    SpiralRuled,
    HelicalGeneral,
    HelicalLog,
    TransParaboloid,
    TransIsoNoniso,
    TransNonisoNoniso,
    DualTransIsoNoniso,
    DualTransMinimal,
}

impl FamilyId {
    pub const ALL: [FamilyId; 14] = [
        FamilyId::Paraboloid,
        FamilyId::RotationalPower1,
        FamilyId::RotationalPower2,
        FamilyId::Logarithmoid,
        FamilyId::EuclideanRotational,
        FamilyId::Helicoid,
        FamilyId::SpiralRuled,
        FamilyId::HelicalGeneral,
        FamilyId::HelicalLog,
        FamilyId::TransParaboloid,
        FamilyId::TransIsoNoniso,
        FamilyId::TransNonisoNoniso,
        FamilyId::DualTransIsoNoniso,
        FamilyId::DualTransMinimal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Paraboloid => "paraboloid",
            FamilyId::RotationalPower1 => "rotational_power_1",
            FamilyId::RotationalPower2 => "rotational_power_2",
            FamilyId::Logarithmoid => "logarithmoid",
            FamilyId::EuclideanRotational => "euclidean_rotational",
            FamilyId::Helicoid => "helicoid",
            FamilyId::SpiralRuled => "spiral_ruled",
            FamilyId::HelicalGeneral => "helical_general",
            FamilyId::HelicalLog => "helical_log",
            FamilyId::TransParaboloid => "trans_paraboloid",
            FamilyId::TransIsoNoniso => "trans_iso_noniso",
            FamilyId::TransNonisoNoniso => "trans_noniso_noniso",
            FamilyId::DualTransIsoNoniso => "dual_trans_iso_noniso",
            FamilyId::DualTransMinimal => "dual_trans_minimal",
        }
    }

    /// Families whose ratio is fixed at `-1` (isotropic minimal surfaces).
    pub fn fixed_ratio(self) -> Option<f64> {
        match self {
            FamilyId::Logarithmoid
            | FamilyId::Helicoid
            | FamilyId::HelicalLog
            | FamilyId::TransNonisoNoniso
            | FamilyId::DualTransMinimal => Some(-1.0),
            _ => None,
        }
    }

    /// The ratio is Euclidean rather than isotropic.
    pub fn is_euclidean(self) -> bool {
        self == FamilyId::EuclideanRotational
    }

    /// Human-readable parameter constraints.
    pub fn constraints(self) -> &'static str {
        match self {
            FamilyId::Paraboloid | FamilyId::TransParaboloid => "a!=0",
            FamilyId::RotationalPower1 | FamilyId::RotationalPower2 | FamilyId::EuclideanRotational => {
                "a!=0,-1"
            }
            FamilyId::SpiralRuled => "a<0, a!=-1",
            FamilyId::HelicalGeneral => "a!=0,+-1",
            FamilyId::HelicalLog => "c real (default 1)",
            FamilyId::TransIsoNoniso | FamilyId::DualTransIsoNoniso => "a!=0,1; b=(a+1)/(a-1)",
            FamilyId::Logarithmoid | FamilyId::Helicoid | FamilyId::TransNonisoNoniso | FamilyId::DualTransMinimal => {
                "none (a=-1)"
            }
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "rotational_power" {
            return Ok(FamilyId::RotationalPower1);
        }
        FamilyId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown family `{s}`")))
    }
}

/// Named real parameters (`a`, `c`, ...).
pub type Params = BTreeMap<String, f64>;

/// Convenience constructor for a parameter map with a single `a`.
pub fn params_a(a: f64) -> Params {
    Params::from([("a".to_string(), a)])
}

/// Parameter rectangle. Endpoints may be given in either order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Domain {
    pub const fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Self {
        Domain { u0, u1, v0, v1 }
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        let inside = |x: f64, a: f64, b: f64| {
            let slack = 1e-12 * (a.abs() + b.abs() + 1.0);
            x >= a.min(b) - slack && x <= a.max(b) + slack
        };
        inside(u, self.u0, self.u1) && inside(v, self.v0, self.v1)
    }

    /// Node `i` of `n` uniformly spaced values in `u`; endpoints are exact.
    pub fn u_at(&self, i: usize, n: usize) -> f64 {
        lerp(self.u0, self.u1, i, n)
    }

    pub fn v_at(&self, j: usize, n: usize) -> f64 {
        lerp(self.v0, self.v1, j, n)
    }

    /// Point at fractional position `(s, t)` in `[0, 1]^2`.
    pub fn point(&self, s: f64, t: f64) -> (f64, f64) {
        (self.u0 + s * (self.u1 - self.u0), self.v0 + t * (self.v1 - self.v0))
    }
}

fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if n < 2 || i == 0 {
        a
    } else if i + 1 == n {
        b
    } else {
        a + (b - a) * (i as f64 / (n - 1) as f64)
    }
}

/// Shapes of singular curves in the parameter plane.
#[derive(Debug, Clone, PartialEq)]
pub enum LocusShape {
    /// `cu u + cv v + c = 0`.
    Line { cu: f64, cv: f64, c: f64 },
    /// `sin v = value`.
    SinV { value: f64 },
    /// `cos u = 0` (`on_u`) or `cos v = 0`.
    CosZero { on_u: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularLocus {
    pub label: String,
    pub shape: LocusShape,
}

impl SingularLocus {
    fn new(label: impl Into<String>, shape: LocusShape) -> Self {
        SingularLocus { label: label.into(), shape }
    }

    /// Parameter-space distance from `(u, v)` to the locus.
    pub fn distance(&self, u: f64, v: f64) -> f64 {
        match self.shape {
            LocusShape::Line { cu, cv, c } => (cu * u + cv * v + c).abs() / cu.hypot(cv),
            LocusShape::SinV { value } => {
                if value.abs() > 1.0 {
                    return f64::INFINITY;
                }
                let r = value.asin();
                periodic_distance(v, r).min(periodic_distance(v, PI - r))
            }
            LocusShape::CosZero { on_u } => periodic_distance(if on_u { u } else { v }, FRAC_PI_2).min(
                periodic_distance(if on_u { u } else { v }, -FRAC_PI_2),
            ),
        }
    }
}

/// Distance from `x` to the nearest point of `root + 2 pi k`.
fn periodic_distance(x: f64, root: f64) -> f64 {
    let d = (x - root).rem_euclid(TAU);
    d.min(TAU - d)
}

/// A family together with validated parameters, a domain and its singular loci.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub id: FamilyId,
    pub params: Params,
    pub domain: Domain,
    pub loci: Vec<SingularLocus>,
}

impl FamilySpec {
    /// Validates `params` and attaches the default domain.
    pub fn new(id: FamilyId, params: Params) -> Result<Self> {
        let params = normalize_params(id, params)?;
        let domain = default_domain(id, &params)?;
        let loci = singular_loci(id, &params);
        Ok(FamilySpec { id, params, domain, loci })
    }

    /// Shorthand for families driven by the ratio parameter alone.
    pub fn with_a(id: FamilyId, a: f64) -> Result<Self> {
        if id.fixed_ratio().is_some() {
            Self::new(id, Params::new())
        } else {
            Self::new(id, params_a(a))
        }
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn param(&self, name: &str) -> f64 {
        self.params.get(name).copied().unwrap_or(f64::NAN)
    }

    /// The ratio `a` for which the family satisfies the constant-ratio condition.
    pub fn expected_ratio(&self) -> f64 {
        self.id.fixed_ratio().unwrap_or_else(|| self.param("a"))
    }

    /// Smallest distance from `(u, v)` to a singular locus.
    pub fn locus_distance(&self, u: f64, v: f64) -> f64 {
        self.loci.iter().map(|l| l.distance(u, v)).fold(f64::INFINITY, f64::min)
    }

    fn check_loci(&self, u: f64, v: f64) -> Result<()> {
        for l in &self.loci {
            if l.distance(u, v) < EPS_SING {
                return Err(Error::SingularLocus { locus: l.label.clone(), u, v });
            }
        }
        Ok(())
    }

    /// Evaluates the chart ignoring the domain box (singular loci are still refused).
    pub fn chart(&self, u: f64, v: f64) -> Result<ParamJet2> {
        self.check_loci(u, v)?;
        let j = charts::eval(self, u, v)?;
        let finite = [j.r, j.ru, j.rv, j.ruu, j.ruv, j.rvv].iter().all(|p| p.is_finite());
        if !finite {
            return Err(Error::SingularLocus { locus: "non-finite chart value".into(), u, v });
        }
        Ok(j)
    }

    /// Position only, for oracles that difference the chart.
    pub fn position(&self, u: f64, v: f64) -> Option<Point3> {
        self.chart(u, v).ok().map(|j| j.r)
    }
}

/// Evaluates the analytic 2-jet of `spec` at `(u, v)`.
pub fn evaluate(spec: &FamilySpec, u: f64, v: f64) -> Result<ParamJet2> {
    if !spec.domain.contains(u, v) {
        return Err(Error::OutOfDomain { u, v });
    }
    spec.chart(u, v)
}

/// `b = (a+1)/(a-1)` for the translational family with one non-isotropic curve.
pub fn b_of_a(a: f64) -> f64 {
    (a + 1.0) / (a - 1.0)
}

fn normalize_params(id: FamilyId, mut p: Params) -> Result<Params> {
    let bad = |m: String| Err(Error::InvalidParams(m));
    if let Some(bad_value) = p.iter().find(|(_, v)| !v.is_finite()) {
        return bad(format!("parameter {} is not finite", bad_value.0));
    }
    if id.fixed_ratio().is_some() {
        if let Some(&a) = p.get("a") {
            if a != -1.0 {
                return bad(format!("{id} has fixed ratio a=-1, got a={a}"));
            }
        }
        p.remove("a");
        if id == FamilyId::HelicalLog {
            p.entry("c".into()).or_insert(1.0);
        }
        return Ok(p);
    }
    let Some(&a) = p.get("a") else {
        return bad(format!("{id} needs the ratio parameter a"));
    };
    if a == 0.0 {
        return bad("ratio a must be nonzero".into());
    }
    match id {
        FamilyId::RotationalPower1 | FamilyId::RotationalPower2 | FamilyId::EuclideanRotational if a == -1.0 => {
            bad(format!("{id} requires a != -1"))
        }
        FamilyId::SpiralRuled if a >= 0.0 || a == -1.0 => bad("spiral_ruled requires a < 0 and a != -1".into()),
        FamilyId::HelicalGeneral if a.abs() == 1.0 => bad("helical_general requires a != +-1".into()),
        FamilyId::TransIsoNoniso | FamilyId::DualTransIsoNoniso if a == 1.0 => bad(format!("{id} requires a != 1")),
        _ => {
            if matches!(id, FamilyId::TransIsoNoniso | FamilyId::DualTransIsoNoniso) {
                p.insert("b".into(), b_of_a(a));
            }
            Ok(p)
        }
    }
}

/// A conservative parameter box avoiding every singular locus.
pub fn default_domain(id: FamilyId, params: &Params) -> Result<Domain> {
    let p = normalize_params(id, params.clone())?;
    let a = p.get("a").copied().unwrap_or(-1.0);
    Ok(match id {
        FamilyId::Paraboloid | FamilyId::TransParaboloid => Domain::new(-1.0, 1.0, -1.0, 1.0),
        FamilyId::RotationalPower1 | FamilyId::RotationalPower2 | FamilyId::Logarithmoid => {
            Domain::new(0.5, 3.0, 0.0, TAU)
        }
        FamilyId::EuclideanRotational => {
            if a > 0.0 {
                Domain::new(0.1, 0.9f64.powf(1.0 / a), 0.0, TAU)
            } else {
                // wider margin: the profile has a branch point at r = 1
                let edge = 0.8f64.powf(1.0 / a);
                Domain::new(edge, 3.0 * edge, 0.0, TAU)
            }
        }
        FamilyId::Helicoid | FamilyId::HelicalLog => Domain::new(0.5, 2.0, 0.0, TAU),
        FamilyId::SpiralRuled => Domain::new(0.5, 2.0, -FRAC_PI_2, FRAC_PI_2),
        FamilyId::HelicalGeneral => {
            if a > 0.0 {
                let s = a.sqrt().atan();
                // the wider of the two sides of tan^2 u = a
                if s > FRAC_PI_4 {
                    Domain::new(0.15, s - 0.15, 0.0, TAU)
                } else {
                    Domain::new(s + 0.15, FRAC_PI_2 - 0.15, 0.0, TAU)
                }
            } else {
                Domain::new(0.2, FRAC_PI_2 - 0.2, 0.0, TAU)
            }
        }
        FamilyId::TransIsoNoniso | FamilyId::DualTransIsoNoniso => {
            let b = b_of_a(a);
            let root = if b.abs() < 1.0 { b.asin() } else { (1.0 / b).asin() };
            Domain::new(-1.0, 1.0, root + 0.15, PI - root - 0.15)
        }
        FamilyId::TransNonisoNoniso | FamilyId::DualTransMinimal => Domain::new(0.1, 1.3, 0.2, 1.3),
    })
}

fn singular_loci(id: FamilyId, p: &Params) -> Vec<SingularLocus> {
    let a = p.get("a").copied().unwrap_or(-1.0);
    let axis = || SingularLocus::new("u = 0", LocusShape::Line { cu: 1.0, cv: 0.0, c: 0.0 });
    match id {
        FamilyId::Paraboloid | FamilyId::TransParaboloid => vec![],
        FamilyId::RotationalPower1
        | FamilyId::RotationalPower2
        | FamilyId::Logarithmoid
        | FamilyId::Helicoid
        | FamilyId::SpiralRuled
        | FamilyId::HelicalLog => vec![axis()],
        FamilyId::EuclideanRotational => vec![
            axis(),
            SingularLocus::new("u = 1", LocusShape::Line { cu: 1.0, cv: 0.0, c: -1.0 }),
        ],
        FamilyId::HelicalGeneral => {
            let mut l = vec![
                axis(),
                SingularLocus::new("u = pi/2", LocusShape::Line { cu: 1.0, cv: 0.0, c: -FRAC_PI_2 }),
            ];
            if a > 0.0 {
                l.push(SingularLocus::new(
                    "tan^2 u = a",
                    LocusShape::Line { cu: 1.0, cv: 0.0, c: -a.sqrt().atan() },
                ));
            }
            l
        }
        FamilyId::TransIsoNoniso | FamilyId::DualTransIsoNoniso => {
            let b = b_of_a(a);
            if b.abs() < 1.0 {
                vec![SingularLocus::new("sin v = b", LocusShape::SinV { value: b })]
            } else {
                vec![SingularLocus::new("b sin v = 1", LocusShape::SinV { value: 1.0 / b })]
            }
        }
        FamilyId::TransNonisoNoniso | FamilyId::DualTransMinimal => vec![
            SingularLocus::new("u + v = 0", LocusShape::Line { cu: 1.0, cv: 1.0, c: 0.0 }),
            SingularLocus::new("cos u = 0", LocusShape::CosZero { on_u: true }),
            SingularLocus::new("cos v = 0", LocusShape::CosZero { on_u: false }),
        ],
    }
}

/// Catalog row, as printed by the command-line `list`.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: FamilyId,
    pub constraints: &'static str,
    /// `None` for families valid for any admissible `a`.
    pub fixed_ratio: Option<f64>,
    pub euclidean: bool,
    /// Default domain for a representative parameter choice.
    pub example_domain: Domain,
}

pub fn catalog() -> Vec<CatalogEntry> {
    FamilyId::ALL
        .iter()
        .map(|&id| {
            let example_a = if id == FamilyId::SpiralRuled { -2.0 } else { 2.0 };
            let spec = FamilySpec::with_a(id, example_a).expect("representative parameters are valid");
            CatalogEntry {
                id,
                constraints: id.constraints(),
                fixed_ratio: id.fixed_ratio(),
                euclidean: id.is_euclidean(),
                example_domain: spec.domain,
            }
        })
        .collect()
}
