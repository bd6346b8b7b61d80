use crate::error::{Error, Result};
use crate::geometry::{ParamJet2, Point3};

/// Element of the 8-parameter group of isotropic similarities
/// `x' = A x + b`, `A = [[h1, -h2, 0], [h2, h1, 0], [c1, c2, c3]]`.
///
/// `h1 = cos phi, h2 = sin phi, c3 = 1` gives the isotropic congruences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G8Element {
    pub h1: f64,
    pub h2: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub b: Point3,
}

impl G8Element {
    pub const IDENTITY: G8Element =
        G8Element { h1: 1.0, h2: 0.0, c1: 0.0, c2: 0.0, c3: 1.0, b: Point3::ZERO };

    /// Isotropic motion: top-view rotation by `phi`, shear `(c1, c2)`, translation `b`.
    pub fn motion(phi: f64, c1: f64, c2: f64, b: Point3) -> Self {
        G8Element { h1: phi.cos(), h2: phi.sin(), c1, c2, c3: 1.0, b }
    }

    pub fn is_invertible(&self) -> bool {
        self.c3 != 0.0 && self.h1 * self.h1 + self.h2 * self.h2 != 0.0
    }

    /// The linear part applied to a vector.
    pub fn linear(&self, p: Point3) -> Point3 {
        Point3::new(
            self.h1 * p.x - self.h2 * p.y,
            self.h2 * p.x + self.h1 * p.y,
            self.c1 * p.x + self.c2 * p.y + self.c3 * p.z,
        )
    }

    pub fn apply(&self, p: Point3) -> Point3 {
        self.linear(p) + self.b
    }
}

/// Transforms a parametric 2-jet; the translation moves the position only.
pub fn apply_similarity(g: &G8Element, j: &ParamJet2) -> Result<ParamJet2> {
    if !g.is_invertible() {
        return Err(Error::SingularSimilarity);
    }
    Ok(ParamJet2 {
        r: g.apply(j.r),
        ru: g.linear(j.ru),
        rv: g.linear(j.rv),
        ruu: g.linear(j.ruu),
        ruv: g.linear(j.ruv),
        rvv: g.linear(j.rvv),
    })
}
