pub mod curves;
pub mod duality;
pub mod error;
pub mod families;
pub mod geometry;
pub mod io;
pub mod mesh;
pub mod quadrature;
pub mod spheres;
pub mod verification;

pub use error::{Error, Result};

/// Runs the guide's code listings as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod chapter0 {}
    #[doc = include_str!("../../../book/src/curvature.md")]
    pub mod chapter1 {}
    #[doc = include_str!("../../../book/src/families.md")]
    pub mod chapter2 {}
    #[doc = include_str!("../../../book/src/curves.md")]
    pub mod chapter3 {}
    #[doc = include_str!("../../../book/src/spheres.md")]
    pub mod chapter4 {}
    #[doc = include_str!("../../../book/src/duality.md")]
    pub mod chapter5 {}
    #[doc = include_str!("../../../book/src/verification.md")]
    pub mod chapter6 {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod chapter7 {}
}
