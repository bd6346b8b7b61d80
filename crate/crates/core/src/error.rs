use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("top-view Jacobian vanishes (det J = {det:e}); tangent plane is isotropic")]
    NonAdmissiblePoint { det: f64 },
    #[error("Gaussian curvature {k:e} is numerically zero")]
    DegenerateK { k: f64 },
    #[error("umbilic point: principal curvatures coincide")]
    Umbilic,
    #[error("finite-difference stencil leaves the domain of the height field")]
    StencilOutOfDomain,
    #[error("point ({u}, {v}) lies on or near the singular locus {locus}")]
    SingularLocus { locus: String, u: f64, v: f64 },
    #[error("point ({u}, {v}) is outside the parameter domain")]
    OutOfDomain { u: f64, v: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("similarity is not invertible")]
    SingularSimilarity,
    #[error("sphere radius must be nonzero")]
    ZeroRadius,
    #[error("curvature must be nonzero")]
    ZeroCurvature,
    #[error("sphere family is stationary at t = {t}")]
    StationaryFamily { t: f64 },
    #[error("characteristic at t = {t} has no real points")]
    EmptyCharacteristic { t: f64 },
    #[error("sphere family derivative `{which}` disagrees with finite differences by {err:e}")]
    InconsistentDerivative { which: &'static str, err: f64 },
    #[error("curve has an inflection; no osculating isotropic circle")]
    InflectionPoint,
    #[error("curve jet is degenerate")]
    DegenerateJet,
    #[error("normal curvature vanishes in the given direction")]
    ZeroNormalCurvature,
    #[error("least-squares fit is rank deficient")]
    DegenerateFit,
    #[error("curves do not intersect in the top view")]
    NoIntersection,
    #[error("umbilic point encountered while tracing")]
    UmbilicEncountered,
    #[error("singularity encountered while tracing: {0}")]
    SingularEncountered(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("every grid vertex is masked")]
    EmptyGrid,
    #[error("grid needs at least 2x2 vertices, got {nu}x{nv}")]
    InvalidGrid { nu: usize, nv: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
