use thiserror::Error;

use crate::space::LinePairClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid space form: {0}")]
    InvalidSpace(String),
    #[error("point is not on the model surface: {0}")]
    OffModel(String),
    #[error("geodesic direction undefined (coincident or antipodal points)")]
    DegenerateAngle,
    #[error("point is a pole of the line; every point of the line is equidistant")]
    Pole,
    #[error("point is not on the line (residual {0:.3e})")]
    OffLine(f64),
    #[error("antipodal points have no unique midpoint")]
    Antipodal,
    #[error("argument outside the valid domain: {0}")]
    Domain(String),
    #[error("side lengths violate the strict triangle inequality")]
    NotATriangle,
    #[error("angles ({0:.6}, {1:.6}, {2:.6}) are not realizable in this space")]
    UnrealizableAngles(f64, f64, f64),
    #[error("Euclidean triangle area is not determined by its angles")]
    NotDeterminedByAngles,
    #[error("the Euclidean plane has no canonical unit of length")]
    NoCanonicalUnit,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("perpendicular bisectors do not meet")]
    NoCircumcenter,
    #[error("closing perpendiculars do not meet ({})", .0.tag())]
    NoFourthVertex(LinePairClass),
    #[error("operation not applicable in this space: {0}")]
    NotApplicable(String),
    #[error("chain is degenerate (straight angle)")]
    DegenerateChain,
    #[error("complex evaluation left the principal branch: {0}")]
    Branch(String),
    #[error("construction leaves the projection domain: {0}")]
    RenderDomain(String),
    #[error("malformed request: {0}")]
    Schema(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
}

impl Error {
    /// Stable machine-readable code used in JSON responses.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSpace(_) => "invalid-space",
            Error::OffModel(_) => "off-model",
            Error::DegenerateAngle => "degenerate-angle",
            Error::Pole => "pole",
            Error::OffLine(_) => "off-line",
            Error::Antipodal => "antipodal",
            Error::Domain(_) => "domain",
            Error::NotATriangle => "not-a-triangle",
            Error::UnrealizableAngles(..) => "unrealizable-angles",
            Error::NotDeterminedByAngles => "not-determined-by-angles",
            Error::NoCanonicalUnit => "no-canonical-unit",
            Error::OutOfRange(_) => "out-of-range",
            Error::NoCircumcenter => "no-circumcenter",
            Error::NoFourthVertex(_) => "no-fourth-vertex",
            Error::NotApplicable(_) => "not-applicable",
            Error::DegenerateChain => "degenerate-chain",
            Error::Branch(_) => "branch",
            Error::RenderDomain(_) => "render-domain",
            Error::Schema(_) => "schema",
            Error::UnknownSuite(_) => "unknown-suite",
        }
    }
}
