use thiserror::Error;

/// Every failure the library can report.
///
/// Each variant has a stable machine-readable [`code`](Error::code) used by
/// the CLI's JSON envelope.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands lie in different quadratic fields (sqrt({0}) vs sqrt({1}))")]
    MixedRadicand(String, String),
    #[error("sqrt({0}) cannot be expressed over the basis {{1, theta}} of Q(sqrt({1}))")]
    IncomparableFields(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("continued fraction has only {available} terms, {requested} requested")]
    NotEnoughTerms { requested: usize, available: usize },
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("Moebius transformation has a pole at {0}")]
    PoleAtInput(String),
    #[error("point {0} lies on a tiling geodesic")]
    BoundaryPoint(String),
    #[error("vertical segment is degenerate: {0}")]
    DegenerateSegment(String),
    #[error("value {0} must be irrational")]
    NotIrrational(String),
    #[error("invalid partial quotient: {0}")]
    InvalidQuotient(String),
    #[error("slope undefined: first coordinate is zero")]
    SlopeUndefined,
    #[error("zero vector has no slope")]
    ZeroVector,
    #[error("point must lie in the upper half-plane (y > 0), got y = {0}")]
    NotInUpperHalfPlane(String),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("parse error at position {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::MixedRadicand(..) => "MixedRadicand",
            Error::IncomparableFields(..) => "IncomparableFields",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotEnoughTerms { .. } => "NotEnoughTerms",
            Error::NotUnimodular(_) => "NotUnimodular",
            Error::PoleAtInput(_) => "PoleAtInput",
            Error::BoundaryPoint(_) => "BoundaryPoint",
            Error::DegenerateSegment(_) => "DegenerateSegment",
            Error::NotIrrational(_) => "NotIrrational",
            Error::InvalidQuotient(_) => "InvalidQuotient",
            Error::SlopeUndefined => "SlopeUndefined",
            Error::ZeroVector => "ZeroVector",
            Error::NotInUpperHalfPlane(_) => "NotInUpperHalfPlane",
            Error::UnknownSuite(_) => "UnknownSuite",
            Error::Parse { .. } => "ParseError",
            Error::Io(_) => "IoError",
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }

    pub(crate) fn parse(position: usize, expected: impl Into<String>) -> Self {
        Error::Parse {
            position,
            expected: expected.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
