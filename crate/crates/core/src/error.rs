use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },

    #[error("degenerate triangle: points are collinear")]
    Collinear,

    #[error("point is not outside the circle (distance {distance}, radius {radius})")]
    NotOutsideCircle { distance: f64, radius: f64 },

    #[error("duplicate point at indices {first} and {second}")]
    DuplicatePoint { first: usize, second: usize },

    #[error("need at least {required} points, got {actual}")]
    TooFewPoints { required: usize, actual: usize },

    #[error("all points are collinear")]
    AllCollinear,

    #[error("malformed triangulation: {0}")]
    MalformedTriangulation(String),

    #[error("vertex index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("vertices {0} and {1} are not connected")]
    Disconnected(usize, usize),

    #[error("dilation is undefined for a vertex paired with itself ({0})")]
    SameVertex(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("root finding failed: {0}")]
    NoSignChange(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("could not perturb into a unique Delaunay triangulation: {0}")]
    PerturbationFailed(String),

    #[error("point set is degenerate (no unique Delaunay triangulation); perturb it first")]
    DegeneratePointSet,

    #[error("rejection sampling gave up after {attempts} attempts")]
    RejectionSampling { attempts: usize },

    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
