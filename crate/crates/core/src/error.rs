use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("face {face} is not planar (deviation {deviation:e})")]
    NonPlanarFace { face: usize, deviation: f64 },

    #[error("not convex: {detail}")]
    NotConvex { cell: Option<usize>, detail: String },

    #[error("bad topology: {0}")]
    BadTopology(String),

    #[error("point is not strictly interior (min face distance {min_h:e})")]
    PointNotInterior { min_h: f64 },

    #[error("shape mismatch: expected {expected} values, got {got}")]
    ShapeError { expected: usize, got: usize },

    #[error("vertex {vertex} is not simple ({valence} incident faces)")]
    NonSimpleVertex { vertex: usize, valence: usize },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("conjugate gradient did not converge after {} iterations (last relative residual {:e})",
        .residual_history.len(), .residual_history.last().copied().unwrap_or(f64::NAN))]
    SolveError { residual_history: Vec<f64> },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn not_convex(detail: impl Into<String>) -> Self {
        Error::NotConvex {
            cell: None,
            detail: detail.into(),
        }
    }
}
