use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty point set")]
    EmptyPointSet,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("point {0} is not in the effective domain")]
    NotInDomain(String),
    #[error("function is not integrally convex: {0}")]
    NotIntegrallyConvex(String),
    #[error("real subdifferential is unbounded in direction {0}")]
    UnboundedSubdifferential(String),
    #[error("domains do not intersect")]
    EmptyIntersection,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("gave up after {0} attempts")]
    GaveUp(usize),
}
