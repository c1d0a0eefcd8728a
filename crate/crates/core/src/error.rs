use thiserror::Error;

use crate::geom::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HcsError {
    #[error("curve has no visits")]
    EmptyCurve,
    #[error("consecutive visits repeat the point {0}")]
    RepeatedConsecutiveVisit(Point),
    #[error("points {0}, {1}, {2} are collinear")]
    Collinear(Point, Point, Point),
    #[error("visit {0} is not unstable")]
    StableVisit(usize),
    #[error("visit {0} is anchored")]
    AnchoredVisit(usize),
    #[error("curve has collapsed to a point")]
    Collapsed,
    #[error("obstacle set is empty")]
    NoObstacles,
    #[error("duplicate obstacle {0}")]
    DuplicateObstacle(Point),
    #[error("degenerate region")]
    DegenerateRegion,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("all points are collinear")]
    AllCollinear,
    #[error("curve is not simple")]
    NotSimple,
    #[error("curve has zero length")]
    ZeroLength,
    #[error("coincident sample points")]
    CoincidentPoints,
    #[error("flow produced a non-finite value at t = {t}")]
    NonFinite { t: f64 },
    #[error("flow time must be positive")]
    NonPositiveTime,
    #[error("point {0} is not a triangulation vertex")]
    NotAVertex(Point),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for HcsError {
    fn from(e: std::io::Error) -> Self {
        HcsError::Io(e.to_string())
    }
}
