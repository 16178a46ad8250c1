use crate::geom::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("need at least {required} points, got {got}")]
    TooFewPoints { required: usize, got: usize },
    #[error("points are not in general position: {0}")]
    NotGeneralPosition(Violation),
    #[error("all points are collinear")]
    AllCollinear,
    #[error("degenerate triangle: the three corners are collinear")]
    DegenerateTriangle,
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("point {0} is not an interior point")]
    NotInterior(usize),
    #[error("({0}, {1}) is not a side of the convex hull")]
    NotHullSide(usize, usize),
    #[error("expected exactly one interior point, found {0}")]
    InteriorCount(usize),
    #[error("instance of size {size} exceeds the cap of {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("W_n is defined for n >= 2, got n = {0}")]
    WOutOfDomain(usize),
    #[error("invalid size list: {0}")]
    InvalidSizeList(String),
    #[error("point {0} is not strictly inside the angle")]
    OutsideAngle(usize),
    #[error("characteristic vector has length {got}, frame has {expected} points")]
    CharVectorLength { expected: usize, got: usize },
    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),
    #[error("polygon is not good: {0}")]
    NotGood(String),
    #[error("green point placement failed after {0} retries")]
    GreenPlacement(usize),
    #[error("generator failed: {0}")]
    Generator(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("time budget exhausted")]
    BudgetExhausted,
    #[error("invariant violated: {0}")]
    Invariant(String),
}
