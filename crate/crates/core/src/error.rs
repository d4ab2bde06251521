use thiserror::Error;

/// Errors raised by the geometry, dynamics and diagnostic layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SheetError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate metric: min |eta'| = {min:e} below 1e-10 x mean |eta'| = {mean:e}")]
    DegenerateMetric { min: f64, mean: f64 },
    #[error("near-singular kernel: nodes {a} and {b} are {distance:e} apart (limit {limit:e})")]
    NearSingularKernel {
        a: usize,
        b: usize,
        distance: f64,
        limit: f64,
    },
    #[error("unstable step at t = {time}: field magnitude {magnitude:e} exceeds {limit:e}")]
    UnstableStep {
        time: f64,
        magnitude: f64,
        limit: f64,
    },
    #[error("probe point too close to the interface: distance {distance:e} < {limit:e}")]
    PointTooClose { distance: f64, limit: f64 },
    #[error("insufficient window: {0}")]
    InsufficientWindow(String),
    #[error("no intersection of the vertical line x1 = {0} with the window")]
    NoIntersection(f64),
    #[error("window is not monotone in x1 ({crossings} sign changes or tangent turns vertical)")]
    NonMonotone { crossings: usize },
    #[error("vertical segment leaves the minus phase at sample {0}")]
    SegmentExitsPhase(usize),
    #[error("degenerate pair: |delta eta| = {0:e}")]
    DegeneratePair(f64),
    #[error("marker vertex {0} escaped the minus phase")]
    MarkerEscaped(usize),
    #[error("missing manifest in {0}")]
    MissingManifest(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for SheetError {
    fn from(e: std::io::Error) -> Self {
        SheetError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, SheetError>;
