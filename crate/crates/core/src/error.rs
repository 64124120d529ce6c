use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HullError {
    #[error("affine function has zero gradient")]
    ZeroGradient,
    #[error("line misses the open unit ball (|f0| = {0})")]
    LineMissesBall(f64),
    #[error("line misses the sphere of radius {radius} (|f0| = {offset})")]
    LineMissesSphere { offset: f64, radius: f64 },
    #[error("empty or degenerate solid torus: {0}")]
    EmptyTorus(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("circles on the sphere intersect (line intersection norm {0})")]
    CirclesIntersect(f64),
    #[error("resolution too coarse: certified bound {bound} not positive")]
    ResolutionTooCoarse { bound: f64 },
    #[error("inclusion violated at {witness:?}: {detail}")]
    ViolationFound { witness: [f64; 4], detail: String },
    #[error("radius {r} outside [{lo}, {hi}]")]
    RadiusOutOfRange { r: f64, lo: f64, hi: f64 },
    #[error("line intersection {0} not strictly inside the unit ball")]
    IntersectionOutsideBall(f64),
    #[error("no equidistributed count with spacing in [{lo}, {hi}] on radius {radius}")]
    NoFeasibleCount { radius: f64, lo: f64, hi: f64 },
    #[error("eps {eps} too large: {reason}")]
    EpsTooLarge { eps: f64, reason: String },
    #[error("spacing viability failed: sqrt(a*eps) = {root} <= (B+1)*eps = {spacing}")]
    SpacingViabilityFailed { root: f64, spacing: f64 },
    #[error("disjointness failed for {pair}: {detail}")]
    DisjointnessFailed { pair: String, detail: String },
    #[error("no admissible psi found (best gap {best_gap})")]
    NoPsiFound { best_gap: f64 },
    #[error("parameter search failed: {0}")]
    ParameterSearchFailed(String),
    #[error("sigma {sigma} too large for s = {s}: {reason}")]
    SigmaTooLarge { sigma: f64, s: f64, reason: String },
    #[error("bidisc cover search failed for beta = {0}")]
    CoverSearchFailed(f64),
    #[error("merge collision between {0}")]
    MergeCollision(String),
    #[error("gate {gate} failed for parent {parent}: {detail}")]
    GateFailed { gate: String, parent: String, detail: String },
    #[error("epsilon search exhausted after {0} halvings")]
    SearchExhausted(u32),
    #[error("archive error: {0}")]
    Archive(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for HullError {
    fn from(e: std::io::Error) -> Self {
        HullError::Io(e.to_string())
    }
}

pub type Result<T, E = HullError> = std::result::Result<T, E>;
