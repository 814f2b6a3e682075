use thiserror::Error;

pub type Result<T, E = GeomError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("degenerate chart at (u, v) = ({u}, {v}): |σ_u × σ_v| = {norm:e}")]
    DegenerateChart { u: f64, v: f64, norm: f64 },
    #[error("parameter ({u}, {v}) outside the chart domain")]
    OutsideDomain { u: f64, v: f64 },
    #[error("unknown surface `{0}`")]
    UnknownSurface(String),
    #[error("bad parameters for `{surface}`: {reason}")]
    BadParams { surface: String, reason: String },
    #[error("irregular curve at t = {t}: speed {speed:e}")]
    IrregularCurve { t: f64, speed: f64 },
    #[error("curve `{name}` declared {declared} but {reason}")]
    ClosureMismatch { name: String, declared: &'static str, reason: String },
    #[error("parameter t = {t} outside [{start}, {end}]")]
    OutsideInterval { t: f64, start: f64, end: f64 },
    #[error("vanishing normal curvature at t = {t} (κ_n = {kn:e}, τ_g = {tg:e})")]
    VanishingNormalCurvature { t: f64, kn: f64, tg: f64 },
    #[error("speed mismatch at t = {t}: source {source_speed}, target {target_speed}")]
    SpeedMismatch { t: f64, source_speed: f64, target_speed: f64 },
    #[error("initial condition mismatch: {0}")]
    InitialConditionMismatch(String),
    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("striction undefined at t = {t} (rulings locally parallel)")]
    UndefinedStriction { t: f64 },
    #[error("no intersection between ribbons {a} and {b}")]
    NoIntersection { a: String, b: String },
    #[error("non-transversal contact between ribbons {a} and {b} for t in [{t0}, {t1}]")]
    NonTransversalContact { a: String, b: String, t0: f64, t1: f64 },
    #[error("ambiguous vertex clusters near ({x:.6}, {y:.6}, {z:.6})")]
    AmbiguousCluster { x: f64, y: f64, z: f64 },
    #[error("vertex {0} has incomplete angle data")]
    MissingAngles(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
