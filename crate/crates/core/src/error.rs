use thiserror::Error;

use crate::grid::GridSpec;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0:?} vs {1:?}")]
    SpecMismatch(GridSpec, GridSpec),
    #[error("domain too small: {0}")]
    DomainTooSmall(String),
    #[error("empty radius set")]
    EmptyRadiusSet,
    #[error("invalid radius set: {0}")]
    InvalidRadii(String),
    #[error("scale {scale} is below the grid step {step}")]
    UnresolvedScale { scale: f64, step: f64 },
    #[error("support spans more than one unit cube")]
    MultiCubeSupport,
    #[error("function has nonzero integral {0}")]
    NonzeroIntegral(f64),
    #[error("kernel `{0}` is not Lipschitz")]
    NonLipschitzKernel(&'static str),
    #[error("invalid range [{0}, {1}]")]
    InvalidRange(f64, f64),
    #[error("atom index has |j| = {0}, need |j| > 2")]
    AtomTooClose(f64),
    #[error("unknown functional `{0}`")]
    UnknownFunctional(String),
    #[error("unknown condition `{0}`")]
    UnknownCondition(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("need at least {need} sweep points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("function spec field `{field}`: {msg}")]
    Spec { field: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
