use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("element with |a| = {a} is not hyperbolic")]
    NonHyperbolic { a: i64 },

    #[error("integer overflow in group arithmetic")]
    Overflow,

    #[error("no hyperbolic element found within trace bound {trace_bound} and box {box_bound}")]
    NoCertificate { trace_bound: i64, box_bound: i64 },

    #[error("point {point:?} is outside the domain: {reason}")]
    Domain { point: [f64; 3], reason: String },

    #[error("polar chart is singular at r = {r}")]
    CoordinateSingularity { r: f64 },

    #[error("Jacobian is singular at {point:?}")]
    DegenerateMap { point: [f64; 3] },

    #[error("metric is not positive-definite at {point:?}")]
    Integration { point: [f64; 3] },

    #[error("spectrum cache {path} is invalid: {reason}")]
    CacheInvalid { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
