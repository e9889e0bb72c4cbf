use thiserror::Error;

use crate::weights::CoordSubset;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension {0} exceeds the supported maximum of {max}", max = crate::weights::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("invalid exponent p = {0}: must satisfy p >= 1")]
    InvalidExponent(f64),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("weights violate compatibility: gamma_{u} > 0 but gamma_{v} = 0")]
    Compatibility { u: CoordSubset, v: CoordSubset },

    #[error("capacity exceeded: {what} requires at most {cap}, got {got}")]
    Capacity {
        what: &'static str,
        cap: usize,
        got: usize,
    },

    #[error("function is outside the weighted subspace: component {0} is nonzero but its weight is zero")]
    Membership(CoordSubset),

    #[error("component for {subset} depends on coordinate {coord} outside the subset")]
    ComponentSupport { subset: CoordSubset, coord: usize },

    #[error("inconsistent norms: {0}")]
    Inconsistent(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
