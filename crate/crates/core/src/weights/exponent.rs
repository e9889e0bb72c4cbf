use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An exponent `p ∈ [1, ∞]`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(Self::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Self::Finite(p))
        } else {
            Err(Error::InvalidExponent(p))
        }
    }

    /// `1/p`, which is `0` at `p = ∞`.
    pub fn recip(self) -> f64 {
        match self {
            Self::Finite(p) => 1.0 / p,
            Self::Infinity => 0.0,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinity)
    }

    /// `Some(p)` when `p` is an even integer, for which `|h|^p = h^p`.
    pub fn even_integer(self) -> Option<u32> {
        match self {
            Self::Finite(p) if p.fract() == 0.0 && p <= 64.0 && (p as u32).is_multiple_of(2) => {
                Some(p as u32)
            }
            _ => None,
        }
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for PExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "inf" | "Inf" | "infinity" | "∞" => Ok(Self::Infinity),
            _ => {
                let p: f64 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid exponent {s:?}")))?;
                Self::new(p)
            }
        }
    }
}
