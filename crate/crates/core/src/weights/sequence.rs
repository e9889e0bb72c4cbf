use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A rule generating the per-coordinate weights `γ_1, γ_2, ...` of a product
/// schedule.
#[derive(Clone, Debug, PartialEq)]
pub enum GammaRule {
    /// `γ_j = a`.
    Constant(f64),
    /// `γ_j = j^{-a}`.
    Power(f64),
    /// `γ_j = r^j`.
    Geometric(f64),
    /// Explicit values; coordinates past the end are an error.
    List(Vec<f64>),
}

impl GammaRule {
    /// `γ_j` for a 1-based coordinate `j`.
    pub fn gamma(&self, j: usize) -> Option<f64> {
        debug_assert!(j >= 1);
        match self {
            Self::Constant(a) => Some(*a),
            Self::Power(a) => Some((j as f64).powf(-a)),
            Self::Geometric(r) => Some(r.powi(j as i32)),
            Self::List(v) => v.get(j - 1).copied(),
        }
    }

    /// `γ_1, .., γ_n`.
    pub fn take(&self, n: usize) -> Result<Vec<f64>> {
        (1..=n)
            .map(|j| {
                self.gamma(j).ok_or_else(|| {
                    Error::Parse(format!("gamma list has {} entries, need {n}", j - 1))
                })
            })
            .collect()
    }
}

impl fmt::Display for GammaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(a) => write!(f, "const:{a}"),
            Self::Power(a) => write!(f, "power:{a}"),
            Self::Geometric(r) => write!(f, "geometric:{r}"),
            Self::List(v) => {
                let parts: Vec<String> = v.iter().map(|g| g.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl FromStr for GammaRule {
    type Err = Error;

    /// Accepts `const:a`, `power:a`, `geometric:r`, or a comma-separated list.
    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("invalid number {t:?} in gamma rule {s:?}")))
        };
        if let Some((kind, arg)) = s.split_once(':') {
            let a = num(arg)?;
            match kind.trim() {
                "const" => Ok(Self::Constant(a)),
                "power" => Ok(Self::Power(a)),
                "geometric" => Ok(Self::Geometric(a)),
                other => Err(Error::Parse(format!("unknown gamma rule {other:?}"))),
            }
        } else {
            s.split(',').map(num).collect::<Result<Vec<_>>>().map(Self::List)
        }
    }
}
