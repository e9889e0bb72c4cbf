use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use anchova::weights::GammaRule;
use anchova::{PExponent, WeightSchedule};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "anchova", version, about = "Anchored and ANOVA norms under weighted mixed-derivative spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate C_{d,1}, C_{d,inf} and C_{d,p} over a range of dimensions
    Constants {
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long)]
        d: Option<DimRange>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,inf")]
        p: Vec<PExponent>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Anchored and ANOVA component tuples of a function, as JSON
    Decompose {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Weighted anchored and ANOVA norms of a function and their ratios
    #[command(visible_alias = "ratio")]
    Norms {
        #[arg(long)]
        function: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, value_delimiter = ',', default_value = "1,2,inf")]
        p: Vec<PExponent>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Witness norms: closed form against the decomposition pipeline
    Witness {
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long)]
        d: Option<DimRange>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,inf")]
        p: Vec<PExponent>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Uniform / polynomial / divergent regime of a weight family
    Classify {
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        p: Vec<PExponent>,
        /// Number of coordinates examined for product weights
        #[arg(long, default_value_t = 1000)]
        d_max: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Round-trip and norm-bound checks on random functions; exit 1 on failure
    Verify {
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, default_value = "4")]
        d: DimRange,
        #[arg(long, value_delimiter = ',', default_value = "1,1.5,2,3,inf")]
        p: Vec<PExponent>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Product,
    FiniteOrder,
    DimensionDependent,
    Explicit,
}

#[derive(Args, Debug, Clone)]
pub struct WeightArgs {
    #[arg(long, value_enum, default_value_t = Family::Product)]
    pub family: Family,
    /// Product weights gamma_1,gamma_2,... (comma separated)
    #[arg(long, value_delimiter = ',', conflicts_with = "gamma_rule")]
    pub gamma: Option<Vec<f64>>,
    /// Product weight rule: const:a, power:a (j^-a) or geometric:r (r^j)
    #[arg(long)]
    pub gamma_rule: Option<GammaRule>,
    /// Finite-order weights c * omega^|u|
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Order of finite-order weights
    #[arg(long)]
    pub q: Option<usize>,
    /// Explicit weight table (JSON)
    #[arg(long)]
    pub weights: Option<PathBuf>,
}

impl WeightArgs {
    fn rule(&self) -> GammaRule {
        match (&self.gamma, &self.gamma_rule) {
            (Some(list), _) => GammaRule::List(list.clone()),
            (None, Some(rule)) => rule.clone(),
            (None, None) => GammaRule::Constant(1.0),
        }
    }

    /// `γ_1, .., γ_n` for product weights.
    pub fn gammas(&self, n: usize) -> Result<Vec<f64>, CliError> {
        if self.family != Family::Product {
            return Err(CliError::Config("this command needs --family product".into()));
        }
        Ok(self.rule().take(n)?)
    }

    /// The dimension implied by the weights alone, if any.
    pub fn implied_dim(&self) -> Result<Option<usize>, CliError> {
        Ok(match self.family {
            Family::Explicit => Some(self.explicit()?.dim()),
            Family::Product => self.gamma.as_ref().map(Vec::len),
            _ => None,
        })
    }

    fn explicit(&self) -> Result<WeightSchedule, CliError> {
        let path = self
            .weights
            .as_ref()
            .ok_or_else(|| CliError::Config("--family explicit needs --weights FILE".into()))?;
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Ok(WeightSchedule::from_json(&text)?)
    }

    pub fn schedule(&self, dim: usize) -> Result<WeightSchedule, CliError> {
        let w = match self.family {
            Family::Product => WeightSchedule::product(self.gammas(dim)?)?,
            Family::FiniteOrder => {
                let q = self
                    .q
                    .ok_or_else(|| CliError::Config("--family finite-order needs --q".into()))?;
                WeightSchedule::finite_order(dim, self.c, self.omega, q)?
            }
            Family::DimensionDependent => WeightSchedule::dimension_dependent(dim)?,
            Family::Explicit => {
                let w = self.explicit()?;
                if w.dim() != dim {
                    return Err(CliError::Config(format!(
                        "weight file has dimension {}, but {dim} was requested",
                        w.dim()
                    )));
                }
                w
            }
        };
        Ok(w)
    }

    /// The dimensions to sweep: `--d` if given, else the one implied by the
    /// weights.
    pub fn dims(&self, d: Option<DimRange>) -> Result<Vec<usize>, CliError> {
        match (d, self.implied_dim()?) {
            (Some(r), _) => Ok(r.iter().collect()),
            (None, Some(n)) => Ok(vec![n]),
            (None, None) => Err(CliError::Config("--d is required for this weight family".into())),
        }
    }
}

/// `a..b` (inclusive) or a single dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimRange {
    pub lo: usize,
    pub hi: usize,
}

impl DimRange {
    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl FromStr for DimRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad dimension {t:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let d = parse(s)?;
                (d, d)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s}"));
        }
        Ok(Self { lo, hi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("3".parse::<DimRange>().unwrap().iter().collect::<Vec<_>>(), vec![3]);
        assert_eq!("1..4".parse::<DimRange>().unwrap().iter().count(), 4);
        assert!("5..2".parse::<DimRange>().is_err());
        assert!("x".parse::<DimRange>().is_err());
    }
}
