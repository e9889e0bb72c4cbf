//! Norm ratios between the anchored and ANOVA norms, the bound
//! `C_{d,p}`, and the product witness `f(x) = ∏_j (1 + γ_j x_j)`.

use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::{anchored_norm, anova_norm};
use crate::error::{Error, Result};
use crate::funcspace::{Poly1, TensorFunction};
use crate::random::{random_function, sample_rng, RandomFunctionSpec};
use crate::weights::{PExponent, WeightSchedule};

/// Relative slack allowed when comparing a measured ratio with `C_{d,p}`.
pub const BOUND_SLACK: f64 = 1e-9;

/// CSV header of [`EquivalenceReport`] rows.
pub const REPORT_CSV_HEADER: [&str; 8] = [
    "dim",
    "p",
    "anch_norm",
    "anova_norm",
    "ratio_a_over_anch",
    "ratio_anch_over_a",
    "c_dp",
    "satisfied",
];

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub dim: usize,
    pub p: PExponent,
    pub anchored_norm: f64,
    pub anova_norm: f64,
    pub ratio_a_over_anch: f64,
    pub ratio_anch_over_a: f64,
    pub bound_cdp: f64,
    pub bound_satisfied: bool,
}

impl EquivalenceReport {
    /// Builds a report from the two norms. The zero function yields unit
    /// ratios; exactly one vanishing norm is an inconsistency.
    pub fn from_norms(dim: usize, p: PExponent, anchored: f64, anova: f64, bound_cdp: f64) -> Result<Self> {
        let (a_over, anch_over) = match (anchored == 0.0, anova == 0.0) {
            (true, true) => (1.0, 1.0),
            (false, false) => (anova / anchored, anchored / anova),
            _ => {
                return Err(Error::Inconsistent(format!(
                    "anchored norm {anchored} and ANOVA norm {anova}: only one vanishes"
                )))
            }
        };
        Ok(Self {
            dim,
            p,
            anchored_norm: anchored,
            anova_norm: anova,
            ratio_a_over_anch: a_over,
            ratio_anch_over_a: anch_over,
            bound_cdp,
            bound_satisfied: a_over.max(anch_over) <= bound_cdp * (1.0 + BOUND_SLACK),
        })
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratio_a_over_anch.max(self.ratio_anch_over_a)
    }
}

/// `∏_j (1 + γ_j x_j)`, stored as a single elementary tensor.
pub fn witness_function(gammas: &[f64]) -> Result<TensorFunction> {
    for &g in gammas {
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::InvalidWeight(format!("witness weight must be positive, got {g}")));
        }
    }
    TensorFunction::elementary(
        gammas.len(),
        1.0,
        gammas.iter().enumerate().map(|(j, &g)| (j, Poly1::linear(1.0, g))),
    )
}

/// Closed-form `(anchored, ANOVA)` norms of the witness under product
/// weights: `2^{d/p}` and `(∏_j (1 + (1+γ_j/2)^p))^{1/p}`; at `p = ∞`, `1`
/// and `∏_j (1+γ_j/2)`.
pub fn witness_norms_closed(gammas: &[f64], p: PExponent) -> (f64, f64) {
    match p {
        PExponent::Infinity => (1.0, gammas.iter().map(|g| (g / 2.0).ln_1p()).sum::<f64>().exp()),
        PExponent::Finite(pv) => {
            let d = gammas.len() as f64;
            let log_anova: f64 = gammas.iter().map(|g| (1.0 + g / 2.0).powf(pv).ln_1p()).sum();
            ((d * 2f64.ln() / pv).exp(), (log_anova / pv).exp())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerBoundCheck {
    /// `‖f‖_A^p / ‖f‖_anch^p = ∏_j (1 + (1+γ_j/2)^p)/2`.
    pub ratio_p: f64,
    /// `∏_j (1 + γ_j/4)`.
    pub product_bound: f64,
    pub holds: bool,
}

pub fn witness_lower_bound_check(gammas: &[f64], p: PExponent) -> Result<LowerBoundCheck> {
    let PExponent::Finite(pv) = p else {
        return Err(Error::InvalidExponent(f64::INFINITY));
    };
    let ratio_p = gammas
        .iter()
        .map(|g| ((1.0 + (1.0 + g / 2.0).powf(pv)) / 2.0).ln())
        .sum::<f64>()
        .exp();
    let product_bound = gammas.iter().map(|g| (g / 4.0).ln_1p()).sum::<f64>().exp();
    Ok(LowerBoundCheck {
        ratio_p,
        product_bound,
        holds: ratio_p >= product_bound * (1.0 - 1e-12),
    })
}

/// Both norms of `f`, both ratios, and the `C_{d,p}` bound.
pub fn measure_ratio(f: &TensorFunction, w: &WeightSchedule, p: PExponent) -> Result<EquivalenceReport> {
    measure_ratio_with_bound(f, w, p, w.constant_cdp(p)?)
}

/// [`measure_ratio`] with a precomputed `C_{d,p}`.
pub fn measure_ratio_with_bound(
    f: &TensorFunction,
    w: &WeightSchedule,
    p: PExponent,
    bound_cdp: f64,
) -> Result<EquivalenceReport> {
    let anchored = anchored_norm(f, w, p)?;
    let anova = anova_norm(f, w, p)?;
    EquivalenceReport::from_norms(f.dim(), p, anchored, anova, bound_cdp)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub sample: usize,
    pub report: EquivalenceReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    /// Ordered by sample index, then by position in the exponent grid.
    pub records: Vec<SweepRecord>,
    /// Largest observed ratio per exponent: an empirical lower bound on the
    /// operator norm.
    pub max_ratio: Vec<(PExponent, f64)>,
}

impl SweepResult {
    pub fn violations(&self) -> usize {
        self.records.iter().filter(|r| !r.report.bound_satisfied).count()
    }
}

/// Measures `n_samples` random functions (see [`RandomFunctionSpec`]'s
/// default) at every exponent in `p_grid`. Sample `i` draws from
/// `sample_rng(seed, i)`, so results do not depend on scheduling.
pub fn verify_bound_sweep(
    w: &WeightSchedule,
    p_grid: &[PExponent],
    n_samples: usize,
    seed: u64,
) -> Result<SweepResult> {
    verify_bound_sweep_with(w, p_grid, n_samples, seed, &RandomFunctionSpec::default())
}

pub fn verify_bound_sweep_with(
    w: &WeightSchedule,
    p_grid: &[PExponent],
    n_samples: usize,
    seed: u64,
    spec: &RandomFunctionSpec,
) -> Result<SweepResult> {
    let bounds = p_grid
        .iter()
        .map(|&p| w.constant_cdp(p))
        .collect::<Result<Vec<_>>>()?;
    let per_sample = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let f = random_function(&mut sample_rng(seed, i as u64), w.dim(), spec);
            p_grid
                .iter()
                .zip(&bounds)
                .map(|(&p, &b)| {
                    Ok(SweepRecord {
                        sample: i,
                        report: measure_ratio_with_bound(&f, w, p, b)?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let records: Vec<SweepRecord> = per_sample.into_iter().flatten().collect();
    let max_ratio = p_grid
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let m = records
                .iter()
                .skip(k)
                .step_by(p_grid.len().max(1))
                .map(|r| r.report.max_ratio())
                .fold(0.0, f64::max);
            (p, m)
        })
        .collect();
    Ok(SweepResult { records, max_ratio })
}

#[derive(Serialize, Deserialize)]
struct ReportRow {
    dim: usize,
    p: String,
    anch_norm: f64,
    anova_norm: f64,
    ratio_a_over_anch: f64,
    ratio_anch_over_a: f64,
    c_dp: f64,
    satisfied: bool,
}

/// Writes reports as CSV under [`REPORT_CSV_HEADER`], `p = ∞` as `inf`.
pub fn write_reports_csv<W: io::Write>(out: W, reports: &[EquivalenceReport]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    if reports.is_empty() {
        wtr.write_record(REPORT_CSV_HEADER).map_err(csv_err)?;
    }
    for r in reports {
        wtr.serialize(ReportRow {
            dim: r.dim,
            p: r.p.to_string(),
            anch_norm: r.anchored_norm,
            anova_norm: r.anova_norm,
            ratio_a_over_anch: r.ratio_a_over_anch,
            ratio_anch_over_a: r.ratio_anch_over_a,
            c_dp: r.bound_cdp,
            satisfied: r.bound_satisfied,
        })
        .map_err(csv_err)?;
    }
    wtr.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}

pub fn read_reports_csv<R: io::Read>(input: R) -> Result<Vec<EquivalenceReport>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().ne(REPORT_CSV_HEADER) {
        return Err(Error::Parse(format!("unexpected report header {header:?}")));
    }
    rdr.deserialize::<ReportRow>()
        .map(|row| {
            let row = row.map_err(csv_err)?;
            Ok(EquivalenceReport {
                dim: row.dim,
                p: row.p.parse()?,
                anchored_norm: row.anch_norm,
                anova_norm: row.anova_norm,
                ratio_a_over_anch: row.ratio_a_over_anch,
                ratio_anch_over_a: row.ratio_anch_over_a,
                bound_cdp: row.c_dp,
                bound_satisfied: row.satisfied,
            })
        })
        .collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn witness_examples() {
        let f = witness_function(&[2.0]).unwrap();
        assert!((f.eval(&[0.3]) - 1.6).abs() < 1e-15);
        let f = witness_function(&[1.0, 1.0]).unwrap();
        for (a, b) in [(0.2, 0.7), (1.0, 0.0), (0.5, 0.5)] {
            assert!((f.eval(&[a, b]) - (1.0 + a + b + a * b)).abs() < 1e-15);
        }
        let f = witness_function(&[]).unwrap();
        assert_eq!(f.as_constant(), Some(1.0));
        assert!(witness_function(&[0.0]).is_err());
    }

    #[test]
    fn witness_closed_examples() {
        let (a, b) = witness_norms_closed(&[2.0], PExponent::Finite(1.0));
        assert!(rel(a, 2.0) < 1e-15 && rel(b, 3.0) < 1e-15);
        let (a, b) = witness_norms_closed(&[1.0, 1.0], PExponent::Finite(2.0));
        assert!(rel(a, 2.0) < 1e-15 && rel(b, 13.0 / 4.0) < 1e-15);
        let (a, b) = witness_norms_closed(&[1.0, 1.0], PExponent::Infinity);
        assert!(a == 1.0 && rel(b, 2.25) < 1e-15);
    }

    #[test]
    fn lower_bound_examples() {
        let c = witness_lower_bound_check(&[2.0], PExponent::Finite(1.0)).unwrap();
        assert!(rel(c.ratio_p, 1.5) < 1e-15 && rel(c.product_bound, 1.5) < 1e-15 && c.holds);
        let c = witness_lower_bound_check(&[2.0], PExponent::Finite(2.0)).unwrap();
        assert!(rel(c.ratio_p, 2.5) < 1e-15 && rel(c.product_bound, 1.5) < 1e-15 && c.holds);
        let c = witness_lower_bound_check(&[1.0; 3], PExponent::Finite(1.0)).unwrap();
        assert!(rel(c.ratio_p, 1.25f64.powi(3)) < 1e-14 && rel(c.product_bound, 1.25f64.powi(3)) < 1e-14);
        assert!(c.holds);
        assert!(witness_lower_bound_check(&[1.0], PExponent::Infinity).is_err());
    }

    #[test]
    fn measure_examples() {
        let x = TensorFunction::elementary(1, 1.0, [(0, Poly1::monomial(1))]).unwrap();
        let w = WeightSchedule::all_ones(1).unwrap();
        let r = measure_ratio(&x, &w, PExponent::Finite(2.0)).unwrap();
        assert!((r.ratio_a_over_anch - 1.118034).abs() < 1e-6);
        assert!((r.bound_cdp - 3f64.sqrt()).abs() < 1e-15);
        assert!(r.bound_satisfied);

        let one = TensorFunction::constant(3, 1.0);
        let w3 = WeightSchedule::product(vec![0.5, 2.0, 1.0]).unwrap();
        for p in [PExponent::Finite(1.0), PExponent::Finite(2.5), PExponent::Infinity] {
            let r = measure_ratio(&one, &w3, p).unwrap();
            assert_eq!((r.anchored_norm, r.anova_norm, r.ratio_a_over_anch), (1.0, 1.0, 1.0));
        }

        let wit = witness_function(&[1.0, 1.0]).unwrap();
        let r = measure_ratio(&wit, &WeightSchedule::all_ones(2).unwrap(), PExponent::Infinity).unwrap();
        assert!(rel(r.ratio_a_over_anch, 2.25) < 1e-15);
        assert!(r.bound_satisfied);
    }

    #[test]
    fn zero_function_and_inconsistency() {
        let r = EquivalenceReport::from_norms(2, PExponent::Finite(2.0), 0.0, 0.0, 3.0).unwrap();
        assert_eq!(r.ratio_a_over_anch, 1.0);
        assert!(matches!(
            EquivalenceReport::from_norms(2, PExponent::Finite(2.0), 0.0, 1.0, 3.0),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn sweep_edge_cases() {
        let w = WeightSchedule::all_ones(3).unwrap();
        let grid = [PExponent::Finite(2.0), PExponent::Infinity];
        let empty = verify_bound_sweep(&w, &grid, 0, 1).unwrap();
        assert!(empty.records.is_empty());
        let a = verify_bound_sweep(&w, &grid, 5, 11).unwrap();
        let b = verify_bound_sweep(&w, &grid, 5, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.records.len(), 10);
        assert_eq!(a.violations(), 0);
    }

    #[test]
    fn csv_round_trip() {
        let w = WeightSchedule::all_ones(2).unwrap();
        let res = verify_bound_sweep(&w, &[PExponent::Finite(1.5), PExponent::Infinity], 3, 2).unwrap();
        let reports: Vec<_> = res.records.iter().map(|r| r.report.clone()).collect();
        let mut buf = Vec::new();
        write_reports_csv(&mut buf, &reports).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("dim,p,anch_norm,anova_norm,ratio_a_over_anch,ratio_anch_over_a,c_dp,satisfied\n"));
        assert!(text.contains(",inf,"));
        assert_eq!(read_reports_csv(&buf[..]).unwrap(), reports);
    }
}
