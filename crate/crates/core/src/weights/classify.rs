//! Numerical classification of product-weight sequences into the uniform,
//! polynomial and divergent equivalence regimes.
//!
//! Both criteria (summability of `γ_j`, finiteness of
//! `τ_0 = sup_d Σ_{j≤d} γ_j / ln(d+1)`) are statements about infinite
//! sequences. A finite prefix can only suggest an answer, so every report
//! carries the raw diagnostics and a confidence flag.

use serde::Serialize;

use super::{PExponent, WeightFamily, WeightSchedule};
use crate::error::{Error, Result};

/// Tail-to-total ratio below which a sequence is declared summable.
pub const SUMMABLE_TAIL_RATIO: f64 = 1e-9;

/// Lower bound `max_{d ≤ d_max} Σ_{j≤d} γ_j / ln(d+1)` for `τ_0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TauZero {
    pub value: f64,
    /// The `d` attaining the maximum (smallest on ties). A maximizer at
    /// `d_max` means the ratio is still growing.
    pub maximizer: usize,
    pub d_max: usize,
}

pub fn tau_zero(gammas: &[f64], d_max: usize) -> Result<TauZero> {
    if d_max == 0 {
        return Err(Error::Domain("d_max must be at least 1".into()));
    }
    if gammas.len() < d_max {
        return Err(Error::Domain(format!(
            "need {d_max} weights for tau_0, got {}",
            gammas.len()
        )));
    }
    let mut partial = 0.0;
    let mut best = TauZero {
        value: f64::NEG_INFINITY,
        maximizer: 1,
        d_max,
    };
    for (k, g) in gammas[..d_max].iter().enumerate() {
        partial += g;
        let d = k + 1;
        let ratio = partial / (d as f64).ln_1p();
        if ratio > best.value {
            best.value = ratio;
            best.maximizer = d;
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum Regime {
    Uniform,
    /// `exponent` is an upper bound unless `sharp` is set.
    Polynomial { exponent: f64, sharp: bool },
    Divergent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    High,
    Low,
    /// Decided by a closed-form argument for the whole family.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub confidence: Confidence,
    /// `Σ_{j ≤ d_max} γ_j`; absent for families classified analytically.
    pub partial_sum: Option<f64>,
    /// `Σ_{d_max/2 ≤ j ≤ d_max} γ_j`.
    pub tail_sum: Option<f64>,
    pub tau_zero: Option<TauZero>,
}

/// Classifies product weights `γ_1, .., γ_{d_max}`.
///
/// Summable when the upper-half tail is below `1e-9` of the total; `τ_0`
/// finite when its maximizer lies in the lower half of `1..=d_max`.
pub fn classify_equivalence(gammas: &[f64], p: PExponent, d_max: usize) -> Result<RegimeReport> {
    let tau = tau_zero(gammas, d_max)?;
    let used = &gammas[..d_max];
    let total: f64 = used.iter().sum();
    let tail: f64 = used[(d_max / 2).max(1) - 1..].iter().sum();
    let tail_ratio = if total > 0.0 { tail / total } else { 0.0 };

    let summable = tail_ratio < SUMMABLE_TAIL_RATIO;
    let tau_finite = 2 * tau.maximizer < d_max || tau.value <= 0.0;

    let (regime, confidence) = if summable {
        let conf = if tau_finite { Confidence::High } else { Confidence::Low };
        (Regime::Uniform, conf)
    } else if tau_finite {
        let exponent = tau.value / 2.0 * (1.0 + p.recip());
        let conf = if tail_ratio >= 1e-6 && 4 * tau.maximizer < d_max {
            Confidence::High
        } else {
            Confidence::Low
        };
        (Regime::Polynomial { exponent, sharp: false }, conf)
    } else {
        let conf = if tau.maximizer == d_max { Confidence::High } else { Confidence::Low };
        (Regime::Divergent, conf)
    };

    Ok(RegimeReport {
        regime,
        confidence,
        partial_sum: Some(total),
        tail_sum: Some(tail),
        tau_zero: Some(tau),
    })
}

/// Classifies a schedule's family as a sequence of spaces indexed by `d`.
///
/// Product weights are classified numerically over `d_max` coordinates (the
/// schedule must supply that many); finite-order weights `c ω^{|u|}` are
/// polynomially equivalent with exponent `q`; `γ_u = d^{-|u|}` is uniform.
pub fn classify_schedule(schedule: &WeightSchedule, p: PExponent, d_max: usize) -> Result<RegimeReport> {
    let exact = |regime| RegimeReport {
        regime,
        confidence: Confidence::Exact,
        partial_sum: None,
        tail_sum: None,
        tau_zero: None,
    };
    match schedule.family() {
        WeightFamily::Product(g) => classify_equivalence(g, p, d_max),
        WeightFamily::FiniteOrder { order, .. } => Ok(exact(Regime::Polynomial {
            exponent: *order as f64,
            sharp: true,
        })),
        WeightFamily::DimensionDependent => Ok(exact(Regime::Uniform)),
        WeightFamily::Explicit(_) => Err(Error::InvalidWeight(
            "an explicit table fixes a single dimension and has no regime".into(),
        )),
    }
}
