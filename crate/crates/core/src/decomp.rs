//! Anchored and ANOVA component maps, their inverses, and the weighted norms
//! built from the components.
//!
//! Both decompositions send `f` to the `2^d`-tuple `(g_u)`:
//!
//! * anchored: `g_u = f^{(u)}(x_u; 0)`,
//! * ANOVA: `g_u = ∫_{[0,1]^{d-|u|}} f^{(u)}(x_u; t) dt`.
//!
//! The inverses integrate each component back up coordinate by coordinate.
//! On an elementary tensor the anchored inverse replaces a factor `h` by
//! `x ↦ ∫_0^x h`, the ANOVA inverse by `x ↦ ∫_0^1 t h(t) dt - ∫_x^1 h`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{lp_norm_subset, Poly1, RestrictMode, TensorFunction};
use crate::weights::{CoordSubset, PExponent, WeightSchedule, BRUTE_FORCE_MAX_DIM};

/// Relative cancellation threshold below which a multi-term component is
/// treated as the zero function.
pub const ZERO_TOL: f64 = 1e-12;

/// `u ↦ g_u`, each `g_u` depending only on the coordinates in `u`. Only
/// nonzero components are stored; iteration is in ascending bitmask order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentTuple {
    dim: usize,
    components: BTreeMap<u64, TensorFunction>,
}

impl ComponentTuple {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            components: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets `g_u`. A `g` whose terms cancel (relative to [`ZERO_TOL`])
    /// removes the entry.
    pub fn insert(&mut self, u: CoordSubset, g: TensorFunction) -> Result<()> {
        for found in [u.dim(), g.dim()] {
            if found != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found,
                });
            }
        }
        if let Some(coord) = g.support().intersection(u.complement()).indices().next() {
            return Err(Error::ComponentSupport { subset: u, coord });
        }
        if g.is_negligible(ZERO_TOL) {
            self.components.remove(&u.bits());
        } else {
            self.components.insert(u.bits(), g);
        }
        Ok(())
    }

    /// `g_u`, or `None` for the zero component.
    pub fn get(&self, u: CoordSubset) -> Option<&TensorFunction> {
        self.components.get(&u.bits())
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (CoordSubset, &TensorFunction)> {
        let dim = self.dim;
        self.components
            .iter()
            .map(move |(&b, g)| (CoordSubset::new(b, dim).expect("stored subset"), g))
    }

    /// The weighted `ℓ_p` norm `(Σ_u γ_u^{-p} ‖g_u‖_p^p)^{1/p}`.
    ///
    /// Subsets with `γ_u = 0` must carry the zero component.
    pub fn weighted_norm(&self, weights: &WeightSchedule, p: PExponent) -> Result<f64> {
        if weights.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: weights.dim(),
            });
        }
        let mut scaled = Vec::with_capacity(self.len());
        for (u, _) in self.iter() {
            let gamma = weights.weight_of(u)?;
            if gamma == 0.0 {
                return Err(Error::Membership(u));
            }
            scaled.push((u, gamma));
        }
        let norms = scaled
            .par_iter()
            .map(|&(u, gamma)| Ok(lp_norm_subset(self.get(u).expect("stored"), u, p)? / gamma))
            .collect::<Result<Vec<f64>>>()?;
        Ok(match p {
            PExponent::Infinity => norms.into_iter().fold(0.0, f64::max),
            PExponent::Finite(pv) => norms.iter().map(|n| n.powf(pv)).sum::<f64>().powf(1.0 / pv),
        })
    }

    /// Per-component `L_p` norms, in iteration order.
    pub fn component_norms(&self, p: PExponent) -> Result<Vec<(CoordSubset, f64)>> {
        self.iter().map(|(u, g)| Ok((u, lp_norm_subset(g, u, p)?))).collect()
    }
}

fn components(f: &TensorFunction, mode: RestrictMode) -> Result<ComponentTuple> {
    let d = f.dim();
    if d > BRUTE_FORCE_MAX_DIM {
        return Err(Error::Capacity {
            what: "decomposition dimension",
            cap: BRUTE_FORCE_MAX_DIM,
            got: d,
        });
    }
    // f^{(u)} vanishes unless u lies inside the support.
    let subsets: Vec<CoordSubset> = f.support().subsets().collect();
    let parts = subsets
        .par_iter()
        .map(|&u| Ok((u, f.mixed_derivative(u)?.restrict(u, mode)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = ComponentTuple::new(d);
    for (u, g) in parts {
        out.insert(u, g)?;
    }
    Ok(out)
}

/// `(f^{(u)}(·_u; 0))_u`.
pub fn anchored_components(f: &TensorFunction) -> Result<ComponentTuple> {
    components(f, RestrictMode::AnchorAtZero)
}

/// `(∫ f^{(u)}(·_u; t) dt)_u`, integrating over the complementary coordinates.
pub fn anova_components(f: &TensorFunction) -> Result<ComponentTuple> {
    components(f, RestrictMode::IntegrateOut)
}

fn reconstruct(g: &ComponentTuple, kernel: impl Fn(&Poly1) -> Poly1 + Sync) -> TensorFunction {
    let terms = g
        .iter()
        .flat_map(|(u, gu)| gu.terms().iter().map(move |t| (u, t)))
        .map(|(u, t)| t.map_factors(u, &kernel))
        .collect();
    TensorFunction::new(g.dim(), terms).expect("components respect dim")
}

/// `Σ_u ∫_{[0,x]^u} g_u`.
pub fn anchored_reconstruct(g: &ComponentTuple) -> TensorFunction {
    reconstruct(g, Poly1::antiderivative)
}

/// `Σ_u ∏_{j∈u} ∫_0^1 (t_j - χ_{[x_j,1]}(t_j)) h_j(t_j) dt_j` over the
/// elementary terms of each `g_u`.
pub fn anova_reconstruct(g: &ComponentTuple) -> TensorFunction {
    reconstruct(g, anova_kernel)
}

/// `x ↦ ∫_0^1 t h(t) dt - (H(1) - H(x))` with `H` the antiderivative of `h`.
pub fn anova_kernel(h: &Poly1) -> Poly1 {
    let anti = h.antiderivative();
    let shift = h.first_moment_unit() - anti.eval(1.0);
    &anti + &Poly1::constant(shift)
}

/// `‖f‖_{anchored,p}`.
pub fn anchored_norm(f: &TensorFunction, w: &WeightSchedule, p: PExponent) -> Result<f64> {
    check_weights(f, w)?;
    anchored_components(f)?.weighted_norm(w, p)
}

/// `‖f‖_{ANOVA,p}`.
pub fn anova_norm(f: &TensorFunction, w: &WeightSchedule, p: PExponent) -> Result<f64> {
    check_weights(f, w)?;
    anova_components(f)?.weighted_norm(w, p)
}

fn check_weights(f: &TensorFunction, w: &WeightSchedule) -> Result<()> {
    if f.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: w.dim(),
        });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    subset: Vec<usize>,
    function: TensorFunction,
}

/// `{"dim": d, "components": [{"subset": [1-based], "function": {...}}]}`.
#[derive(Serialize, Deserialize)]
struct ComponentTupleJson {
    dim: usize,
    components: Vec<ComponentJson>,
}

impl Serialize for ComponentTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComponentTupleJson {
            dim: self.dim,
            components: self
                .iter()
                .map(|(u, g)| ComponentJson {
                    subset: u.one_based(),
                    function: g.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComponentTuple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ComponentTupleJson::deserialize(d)?;
        let build = || -> Result<Self> {
            let mut out = ComponentTuple::new(doc.dim);
            for c in doc.components {
                let u = CoordSubset::from_one_based(&c.subset, doc.dim)?;
                let g = match out.get(u) {
                    Some(prev) => prev.add(&c.function)?,
                    None => c.function,
                };
                out.insert(u, g)?;
            }
            Ok(out)
        };
        build().map_err(serde::de::Error::custom)
    }
}

impl ComponentTuple {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
