//! Weight schedules `(γ_u)`, the compatibility condition and the
//! equivalence constants `C_{d,1}`, `C_{d,∞}`, `C_{d,p}`.

mod classify;
mod exponent;
mod sequence;
mod subset;

use serde::{Deserialize, Serialize};

pub use classify::{classify_equivalence, classify_schedule, tau_zero, Confidence, Regime, RegimeReport, TauZero};
pub use exponent::PExponent;
pub use sequence::GammaRule;
pub use subset::{CoordSubset, MAX_DIM};

use crate::error::{Error, Result};

/// Largest dimension for which constants are evaluated by enumerating all
/// subsets. Explicit tables are limited to this size.
pub const BRUTE_FORCE_MAX_DIM: usize = 20;

/// Above this dimension products of `(1 + γ_j)` are accumulated as sums of
/// logarithms.
const LOG_SPACE_DIM: usize = 30;

#[derive(Clone, Debug, PartialEq)]
pub enum WeightFamily {
    /// One weight per subset, indexed by bitmask.
    Explicit(Vec<f64>),
    /// `γ_u = ∏_{j∈u} γ_j`.
    Product(Vec<f64>),
    /// `γ_u = c ω^{|u|}` for `|u| ≤ order`, zero above.
    FiniteOrder { c: f64, omega: f64, order: usize },
    /// `γ_u = d^{-|u|}`.
    DimensionDependent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSchedule {
    dim: usize,
    family: WeightFamily,
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWeight(format!("{name} must be positive and finite, got {x}")))
    }
}

impl WeightSchedule {
    /// A table of `2^dim` weights indexed by subset bitmask.
    pub fn explicit(dim: usize, table: Vec<f64>) -> Result<Self> {
        if dim > BRUTE_FORCE_MAX_DIM {
            return Err(Error::Capacity {
                what: "explicit weight table dimension",
                cap: BRUTE_FORCE_MAX_DIM,
                got: dim,
            });
        }
        if table.len() != 1usize << dim {
            return Err(Error::InvalidWeight(format!(
                "explicit table for d = {dim} needs {} entries, got {}",
                1usize << dim,
                table.len()
            )));
        }
        if let Some((i, w)) = table.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidWeight(format!("gamma at bitmask {i:#b} is {w}")));
        }
        Ok(Self {
            dim,
            family: WeightFamily::Explicit(table),
        })
    }

    pub fn product(gammas: Vec<f64>) -> Result<Self> {
        if gammas.len() > MAX_DIM {
            return Err(Error::DimensionTooLarge(gammas.len()));
        }
        for &g in &gammas {
            check_positive("product weight gamma_j", g)?;
        }
        Ok(Self {
            dim: gammas.len(),
            family: WeightFamily::Product(gammas),
        })
    }

    /// Product weights with every `γ_u = 1`.
    pub fn all_ones(dim: usize) -> Result<Self> {
        Self::product(vec![1.0; dim])
    }

    pub fn finite_order(dim: usize, c: f64, omega: f64, order: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim));
        }
        check_positive("c", c)?;
        check_positive("omega", omega)?;
        if order == 0 {
            return Err(Error::InvalidWeight("order q must be positive".into()));
        }
        Ok(Self {
            dim,
            family: WeightFamily::FiniteOrder { c, omega, order },
        })
    }

    pub fn dimension_dependent(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim));
        }
        Ok(Self {
            dim,
            family: WeightFamily::DimensionDependent,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    /// Per-coordinate weights when the schedule is of product type.
    pub fn product_gammas(&self) -> Option<Vec<f64>> {
        match &self.family {
            WeightFamily::Product(g) => Some(g.clone()),
            WeightFamily::DimensionDependent => Some(vec![1.0 / self.dim as f64; self.dim]),
            _ => None,
        }
    }

    pub fn weight_of(&self, u: CoordSubset) -> Result<f64> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.dim(),
            });
        }
        Ok(self.weight_unchecked(u))
    }

    fn weight_unchecked(&self, u: CoordSubset) -> f64 {
        match &self.family {
            WeightFamily::Explicit(table) => table[u.bits() as usize],
            WeightFamily::Product(g) => u.indices().map(|j| g[j]).product(),
            WeightFamily::FiniteOrder { c, omega, order } => {
                if u.len() <= *order {
                    c * omega.powi(u.len() as i32)
                } else {
                    0.0
                }
            }
            WeightFamily::DimensionDependent => (self.dim as f64).powi(-(u.len() as i32)),
        }
    }

    /// Materializes every `γ_u` into a table indexed by bitmask.
    pub fn table(&self) -> Result<Vec<f64>> {
        if self.dim > BRUTE_FORCE_MAX_DIM {
            return Err(Error::Capacity {
                what: "weight table dimension",
                cap: BRUTE_FORCE_MAX_DIM,
                got: self.dim,
            });
        }
        if let WeightFamily::Explicit(t) = &self.family {
            return Ok(t.clone());
        }
        Ok(CoordSubset::all(self.dim).map(|u| self.weight_unchecked(u)).collect())
    }

    /// The explicit schedule `λ γ_u`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        check_positive("scale factor", lambda)?;
        let table = self.table()?.into_iter().map(|w| w * lambda).collect();
        Self::explicit(self.dim, table)
    }

    /// Every pair `(u, v)` with `v ⊆ u`, `γ_u > 0` and `γ_v = 0`.
    pub fn check_compatibility(&self) -> Vec<(CoordSubset, CoordSubset)> {
        let WeightFamily::Explicit(table) = &self.family else {
            return Vec::new();
        };
        let n = table.len();
        // has_zero_below[u]: some v ⊆ u carries zero weight.
        let mut has_zero_below: Vec<bool> = table.iter().map(|&w| w == 0.0).collect();
        for bit in 0..self.dim {
            let b = 1usize << bit;
            for u in 0..n {
                if u & b != 0 && has_zero_below[u ^ b] {
                    has_zero_below[u] = true;
                }
            }
        }
        let mut out = Vec::new();
        for u in CoordSubset::all(self.dim) {
            if table[u.bits() as usize] > 0.0 && has_zero_below[u.bits() as usize] {
                for v in u.subsets() {
                    if table[v.bits() as usize] == 0.0 {
                        out.push((u, v));
                    }
                }
            }
        }
        out
    }

    fn ensure_compatible(&self) -> Result<()> {
        match self.check_compatibility().first() {
            Some(&(u, v)) => Err(Error::Compatibility { u, v }),
            None => Ok(()),
        }
    }

    /// `C_{d,1} = max_u Σ_{v⊆u} γ_u/γ_v`.
    ///
    /// Enumerates subsets up to [`BRUTE_FORCE_MAX_DIM`]; parametric families
    /// above that use their closed forms.
    pub fn constant_c1(&self) -> Result<f64> {
        if self.dim <= BRUTE_FORCE_MAX_DIM {
            return Ok(self.brute_force_c1()?.0);
        }
        self.closed_form_constants().map(|(c1, _)| c1)
    }

    /// `C_{d,∞} = max_u Σ_{v⊆u^c} 2^{-|v|} γ_{u∪v}/γ_u`.
    pub fn constant_cinf(&self) -> Result<f64> {
        if self.dim <= BRUTE_FORCE_MAX_DIM {
            return Ok(self.brute_force_cinf()?.0);
        }
        self.closed_form_constants().map(|(_, cinf)| cinf)
    }

    /// `C_{d,p} = C_{d,1}^{1/p} C_{d,∞}^{1-1/p}`.
    pub fn constant_cdp(&self, p: PExponent) -> Result<f64> {
        Ok(interpolate_constant(self.constant_c1()?, self.constant_cinf()?, p))
    }

    /// Brute-force `C_{d,1}` together with the maximizing subset (smallest
    /// bitmask on ties).
    ///
    /// The inner sums `Σ_{v⊆u} 1/γ_v` are accumulated for all `u` at once by a
    /// subset-sum transform over the bitmask lattice.
    pub fn brute_force_c1(&self) -> Result<(f64, CoordSubset)> {
        let table = self.brute_force_table()?;
        let mut inv: Vec<f64> = table.iter().map(|&w| if w > 0.0 { 1.0 / w } else { 0.0 }).collect();
        subset_sums(&mut inv, self.dim);
        Ok(argmax_positive(&table, self.dim, |u, w| w * inv[u]))
    }

    /// Brute-force `C_{d,∞}` with its maximizing subset.
    ///
    /// Uses `Σ_{v⊆u^c} 2^{-|v|} γ_{u∪v} = 2^{|u|} Σ_{w⊇u} 2^{-|w|} γ_w`,
    /// accumulated by a superset-sum transform.
    pub fn brute_force_cinf(&self) -> Result<(f64, CoordSubset)> {
        let table = self.brute_force_table()?;
        let mut sums: Vec<f64> = table
            .iter()
            .enumerate()
            .map(|(w, &g)| g * 0.5f64.powi(w.count_ones() as i32))
            .collect();
        superset_sums(&mut sums, self.dim);
        Ok(argmax_positive(&table, self.dim, |u, w| {
            2f64.powi(u.count_ones() as i32) * sums[u] / w
        }))
    }

    fn brute_force_table(&self) -> Result<Vec<f64>> {
        if self.dim > BRUTE_FORCE_MAX_DIM {
            return Err(Error::Capacity {
                what: "brute-force constant dimension",
                cap: BRUTE_FORCE_MAX_DIM,
                got: self.dim,
            });
        }
        self.ensure_compatible()?;
        self.table()
    }

    /// Closed-form `(C_{d,1}, C_{d,∞})` for the parametric families.
    pub fn closed_form_constants(&self) -> Result<(f64, f64)> {
        match &self.family {
            WeightFamily::Explicit(_) => Err(Error::InvalidWeight(
                "explicit schedules have no closed-form constants".into(),
            )),
            WeightFamily::Product(g) => Ok(closed_form_constants_product(g)),
            WeightFamily::DimensionDependent => {
                Ok(closed_form_constants_product(&vec![1.0 / self.dim as f64; self.dim]))
            }
            WeightFamily::FiniteOrder { omega, order, .. } => {
                Ok(finite_order_constants(self.dim, *omega, *order))
            }
        }
    }
}

/// `C_{d,1}^{1/p} C_{d,∞}^{1-1/p}`.
pub fn interpolate_constant(c1: f64, cinf: f64, p: PExponent) -> f64 {
    let s = p.recip();
    c1.powf(s) * cinf.powf(1.0 - s)
}

/// `(∏_j (1+γ_j), ∏_j (1+γ_j/2))`, the product-weight values of `C_{d,1}` and
/// `C_{d,∞}`.
pub fn closed_form_constants_product(gammas: &[f64]) -> (f64, f64) {
    if gammas.len() > LOG_SPACE_DIM {
        let l1: f64 = gammas.iter().map(|g| g.ln_1p()).sum();
        let linf: f64 = gammas.iter().map(|g| (g / 2.0).ln_1p()).sum();
        (l1.exp(), linf.exp())
    } else {
        (
            gammas.iter().map(|g| 1.0 + g).product(),
            gammas.iter().map(|g| 1.0 + g / 2.0).product(),
        )
    }
}

fn finite_order_constants(dim: usize, omega: f64, order: usize) -> (f64, f64) {
    let top = order.min(dim);
    let c1 = (1.0 + omega).powi(top as i32);
    // For |u| = k, Σ_{i ≤ min(q-k, d-k)} C(d-k, i) (ω/2)^i.
    let cinf = (0..=top)
        .map(|k| {
            let n = dim - k;
            let mut term = 1.0;
            let mut sum = 1.0;
            for i in 0..(order - k).min(n) {
                term *= (n - i) as f64 / (i + 1) as f64 * omega / 2.0;
                sum += term;
            }
            sum
        })
        .fold(f64::NEG_INFINITY, f64::max);
    (c1, cinf)
}

fn subset_sums(xs: &mut [f64], dim: usize) {
    for bit in 0..dim {
        let b = 1usize << bit;
        for u in 0..xs.len() {
            if u & b != 0 {
                xs[u] += xs[u ^ b];
            }
        }
    }
}

fn superset_sums(xs: &mut [f64], dim: usize) {
    for bit in 0..dim {
        let b = 1usize << bit;
        for u in 0..xs.len() {
            if u & b == 0 {
                xs[u] += xs[u | b];
            }
        }
    }
}

fn argmax_positive(table: &[f64], dim: usize, value: impl Fn(usize, f64) -> f64) -> (f64, CoordSubset) {
    let mut best = (f64::NEG_INFINITY, 0usize);
    for (u, &w) in table.iter().enumerate() {
        if w > 0.0 {
            let v = value(u, w);
            if v > best.0 {
                best = (v, u);
            }
        }
    }
    if best.0 == f64::NEG_INFINITY {
        // All weights vanish: every component space is trivial.
        best = (1.0, 0);
    }
    (best.0, CoordSubset::new(best.1 as u64, dim).expect("bitmask within dim"))
}

/// One entry of the explicit-weights file format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightEntry {
    pub subset: Vec<usize>,
    pub gamma: f64,
}

/// `{"dim": d, "weights": [{"subset": [1-based indices], "gamma": value}, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExplicitWeightsFile {
    pub dim: usize,
    pub weights: Vec<WeightEntry>,
}

impl WeightSchedule {
    /// Parses the explicit-weights JSON document; omitted subsets get `γ = 0`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ExplicitWeightsFile = serde_json::from_str(text)?;
        if file.dim > BRUTE_FORCE_MAX_DIM {
            return Err(Error::Capacity {
                what: "explicit weight table dimension",
                cap: BRUTE_FORCE_MAX_DIM,
                got: file.dim,
            });
        }
        let mut table = vec![0.0; 1usize << file.dim];
        for entry in &file.weights {
            let u = CoordSubset::from_one_based(&entry.subset, file.dim)?;
            table[u.bits() as usize] = entry.gamma;
        }
        Self::explicit(file.dim, table)
    }

    /// Writes the nonzero weights in the explicit-weights JSON format.
    pub fn to_json(&self) -> Result<String> {
        let table = self.table()?;
        let weights = CoordSubset::all(self.dim)
            .zip(table)
            .filter(|(_, g)| *g != 0.0)
            .map(|(u, gamma)| WeightEntry {
                subset: u.one_based(),
                gamma,
            })
            .collect();
        Ok(serde_json::to_string_pretty(&ExplicitWeightsFile {
            dim: self.dim,
            weights,
        })?)
    }
}
