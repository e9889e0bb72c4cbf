use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::multipoly::MultiPoly;
use super::poly::Poly1;
use crate::error::{Error, Result};
use crate::weights::{CoordSubset, MAX_DIM};

/// `coeff · ∏_j factors[j](x_j)`; coordinates without a factor carry the
/// constant 1.
///
/// Constant factors are folded into the coefficient on construction, so every
/// stored factor has degree ≥ 1.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorTerm {
    coeff: f64,
    factors: BTreeMap<usize, Poly1>,
}

impl TensorTerm {
    pub fn new(coeff: f64, factors: BTreeMap<usize, Poly1>) -> Self {
        let mut term = Self {
            coeff,
            factors: BTreeMap::new(),
        };
        for (j, h) in factors {
            term.set_factor(j, h);
        }
        term
    }

    pub fn constant(coeff: f64) -> Self {
        Self::new(coeff, BTreeMap::new())
    }

    /// Multiplies the factor on coordinate `j` into the term, replacing any
    /// previous factor.
    fn set_factor(&mut self, j: usize, h: Poly1) {
        match h.as_constant() {
            Some(c) => {
                self.factors.remove(&j);
                self.coeff *= c;
                if c == 0.0 {
                    self.factors.clear();
                }
            }
            None => {
                if self.coeff != 0.0 {
                    self.factors.insert(j, h);
                }
            }
        }
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn factors(&self) -> &BTreeMap<usize, Poly1> {
        &self.factors
    }

    pub fn factor(&self, j: usize) -> Option<&Poly1> {
        self.factors.get(&j)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.factors
            .iter()
            .fold(self.coeff, |acc, (&j, h)| acc * h.eval(x[j]))
    }

    /// Upper bound on the magnitude of every monomial coefficient of the
    /// expanded term; attained by one of them.
    pub fn max_monomial_coeff(&self) -> f64 {
        self.factors
            .values()
            .fold(self.coeff.abs(), |acc, h| acc * h.max_abs_coeff())
    }

    /// Replaces each factor `h_j` by `op(h_j)` for `j` in `coords`; absent
    /// factors enter as the constant 1.
    pub(crate) fn map_factors(&self, coords: CoordSubset, op: impl Fn(&Poly1) -> Poly1) -> Self {
        let one = Poly1::constant(1.0);
        let mut out = self.clone();
        for j in coords.indices() {
            let h = self.factors.get(&j).unwrap_or(&one);
            out.set_factor(j, op(h));
        }
        out
    }

    /// Applies `eval(h_j)` (a scalar) to every factor outside `keep` and
    /// multiplies the results into the coefficient.
    fn collapse_outside(&self, keep: CoordSubset, eval: impl Fn(&Poly1) -> f64) -> Self {
        let mut coeff = self.coeff;
        let mut factors = BTreeMap::new();
        for (&j, h) in &self.factors {
            if keep.contains(j) {
                factors.insert(j, h.clone());
            } else {
                coeff *= eval(h);
            }
        }
        Self::new(coeff, factors)
    }

    fn key(&self) -> Vec<(usize, Vec<u64>)> {
        self.factors.iter().map(|(&j, h)| (j, h.bit_key())).collect()
    }
}

/// How the coordinates outside a subset are eliminated by
/// [`TensorFunction::restrict`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestrictMode {
    /// Substitute `x_j = 0`.
    AnchorAtZero,
    /// Integrate `x_j` over `[0, 1]`.
    IntegrateOut,
}

/// A finite sum of tensor terms on `[0,1]^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorFunction {
    dim: usize,
    terms: Vec<TensorTerm>,
}

impl TensorFunction {
    pub fn new(dim: usize, terms: Vec<TensorTerm>) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim));
        }
        for t in &terms {
            if let Some((&j, _)) = t.factors.iter().next_back() {
                if j >= dim {
                    return Err(Error::IndexOutOfRange { index: j, dim });
                }
            }
        }
        Ok(Self::from_parts(dim, terms))
    }

    fn from_parts(dim: usize, terms: Vec<TensorTerm>) -> Self {
        Self {
            dim,
            terms: terms.into_iter().filter(|t| t.coeff != 0.0).collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::from_parts(dim, vec![TensorTerm::constant(c)])
    }

    /// The single elementary tensor `coeff · ∏ factors`.
    pub fn elementary(dim: usize, coeff: f64, factors: impl IntoIterator<Item = (usize, Poly1)>) -> Result<Self> {
        Self::new(dim, vec![TensorTerm::new(coeff, factors.into_iter().collect())])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[TensorTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    /// Coordinates carrying a nonconstant factor in some term.
    pub fn support(&self) -> CoordSubset {
        let bits = self
            .terms
            .iter()
            .flat_map(|t| t.factors.keys())
            .fold(0u64, |b, &j| b | 1u64 << j);
        CoordSubset::new(bits, self.dim).expect("factor indices below dim")
    }

    pub fn depends_only_on(&self, u: CoordSubset) -> bool {
        self.support().is_subset_of(u)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self::from_parts(self.dim, terms))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_parts(
            self.dim,
            self.terms
                .iter()
                .map(|t| TensorTerm {
                    coeff: t.coeff * s,
                    factors: t.factors.clone(),
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }

    /// Merges terms with bitwise-identical factors.
    pub fn simplify(&self) -> Self {
        let mut index: HashMap<Vec<(usize, Vec<u64>)>, usize> = HashMap::new();
        let mut terms: Vec<TensorTerm> = Vec::new();
        for t in &self.terms {
            match index.get(&t.key()) {
                Some(&i) => terms[i].coeff += t.coeff,
                None => {
                    index.insert(t.key(), terms.len());
                    terms.push(t.clone());
                }
            }
        }
        Self::from_parts(self.dim, terms)
    }

    /// `∏_{j∈u} ∂/∂x_j f`.
    pub fn mixed_derivative(&self, u: CoordSubset) -> Result<Self> {
        self.check_dim(u.dim())?;
        let terms = self
            .terms
            .iter()
            .filter(|t| u.indices().all(|j| t.factors.contains_key(&j)))
            .map(|t| t.map_factors(u, Poly1::derivative))
            .collect();
        Ok(Self::from_parts(self.dim, terms))
    }

    /// Eliminates every coordinate outside `u`, by anchoring at 0 or by
    /// integrating over `[0, 1]`.
    pub fn restrict(&self, u: CoordSubset, mode: RestrictMode) -> Result<Self> {
        self.check_dim(u.dim())?;
        let terms = self
            .terms
            .iter()
            .map(|t| match mode {
                RestrictMode::AnchorAtZero => t.collapse_outside(u, |h| h.eval(0.0)),
                RestrictMode::IntegrateOut => t.collapse_outside(u, Poly1::integral_unit),
            })
            .collect();
        Ok(Self::from_parts(self.dim, terms).simplify())
    }

    /// `∫_{[0,1]^d} f`.
    pub fn integral(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.factors.values().fold(t.coeff, |acc, h| acc * h.integral_unit()))
            .sum()
    }

    /// Value of a function with no nonconstant factors.
    pub fn as_constant(&self) -> Option<f64> {
        self.terms
            .iter()
            .all(|t| t.factors.is_empty())
            .then(|| self.terms.iter().map(|t| t.coeff).sum())
    }

    /// Expansion into monomials over the coordinates in `axes` (which must
    /// cover the support).
    pub fn expand(&self, axes: &[usize]) -> MultiPoly {
        let mut out = MultiPoly::zero(axes.len());
        for t in &self.terms {
            out.add_assign(&MultiPoly::from_term(t, axes));
        }
        out
    }

    /// Whether the terms cancel: every monomial coefficient of the expanded
    /// sum is at most `rel_tol` times the summed term magnitudes. A single
    /// nonzero term is never negligible, however small its coefficient.
    pub fn is_negligible(&self, rel_tol: f64) -> bool {
        let simplified = self.simplify();
        match simplified.terms.len() {
            0 => true,
            1 => simplified.terms[0].max_monomial_coeff() == 0.0,
            _ => {
                let scale: f64 = simplified.terms.iter().map(|t| t.max_monomial_coeff()).sum();
                if scale == 0.0 {
                    return true;
                }
                let axes: Vec<usize> = simplified.support().indices().collect();
                simplified.expand(&axes).max_abs_coeff() <= rel_tol * scale
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: f64,
    #[serde(default)]
    factors: BTreeMap<String, Vec<f64>>,
}

/// `{"dim": d, "terms": [{"coeff": c, "factors": {"j": [c0, c1, ...]}}]}`
/// with 1-based coordinate keys.
#[derive(Serialize, Deserialize)]
pub(crate) struct TensorFunctionJson {
    dim: usize,
    terms: Vec<TermJson>,
}

impl TryFrom<TensorFunctionJson> for TensorFunction {
    type Error = Error;

    fn try_from(doc: TensorFunctionJson) -> Result<Self> {
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in doc.terms {
            let mut factors = BTreeMap::new();
            for (key, coeffs) in t.factors {
                let j: usize = key
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("factor key {key:?} is not a coordinate index")))?;
                if j == 0 || j > doc.dim {
                    return Err(Error::IndexOutOfRange { index: j, dim: doc.dim });
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Parse(format!("non-finite coefficient in factor {j}")));
                }
                factors.insert(j - 1, Poly1::new(coeffs));
            }
            if !t.coeff.is_finite() {
                return Err(Error::Parse("non-finite term coefficient".into()));
            }
            terms.push(TensorTerm::new(t.coeff, factors));
        }
        TensorFunction::new(doc.dim, terms)
    }
}

impl From<&TensorFunction> for TensorFunctionJson {
    fn from(f: &TensorFunction) -> Self {
        Self {
            dim: f.dim,
            terms: f
                .terms
                .iter()
                .map(|t| TermJson {
                    coeff: t.coeff,
                    factors: t
                        .factors
                        .iter()
                        .map(|(j, h)| ((j + 1).to_string(), h.coeffs().to_vec()))
                        .collect(),
                })
                .collect(),
        }
    }
}

impl Serialize for TensorFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorFunctionJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = TensorFunctionJson::deserialize(d)?;
        TensorFunction::try_from(doc).map_err(serde::de::Error::custom)
    }
}

impl TensorFunction {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TensorFunctionJson = serde_json::from_str(text)?;
        doc.try_into()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
