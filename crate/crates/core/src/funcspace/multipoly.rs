use std::collections::BTreeMap;

use super::tensor::TensorTerm;

/// A sparse multivariate polynomial over a fixed list of axes, keyed by
/// exponent vectors. Used where terms have to be combined exactly.
#[derive(Clone, Debug, Default)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(vec![0; nvars], 1.0);
        p
    }

    /// Expands one tensor term. Factors on coordinates not listed in `axes`
    /// are a logic error.
    pub fn from_term(term: &TensorTerm, axes: &[usize]) -> Self {
        let mut out = Self::zero(axes.len());
        out.terms.insert(vec![0; axes.len()], term.coeff());
        for (&j, h) in term.factors() {
            let pos = axes
                .iter()
                .position(|&a| a == j)
                .expect("term factor on an axis outside the expansion");
            let mut next = Self::zero(axes.len());
            for (exps, c) in &out.terms {
                for (k, a) in h.coeffs().iter().enumerate() {
                    if *a == 0.0 {
                        continue;
                    }
                    let mut e = exps.clone();
                    e[pos] += k as u32;
                    *next.terms.entry(e).or_insert(0.0) += c * a;
                }
            }
            out = next;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.nvars, other.nvars);
        for (e, c) in &other.terms {
            *self.terms.entry(e.clone()).or_insert(0.0) += c;
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *out.terms.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `∫_{[0,1]^nvars}`.
    pub fn integral_unit_cube(&self) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().fold(*c, |acc, &k| acc / (k + 1) as f64))
            .sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&k, &xi)| acc * xi.powi(k as i32)))
            .sum()
    }
}
