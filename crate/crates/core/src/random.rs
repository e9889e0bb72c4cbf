//! Seeded random tensor polynomials and component tuples.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomp::ComponentTuple;
use crate::funcspace::{Poly1, TensorFunction, TensorTerm};
use crate::weights::CoordSubset;

/// Shape of random tensor polynomials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomFunctionSpec {
    pub max_terms: usize,
    /// Each term touches a uniformly chosen number (0..=this, capped by the
    /// dimension) of distinct coordinates.
    pub max_touched: usize,
    pub max_degree: usize,
    /// Coefficients are uniform in `[-coeff_bound, coeff_bound]`.
    pub coeff_bound: f64,
}

impl Default for RandomFunctionSpec {
    /// Up to 3 terms on at most 4 coordinates, degree ≤ 3, coefficients in
    /// `[-1, 1]`.
    fn default() -> Self {
        Self {
            max_terms: 3,
            max_touched: 4,
            max_degree: 3,
            coeff_bound: 1.0,
        }
    }
}

/// The generator for sample `index` of a run seeded with `seed`. Each sample
/// gets its own stream, so samples can be drawn in any order.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, max_degree: usize, coeff_bound: f64) -> Poly1 {
    let deg = rng.gen_range(0..=max_degree);
    Poly1::new((0..=deg).map(|_| rng.gen_range(-coeff_bound..=coeff_bound)).collect())
}

fn random_term<R: Rng + ?Sized>(rng: &mut R, coords: &[usize], spec: &RandomFunctionSpec) -> TensorTerm {
    let coeff = rng.gen_range(-spec.coeff_bound..=spec.coeff_bound);
    let touched = rng.gen_range(0..=spec.max_touched.min(coords.len()));
    let mut picked: Vec<usize> = sample(rng, coords.len(), touched).into_iter().map(|i| coords[i]).collect();
    picked.sort_unstable();
    let factors: BTreeMap<usize, Poly1> = picked
        .into_iter()
        .map(|j| (j, random_poly(rng, spec.max_degree, spec.coeff_bound)))
        .collect();
    TensorTerm::new(coeff, factors)
}

/// A random function on `[0,1]^dim` with `1..=max_terms` terms.
pub fn random_function<R: Rng + ?Sized>(rng: &mut R, dim: usize, spec: &RandomFunctionSpec) -> TensorFunction {
    random_function_on(rng, CoordSubset::full(dim), spec)
}

/// A random function depending only on the coordinates in `u`.
pub fn random_function_on<R: Rng + ?Sized>(
    rng: &mut R,
    u: CoordSubset,
    spec: &RandomFunctionSpec,
) -> TensorFunction {
    let coords: Vec<usize> = u.indices().collect();
    let nterms = rng.gen_range(1..=spec.max_terms.max(1));
    let terms = (0..nterms).map(|_| random_term(rng, &coords, spec)).collect();
    TensorFunction::new(u.dim(), terms).expect("coordinates drawn below dim")
}

/// A random tuple with each component present with probability 1/2.
pub fn random_component_tuple<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    spec: &RandomFunctionSpec,
) -> ComponentTuple {
    let mut out = ComponentTuple::new(dim);
    for u in CoordSubset::all(dim) {
        if rng.gen_bool(0.5) {
            let g = random_function_on(rng, u, spec);
            out.insert(u, g).expect("component generated on its subset");
        }
    }
    out
}
