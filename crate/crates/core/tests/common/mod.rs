#![allow(dead_code)]

use anchova::random::RandomFunctionSpec;
use anchova::{CoordSubset, TensorFunction};
use rand::Rng;

/// Up to 3 terms touching any number of coordinates, degree ≤ 4.
pub fn roundtrip_spec(dim: usize) -> RandomFunctionSpec {
    RandomFunctionSpec {
        max_terms: 3,
        max_touched: dim,
        max_degree: 4,
        coeff_bound: 1.0,
    }
}

pub fn random_point<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.gen::<f64>()).collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Maximum pointwise difference on `n` random points.
pub fn max_pointwise_diff<R: Rng>(rng: &mut R, f: &TensorFunction, g: &TensorFunction, n: usize) -> f64 {
    (0..n)
        .map(|_| {
            let x = random_point(rng, f.dim());
            (f.eval(&x) - g.eval(&x)).abs()
        })
        .fold(0.0, f64::max)
}

/// `C_{d,1}` and `C_{d,∞}` by nested loops over the defining sums; shares
/// nothing with the library's transform-based evaluation.
pub fn naive_constants(table: &[f64], dim: usize) -> (f64, f64) {
    let n = 1usize << dim;
    let mut c1 = f64::NEG_INFINITY;
    let mut cinf = f64::NEG_INFINITY;
    for u in 0..n {
        if table[u] == 0.0 {
            continue;
        }
        let mut s1 = 0.0;
        for v in 0..n {
            if v & !u == 0 {
                s1 += table[u] / table[v];
            }
        }
        c1 = c1.max(s1);
        let comp = !u & (n - 1);
        let mut sinf = 0.0;
        for v in 0..n {
            if v & !comp == 0 {
                sinf += 0.5f64.powi(v.count_ones() as i32) * table[u | v] / table[u];
            }
        }
        cinf = cinf.max(sinf);
    }
    (c1, cinf)
}

pub fn full(dim: usize) -> CoordSubset {
    CoordSubset::full(dim)
}
