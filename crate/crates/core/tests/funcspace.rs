mod common;

use anchova::funcspace::{lp_norm_subset_with, sup_abs_unit, NormMethod};
use anchova::oracle::{integral_oracle, GridSpec};
use anchova::random::{random_function, random_poly, sample_rng, RandomFunctionSpec};
use anchova::{lp_norm_1d, lp_norm_subset, CoordSubset, PExponent, Poly1, TensorFunction};
use common::rel_err;
use proptest::prelude::*;

const EXPONENTS: [PExponent; 5] = [
    PExponent::Finite(1.0),
    PExponent::Finite(1.5),
    PExponent::Finite(2.0),
    PExponent::Finite(3.0),
    PExponent::Infinity,
];

fn spec(dim: usize) -> RandomFunctionSpec {
    RandomFunctionSpec {
        max_terms: 3,
        max_touched: dim,
        max_degree: 3,
        coeff_bound: 1.0,
    }
}

/// `‖h‖_p` by dense composite Simpson on `[0,1]`, or a dense grid max at ∞.
fn dense_1d(h: &Poly1, p: PExponent) -> f64 {
    let n = 20_000;
    let f = |i: usize| h.eval(i as f64 / n as f64).abs();
    match p {
        PExponent::Infinity => (0..=n).map(f).fold(0.0, f64::max),
        PExponent::Finite(p) => {
            let s: f64 = (0..=n)
                .map(|i| {
                    let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                    w * f(i).powf(p)
                })
                .sum();
            (s / (3.0 * n as f64)).powf(1.0 / p)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn univariate_norms_match_dense_rule(seed in any::<u64>()) {
        let h = random_poly(&mut sample_rng(seed, 0), 6, 1.0);
        for p in EXPONENTS {
            let exact = lp_norm_1d(&h, p);
            let dense = dense_1d(&h, p);
            // Simpson loses accuracy at the kinks of |h|; 1e-6 is ample.
            prop_assert!((exact - dense).abs() <= 1e-6 * exact.max(1e-3), "p={} {} vs {}", p, exact, dense);
            if p.is_infinite() {
                prop_assert!(exact >= dense * (1.0 - 1e-15));
            }
        }
    }

    #[test]
    fn norms_are_homogeneous(seed in any::<u64>(), dim in 1usize..=3, lambda in -5.0f64..5.0) {
        let g = random_function(&mut sample_rng(seed, 1), dim, &spec(dim));
        let u = CoordSubset::full(dim);
        for p in EXPONENTS {
            let a = lp_norm_subset(&g.scale(lambda), u, p).unwrap();
            let b = lambda.abs() * lp_norm_subset(&g, u, p).unwrap();
            prop_assert!((a - b).abs() <= 1e-8 * b.max(1e-12), "p={} {} vs {}", p, a, b);
        }
    }

    #[test]
    fn triangle_inequality(seed in any::<u64>(), dim in 1usize..=3) {
        let mut rng = sample_rng(seed, 2);
        let f = random_function(&mut rng, dim, &spec(dim));
        let g = random_function(&mut rng, dim, &spec(dim));
        let u = CoordSubset::full(dim);
        for p in EXPONENTS {
            let sum = lp_norm_subset(&f.add(&g).unwrap(), u, p).unwrap();
            let bound = lp_norm_subset(&f, u, p).unwrap() + lp_norm_subset(&g, u, p).unwrap();
            prop_assert!(sum <= bound * (1.0 + 1e-7) + 1e-12, "p={} {} > {}", p, sum, bound);
        }
    }

    #[test]
    fn norms_increase_with_p(seed in any::<u64>(), dim in 1usize..=3) {
        let g = random_function(&mut sample_rng(seed, 3), dim, &spec(dim));
        let u = CoordSubset::full(dim);
        let norms: Vec<f64> = EXPONENTS.iter().map(|&p| lp_norm_subset(&g, u, p).unwrap()).collect();
        for w in norms.windows(2) {
            prop_assert!(w[0] <= w[1] * (1.0 + 1e-7), "{:?}", norms);
        }
    }

    #[test]
    fn elementary_tensors_factorize(seed in any::<u64>(), dim in 1usize..=4) {
        let mut rng = sample_rng(seed, 4);
        let factors: Vec<Poly1> = (0..dim).map(|_| random_poly(&mut rng, 4, 1.0)).collect();
        let g = TensorFunction::elementary(dim, 1.0, factors.iter().cloned().enumerate()).unwrap();
        // Adding and subtracting a term defeats the single-term shortcut.
        let extra = TensorFunction::elementary(dim, 0.5, [(0, Poly1::linear(1.0, 1.0))]).unwrap();
        let disguised = g.add(&extra).unwrap().add(&extra.scale(-1.0)).unwrap();
        let u = CoordSubset::full(dim);
        for p in [PExponent::Finite(1.0), PExponent::Finite(2.0), PExponent::Finite(3.0), PExponent::Infinity] {
            let product: f64 = factors.iter().map(|h| lp_norm_1d(h, p)).product();
            let direct = lp_norm_subset(&g, u, p).unwrap();
            prop_assert!(rel_err(direct, product) < 1e-12, "p={} {} vs {}", p, direct, product);
            if dim <= 3 {
                let quad = lp_norm_subset_with(&disguised, u, p, NormMethod::Quadrature).unwrap();
                prop_assert!(rel_err(quad, product) < 1e-6, "p={} quadrature {} vs {}", p, quad, product);
            }
        }
    }

    #[test]
    fn even_p_expansion_agrees_with_quadrature(seed in any::<u64>(), dim in 2usize..=3) {
        let g = random_function(&mut sample_rng(seed, 5), dim, &spec(dim));
        let u = CoordSubset::full(dim);
        for p in [2.0, 4.0] {
            let exact = lp_norm_subset(&g, u, PExponent::Finite(p)).unwrap();
            let quad = lp_norm_subset_with(&g, u, PExponent::Finite(p), NormMethod::Quadrature).unwrap();
            prop_assert!(rel_err(quad, exact) < 1e-9 || exact < 1e-12);
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), dim in 1usize..=5) {
        let g = random_function(&mut sample_rng(seed, 6), dim, &spec(dim));
        let back = TensorFunction::from_json(&g.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn subset_norms_match_midpoint_oracle() {
    for i in 0..8 {
        let dim = 1 + i % 3;
        let g = random_function(&mut sample_rng(77, i as u64), dim, &spec(dim));
        let u = CoordSubset::full(dim);
        let grid = GridSpec::new(200, u).unwrap();
        for p in [1.0, 2.0, 2.5] {
            let reference = lp_norm_subset(&g, u, PExponent::Finite(p)).unwrap().powf(p);
            let oracle = integral_oracle(|x| g.eval(x), u, p, grid).unwrap();
            assert!(
                rel_err(oracle, reference) < 5e-4 || (oracle - reference).abs() < 1e-9,
                "sample {i} p={p}: {oracle} vs {reference}"
            );
        }
    }
}

#[test]
fn sup_of_known_polynomials() {
    // 4x(1-x) peaks at 1/2; x³ - x has |min| 2/(3√3) at 1/√3.
    let bump = Poly1::new(vec![0.0, 4.0, -4.0]);
    let (v, at) = sup_abs_unit(&bump);
    assert!((v - 1.0).abs() < 1e-15 && (at - 0.5).abs() < 1e-12);
    let cubic = Poly1::new(vec![0.0, -1.0, 0.0, 1.0]);
    let (v, at) = sup_abs_unit(&cubic);
    assert!((v - 2.0 / (3.0 * 3f64.sqrt())).abs() < 1e-15);
    assert!((at - 1.0 / 3f64.sqrt()).abs() < 1e-12);
}
