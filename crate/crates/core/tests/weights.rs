mod common;

use anchova::random::sample_rng;
use anchova::weights::{closed_form_constants_product, interpolate_constant, tau_zero};
use anchova::{CoordSubset, PExponent, WeightSchedule};
use common::{naive_constants, rel_err};
use proptest::prelude::*;
use rand::Rng;

fn random_table(seed: u64, dim: usize) -> Vec<f64> {
    let mut rng = sample_rng(seed, dim as u64);
    (0..1usize << dim).map(|_| rng.gen_range(0.05..4.0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_constants_match_nested_sums(seed in any::<u64>(), dim in 0usize..=7) {
        let table = random_table(seed, dim);
        let w = WeightSchedule::explicit(dim, table.clone()).unwrap();
        let (c1, cinf) = naive_constants(&table, dim);
        prop_assert!(rel_err(w.constant_c1().unwrap(), c1) < 1e-12);
        prop_assert!(rel_err(w.constant_cinf().unwrap(), cinf) < 1e-12);
    }

    #[test]
    fn product_closed_form_matches_brute_force(gammas in prop::collection::vec(0.01f64..10.0, 0..=12)) {
        let w = WeightSchedule::product(gammas.clone()).unwrap();
        let (c1, cinf) = closed_form_constants_product(&gammas);
        prop_assert!(rel_err(w.brute_force_c1().unwrap().0, c1) < 1e-12);
        prop_assert!(rel_err(w.brute_force_cinf().unwrap().0, cinf) < 1e-12);
    }

    #[test]
    fn constants_ignore_global_scale(seed in any::<u64>(), dim in 1usize..=6, lambda in 1e-3f64..1e3) {
        let w = WeightSchedule::explicit(dim, random_table(seed, dim)).unwrap();
        let s = w.scaled(lambda).unwrap();
        prop_assert!(rel_err(s.constant_c1().unwrap(), w.constant_c1().unwrap()) < 1e-12);
        prop_assert!(rel_err(s.constant_cinf().unwrap(), w.constant_cinf().unwrap()) < 1e-12);
    }

    #[test]
    fn cdp_is_log_linear_in_reciprocal_p(gammas in prop::collection::vec(0.01f64..5.0, 1..=8)) {
        let w = WeightSchedule::product(gammas).unwrap();
        let (c1, cinf) = (w.constant_c1().unwrap(), w.constant_cinf().unwrap());
        let (lo, hi) = (c1.min(cinf), c1.max(cinf));
        for p in [1.0, 1.25, 2.0, 3.0, 7.5] {
            let c = w.constant_cdp(PExponent::Finite(p)).unwrap();
            let expect = (c1.ln() / p + cinf.ln() * (1.0 - 1.0 / p)).exp();
            prop_assert!(rel_err(c, expect) < 1e-12);
            prop_assert!(c >= lo * (1.0 - 1e-12) && c <= hi * (1.0 + 1e-12));
        }
        prop_assert_eq!(w.constant_cdp(PExponent::Finite(1.0)).unwrap(), c1);
        prop_assert_eq!(w.constant_cdp(PExponent::Infinity).unwrap(), cinf);
    }

    #[test]
    fn product_constants_multiply(a in prop::collection::vec(0.01f64..5.0, 1..=5), b in prop::collection::vec(0.01f64..5.0, 1..=5)) {
        let joined: Vec<f64> = a.iter().chain(&b).copied().collect();
        let whole = WeightSchedule::product(joined).unwrap();
        let wa = WeightSchedule::product(a).unwrap();
        let wb = WeightSchedule::product(b).unwrap();
        let c1 = wa.brute_force_c1().unwrap().0 * wb.brute_force_c1().unwrap().0;
        let cinf = wa.brute_force_cinf().unwrap().0 * wb.brute_force_cinf().unwrap().0;
        prop_assert!(rel_err(whole.brute_force_c1().unwrap().0, c1) < 1e-12);
        prop_assert!(rel_err(whole.brute_force_cinf().unwrap().0, cinf) < 1e-12);
    }

    #[test]
    fn tau_zero_is_monotone_in_weights(gammas in prop::collection::vec(0.0f64..3.0, 50), bump in prop::collection::vec(0.0f64..1.0, 50)) {
        let bigger: Vec<f64> = gammas.iter().zip(&bump).map(|(g, b)| g + b).collect();
        let t = tau_zero(&gammas, 50).unwrap();
        let tb = tau_zero(&bigger, 50).unwrap();
        prop_assert!(tb.value >= t.value);
        let direct = (1..=50)
            .map(|d| gammas[..d].iter().sum::<f64>() / ((d + 1) as f64).ln())
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(rel_err(t.value, direct) < 1e-12 || (t.value == 0.0 && direct == 0.0));
    }
}

#[test]
fn finite_order_closed_forms_match_tables() {
    for dim in 1..=10 {
        for order in 1..=dim.min(4) {
            for (c, omega) in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.25)] {
                let w = WeightSchedule::finite_order(dim, c, omega, order).unwrap();
                let (c1, cinf) = w.closed_form_constants().unwrap();
                let (n1, ninf) = naive_constants(&w.table().unwrap(), dim);
                assert!(rel_err(c1, n1) < 1e-12, "d={dim} q={order} c={c} ω={omega}: {c1} vs {n1}");
                assert!(rel_err(cinf, ninf) < 1e-12, "d={dim} q={order} c={c} ω={omega}: {cinf} vs {ninf}");
            }
        }
    }
}

#[test]
fn dimension_dependent_constants_stay_bounded() {
    // γ_u = d^{-|u|}: product weights with γ_j = 1/d, so C_{d,1} = (1+1/d)^d < e.
    for dim in 1..=20 {
        let w = WeightSchedule::dimension_dependent(dim).unwrap();
        let c1 = w.constant_c1().unwrap();
        assert!(rel_err(c1, (1.0 + 1.0 / dim as f64).powi(dim as i32)) < 1e-12);
        assert!(c1 < std::f64::consts::E);
        assert!(w.constant_cinf().unwrap() < std::f64::consts::E.sqrt());
    }
}

#[test]
fn interpolation_endpoints() {
    assert_eq!(interpolate_constant(4.0, 2.25, PExponent::Finite(2.0)), 3.0);
    assert_eq!(interpolate_constant(4.0, 2.25, PExponent::Finite(1.0)), 4.0);
    assert_eq!(interpolate_constant(4.0, 2.25, PExponent::Infinity), 2.25);
}

#[test]
fn explicit_json_round_trip() {
    let w = WeightSchedule::finite_order(4, 2.0, 0.5, 2).unwrap();
    let explicit = WeightSchedule::explicit(4, w.table().unwrap()).unwrap();
    let back = WeightSchedule::from_json(&explicit.to_json().unwrap()).unwrap();
    assert_eq!(back.table().unwrap(), w.table().unwrap());
    assert_eq!(back.constant_c1().unwrap(), explicit.constant_c1().unwrap());
}

#[test]
fn incompatible_table_is_reported() {
    // γ_{1,2} > 0 while γ_{1} = 0.
    let table = vec![1.0, 0.0, 1.0, 1.0];
    let w = WeightSchedule::explicit(2, table).unwrap();
    let bad = w.check_compatibility();
    let u = CoordSubset::from_one_based(&[1, 2], 2).unwrap();
    let v = CoordSubset::from_one_based(&[1], 2).unwrap();
    assert!(bad.contains(&(u, v)), "{bad:?}");
}
