mod common;

use anchova::random::{random_component_tuple, random_function, sample_rng, RandomFunctionSpec};
use anchova::{
    anchored_components, anchored_norm, anchored_reconstruct, anova_components, anova_norm, anova_reconstruct,
    ComponentTuple, CoordSubset, Error, PExponent, RestrictMode, TensorFunction, WeightSchedule,
};
use common::{max_pointwise_diff, random_point, rel_err, roundtrip_spec};
use proptest::prelude::*;

fn single(g: &ComponentTuple, u: CoordSubset) -> ComponentTuple {
    let mut t = ComponentTuple::new(g.dim());
    if let Some(gu) = g.get(u) {
        t.insert(u, gu.clone()).unwrap();
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reconstruction_inverts_components(seed in any::<u64>(), dim in 1usize..=5) {
        let mut rng = sample_rng(seed, 0);
        let f = random_function(&mut rng, dim, &roundtrip_spec(dim));
        let a = anchored_reconstruct(&anchored_components(&f).unwrap());
        let b = anova_reconstruct(&anova_components(&f).unwrap());
        prop_assert!(max_pointwise_diff(&mut rng, &a, &f, 50) < 1e-9);
        prop_assert!(max_pointwise_diff(&mut rng, &b, &f, 50) < 1e-9);
    }

    #[test]
    fn components_invert_reconstruction(seed in any::<u64>(), dim in 1usize..=4) {
        let mut rng = sample_rng(seed, 1);
        let g = random_component_tuple(&mut rng, dim, &roundtrip_spec(dim));
        for back in [
            anchored_components(&anchored_reconstruct(&g)).unwrap(),
            anova_components(&anova_reconstruct(&g)).unwrap(),
        ] {
            let zero = TensorFunction::zero(dim);
            for u in CoordSubset::all(dim) {
                let (x, y) = (back.get(u).unwrap_or(&zero), g.get(u).unwrap_or(&zero));
                prop_assert!(max_pointwise_diff(&mut rng, x, y, 20) < 1e-9, "component {}", u);
            }
        }
    }

    #[test]
    fn anchored_pieces_vanish_on_anchor_faces(seed in any::<u64>(), dim in 1usize..=4) {
        let mut rng = sample_rng(seed, 2);
        let f = random_function(&mut rng, dim, &roundtrip_spec(dim));
        let g = anchored_components(&f).unwrap();
        for (u, _) in g.iter() {
            let piece = anchored_reconstruct(&single(&g, u));
            for j in u.indices() {
                let mut x = random_point(&mut rng, dim);
                x[j] = 0.0;
                prop_assert!(piece.eval(&x).abs() < 1e-12, "piece {} at x_{} = 0", u, j + 1);
            }
        }
    }

    #[test]
    fn anova_pieces_have_zero_means(seed in any::<u64>(), dim in 1usize..=4) {
        let mut rng = sample_rng(seed, 3);
        let f = random_function(&mut rng, dim, &roundtrip_spec(dim));
        let g = anova_components(&f).unwrap();
        for (u, _) in g.iter() {
            let piece = anova_reconstruct(&single(&g, u));
            for j in u.indices() {
                let keep = CoordSubset::singleton(j, dim).unwrap().complement();
                let mean = piece.restrict(keep, RestrictMode::IntegrateOut).unwrap();
                let x = random_point(&mut rng, dim);
                prop_assert!(mean.eval(&x).abs() < 1e-12, "piece {} has nonzero mean in x_{}", u, j + 1);
            }
        }
        // The empty component is the mean of f.
        let empty = g.get(CoordSubset::empty(dim)).and_then(|c| c.as_constant()).unwrap_or(0.0);
        prop_assert!((empty - f.integral()).abs() < 1e-12);
    }

    #[test]
    fn decompositions_are_linear(seed in any::<u64>(), dim in 1usize..=4, lambda in -3.0f64..3.0) {
        let mut rng = sample_rng(seed, 4);
        let f = random_function(&mut rng, dim, &roundtrip_spec(dim));
        let h = random_function(&mut rng, dim, &roundtrip_spec(dim));
        let combo = f.add(&h.scale(lambda)).unwrap();
        let (cf, ch, cc) = (
            anova_components(&f).unwrap(),
            anova_components(&h).unwrap(),
            anova_components(&combo).unwrap(),
        );
        let zero = TensorFunction::zero(dim);
        for u in CoordSubset::all(dim) {
            let expect = cf.get(u).unwrap_or(&zero).add(&ch.get(u).unwrap_or(&zero).scale(lambda)).unwrap();
            prop_assert!(max_pointwise_diff(&mut rng, cc.get(u).unwrap_or(&zero), &expect, 10) < 1e-10);
        }
    }

    #[test]
    fn norms_are_norms_of_component_tuples(seed in any::<u64>(), dim in 1usize..=3) {
        let mut rng = sample_rng(seed, 5);
        let spec = RandomFunctionSpec::default();
        let g = random_component_tuple(&mut rng, dim, &spec);
        let gammas: Vec<f64> = (1..=dim).map(|j| 1.0 / j as f64).collect();
        let w = WeightSchedule::product(gammas).unwrap();
        for p in [PExponent::Finite(1.0), PExponent::Finite(2.0), PExponent::Infinity] {
            let want = g.weighted_norm(&w, p).unwrap();
            let anch = anchored_norm(&anchored_reconstruct(&g), &w, p).unwrap();
            let anova = anova_norm(&anova_reconstruct(&g), &w, p).unwrap();
            prop_assert!(rel_err(anch, want) < 1e-8 || want < 1e-12, "p={} {} vs {}", p, anch, want);
            prop_assert!(rel_err(anova, want) < 1e-8 || want < 1e-12, "p={} {} vs {}", p, anova, want);
        }
    }

    #[test]
    fn tuple_json_round_trip(seed in any::<u64>(), dim in 1usize..=4) {
        let g = random_component_tuple(&mut sample_rng(seed, 6), dim, &roundtrip_spec(dim));
        let back = ComponentTuple::from_json(&g.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn zero_weight_on_nonzero_component_is_rejected() {
    // f = x_1 x_2 has a nonzero {1,2} component; finite-order weights of order 1
    // give that subset weight zero.
    let f = TensorFunction::elementary(2, 1.0, [(0, anchova::Poly1::linear(0.0, 1.0)), (1, anchova::Poly1::linear(0.0, 1.0))])
        .unwrap();
    let w = WeightSchedule::finite_order(2, 1.0, 1.0, 1).unwrap();
    let err = anchored_norm(&f, &w, PExponent::Finite(2.0)).unwrap_err();
    assert!(matches!(err, Error::Membership(u) if u == CoordSubset::full(2)), "{err:?}");
    // An additive function is fine.
    let g = TensorFunction::elementary(2, 1.0, [(1, anchova::Poly1::linear(0.0, 1.0))]).unwrap();
    assert!(anchored_norm(&g, &w, PExponent::Finite(2.0)).is_ok());
}

#[test]
fn components_respect_support() {
    let g = TensorFunction::elementary(3, 1.0, [(2, anchova::Poly1::linear(0.0, 1.0))]).unwrap();
    let mut t = ComponentTuple::new(3);
    let err = t.insert(CoordSubset::singleton(0, 3).unwrap(), g).unwrap_err();
    assert!(matches!(err, Error::ComponentSupport { coord: 2, .. }), "{err:?}");
}
