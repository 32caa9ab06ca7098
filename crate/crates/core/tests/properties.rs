use proptest::prelude::*;
use rsalg_core::groupoid::{groupoid_convolution, i_norm};
use rsalg_core::linalg::MaxModulus;
use rsalg_core::{
    b_norm_with, build_associated_groupoid, build_builtin, lambda_r, parse_semigroup, render_semigroup,
    restricted_convolution, sigma_r_norm, tilde, wedderburn_blocks, CFunction, InverseSemigroup, MatrixRep,
    BUILTIN_NAMES, C64,
};

fn semigroup() -> impl Strategy<Value = InverseSemigroup> {
    prop::sample::select(BUILTIN_NAMES.to_vec()).prop_map(|name| build_builtin(name).unwrap())
}

fn values() -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 8)
        .prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
}

fn on(s: &InverseSemigroup, v: &[C64]) -> CFunction {
    CFunction::new(s.name(), v[..s.n()].to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_is_l1_submultiplicative(s in semigroup(), a in values(), b in values()) {
        let (f, g) = (on(&s, &a), on(&s, &b));
        let h = restricted_convolution(&s, &f, &g).unwrap();
        prop_assert!(h.norm1() <= f.norm1() * g.norm1() + 1e-12);
    }

    #[test]
    fn convolution_is_associative(s in semigroup(), a in values(), b in values(), c in values()) {
        let (f, g, h) = (on(&s, &a), on(&s, &b), on(&s, &c));
        let left = restricted_convolution(&s, &restricted_convolution(&s, &f, &g).unwrap(), &h).unwrap();
        let right = restricted_convolution(&s, &f, &restricted_convolution(&s, &g, &h).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-10);
    }

    #[test]
    fn regular_representation_is_multiplicative(s in semigroup(), a in values(), b in values()) {
        let (f, g) = (on(&s, &a), on(&s, &b));
        let lambda = lambda_r(&s);
        let fg = lambda.integrate(&restricted_convolution(&s, &f, &g).unwrap()).unwrap();
        let product = lambda.integrate(&f).unwrap() * lambda.integrate(&g).unwrap();
        prop_assert!((fg - product).max_modulus() < 1e-10);
    }

    #[test]
    fn tilde_is_an_antimultiplicative_involution(s in semigroup(), a in values(), b in values()) {
        let (f, g) = (on(&s, &a), on(&s, &b));
        prop_assert!(tilde(&s, &tilde(&s, &f)).max_abs_diff(&f) == 0.0);
        let lhs = tilde(&s, &restricted_convolution(&s, &f, &g).unwrap());
        let rhs = restricted_convolution(&s, &tilde(&s, &g), &tilde(&s, &f)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn i_norm_is_submultiplicative(s in semigroup(), a in values(), b in values()) {
        let g = build_associated_groupoid(&s);
        let (f, h) = (on(&s, &a), on(&s, &b));
        let fh = groupoid_convolution(&g, &f, &h).unwrap();
        let lhs = i_norm(&g, &fh).unwrap().value;
        prop_assert!(lhs <= i_norm(&g, &f).unwrap().value * i_norm(&g, &h).unwrap().value + 1e-10);
    }

    #[test]
    fn groupoid_and_restricted_convolutions_agree(s in semigroup(), a in values(), b in values()) {
        let g = build_associated_groupoid(&s);
        let (f, h) = (on(&s, &a), on(&s, &b));
        let lhs = groupoid_convolution(&g, &f, &h).unwrap();
        let rhs = restricted_convolution(&s, &f, &h).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn operator_norm_is_submultiplicative(s in semigroup(), a in values(), b in values()) {
        let (f, g) = (on(&s, &a), on(&s, &b));
        let fg = restricted_convolution(&s, &f, &g).unwrap();
        let lhs = sigma_r_norm(&s, &fg).unwrap().value;
        let rhs = sigma_r_norm(&s, &f).unwrap().value * sigma_r_norm(&s, &g).unwrap().value;
        prop_assert!(lhs <= rhs * (1.0 + 1e-10) + 1e-12);
        prop_assert!(sigma_r_norm(&s, &f).unwrap().value <= f.norm1() + 1e-10);
    }

    #[test]
    fn dual_norm_bounds_are_tight(s in semigroup(), a in values()) {
        let blocks = wedderburn_blocks(&s).unwrap();
        let u = on(&s, &a);
        let r = b_norm_with(&s, &blocks, &u).unwrap();
        prop_assert!(r.bounds_consistent(), "{:?}", r);
        prop_assert!(r.value >= u.sup_norm() - 1e-9);
    }

    #[test]
    fn semigroup_documents_round_trip(s in semigroup()) {
        let again = parse_semigroup(&render_semigroup(&s)).unwrap();
        prop_assert_eq!(again, s);
    }

    #[test]
    fn function_documents_round_trip(s in semigroup(), a in values()) {
        let f = on(&s, &a);
        prop_assert_eq!(CFunction::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn representation_documents_round_trip(s in semigroup()) {
        let lambda = lambda_r(&s);
        let back = MatrixRep::from_json(&lambda.to_json()).unwrap();
        prop_assert_eq!(back, lambda);
    }
}
