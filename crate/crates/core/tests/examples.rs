use rsalg_core::analysis::fourier::convolve_tilde;
use rsalg_core::groupoid::{i_norm, is_positive_definite_groupoid, left_regular_groupoid_rep};
use rsalg_core::linalg::{CMatrix, MaxModulus};
use rsalg_core::semigroup::{build_standard, builtin_corpus};
use rsalg_core::{
    b_norm, build_associated_groupoid, build_builtin, build_restricted_semigroup, check_groupoid,
    check_inverse_semigroup, coefficient, gns, idempotents, is_restricted_pd, lambda_r, parse_semigroup,
    rep_to_groupoid, restricted_convolution, restricted_product, sigma_r_norm, tilde, CFunction, Error, NormMethod,
    StandardKind, Tolerance, C64,
};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn real(name: &str, v: &[f64]) -> CFunction {
    CFunction::from_real(name, v)
}

#[test]
fn standard_sizes() {
    assert_eq!(build_standard(&StandardKind::CyclicGroup(2)).unwrap().stars(), &[0, 1]);
    assert_eq!(build_standard(&StandardKind::SymmetricInverseMonoid(2)).unwrap().n(), 7);
    assert_eq!(build_standard(&StandardKind::BrandtUnital(2)).unwrap().n(), 6);
}

#[test]
fn idempotent_counts() {
    assert_eq!(idempotents(&build_builtin("Z2").unwrap()).len(), 1);
    assert_eq!(idempotents(&build_builtin("semilattice2").unwrap()).len(), 2);
    assert_eq!(idempotents(&build_builtin("I2").unwrap()).len(), 4);
}

#[test]
fn documents_parse_and_reject_out_of_range_entries() {
    let z2 = parse_semigroup(r#"{"n":2,"table":[[0,1],[1,0]],"star":[0,1]}"#).unwrap();
    assert_eq!(z2.n(), 2);
    let bad = parse_semigroup(r#"{"n":2,"table":[[0,7],[1,0]],"star":[0,1]}"#);
    assert!(
        matches!(bad, Err(Error::Field { .. }) | Err(Error::Structural(_))),
        "{bad:?}"
    );
    let sl = parse_semigroup(r#"{"n":2,"table":[[0,1],[1,1]],"star":[0,1]}"#).unwrap();
    assert_eq!(idempotents(&sl).len(), 2);
}

#[test]
fn restricted_products() {
    let z2 = build_builtin("Z2").unwrap();
    assert_eq!(restricted_product(&z2, 1, 1), Some(0));
    let sl = build_builtin("semilattice2").unwrap();
    assert_eq!(restricted_product(&sl, 0, 1), None);
    let i2 = build_builtin("I2").unwrap();
    for x in i2.elements() {
        assert_eq!(restricted_product(&i2, x, i2.star(x)), Some(i2.mul(x, i2.star(x))));
    }
}

#[test]
fn restricted_semigroups_are_inverse_semigroups_with_zero() {
    for s in builtin_corpus() {
        let r = build_restricted_semigroup(&s);
        assert_eq!(r.sr.n(), s.n() + 1);
        assert!(check_inverse_semigroup(&r.sr.to_raw()).unwrap().valid, "{}", s.name());
        assert_eq!(r.sr.zero(), Some(s.n()));
    }
    let sl = build_restricted_semigroup(&build_builtin("semilattice2").unwrap()).sr;
    assert_eq!((sl.mul(0, 1), sl.mul(0, 0), sl.mul(1, 1)), (2, 0, 1));
}

#[test]
fn convolution_examples() {
    let z2 = build_builtin("Z2").unwrap();
    let f = real("Z2", &[1.0, 1.0]);
    assert_eq!(
        restricted_convolution(&z2, &f, &f).unwrap().values,
        vec![c(2.0, 0.0); 2]
    );
    let sl = build_builtin("semilattice2").unwrap();
    let p = restricted_convolution(
        &sl,
        &CFunction::delta("semilattice2", 2, 0),
        &CFunction::delta("semilattice2", 2, 1),
    );
    assert_eq!(p.unwrap().sup_norm(), 0.0);
    let g = CFunction::new("Z2", vec![c(0.0, 0.0), c(0.0, 1.0)]);
    assert_eq!(tilde(&z2, &g).values, vec![c(0.0, 0.0), c(0.0, -1.0)]);
}

#[test]
fn regular_representation_examples() {
    let z2 = lambda_r(&build_builtin("Z2").unwrap());
    assert_eq!(
        z2.mats[1],
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
    );
    let sl = lambda_r(&build_builtin("semilattice2").unwrap());
    assert_eq!(
        sl.mats[0],
        CMatrix::from_diagonal(&nalgebra::dvector![c(1.0, 0.0), c(0.0, 0.0)])
    );
    for s in builtin_corpus() {
        let l = lambda_r(&s);
        for x in s.elements() {
            let m = &l.mats[x] * &l.mats[s.star(x)] * &l.mats[x];
            assert!((m - &l.mats[x]).max_modulus() == 0.0);
        }
    }
}

#[test]
fn groupoid_examples() {
    let z2 = build_associated_groupoid(&build_builtin("Z2").unwrap());
    assert_eq!(z2.units().len(), 1);
    let sl = build_associated_groupoid(&build_builtin("semilattice2").unwrap());
    assert_eq!(sl.units().len(), 2);
    let i2 = build_associated_groupoid(&build_builtin("I2").unwrap());
    assert_eq!(i2.units().len(), 4);
    let full = build_builtin("I2").unwrap().identity().unwrap();
    assert_eq!(i2.isotropy(full).len(), 2);
    for s in builtin_corpus() {
        assert!(check_groupoid(&build_associated_groupoid(&s)).valid);
    }
    let z3 = build_associated_groupoid(&build_builtin("Z3").unwrap());
    assert_eq!(
        i_norm(&z3, &CFunction::constant("Z3", 3, c(1.0, 0.0))).unwrap().value,
        3.0
    );
    let rep = left_regular_groupoid_rep(&z2);
    assert_eq!(rep.fiber_dims.values().copied().collect::<Vec<_>>(), vec![2]);
}

#[test]
fn groupoid_positivity_examples() {
    let z2 = build_associated_groupoid(&build_builtin("Z2").unwrap());
    let tol = Tolerance::default();
    assert!(
        is_positive_definite_groupoid(&z2, &real("Z2", &[1.0, 1.0]), tol)
            .unwrap()
            .positive
    );
    assert!(
        !is_positive_definite_groupoid(&z2, &real("Z2", &[-1.0, 1.0]), tol)
            .unwrap()
            .positive
    );
    let sl = build_associated_groupoid(&build_builtin("semilattice2").unwrap());
    assert!(
        is_positive_definite_groupoid(&sl, &real("semilattice2", &[1.0, 1.0]), tol)
            .unwrap()
            .positive
    );
}

#[test]
fn restricted_positivity_examples() {
    let sl = build_builtin("semilattice2").unwrap();
    let tol = Tolerance::default();
    assert!(is_restricted_pd(&sl, &real("semilattice2", &[1.0, 1.0]), tol)
        .unwrap()
        .is_member());
    assert!(!is_restricted_pd(&sl, &real("semilattice2", &[1.0, -1.0]), tol)
        .unwrap()
        .is_member());
}

#[test]
fn norm_examples() {
    let z2 = build_builtin("Z2").unwrap();
    assert!((sigma_r_norm(&z2, &real("Z2", &[1.0, 1.0])).unwrap().value - 2.0).abs() < 1e-12);
    assert!((b_norm(&z2, &real("Z2", &[1.0, 1.0])).unwrap().value - 1.0).abs() < 1e-10);
    assert!((b_norm(&z2, &real("Z2", &[0.0, 1.0])).unwrap().value - 1.0).abs() < 1e-10);
    let zero = b_norm(&z2, &real("Z2", &[0.0, 0.0])).unwrap();
    assert_eq!((zero.value, zero.method), (0.0, NormMethod::CertifiedBounds));
}

#[test]
fn regular_coefficients_are_convolutions_at_the_adjoint() {
    for s in builtin_corpus() {
        let l = lambda_r(&s);
        let f = CFunction::new(s.name(), (0..s.n()).map(|k| c(k as f64, 1.0)).collect());
        let g = CFunction::new(s.name(), (0..s.n()).map(|k| c(1.0, -(k as f64))).collect());
        let coeff = coefficient(&s, &l, &f.values, &g.values).unwrap();
        let conv = convolve_tilde(&s, &f, &g).unwrap();
        for y in s.elements() {
            assert!((coeff[y] - conv[s.star(y)]).norm() < 1e-12);
        }
    }
}

#[test]
fn gns_and_bundles() {
    let z2 = build_builtin("Z2").unwrap();
    let g = gns(&z2, &real("Z2", &[1.0, 1.0]), Tolerance::default()).unwrap();
    assert_eq!(g.rep.dim, 1);
    let b = rep_to_groupoid(&z2, &lambda_r(&z2), Tolerance::default()).unwrap();
    assert_eq!(b.fiber_dims[&0], 2);
    let sl = build_builtin("semilattice2").unwrap();
    let b = rep_to_groupoid(&sl, &lambda_r(&sl), Tolerance::default()).unwrap();
    assert!(b.fiber_dims.values().all(|&d| d == 1));
}
