//! Cross-module checks through the public API: the bound table against its
//! building blocks, and operator composition against multiplier algebra.

use hspec::constants::{
    kappa, kappa_closed_11, radial_bound, remark27_bound, resolvent_bound, stability_threshold, Case, KappaInput,
    RadialWeight, Remark27, StabilityCase,
};
use hspec::field::{random_band, LambdaGrid};
use hspec::spectral_calculus::{apply, eig_l, multiplier, OperatorSpec};
use hspec::Error;
use num_complex::Complex64;
use std::sync::Arc;

#[test]
fn resolvent_bound_for_l_uses_the_explicit_table() {
    for d in 1..=5 {
        let b = resolvent_bound(Case::I, d, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(b.value, remark27_bound(Remark27::W1, d).unwrap());
        let t = stability_threshold(StabilityCase::I, d).unwrap();
        assert!((t * b.value - 1.0).abs() < 1e-14, "d = {d}");
    }
    for d in 2..=5 {
        let b = resolvent_bound(Case::II, d, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(b.value, remark27_bound(Remark27::W2, d).unwrap());
    }
}

#[test]
fn case_iv_bound_never_exceeds_the_radial_composition() {
    for d in 1..=6 {
        let radial = radial_bound(RadialWeight::W4, d, 1.0, 1.0).unwrap();
        let b = resolvent_bound(Case::IV, d, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(b.value <= radial, "d = {d}: {} > {radial}", b.value);
    }
}

#[test]
fn fractional_bounds_grow_with_the_comparability_spread() {
    let tight = resolvent_bound(Case::I, 1, 0.75, 0.75, 1.0, 1.0).unwrap().value;
    let loose = resolvent_bound(Case::I, 1, 0.75, 0.75, 0.9, 1.1).unwrap().value;
    assert!(loose > tight);
    let k = kappa(&KappaInput::new(1.0, 1.0, 1.0, 1.0).unwrap()).unwrap().kappa;
    assert!(k < kappa_closed_11());
}

#[test]
fn out_of_range_orders_are_domain_errors() {
    assert!(matches!(resolvent_bound(Case::I, 1, 0.5, 0.5, 1.0, 1.0), Err(Error::Domain(_))));
    assert!(matches!(resolvent_bound(Case::II, 1, 1.0, 1.0, 1.0, 1.0), Err(Error::Domain(_))));
    assert!(matches!(OperatorSpec::resolvent(OperatorSpec::SubLaplacian, Complex64::new(2.0, 0.0)), Err(_)));
}

#[test]
fn resolvent_times_shifted_operator_is_identity() {
    let grid = Arc::new(LambdaGrid::default_geometric());
    let c = random_band(2, 16, grid, 12, 0.8, 3, 0).unwrap();
    let sigma = Complex64::new(0.3, 0.7);
    let r = OperatorSpec::resolvent(OperatorSpec::Conformal(0.75), sigma).unwrap();
    let lhs = apply(&r, &apply(&OperatorSpec::Conformal(0.75), &c).unwrap()).unwrap();
    let rhs = apply(&r, &c).unwrap();
    // R (H - sigma) c = c, i.e. R H c - sigma R c = c.
    let mut worst: f64 = 0.0;
    for ((a, b), orig) in lhs.values().iter().zip(rhs.values()).zip(c.values()) {
        worst = worst.max((a - sigma * b - orig).norm());
    }
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn sublaplacian_multiplier_is_the_eigenvalue() {
    for d in 1..=3 {
        for k in [0, 1, 7, 40] {
            for lambda in [-3.5, 0.125, 9.0] {
                let m = multiplier(&OperatorSpec::SubLaplacian, k, lambda, d).unwrap();
                assert_eq!(m, Complex64::new(eig_l(k, lambda, d).unwrap(), 0.0));
            }
        }
    }
}
