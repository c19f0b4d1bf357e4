//! Closed-form warped curvature and the Einstein checks against the
//! coordinate oracle.

use std::f64::consts::PI;

use warpcheck::chart::MetricChart;
use warpcheck::fuzz::fuzzed_product;
use warpcheck::grw::{standard_fiber, FamilyKind, FiberKind, GrwFamily};
use warpcheck::verify::{
    constancy, einstein_residual, induced_fiber_residual, lambda_bar_samples, oracle_diff,
};
use warpcheck::{SamplePlan, ScalarField, WarpedProduct};

fn torus() -> MetricChart {
    MetricChart::flat("T2", &["x1", "x2"], vec![1, 1], vec![(0.0, 2.0 * PI); 2]).unwrap()
}

fn torus_product(warp: &str) -> WarpedProduct {
    let base = torus();
    let warp = ScalarField::parse(warp, &base).unwrap();
    let (fiber, _) = standard_fiber(FiberKind::Sphere, 2, 1.0).unwrap();
    WarpedProduct::assemble(base, fiber, warp).unwrap()
}

#[test]
fn nonconstant_warp_on_a_torus_gives_nonconstant_lambda() {
    let w = torus_product("1 + 0.3*sin(x1)");
    let points = SamplePlan::for_chart(w.product(), 100, 1).points().unwrap();
    assert!(
        !constancy(&lambda_bar_samples(&w, &points).unwrap())
            .unwrap()
            .is_constant
    );

    let w = torus_product("1.7");
    let stats = constancy(&lambda_bar_samples(&w, &points).unwrap()).unwrap();
    assert!(stats.is_constant);
    assert_eq!(stats.mean, 0.0);
}

#[test]
fn fuzzed_products_match_the_oracle() {
    for seed in 0..5 {
        let w = fuzzed_product(seed, 0.2).unwrap();
        let diff = oracle_diff(&w, &SamplePlan::for_chart(w.product(), 30, seed)).unwrap();
        assert!(diff < 1e-6, "seed {seed}: {diff}");
    }
}

#[test]
fn halving_the_fuzz_keeps_agreement() {
    for seed in 0..3 {
        for amp in [0.2, 0.1, 0.05] {
            let w = fuzzed_product(seed, amp).unwrap();
            assert!(oracle_diff(&w, &SamplePlan::for_chart(w.product(), 20, seed)).unwrap() < 1e-6);
        }
    }
}

#[test]
fn exact_families_fail_with_the_opposite_sign() {
    for kind in [
        FamilyKind::Exp,
        FamilyKind::Cosh,
        FamilyKind::Sinh,
        FamilyKind::Cos,
    ] {
        for n in [2, 3, 4] {
            let fam = GrwFamily::new(kind, n, 1.0, 1.0, 0.0).unwrap();
            let w = fam.matched_chart().unwrap();
            let plan = SamplePlan::for_chart(w.product(), 20, 9);
            let magnitude = (n * (n - 1)) as f64 / 2.0;
            let oracle_sign = if kind == FamilyKind::Cos { -1.0 } else { 1.0 };
            let good =
                einstein_residual(w.product(), oracle_sign * magnitude, &plan, 1e-6).unwrap();
            assert!(good.pass, "{kind} n={n}: {}", good.max_rel_residual);
            let bad =
                einstein_residual(w.product(), -oracle_sign * magnitude, &plan, 1e-6).unwrap();
            assert!(!bad.pass);
            assert!(
                bad.max_abs_residual >= magnitude,
                "{kind} n={n}: {}",
                bad.max_abs_residual
            );
        }
    }
}

#[test]
fn induced_fiber_constant_matches_the_fiber() {
    for (kind, n) in [
        (FamilyKind::Cosh, 3),
        (FamilyKind::Sinh, 3),
        (FamilyKind::Cosh, 4),
        (FamilyKind::Sinh, 4),
    ] {
        let w = GrwFamily::new(kind, n, 0.5, 2.0, 0.7)
            .unwrap()
            .matched_chart()
            .unwrap();
        let r = induced_fiber_residual(&w, &SamplePlan::for_chart(w.product(), 20, 2)).unwrap();
        assert!(r < 1e-6, "{kind} n={n}: {r}");
    }
}
