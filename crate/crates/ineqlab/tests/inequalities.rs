use std::sync::Arc;

use fracsqg_core::generators::{bump, random_band_limited};
use fracsqg_core::{SpectralField, Spectrum};
use fracsqg_ineqlab::*;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const RANDOM: Generator = Generator::RandomBandLimited { decay: 1.0 };

#[test]
fn cordoba_random_field_at_two_resolutions() {
    for n in [63, 127] {
        let sp = Spectrum::unit_square(n).unwrap();
        for seed in 0..4 {
            let q = TestField::realize(&sp, RANDOM, seed, (16, 16)).unwrap();
            let qinf = q.field().to_physical().max_abs();
            let d = cordoba_defect(q.field(), 1.0, Phi::Square).unwrap();
            assert!(d.min() >= -1e-6 * qinf * qinf, "n={n} seed={seed}: {}", d.min());
        }
    }
}

#[test]
fn leibniz_identity_converges_away_from_the_boundary() {
    // Phi(q) = q^2 is not in the sine span, so the projected defect carries a
    // boundary layer; away from it the identity D = 2|grad q|^2 converges fast.
    let res = |n: usize| {
        let sp = Spectrum::unit_square(n).unwrap();
        let q = SpectralField::single_mode(Arc::clone(&sp), 1, 1, 1.0).unwrap();
        leibniz_residual(&q, 0.25).unwrap()
    };
    let (a, b) = (res(31), res(63));
    assert!(b < 0.2 * a, "{a} {b}");
    assert!(b < 1e-3);
}

#[test]
fn empirical_cordoba_constant_is_positive() {
    let sp = Spectrum::unit_square(63).unwrap();
    let q = TestField::realize(&sp, RANDOM, 3, (12, 12)).unwrap();
    let r = cordoba_report(q.field(), 0.5, Phi::Square, Some(3)).unwrap();
    assert!(r.verdict);
    assert!(r.empirical_constant.unwrap() > 0.0);
}

#[test]
fn nonnegativity_of_squared_bump_at_two_resolutions() {
    let mut vals = Vec::new();
    for n in [63, 127] {
        let sp = Spectrum::unit_square(n).unwrap();
        let b = bump(&sp, (0.4, 0.55), 0.25, 1.0).unwrap().to_physical().map(|v| v * v);
        for s in [0.5, 1.0, 1.5] {
            let v = integral_nonnegativity(&b, s).unwrap();
            assert!(v >= -1e-8, "n={n} s={s}: {v}");
            vals.push(v);
        }
    }
    for i in 0..3 {
        assert!((vals[i] - vals[i + 3]).abs() < 1e-3 * vals[i + 3]);
    }
}

#[test]
fn poincare_paper_cases_on_random_fields() {
    let sp = Spectrum::unit_square(63).unwrap();
    for seed in 0..5 {
        let q = TestField::realize(&sp, RANDOM, seed, (16, 16)).unwrap();
        let r = poincare_margin(q.field(), 3.0, 0.4, Some(seed)).unwrap();
        assert!(r.empirical_constant.unwrap() > 0.0);
        assert_eq!(r.param("c1"), Some(2.0 - 4.0 / 3.0));
        for p in [2.0, 4.0] {
            let r = poincare_margin(q.field(), p, 1.3, Some(seed)).unwrap();
            assert!(r.margin >= -1e-8 * (r.lhs.abs() + r.rhs_total().abs()));
        }
    }
    assert!(poincare_margin(&SpectralField::zeros(Arc::clone(&sp)), 1.5, 1.0, None).is_err());
}

#[test]
fn power_domain_cases() {
    let sp = Spectrum::unit_square(31).unwrap();
    let q = TestField::realize(&sp, RANDOM, 1, (10, 10)).unwrap();
    for (beta, s) in [(1.0, 1.0), (2.0, 2.0), (0.6, 0.3)] {
        let r = power_domain_check(&q, beta, s).unwrap();
        assert_eq!(r.verdict, Some(true), "beta={beta} s={s} growth={}", r.growth);
        assert_eq!(r.resolutions, vec![(31, 31), (63, 63), (127, 127)]);
    }
    let r = power_domain_check(&q, 0.6, 0.9).unwrap();
    assert_eq!(r.verdict, None);
    assert!(r.to_margin_report().verdict);
}

#[test]
fn single_mode_trilinear_ratio_is_below_one() {
    let sp = Spectrum::unit_square(31).unwrap();
    let m = |j, k| SpectralField::single_mode(Arc::clone(&sp), j, k, 1.0).unwrap();
    for alpha in [1.2, 1.5, 1.8] {
        for (a, b, c) in [((1, 1), (1, 2), (2, 1)), ((2, 1), (1, 1), (2, 2)), ((1, 2), (2, 3), (3, 3))] {
            let r = trilinear_ratio(&m(a.0, a.1), &m(b.0, b.1), &m(c.0, c.1), alpha, 0.05, None).unwrap();
            assert!(r.margin.is_finite() && r.margin <= 1.0, "alpha={alpha}: {}", r.margin);
        }
    }
}

#[test]
fn product_ratios_are_refinement_stable() {
    let coarse = Spectrum::unit_square(31).unwrap();
    let fine = Spectrum::unit_square(47).unwrap();
    for variant in [
        ProductVariant::SobolevLebesgue { k: 4.0 },
        ProductVariant::Bounded,
        ProductVariant::Holder { gamma: 0.8 },
    ] {
        let ratio = |sp: &Arc<Spectrum>| {
            let g = TestField::realize(sp, RANDOM, 10, (8, 8)).unwrap();
            let h = TestField::realize(sp, RANDOM, 11, (8, 8)).unwrap();
            product_ratio(g.field(), h.field(), 0.3, variant, None).unwrap().margin
        };
        let (a, b) = (ratio(&coarse), ratio(&fine));
        assert!(a.is_finite() && a > 0.0);
        assert!((b / a - 1.0).abs() <= 0.2, "{variant:?}: {a} {b}");
    }
}

#[test]
fn suite_is_reproducible() {
    let cfg = SuiteConfig {
        modes: vec![15],
        seeds: 2,
        band: 6,
        product_modes: vec![15],
        product_seeds: 1,
        power_modes: 15,
        ..SuiteConfig::default()
    };
    let a = run_suite(&cfg).unwrap();
    let b = run_suite(&cfg).unwrap();
    let rows = |r: &[MarginReport]| r.iter().map(|x| x.csv_row()).collect::<Vec<_>>();
    assert_eq!(rows(&a), rows(&b));
    for r in &a {
        assert_eq!(r.verdict, r.margin >= -r.tol, "{}", r.csv_row());
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 32,
        rng_seed: RngSeed::Fixed(0x1e9),
        ..ProptestConfig::default()
    })]

    #[test]
    fn interpolation_is_exact_holder(seed in any::<u64>(), s1 in -1.0f64..1.0, gap in 0.05f64..2.0, theta in 0.0f64..=1.0) {
        let sp = Spectrum::unit_square(24).unwrap();
        let f = random_band_limited(&sp, seed, (24, 24), 0.5).unwrap();
        let s2 = s1 + gap;
        let s = theta * s1 + (1.0 - theta) * s2;
        let r = interpolation_check(&f, s1, s.clamp(s1, s2), s2, Some(seed)).unwrap();
        prop_assert!(r.verdict, "{}", r.csv_row());
    }

    #[test]
    fn exact_poincare_rows_hold(seed in any::<u64>(), s in 0.05f64..1.95, quartic in any::<bool>()) {
        let sp = Spectrum::unit_square(31).unwrap();
        let q = TestField::realize(&sp, RANDOM, seed, (12, 12)).unwrap();
        let p = if quartic { 4.0 } else { 2.0 };
        let r = poincare_margin(q.field(), p, s, Some(seed)).unwrap();
        prop_assert!(r.verdict, "{}", r.csv_row());
    }

    #[test]
    fn defect_is_homogeneous_for_the_square(seed in any::<u64>(), a in 0.1f64..10.0) {
        let sp = Spectrum::unit_square(31).unwrap();
        let q = TestField::realize(&sp, RANDOM, seed, (8, 8)).unwrap();
        let d1 = cordoba_defect(q.field(), 1.0, Phi::Square).unwrap();
        let d2 = cordoba_defect(&q.field().scaled(a), 1.0, Phi::Square).unwrap();
        let diff = d2.zip_with(&d1, |x, y| x - a * a * y).unwrap().max_abs();
        prop_assert!(diff <= 1e-11 * a * a * d1.max_abs());
    }
}
