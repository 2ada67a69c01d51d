use std::f64::consts::{FRAC_PI_2, PI};

mod common;

use common::pwl_strategy as pwl;
use proptest::prelude::*;
use tauberian::pwl::{
    build_alpha, build_gamma, build_one_sided_extremal, build_two_sided_extremal, Extension,
    PiecewiseLinear,
};

fn examples() -> Vec<(&'static str, PiecewiseLinear)> {
    vec![
        ("two-sided", build_two_sided_extremal()),
        ("one-sided", build_one_sided_extremal()),
        ("alpha", build_alpha()),
        ("gamma", build_gamma(0.7, 0.4).unwrap()),
        ("constant", PiecewiseLinear::constant(1.0).unwrap()),
    ]
}

#[test]
fn constructed_examples_validate() {
    for (name, f) in examples() {
        f.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        let back = PiecewiseLinear::from_text(&f.to_text()).unwrap();
        assert_eq!(back, f, "{name}");
    }
}

#[test]
fn extremal_examples_have_slope_one() {
    let two = build_two_sided_extremal();
    assert_eq!(two.lipschitz_constant(), Some(1.0));
    assert_eq!(two.max_slope(), 1.0);
    let one = build_one_sided_extremal();
    // Jumps of +2 at the odd integers; every linear piece has slope −1.
    assert_eq!(one.max_slope(), 1.0);
    assert_eq!(one.lipschitz_constant(), None);
    assert!(one.jumps().iter().all(|&(_, j)| j == 2.0));
}

#[test]
fn lipschitz_bound_on_random_pairs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let f = build_two_sided_extremal();
    let l = f.lipschitz_constant().unwrap();
    for _ in 0..10_000 {
        let x: f64 = rng.gen_range(-20.0..60.0);
        let y: f64 = rng.gen_range(-20.0..60.0);
        assert!((f.eval(x) - f.eval(y)).abs() <= l * (x - y).abs() + 1e-12);
    }
}

#[test]
fn malformed_inputs_rejected() {
    let c = Extension::Constant;
    assert!(PiecewiseLinear::new(&[], c, c).is_err());
    assert!(PiecewiseLinear::new(&[(1.0, 0.0), (0.0, 1.0)], c, c).is_err());
    assert!(PiecewiseLinear::new(&[(0.0, 0.0), (0.0, 1.0), (0.0, 2.0)], c, c).is_err());
    assert!(PiecewiseLinear::new(&[(0.0, f64::NAN)], c, c).is_err());
    // Open periodic tail.
    assert!(PiecewiseLinear::new(&[(0.0, 0.0), (1.0, 1.0)], c, Extension::Periodic(1.0)).is_err());
    assert!(PiecewiseLinear::new(&[(0.0, 0.0), (1.0, 0.0)], c, Extension::Periodic(2.0)).is_err());
    assert!(PiecewiseLinear::from_text("prefix 0 0 1\ntail constant 0\n").is_err());
    assert!(PiecewiseLinear::from_text("prefix 0 0\ntail wobbly 1\n").is_err());
    assert!(build_gamma(1.0, 0.0).is_err());
    assert!(build_gamma(0.0, 1.0).is_ok());
}

#[test]
fn psi_over_delta_peaks_near_zero() {
    for f in [build_two_sided_extremal(), build_alpha()] {
        let small = f.oscillation_modulus(1e-4).unwrap() / 1e-4;
        for i in 1..200 {
            let d = 0.05 * i as f64;
            assert!(f.oscillation_modulus(d).unwrap() / d <= small + 1e-9, "δ = {d}");
        }
        assert!((small - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn text_round_trip(f in pwl()) {
        let back = PiecewiseLinear::from_text(&f.to_text()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn knots_are_interpolated(f in pwl()) {
        // Exact up to the rounding of `x_last − P` in the periodic lookup.
        for (x, v) in f.knots() {
            prop_assert!((f.eval(x) - v).abs() <= 1e-12 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn integral_is_additive(f in pwl(), a in -10.0f64..10.0, w1 in 0.0f64..15.0, w2 in 0.0f64..15.0) {
        let (b, c) = (a + w1, a + w1 + w2);
        let lhs = f.integral(a, c);
        let rhs = f.integral(a, b) + f.integral(b, c);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn integral_matches_midpoint_sums(f in pwl(), a in -8.0f64..8.0, w in 0.1f64..12.0) {
        let b = a + w;
        let n = 20_000;
        let h = w / n as f64;
        let approx: f64 = (0..n).map(|i| f.eval(a + (i as f64 + 0.5) * h)).sum::<f64>() * h;
        prop_assert!((f.integral(a, b) - approx).abs() < 1e-5 * (1.0 + approx.abs()));
    }

    #[test]
    fn lipschitz_on_random_pairs(f in pwl(), x in -10.0f64..30.0, y in -10.0f64..30.0) {
        let l = f.lipschitz_constant().unwrap();
        prop_assert!((f.eval(x) - f.eval(y)).abs() <= l * (x - y).abs() * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn oscillation_is_subadditive(f in pwl(), d1 in 0.01f64..3.0, d2 in 0.01f64..3.0) {
        let p = |d: f64| f.oscillation_modulus(d).unwrap();
        prop_assert!(p(d1 + d2) <= p(d1) + p(d2) + 1e-12);
        prop_assert!(f.decrease_modulus(d1).unwrap() <= p(d1) + 1e-15);
    }

    #[test]
    fn oscillation_matches_sampling(f in pwl(), d in 0.01f64..2.0) {
        let psi = f.oscillation_modulus(d).unwrap();
        let Some(p) = f.right_period() else {
            prop_assert_eq!(psi, 0.0);
            return Ok(());
        };
        let t = f.x_last() + 3.0 * p;
        let mut sampled = 0.0f64;
        for i in 0..400 {
            let x = t + p * i as f64 / 400.0;
            for j in 0..=40 {
                let h = d * j as f64 / 40.0;
                sampled = sampled.max((f.eval(x + h) - f.eval(x)).abs());
            }
        }
        prop_assert!(sampled <= psi + 1e-12);
        // Coarse sampling undershoots by at most slope × grid spacing.
        let slack = f.max_slope() * (p / 400.0 + d / 40.0);
        prop_assert!(psi <= sampled + slack + 1e-12);
    }

    #[test]
    fn periodic_tail_repeats(f in pwl(), x in 0.0f64..30.0) {
        if let Some(p) = f.right_period() {
            let y = f.x_last() + x;
            prop_assert!((f.eval(y) - f.eval(y + p)).abs() < 1e-9);
            prop_assert!(f.tail_sup() >= f.eval(y) - 1e-12);
            prop_assert!(f.tail_inf() <= f.eval(y) + 1e-12);
        }
    }

    #[test]
    fn rescale_identity(f in pwl(), m in 0.2f64..5.0, lambda in 0.2f64..5.0, x in -10.0f64..30.0) {
        let g = f.rescale(m, lambda).unwrap();
        let expected = lambda / m * f.eval(x / lambda);
        prop_assert!((g.eval(x) - expected).abs() < 1e-9 * (1.0 + expected.abs()));
    }

    #[test]
    fn segments_reconstruct_function(f in pwl(), a in -8.0f64..8.0, w in 0.1f64..10.0) {
        let segs = f.segments(a, a + w);
        let total: f64 = segs.iter().map(|s| s.integral()).sum();
        prop_assert!((total - f.integral(a, a + w)).abs() < 1e-9);
        for s in &segs {
            let mid = 0.5 * (s.x0 + s.x1);
            prop_assert!((f.eval(mid) - 0.5 * (s.v0 + s.v1)).abs() < 1e-9);
        }
    }
}

#[test]
fn two_sided_tail_values() {
    let f = build_two_sided_extremal();
    assert_eq!(f.tail_sup(), FRAC_PI_2);
    assert_eq!(f.tail_inf(), -FRAC_PI_2);
    assert!((f.eval(100.0 * PI + FRAC_PI_2) - FRAC_PI_2).abs() < 1e-12);
}
