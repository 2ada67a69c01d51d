mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use tauberian::bounds::{
    full_convolution, gamma_margin, gamma_margin_direct, graham_vaaler_window, ingham_refined_bound,
    one_sided_bound, one_sided_chain, osc_bound, osc_objective, theta_sharpness, two_sided_bound,
    windowed_convolution, OSC_DELTA_MAX, OSC_DELTA_MIN,
};
use tauberian::kernels::BandLimitedKernel;
use tauberian::pwl::{build_two_sided_extremal, PiecewiseLinear};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() }
}

#[test]
fn constant_convolves_to_mass() {
    let one = PiecewiseLinear::constant(1.0).unwrap();
    for k in [BandLimitedKernel::sharp(), BandLimitedKernel::jackson(), BandLimitedKernel::fejer()] {
        for h in [0.0, 3.7, -40.0] {
            let r = full_convolution(&one, &k, h, 1e-9).unwrap();
            assert!((r.value - k.mass()).abs() < 1e-8 * k.mass(), "{} h = {h}: {}", k.name, r.value);
        }
    }
}

#[test]
fn chain_is_increasing_from_one() {
    let mut prev = one_sided_chain(1e-6).unwrap();
    assert!((prev - 1.0).abs() < 1e-5);
    assert!((PI * prev - PI).abs() < 1e-4);
    for i in 1..=400 {
        let u = 1e-6 * 10f64.powf(i as f64 * 8.0 / 400.0);
        let g = one_sided_chain(u).unwrap();
        assert!(g >= prev - 1e-15, "u = {u}: {g} < {prev}");
        prev = g;
    }
    // Series and closed-form branches meet.
    let (a, b) = (one_sided_chain(0.999e-2).unwrap(), one_sided_chain(1.001e-2).unwrap());
    assert!((a - b).abs() < 1e-5);
}

#[test]
fn sharp_bounds_scale() {
    assert_eq!(two_sided_bound(1.0, 1.0).unwrap(), FRAC_PI_2);
    assert_eq!(one_sided_bound(PI, 1.0).unwrap(), 1.0);
    assert!(two_sided_bound(0.0, 1.0).is_err());
    assert!(one_sided_bound(1.0, -1.0).is_err());
    assert!(ingham_refined_bound(1.0, 1.0, -1.0).is_err());
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn refined_bound_not_below_sharp(theta in 1e-6f64..50.0) {
        let b = ingham_refined_bound(theta, 1.0, theta_sharpness(theta).unwrap()).unwrap();
        prop_assert!(b >= FRAC_PI_2 * (1.0 - 1e-14));
    }

    #[test]
    fn sharpness_forms_agree(theta in 1e-3f64..20.0) {
        let e = (PI * theta).exp();
        let direct = (e - 1.0) / (theta * (1.0 + e));
        prop_assert!((theta_sharpness(theta).unwrap() - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn gamma_margin_linear(b in 0.01f64..5.0) {
        let m = gamma_margin(b).unwrap();
        let one = gamma_margin(1.0).unwrap();
        prop_assert!((m - b * one).abs() < 1e-12 * (1.0 + m.abs()));
        let d = gamma_margin_direct(b).unwrap();
        prop_assert!((m - d).abs() < 1e-10 * (1.0 + m.abs()), "{m} vs {d}");
    }

    #[test]
    fn graham_vaaler_width(theta in 0.01f64..10.0, lambda in 0.01f64..10.0, m in 0.0f64..5.0) {
        let (lo, hi) = graham_vaaler_window(theta, lambda, m).unwrap();
        prop_assert!(lo <= hi);
        if m > 0.0 {
            prop_assert!(lo < hi);
        }
        // v/(1 − e^{−v}) − v/(e^v − 1) = v.
        prop_assert!((hi - lo - 2.0 * PI * m / lambda).abs() < 1e-9 * (1.0 + hi));
    }

    #[test]
    fn window_matches_simpson(f in common::pwl_strategy(), y in -8.0f64..8.0) {
        let k = BandLimitedKernel::sharp();
        let v = windowed_convolution(&f, &k, y).unwrap();
        let shifted = |x: f64| f.eval(x + y) * k.eval(x);
        let mut pieces: Vec<f64> = common::breakpoints(&f, y - FRAC_PI_2, y + FRAC_PI_2).iter().map(|b| b - y).collect();
        pieces.dedup();
        let b = common::simpson_pieces(&shifted, &pieces, 400);
        prop_assert!((v - b).abs() < 1e-7, "{v} vs {b}");
    }

    #[test]
    fn osc_bound_is_an_infimum(lambda in 0.1f64..10.0, delta in OSC_DELTA_MIN..OSC_DELTA_MAX, two in any::<bool>()) {
        let f = build_two_sided_extremal();
        let psi = |d: f64| f.oscillation_modulus(d).unwrap();
        let b = osc_bound(&psi, lambda, two).unwrap();
        prop_assert!(b.value <= osc_objective(&psi, lambda, two, delta) * (1.0 + 1e-12));
        prop_assert!((osc_objective(&psi, lambda, two, b.delta) - b.value).abs() < 1e-12 * b.value);
    }
}
