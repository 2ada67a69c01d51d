mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tauberian::extremal_opt::{
    check_condition, min_over_lipschitz, min_over_zigzag_on_grid, random_instance, window_mass,
    LinearProgram, LipschitzLp, LpStatus, RowKind, Sense,
};
use tauberian::Error;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() }
}

/// An admissible `(N, s, I)` with `I` at fraction `u ∈ (−1, 1)` of the window.
fn instance(shift: u32, s: f64, u: f64) -> (u32, f64, f64) {
    let c = check_condition(s, 0.0);
    let mid = 0.5 * (c.lower + c.upper);
    (shift, s, mid + u * 0.5 * (c.upper - c.lower))
}

#[test]
fn simplex_matches_knapsack_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [51, 101] {
        for _ in 0..20 {
            let (shift, s, budget) = random_instance(&mut rng);
            for shift in [shift, 1, 5] {
                let lp = LipschitzLp::new(shift, s, budget, n).unwrap();
                let sol = lp.solve();
                let oracle = common::lipschitz_oracle(&lp).expect("admissible instance is feasible");
                assert_eq!(sol.status, LpStatus::Optimal);
                assert!((sol.objective - oracle).abs() < 1e-9, "N={shift} n={n}: {} vs {oracle}", sol.objective);
                assert!(sol.max_residual < 1e-9);
            }
        }
    }
}

#[test]
fn outside_window_is_rejected() {
    let c = check_condition(0.3, 0.0);
    let r = min_over_lipschitz(2, 0.3, c.upper + 0.1, 101);
    assert!(matches!(r, Err(Error::Precondition(_))));
    assert!(LipschitzLp::new(2, 0.0, 0.0, 100).is_err());
    assert!(LipschitzLp::new(0, 0.0, 0.0, 101).is_err());
    assert!((c.upper - c.lower - 2.0 * (c.upper - 0.3 * window_mass())).abs() < 1e-12);
}

/// Minimum over the vertices of a 2-variable polytope: pairwise intersections of
/// the constraint lines, including the box sides.
fn vertex_min(obj: [f64; 2], rows: &[([f64; 2], RowKind, f64)], lo: [f64; 2], hi: [f64; 2]) -> Option<f64> {
    let mut lines: Vec<([f64; 2], f64)> = rows.iter().map(|(a, _, b)| (*a, *b)).collect();
    lines.extend([([1.0, 0.0], lo[0]), ([1.0, 0.0], hi[0]), ([0.0, 1.0], lo[1]), ([0.0, 1.0], hi[1])]);
    let feasible = |x: [f64; 2]| {
        (0..2).all(|i| x[i] >= lo[i] - 1e-9 && x[i] <= hi[i] + 1e-9)
            && rows.iter().all(|(a, k, b)| {
                let v = a[0] * x[0] + a[1] * x[1];
                match k {
                    RowKind::Le => v <= b + 1e-9,
                    RowKind::Ge => v >= b - 1e-9,
                    RowKind::Eq => (v - b).abs() <= 1e-9,
                }
            })
    };
    let mut best: Option<f64> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let ([a, b], e) = lines[i];
            let ([c, d], f) = lines[j];
            let det = a * d - b * c;
            if det.abs() < 1e-12 {
                continue;
            }
            let x = [(e * d - b * f) / det, (a * f - e * c) / det];
            if feasible(x) {
                let v = obj[0] * x[0] + obj[1] * x[1];
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
        }
    }
    best
}

fn row_kind() -> impl Strategy<Value = RowKind> {
    prop_oneof![Just(RowKind::Le), Just(RowKind::Ge), Just(RowKind::Eq)]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn sandwich_and_injection(shift in 1u32..6, s in -1.0f64..1.0, u in -0.9f64..0.9) {
        let (shift, s, budget) = instance(shift, s, u);
        let lp = LipschitzLp::new(shift, s, budget, 201).unwrap();
        let sol = lp.solve();
        let zz = min_over_zigzag_on_grid(&lp).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!(sol.objective >= zz.value - 1e-9, "{} vs {}", sol.objective, zz.value);
        if zz.on_boundary {
            let samples: Vec<f64> = lp.grid.iter().map(|&x| zz.zigzag.eval(x)).collect();
            prop_assert!(lp.max_violation(&samples) < 1e-9);
            prop_assert!((sol.objective - zz.value).abs() < 1e-6, "{} vs {}", sol.objective, zz.value);
        }
    }

    #[test]
    fn grid_refinement(shift in 1u32..5, s in -1.0f64..1.0, u in -0.9f64..0.9) {
        let (shift, s, budget) = instance(shift, s, u);
        let coarse = min_over_lipschitz(shift, s, budget, 201).unwrap().objective;
        let fine = min_over_lipschitz(shift, s, budget, 401).unwrap().objective;
        prop_assert!((coarse - fine).abs() < 1e-4, "{coarse} vs {fine}");
    }

    /// Scaling `s`, `I` and the slope bound together scales the optimum.
    #[test]
    fn homogeneity(shift in 1u32..5, s in -1.0f64..1.0, u in -0.9f64..0.9, lambda in 0.1f64..5.0) {
        let (shift, s, budget) = instance(shift, s, u);
        let base = LipschitzLp::new(shift, s, budget, 101).unwrap().solve().objective;
        let scaled = LipschitzLp::new(shift, lambda * s, lambda * budget, 101)
            .unwrap()
            .with_lipschitz_constant(lambda)
            .solve();
        prop_assert_eq!(scaled.status, LpStatus::Optimal);
        prop_assert!((scaled.objective - lambda * base).abs() < 1e-9 * (1.0 + base.abs() * lambda));
        let mut lp = LipschitzLp::new(shift, s, budget, 101).unwrap();
        lp.objective_weights.iter_mut().for_each(|w| *w *= lambda);
        prop_assert!((lp.solve().objective - lambda * base).abs() < 1e-9 * (1.0 + base.abs() * lambda));
    }

    #[test]
    fn small_programs_match_vertex_enumeration(
        obj in prop::array::uniform2(-2.0f64..2.0),
        rows in prop::collection::vec((prop::array::uniform2(-2.0f64..2.0), row_kind(), -3.0f64..3.0), 0..4),
        lo in prop::array::uniform2(-3.0f64..0.0),
        width in prop::array::uniform2(0.1f64..4.0),
        maximize in any::<bool>(),
    ) {
        let hi = [lo[0] + width[0], lo[1] + width[1]];
        let sign = if maximize { -1.0 } else { 1.0 };
        let mut lp = LinearProgram::new(if maximize { Sense::Maximize } else { Sense::Minimize }, obj.to_vec());
        lp.lower = lo.to_vec();
        lp.upper = hi.to_vec();
        for (a, k, b) in &rows {
            lp.add_row(a.to_vec(), *k, *b);
        }
        let r = lp.solve();
        let oracle = vertex_min([sign * obj[0], sign * obj[1]], &rows, lo, hi).map(|v| sign * v);
        match oracle {
            Some(v) => {
                prop_assert_eq!(r.status, LpStatus::Optimal);
                prop_assert!((r.objective - v).abs() < 1e-8, "{} vs {v}", r.objective);
                prop_assert!(lp.max_violation(&r.x) < 1e-8);
            }
            None => prop_assert_eq!(r.status, LpStatus::Infeasible),
        }
    }
}
