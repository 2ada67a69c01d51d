//! Oracles shared by the integration tests. None of them call the library's
//! quadrature, tail summation or simplex code.
#![allow(dead_code)]

use proptest::prelude::*;
use tauberian::extremal_opt::{BudgetSense, LipschitzLp};
use tauberian::pwl::{Extension, PiecewiseLinear};

/// Composite Simpson with `2m` panels.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let n = 2 * m;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Simpson over consecutive pieces `[p_i, p_{i+1}]`, `m` double panels each.
pub fn simpson_pieces(f: &dyn Fn(f64) -> f64, pieces: &[f64], m: usize) -> f64 {
    pieces.windows(2).map(|w| simpson(f, w[0], w[1], m)).sum()
}

/// Golden-section maximiser.
pub fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..iters {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

/// Richardson extrapolation of `values[k]` sampled at `h_k = h_0 / 2^k`, assuming
/// an error expansion in integer powers of `h`.
pub fn richardson(values: &[f64]) -> f64 {
    let mut t = values.to_vec();
    let mut p = 1.0;
    for _ in 1..values.len() {
        p *= 2.0;
        t = t.windows(2).map(|w| (p * w[1] - w[0]) / (p - 1.0)).collect();
    }
    t[0]
}

/// `min Σ c_i d_i` subject to `Σ e_i d_i ≤ bound` and `|d_i| ≤ h`, by the
/// fractional-knapsack argument. `None` when infeasible.
pub fn knapsack_min(c: &[f64], e: &[f64], h: f64, bound: f64) -> Option<f64> {
    let mut d: Vec<f64> = c
        .iter()
        .zip(e)
        .map(|(&ci, &ei)| {
            if ci > 0.0 {
                -h
            } else if ci < 0.0 {
                h
            } else if ei > 0.0 {
                -h
            } else {
                h
            }
        })
        .collect();
    let mut load: f64 = e.iter().zip(&d).map(|(a, b)| a * b).sum();
    // Items whose flip lowers the load, cheapest cost per unit of load first.
    let mut items: Vec<(f64, usize)> = (0..c.len())
        .filter(|&i| e[i] * d[i] > 0.0)
        .map(|i| (c[i].abs() / e[i].abs(), i))
        .collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (_, i) in items {
        if load <= bound {
            break;
        }
        let full = 2.0 * h * e[i].abs();
        let take = (load - bound).min(full);
        d[i] -= d[i].signum() * take / e[i].abs();
        load -= take;
    }
    if load > bound + 1e-12 * (1.0 + bound.abs()) {
        return None;
    }
    Some(c.iter().zip(&d).map(|(a, b)| a * b).sum())
}

/// Optimum of the discretised Lipschitz problem via [`knapsack_min`].
pub fn lipschitz_oracle(lp: &LipschitzLp) -> Option<f64> {
    let n = lp.grid.len();
    let suffix = |w: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n - 1];
        let mut acc = 0.0;
        for j in (0..n - 1).rev() {
            acc += w[j + 1];
            out[j] = acc;
        }
        out
    };
    let c = suffix(&lp.objective_weights);
    let mut e = suffix(&lp.constraint_weights);
    let s = lp.boundary_value;
    let base_obj: f64 = lp.objective_weights.iter().sum::<f64>() * s;
    let mut bound = lp.budget - lp.constraint_weights.iter().sum::<f64>() * s;
    if lp.sense == BudgetSense::AtLeast {
        e.iter_mut().for_each(|v| *v = -*v);
        bound = -bound;
    }
    let h = lp.lipschitz_constant * lp.lipschitz_step;
    knapsack_min(&c, &e, h, bound).map(|v| v + base_obj)
}

/// Random continuous knots; a periodic right tail repeats the whole knot range.
pub fn pwl_strategy() -> impl Strategy<Value = PiecewiseLinear> {
    (
        prop::collection::vec((0.05f64..2.0, -3.0f64..3.0), 2..12),
        -5.0f64..5.0,
        any::<bool>(),
    )
        .prop_map(|(steps, x0, periodic)| {
            let mut knots = Vec::with_capacity(steps.len() + 1);
            let mut x = x0;
            for (dx, v) in &steps {
                knots.push((x, *v));
                x += dx;
            }
            let right = if periodic {
                knots.push((x, knots[0].1));
                Extension::Periodic(x - x0)
            } else {
                Extension::Constant
            };
            PiecewiseLinear::new(&knots, Extension::Constant, right).unwrap()
        })
}

/// Every kink or jump of `f` inside `[a, b]`, plus the endpoints, computed from
/// the knot list alone.
pub fn breakpoints(f: &PiecewiseLinear, a: f64, b: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = f.knots().map(|(x, _)| x).collect();
    if let Some(p) = f.right_period() {
        let start = f.x_last() - p;
        let offsets: Vec<f64> = pts.iter().filter(|&&x| x >= start).map(|x| x - start).collect();
        let mut k = 1.0;
        while start + k * p <= b {
            pts.extend(offsets.iter().map(|o| start + k * p + o));
            k += 1.0;
        }
    }
    pts.retain(|&x| x > a && x < b);
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    pts
}

/// Simpson over the linear pieces of `f`, using left limits at right ends.
/// Pieces longer than `max_len` are split further.
pub fn piecewise_simpson(f: &PiecewiseLinear, g: &dyn Fn(f64, f64) -> f64, a: f64, b: f64, m: usize, max_len: f64) -> f64 {
    breakpoints(f, a, b)
        .windows(2)
        .flat_map(|w| {
            let k = ((w[1] - w[0]) / max_len).ceil().max(1.0) as usize;
            let h = (w[1] - w[0]) / k as f64;
            (0..k).map(move |i| (w[0] + i as f64 * h, if i + 1 == k { w[1] } else { w[0] + (i + 1) as f64 * h }))
        })
        .map(|(p, q)| {
            let h = (q - p) / (2 * m) as f64;
            let val = |i: usize| {
                let x = p + i as f64 * h;
                let v = if i == 2 * m { f.eval_left(q) } else { f.eval(x) };
                g(x, v)
            };
            let mut s = val(0) + val(2 * m);
            for i in 1..2 * m {
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * val(i);
            }
            s * h / 3.0
        })
        .sum()
}
