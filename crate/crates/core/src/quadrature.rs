//! Adaptive Gauss–Kronrod quadrature with declared break points, and summation
//! of slowly decaying periodic tails.
//!
//! The base rule is the 10/21-point Gauss–Kronrod pair. Intervals are bisected
//! in order of largest local error until the global estimate meets the tolerance.
//!
//! Tails of the form `∫_start^∞ q(x) w(x) dx`, with `q` periodic and `w` smooth
//! and decaying like a power of `x`, are summed period by period. Partial sums at
//! `16, 32, …, 1024` periods are extrapolated to infinity in the variable `1/X`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_SUBDIVISIONS: usize = 10_000;

// Kronrod abscissae on [0, 1]; odd indices are the Gauss nodes.
const XGK: [f64; 11] = [
    0.9956571630258081,
    0.9739065285171717,
    0.9301574913557082,
    0.8650633666889845,
    0.7808177265864169,
    0.6794095682990244,
    0.5627571346686047,
    0.4333953941292472,
    0.2943928627014602,
    0.1488743389816312,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874,
    0.032558162307964725,
    0.054755896574351995,
    0.07503967481091996,
    0.0931254545836976,
    0.10938715880229764,
    0.12349197626206584,
    0.13470921731147334,
    0.14277593857706009,
    0.14773910490133849,
    0.1494455540029169,
];

const WG: [f64; 5] = [
    0.06667134430868814,
    0.1494513491505806,
    0.21908636251598204,
    0.26926671930999635,
    0.29552422471475287,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

impl QuadratureResult {
    pub const ZERO: QuadratureResult = QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        subdivisions: 0,
    };

    pub fn exact(value: f64) -> Self {
        QuadratureResult {
            value,
            error_estimate: 0.0,
            subdivisions: 0,
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        QuadratureResult {
            value: c * self.value,
            error_estimate: c.abs() * self.error_estimate,
            subdivisions: self.subdivisions,
        }
    }
}

impl std::ops::Add for QuadratureResult {
    type Output = QuadratureResult;

    fn add(self, rhs: QuadratureResult) -> QuadratureResult {
        QuadratureResult {
            value: self.value + rhs.value,
            error_estimate: self.error_estimate + rhs.error_estimate,
            subdivisions: self.subdivisions + rhs.subdivisions,
        }
    }
}

impl std::ops::Sub for QuadratureResult {
    type Output = QuadratureResult;

    fn sub(self, rhs: QuadratureResult) -> QuadratureResult {
        self + rhs.scaled(-1.0)
    }
}

impl std::iter::Sum for QuadratureResult {
    fn sum<I: Iterator<Item = QuadratureResult>>(iter: I) -> QuadratureResult {
        iter.fold(QuadratureResult::ZERO, |a, b| a + b)
    }
}

/// Stopping rule: the integral is accepted once the summed error estimate is at
/// most `max(abs_tol, rel_tol·|value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: DEFAULT_TOL,
            rel_tol: 0.0,
            max_subdivisions: MAX_SUBDIVISIONS,
        }
    }
}

impl QuadOptions {
    pub fn absolute(tol: f64) -> Self {
        QuadOptions {
            abs_tol: tol,
            ..Default::default()
        }
    }

    pub fn relative(abs_tol: f64, rel_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }
}

/// One application of the 21-point rule.
#[derive(Debug, Clone, Copy)]
pub struct RuleValue {
    pub kronrod: f64,
    pub gauss: f64,
    pub error: f64,
}

pub fn gauss_kronrod21<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> RuleValue {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = WGK[10] * fc.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    resabs *= h;
    resasc *= h;
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    RuleValue {
        kronrod: resk * half,
        gauss: resg * half,
        error: err,
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn piece<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> Result<Piece> {
    let r = gauss_kronrod21(f, a, b);
    if !r.kronrod.is_finite() || !r.error.is_finite() {
        return Err(Error::InvalidInput(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    Ok(Piece {
        a,
        b,
        value: r.kronrod,
        error: r.error,
    })
}

/// `∫_a^b f` with the interval pre-split at every declared singular point in `(a, b)`.
pub fn integrate<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    singular: &[f64],
    tol: f64,
) -> Result<QuadratureResult> {
    integrate_with(f, a, b, singular, &QuadOptions::absolute(tol))
}

pub fn integrate_with<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    singular: &[f64],
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInput(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a > b {
        return Err(Error::InvalidInput(format!(
            "lower limit {a} exceeds upper limit {b}"
        )));
    }
    if !(opts.abs_tol > 0.0 || opts.rel_tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if a == b {
        return Ok(QuadratureResult::ZERO);
    }

    let mut cuts: Vec<f64> = singular
        .iter()
        .copied()
        .filter(|&x| x.is_finite() && x > a && x < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut nodes = Vec::with_capacity(cuts.len() + 2);
    nodes.push(a);
    nodes.extend(cuts);
    nodes.push(b);

    let mut heap = BinaryHeap::with_capacity(64);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in nodes.windows(2) {
        let p = piece(f, w[0], w[1])?;
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }

    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        let worst = *heap.peek().expect("heap holds at least one piece");
        let mid = 0.5 * (worst.a + worst.b);
        if heap.len() >= opts.max_subdivisions || !(mid > worst.a && mid < worst.b) {
            let (value, error_estimate) = totals(&heap);
            return Err(Error::NotConverged {
                value,
                error_estimate,
                subdivisions: heap.len(),
            });
        }
        heap.pop();
        let left = piece(f, worst.a, mid)?;
        let right = piece(f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err = (total_err + left.error + right.error - worst.error).max(0.0);
        heap.push(left);
        heap.push(right);
    }

    let (value, error_estimate) = totals(&heap);
    Ok(QuadratureResult {
        value,
        error_estimate,
        subdivisions: heap.len(),
    })
}

fn totals(heap: &BinaryHeap<Piece>) -> (f64, f64) {
    let mut pieces: Vec<&Piece> = heap.iter().collect();
    pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
    pieces
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

/// Integral over one period `[a, a + period]` split at the given offsets.
fn one_period<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    period: f64,
    offsets: &[f64],
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    let cuts: Vec<f64> = offsets.iter().map(|o| a + o).collect();
    // A period stuck at its roundoff floor is kept; its estimate still enters the
    // total, which is what gets tested against the caller's tolerance.
    match integrate_with(f, a, a + period, &cuts, opts) {
        Err(Error::NotConverged {
            value,
            error_estimate,
            subdivisions,
        }) => Ok(QuadratureResult {
            value,
            error_estimate,
            subdivisions,
        }),
        r => r,
    }
}

fn clean_offsets(period: f64, breaks: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = breaks
        .iter()
        .map(|b| b.rem_euclid(period))
        .filter(|&b| b > 0.0 && b < period)
        .collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Per-period integrals `∫ f` over `[start + kP, start + (k+1)P]` for `k < periods`.
pub fn period_integrals<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    start: f64,
    period: f64,
    breaks: &[f64],
    periods: usize,
    opts: &QuadOptions,
) -> Result<Vec<QuadratureResult>> {
    check_tail_args(start, period)?;
    let offsets = clean_offsets(period, breaks);
    (0..periods)
        .map(|k| {
            let a = start + k as f64 * period;
            let cuts: Vec<f64> = offsets.iter().map(|o| a + o).collect();
            integrate_with(f, a, a + period, &cuts, opts)
        })
        .collect()
}

/// Plain truncated sum over the first `periods` periods.
pub fn periodic_partial_sum<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    start: f64,
    period: f64,
    breaks: &[f64],
    periods: usize,
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    Ok(period_integrals(f, start, period, breaks, periods, opts)?
        .into_iter()
        .sum())
}

fn check_tail_args(start: f64, period: f64) -> Result<()> {
    if !start.is_finite() {
        return Err(Error::InvalidInput(format!("tail start must be finite, got {start}")));
    }
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidInput(format!("period must be positive, got {period}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailOptions {
    pub tol: f64,
    /// Offsets inside one period where the integrand has kinks or zeros of `|·|`.
    pub breaks: Vec<f64>,
    /// Periods in the first partial sum; later sums double this count.
    pub first_periods: usize,
    pub levels: usize,
}

impl Default for TailOptions {
    fn default() -> Self {
        TailOptions {
            tol: DEFAULT_TOL,
            breaks: Vec::new(),
            first_periods: 16,
            levels: 7,
        }
    }
}

impl TailOptions {
    pub fn with_breaks(tol: f64, breaks: &[f64]) -> Self {
        TailOptions {
            tol,
            breaks: breaks.to_vec(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailSum {
    pub value: f64,
    pub error_estimate: f64,
    /// Periods actually integrated.
    pub periods: usize,
    /// Plain partial sum over those periods.
    pub truncated_sum: f64,
    /// Right end of the integrated range.
    pub truncation_point: f64,
    pub subdivisions: usize,
}

impl TailSum {
    pub fn result(&self) -> QuadratureResult {
        QuadratureResult {
            value: self.value,
            error_estimate: self.error_estimate,
            subdivisions: self.subdivisions,
        }
    }
}

/// `∫_start^∞ f` for a periodic-times-decaying integrand.
pub fn integrate_periodic_tail<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    start: f64,
    period: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    let opts = TailOptions {
        tol,
        ..Default::default()
    };
    integrate_periodic_tail_with(f, start, period, &opts).map(|t| t.result())
}

pub fn integrate_periodic_tail_with<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    start: f64,
    period: f64,
    opts: &TailOptions,
) -> Result<TailSum> {
    check_tail_args(start, period)?;
    if !(opts.tol > 0.0) || opts.first_periods < 2 || opts.levels < 3 {
        return Err(Error::InvalidInput("invalid tail options".into()));
    }
    let offsets = clean_offsets(period, &opts.breaks);
    let max_periods = opts.first_periods << (opts.levels - 1);
    let per_opts = QuadOptions {
        abs_tol: (opts.tol / (10.0 * max_periods as f64)).max(1e-300),
        rel_tol: 1e-12,
        max_subdivisions: 200,
    };

    // Periods are accumulated in adjacent pairs so that sign patterns spanning a
    // doubled period cancel before entering the partial sums.
    let mut partial = Vec::with_capacity(opts.levels);
    let mut points = Vec::with_capacity(opts.levels);
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut subdivisions = 0;
    let mut done = 0;
    for level in 0..opts.levels {
        let upto = opts.first_periods << level;
        while done < upto {
            let a = start + done as f64 * period;
            let first = one_period(f, a, period, &offsets, &per_opts)?;
            let second = one_period(f, a + period, period, &offsets, &per_opts)?;
            sum += first.value + second.value;
            err += first.error_estimate + second.error_estimate;
            subdivisions += first.subdivisions + second.subdivisions;
            done += 2;
        }
        partial.push(sum);
        points.push(1.0 / (start + upto as f64 * period));
    }

    let n = partial.len();
    let d_last = partial[n - 1] - partial[n - 2];
    let d_prev = partial[n - 2] - partial[n - 3];
    if d_last.abs() > opts.tol && d_last.abs() > 0.75 * d_prev.abs() {
        return Err(Error::Divergent { partial: sum });
    }

    let (value, prev) = neville_at_zero(&points, &partial);
    let error_estimate = (value - prev).abs() + err;
    let out = TailSum {
        value,
        error_estimate,
        periods: max_periods,
        truncated_sum: sum,
        truncation_point: start + max_periods as f64 * period,
        subdivisions,
    };
    if error_estimate > opts.tol {
        return Err(Error::NotConverged {
            value,
            error_estimate,
            subdivisions,
        });
    }
    Ok(out)
}

/// Polynomial extrapolation of `(h_i, y_i)` to `h = 0`.
///
/// Returns the value from all points and the value from all but the first point.
pub fn neville_at_zero(h: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(h.len(), y.len());
    assert!(h.len() >= 2);
    let n = y.len();
    let mut t = y.to_vec();
    let mut prev = y[n - 1];
    for j in 1..n {
        for i in 0..n - j {
            t[i] = (h[i + j] * t[i] - h[i] * t[i + 1]) / (h[i + j] - h[i]);
        }
        if j == n - 2 {
            prev = t[1];
        }
    }
    if n == 2 {
        prev = y[1];
    }
    (t[0], prev)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub difference: f64,
    pub allowance: f64,
}

/// Two computed integrals agree up to `tol` plus their own error estimates.
pub fn check_identity(lhs: &QuadratureResult, rhs: &QuadratureResult, tol: f64) -> Verdict {
    let difference = (lhs.value - rhs.value).abs();
    let allowance = tol + lhs.error_estimate + rhs.error_estimate;
    Verdict {
        pass: difference <= allowance,
        difference,
        allowance,
    }
}

/// Composite Simpson weights for `n` (odd) equally spaced nodes on `[a, b]`.
pub fn simpson_weights(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "Simpson's rule needs an odd number of nodes ≥ 3, got {n}"
        )));
    }
    let h = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let w = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect())
}
