//! Laplace transforms `G(s) = ∫₀^∞ f(x) e^{−sx} dx`.
//!
//! Eventually periodic piecewise-linear functions are transformed exactly: each
//! linear piece has an elementary antiderivative and the periodic tail sums as a
//! geometric series in `e^{−sP}`. The geometric-series form continues the
//! transform to the imaginary axis away from the zeros of `1 − e^{−sP}`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pwl::{bump, Extension, PiecewiseLinear};
use crate::quadrature::{integrate_with, QuadOptions};

/// Below this modulus the closed forms switch to their Taylor expansions.
pub const SERIES_RADIUS: f64 = 1e-3;

/// Values larger than this in a boundary probe are flagged as a blow-up.
pub const BLOW_UP: f64 = 1e12;

const SINGULAR_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn singular(s: Complex64, set: &str) -> Error {
    Error::Singular {
        re: s.re,
        im: s.im,
        set: set.to_string(),
    }
}

fn check_half_plane(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::InvalidInput(format!("s = {s} is not finite")));
    }
    if s.re < 0.0 {
        return Err(Error::InvalidInput(format!(
            "Re s = {} is negative; only Re s ≥ 0 is supported",
            s.re
        )));
    }
    Ok(())
}

// (1 − e^{−z})/z and (1 − e^{−z}(1 + z))/z², i.e. ∫₀¹ e^{−zu} du and ∫₀¹ u e^{−zu} du.
fn phi1_phi2(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() < 0.5 {
        let mut p1 = Complex64::new(0.0, 0.0);
        let mut p2 = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0); // (−z)^k / k!
        for k in 0..24 {
            let kf = k as f64;
            p1 += term / (kf + 1.0);
            p2 += term / (kf + 2.0);
            term *= -z / (kf + 1.0);
        }
        (p1, p2)
    } else {
        let e = (-z).exp();
        let p1 = (1.0 - e) / z;
        let p2 = (1.0 - e * (1.0 + z)) / (z * z);
        (p1, p2)
    }
}

/// `∫_a^b g(x) e^{−sx} dx` for `g` linear with `g(a) = va`, `g(b) = vb`.
pub fn segment_transform(a: f64, b: f64, va: f64, vb: f64, s: Complex64) -> Complex64 {
    let h = b - a;
    if h <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let (p1, p2) = phi1_phi2(s * h);
    (-s * a).exp() * (va * h * p1 + (vb - va) * h * p2)
}

/// Exact transform of an eventually periodic piecewise-linear function.
pub fn laplace_pwl_exact(f: &PiecewiseLinear, s: Complex64) -> Result<Complex64> {
    check_half_plane(s)?;
    let head_end = f.x_last().max(0.0);
    let mut total: Complex64 = f
        .segments(0.0, head_end)
        .iter()
        .map(|g| segment_transform(g.x0, g.x1, g.v0, g.v1, s))
        .sum();
    match f.right_extension() {
        Extension::Constant => {
            let v = f.eval(head_end);
            if v != 0.0 {
                if s.norm() < SINGULAR_TOL {
                    return Err(singular(s, "{0}"));
                }
                total += v * (-s * head_end).exp() / s;
            }
        }
        Extension::Periodic(p) => {
            let denom = 1.0 - (-s * p).exp();
            if denom.norm() < SINGULAR_TOL {
                return Err(singular(s, &format!("{{2πik/{p}: k ∈ ℤ}}")));
            }
            let window: Complex64 = f
                .segments(head_end, head_end + p)
                .iter()
                .map(|g| segment_transform(g.x0, g.x1, g.v0, g.v1, s))
                .sum();
            total += window / denom;
        }
    }
    Ok(total)
}

fn near_lattice(s: Complex64, step: f64, offset: f64, skip_origin: bool) -> bool {
    if s.re.abs() > SINGULAR_TOL {
        return false;
    }
    let k = ((s.im - offset) / step).round();
    if skip_origin && k == 0.0 && offset == 0.0 {
        return false;
    }
    (s.im - offset - k * step).abs() < SINGULAR_TOL
}

/// `(1 − e^{−πs/2})² / (s²(1 + e^{−πs}))`, the transform of the two-sided extremal example.
pub fn closed_form_two_sided(s: Complex64) -> Result<Complex64> {
    check_half_plane(s)?;
    if near_lattice(s, 2.0, 1.0, false) {
        return Err(singular(s, "{i(2k+1): k ∈ ℤ}"));
    }
    let a = s * (PI / 2.0);
    // (1 − e^{−a})/s = (π/2)·(1 − e^{−a})/a.
    let q = if a.norm() < SERIES_RADIUS {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 0..8 {
            sum += term / (k as f64 + 1.0);
            term *= -a / (k as f64 + 1.0);
        }
        sum
    } else {
        (1.0 - (-a).exp()) / a
    };
    let num = q * q * (PI * PI / 4.0);
    Ok(num / (1.0 + (-s * PI).exp()))
}

// 1/sinh s − 1/s, regular at the origin.
fn sinh_difference(s: Complex64) -> Complex64 {
    if s.norm() < SERIES_RADIUS {
        // s/sinh s = Σ c_k s^{2k}
        const C: [f64; 8] = [
            1.0,
            -1.0 / 6.0,
            7.0 / 360.0,
            -31.0 / 15120.0,
            127.0 / 604800.0,
            -73.0 / 3421440.0,
            1414477.0 / 653837184000.0,
            -8191.0 / 37362124800.0,
        ];
        let s2 = s * s;
        let mut acc = Complex64::new(0.0, 0.0);
        for &ck in C[1..].iter().rev() {
            acc = acc * s2 + ck;
        }
        acc * s
    } else {
        1.0 / s.sinh() - 1.0 / s
    }
}

/// `−1/s² + 2e^{−s}/(s(1 − e^{−2s}))`, the transform of the one-sided extremal example.
pub fn closed_form_one_sided(s: Complex64) -> Result<Complex64> {
    check_half_plane(s)?;
    if near_lattice(s, PI, 0.0, true) {
        return Err(singular(s, "{iπk: k ∈ ℤ, k ≠ 0}"));
    }
    if s.norm() < SERIES_RADIUS {
        let s2 = s * s;
        const C: [f64; 7] = [
            -1.0 / 6.0,
            7.0 / 360.0,
            -31.0 / 15120.0,
            127.0 / 604800.0,
            -73.0 / 3421440.0,
            1414477.0 / 653837184000.0,
            -8191.0 / 37362124800.0,
        ];
        let mut acc = Complex64::new(0.0, 0.0);
        for &ck in C.iter().rev() {
            acc = acc * s2 + ck;
        }
        return Ok(acc);
    }
    Ok(sinh_difference(s) / s)
}

/// `ψ̂(z) = ∫ ψ(x) e^{−zx} dx` for the unit bump on `(1, 3)`.
pub fn bump_transform(z: Complex64) -> Result<Complex64> {
    let opts = QuadOptions::relative(1e-15, 1e-13);
    let re = integrate_with(&|x: f64| bump(x) * ((-z * x).exp()).re, 1.0, 3.0, &[2.0], &opts)?;
    let im = integrate_with(&|x: f64| bump(x) * ((-z * x).exp()).im, 1.0, 3.0, &[2.0], &opts)?;
    Ok(c(re.value, im.value))
}

/// `ψ̂(s/n)·(1/sinh s − 1/s)`, the transform of the mollified sequence `ρ_n`.
pub fn mollified_transform(n: u32, s: Complex64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    check_half_plane(s)?;
    if near_lattice(s, PI, 0.0, true) {
        return Err(singular(s, "{iπk: k ∈ ℤ, k ≠ 0}"));
    }
    let factor = sinh_difference(s);
    if factor == Complex64::new(0.0, 0.0) {
        return Ok(factor);
    }
    Ok(bump_transform(s / n as f64)? * factor)
}

/// `L{ρ_n; it}` for `|t| < π`.
pub fn closed_form_mollified(n: u32, t: f64) -> Result<Complex64> {
    if !(t.abs() < PI) {
        return Err(Error::InvalidInput(format!("|t| = {} must be below π", t.abs())));
    }
    mollified_transform(n, c(0.0, t))
}

type Evaluator = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

/// A transform together with what is known about its boundary behaviour.
#[derive(Clone)]
pub struct LaplaceClosedForm {
    pub name: String,
    evaluator: Evaluator,
    /// Boundary singularities with `|t| ≤ 10`.
    pub singular_boundary_points: Vec<f64>,
    /// Open interval of `t` on which `G(it)` is analytic.
    pub regular_segment: (f64, f64),
}

impl std::fmt::Debug for LaplaceClosedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LaplaceClosedForm")
            .field("name", &self.name)
            .field("singular_boundary_points", &self.singular_boundary_points)
            .field("regular_segment", &self.regular_segment)
            .finish()
    }
}

fn lattice(step: f64, offset: f64, skip_origin: bool) -> Vec<f64> {
    let mut v = Vec::new();
    let k = (10.0 / step).ceil() as i64 + 1;
    for j in -k..=k {
        let t = offset + j as f64 * step;
        if t.abs() <= 10.0 && !(skip_origin && t == 0.0) {
            v.push(t);
        }
    }
    v
}

impl LaplaceClosedForm {
    pub fn new<F>(name: &str, f: F, singular_boundary_points: Vec<f64>, regular_segment: (f64, f64)) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        LaplaceClosedForm {
            name: name.to_string(),
            evaluator: Arc::new(f),
            singular_boundary_points,
            regular_segment,
        }
    }

    pub fn two_sided() -> Self {
        Self::new("two-sided", closed_form_two_sided, lattice(2.0, 1.0, false), (-1.0, 1.0))
    }

    pub fn one_sided() -> Self {
        Self::new("one-sided", closed_form_one_sided, lattice(PI, 0.0, true), (-PI, PI))
    }

    pub fn mollified(n: u32) -> Self {
        Self::new(
            &format!("mollified n={n}"),
            move |s| mollified_transform(n, s),
            lattice(PI, 0.0, true),
            (-PI, PI),
        )
    }

    pub fn constant(value: Complex64) -> Self {
        Self::new("constant", move |_| Ok(value), Vec::new(), (f64::NEG_INFINITY, f64::INFINITY))
    }

    /// Exact transform of `f`; the regular segment is the one around 0 bounded by
    /// the nearest zeros of `1 − e^{−sP}` (all of them are reported as candidates).
    pub fn from_pwl(name: &str, f: PiecewiseLinear) -> Self {
        let (points, seg) = match f.right_period() {
            Some(p) => {
                let step = 2.0 * PI / p;
                (lattice(step, 0.0, false), (-step, step))
            }
            None => (vec![0.0], (0.0, f64::INFINITY)),
        };
        Self::new(name, move |s| laplace_pwl_exact(&f, s), points, seg)
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        (self.evaluator)(s)
    }

    pub fn eval_boundary(&self, t: f64) -> Result<Complex64> {
        self.eval(c(0.0, t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeRow {
    pub t: f64,
    /// `None` when the evaluation was rejected as singular.
    pub value: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub name: String,
    pub rows: Vec<ProbeRow>,
    pub max_abs: f64,
    pub blow_up: bool,
    /// Grid points outside the declared regular segment.
    pub outside_segment: usize,
}

/// Evaluates `F(it)` on a grid and flags non-finite or huge values.
pub fn boundary_probe(f: &LaplaceClosedForm, t_grid: &[f64]) -> ProbeReport {
    let (lo, hi) = f.regular_segment;
    let mut rows = Vec::with_capacity(t_grid.len());
    let mut max_abs = 0.0f64;
    let mut blow_up = false;
    let mut outside_segment = 0;
    for &t in t_grid {
        if !(t > lo && t < hi) {
            outside_segment += 1;
        }
        let value = f.eval_boundary(t).ok();
        match value {
            Some(v) if v.norm().is_finite() && v.norm() <= BLOW_UP => max_abs = max_abs.max(v.norm()),
            _ => blow_up = true,
        }
        rows.push(ProbeRow { t, value });
    }
    ProbeReport {
        name: f.name.clone(),
        rows,
        max_abs,
        blow_up,
        outside_segment,
    }
}

impl ProbeReport {
    /// Columns `t,re,im,abs`; singular rows have empty value fields.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidInput(e.to_string());
        w.write_record(["t", "re", "im", "abs"]).map_err(io)?;
        for r in &self.rows {
            let fields = match r.value {
                Some(v) => [r.t.to_string(), v.re.to_string(), v.im.to_string(), v.norm().to_string()],
                None => [r.t.to_string(), String::new(), String::new(), String::new()],
            };
            w.write_record(&fields).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

/// Uniform grid of `n` points strictly inside `(a, b)`.
pub fn interior_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| a + (b - a) * i as f64 / (n + 1) as f64).collect()
}

/// `max_{0 ≤ x ≤ X} |∫₀ˣ f(u) e^{−itu} du|` over the breakpoints of `f` and a
/// uniform subdivision with `per_unit` points per unit length.
pub fn running_fourier_sup(f: &PiecewiseLinear, t: f64, x_max: f64, per_unit: usize) -> f64 {
    let s = c(0.0, t);
    let steps = ((x_max * per_unit as f64).ceil() as usize).max(1);
    let mut nodes: Vec<f64> = (0..=steps).map(|i| x_max * i as f64 / steps as f64).collect();
    nodes.extend(f.breakpoints_in(0.0, x_max));
    nodes.sort_by(f64::total_cmp);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut best = 0.0f64;
    for w in nodes.windows(2) {
        for g in f.segments(w[0], w[1]) {
            acc += segment_transform(g.x0, g.x1, g.v0, g.v1, s);
        }
        best = best.max(acc.norm());
    }
    best
}
