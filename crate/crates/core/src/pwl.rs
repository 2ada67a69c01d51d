//! Eventually periodic piecewise-linear functions.
//!
//! A function is a finite list of knots `(x_i, v_i)` with non-decreasing `x_i`,
//! linear between consecutive knots, extended to the left of the first knot and
//! to the right of the last one either by holding the end value or periodically.
//! A repeated abscissa encodes a jump; evaluation is right-continuous and
//! [`PiecewiseLinear::eval_left`] gives left limits.
//!
//! Everything a proof needs about such a function (integrals, tail extrema,
//! moduli of oscillation, Laplace transforms) is computed from the knots alone.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::quadrature::{integrate_with, QuadOptions};

/// How a function continues beyond its outermost knot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Extension {
    /// Holds the value of the outermost knot.
    Constant,
    /// Repeats the last (or first) `period` of the knot range.
    Periodic(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// A linear piece `[x0, x1]` with end values taken as one-sided limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub x0: f64,
    pub x1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Segment {
    pub fn slope(&self) -> f64 {
        (self.v1 - self.v0) / (self.x1 - self.x0)
    }

    pub fn integral(&self) -> f64 {
        0.5 * (self.v0 + self.v1) * (self.x1 - self.x0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    vs: Vec<f64>,
    left: Extension,
    right: Extension,
}

const CLOSURE_TOL: f64 = 1e-12;

impl PiecewiseLinear {
    pub fn new(knots: &[(f64, f64)], left: Extension, right: Extension) -> Result<Self> {
        let f = PiecewiseLinear {
            xs: knots.iter().map(|k| k.0).collect(),
            vs: knots.iter().map(|k| k.1).collect(),
            left,
            right,
        };
        f.validate()?;
        Ok(f)
    }

    /// `x ↦ c` everywhere.
    pub fn constant(c: f64) -> Result<Self> {
        Self::new(&[(0.0, c)], Extension::Constant, Extension::Constant)
    }

    /// Checks ordering, finiteness and periodic closure.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.xs.is_empty() || self.xs.len() != self.vs.len() {
            return bad("at least one knot is required".into());
        }
        if self.xs.iter().chain(&self.vs).any(|v| !v.is_finite()) {
            return bad("knots must be finite".into());
        }
        for w in self.xs.windows(2) {
            if w[1] < w[0] {
                return bad(format!("breakpoints out of order at {}", w[1]));
            }
        }
        for w in self.xs.windows(3) {
            if w[0] == w[2] {
                return bad(format!("more than two knots share the abscissa {}", w[0]));
            }
        }
        let span = self.x_last() - self.x_first();
        let scale = 1.0 + self.vs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if let Extension::Periodic(p) = self.right {
            if !(p.is_finite() && p > 0.0) || p > span * (1.0 + 1e-15) {
                return bad(format!("right period {p} must be positive and fit in the knot range"));
            }
            let a = self.prefix_value(self.x_last() - p, Side::Right);
            let b = self.vs[self.vs.len() - 1];
            let b_left = self.prefix_value(self.x_last(), Side::Left);
            if (a - b).abs() > CLOSURE_TOL * scale || (a - b_left).abs() > CLOSURE_TOL * scale {
                return bad(format!("right periodic tail does not close: {a} vs {b}"));
            }
        }
        if let Extension::Periodic(p) = self.left {
            if !(p.is_finite() && p > 0.0) || p > span * (1.0 + 1e-15) {
                return bad(format!("left period {p} must be positive and fit in the knot range"));
            }
            let a = self.prefix_value(self.x_first() + p, Side::Left);
            let b = self.vs[0];
            let b_right = self.prefix_value(self.x_first(), Side::Right);
            if (a - b).abs() > CLOSURE_TOL * scale || (a - b_right).abs() > CLOSURE_TOL * scale {
                return bad(format!("left periodic tail does not close: {a} vs {b}"));
            }
        }
        Ok(())
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.vs.iter().copied())
    }

    pub fn left_extension(&self) -> Extension {
        self.left
    }

    pub fn right_extension(&self) -> Extension {
        self.right
    }

    pub fn x_first(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_last(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn right_period(&self) -> Option<f64> {
        match self.right {
            Extension::Periodic(p) => Some(p),
            Extension::Constant => None,
        }
    }

    pub fn left_period(&self) -> Option<f64> {
        match self.left {
            Extension::Periodic(p) => Some(p),
            Extension::Constant => None,
        }
    }

    /// Value of the left constant extension, if constant.
    pub fn left_constant(&self) -> Option<f64> {
        match self.left {
            Extension::Constant => Some(self.vs[0]),
            Extension::Periodic(_) => None,
        }
    }

    pub fn right_constant(&self) -> Option<f64> {
        match self.right {
            Extension::Constant => Some(self.vs[self.vs.len() - 1]),
            Extension::Periodic(_) => None,
        }
    }

    // Lookup inside [x_first, x_last].
    fn prefix_value(&self, y: f64, side: Side) -> f64 {
        let n = self.xs.len();
        match side {
            Side::Right => {
                let i = self.xs.partition_point(|&a| a <= y);
                if i == 0 {
                    return self.vs[0];
                }
                let i = i - 1;
                if i + 1 >= n {
                    return self.vs[n - 1];
                }
                let (x0, x1) = (self.xs[i], self.xs[i + 1]);
                lerp(x0, self.vs[i], x1, self.vs[i + 1], y)
            }
            Side::Left => {
                let i = self.xs.partition_point(|&a| a < y);
                if i >= n {
                    return self.vs[n - 1];
                }
                if i == 0 || self.xs[i] == y {
                    return self.vs[i];
                }
                lerp(self.xs[i - 1], self.vs[i - 1], self.xs[i], self.vs[i], y)
            }
        }
    }

    fn value(&self, x: f64, side: Side) -> f64 {
        let (a, b) = (self.x_first(), self.x_last());
        let beyond_right = match side {
            Side::Right => x >= b,
            Side::Left => x > b,
        };
        let beyond_left = match side {
            Side::Right => x < a,
            Side::Left => x <= a,
        };
        if beyond_right {
            return match self.right {
                Extension::Constant => self.vs[self.vs.len() - 1],
                Extension::Periodic(p) => {
                    let r = (x - b).rem_euclid(p);
                    let y = match side {
                        Side::Right => (b - p + r).min(b - p + p * (1.0 - f64::EPSILON)),
                        Side::Left if r == 0.0 => b,
                        Side::Left => b - p + r,
                    };
                    self.prefix_value(y, side)
                }
            };
        }
        if beyond_left {
            return match self.left {
                Extension::Constant => self.vs[0],
                Extension::Periodic(p) => {
                    let r = (x - a).rem_euclid(p);
                    let y = match side {
                        Side::Right => (a + r).min(a + p * (1.0 - f64::EPSILON)),
                        Side::Left if r == 0.0 => a + p,
                        Side::Left => a + r,
                    };
                    self.prefix_value(y, side)
                }
            };
        }
        self.prefix_value(x, side)
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.value(x, Side::Right)
    }

    /// `lim_{y↑x} f(y)`.
    pub fn eval_left(&self, x: f64) -> f64 {
        self.value(x, Side::Left)
    }

    /// Positions of knots (and their periodic images) in the open interval `(a, b)`.
    pub fn breakpoints_in(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        if !(b > a) {
            return out;
        }
        let (x0, x1) = (self.x_first(), self.x_last());
        out.extend(self.xs.iter().copied().filter(|&x| x > a && x < b));
        if let Extension::Periodic(p) = self.right {
            if b > x1 {
                let window: Vec<f64> = self
                    .xs
                    .iter()
                    .copied()
                    .filter(|&x| x >= x1 - p && x < x1)
                    .chain(std::iter::once(x1 - p))
                    .collect();
                let k_lo = (((a - x1) / p).floor() as i64).max(1);
                let k_hi = ((b - x1 + p) / p).ceil() as i64 + 1;
                for k in k_lo..=k_hi {
                    for &w in &window {
                        let y = w + k as f64 * p;
                        if y > a && y < b && y >= x1 {
                            out.push(y);
                        }
                    }
                }
            }
        }
        if let Extension::Periodic(p) = self.left {
            if a < x0 {
                let window: Vec<f64> = self
                    .xs
                    .iter()
                    .copied()
                    .filter(|&x| x > x0 && x <= x0 + p)
                    .chain(std::iter::once(x0 + p))
                    .collect();
                let k_lo = (((x0 - b) / p).floor() as i64).max(1);
                let k_hi = ((x0 - a + p) / p).ceil() as i64 + 1;
                for k in k_lo..=k_hi {
                    for &w in &window {
                        let y = w - k as f64 * p;
                        if y > a && y < b && y <= x0 {
                            out.push(y);
                        }
                    }
                }
            }
        }
        out.sort_by(f64::total_cmp);
        let tol = 1e-13 * (1.0 + a.abs().max(b.abs()));
        out.dedup_by(|p, q| (*p - *q).abs() <= tol);
        out
    }

    /// Linear pieces covering `[a, b]`.
    ///
    /// End values are reconstructed from two interior samples of each piece, so a
    /// knot image that is off by a rounding error cannot pick up the wrong side of
    /// a jump.
    pub fn segments(&self, a: f64, b: f64) -> Vec<Segment> {
        if !(b > a) {
            return Vec::new();
        }
        let mut nodes = vec![a];
        nodes.extend(self.breakpoints_in(a, b));
        nodes.push(b);
        nodes
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| {
                let (p, q) = (w[0], w[1]);
                let h = q - p;
                let m1 = self.eval(p + 0.25 * h);
                let m2 = self.eval(p + 0.75 * h);
                Segment {
                    x0: p,
                    x1: q,
                    v0: 1.5 * m1 - 0.5 * m2,
                    v1: 1.5 * m2 - 0.5 * m1,
                }
            })
            .collect()
    }

    /// Exact `∫_a^b f`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b < a {
            return -self.integral(b, a);
        }
        self.segments(a, b).iter().map(Segment::integral).sum()
    }

    /// Largest absolute slope over all pieces.
    pub fn max_slope(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.xs.len().saturating_sub(1) {
            let dx = self.xs[i + 1] - self.xs[i];
            if dx > 0.0 {
                m = m.max(((self.vs[i + 1] - self.vs[i]) / dx).abs());
            }
        }
        m
    }

    /// Locations and sizes `f(x+) − f(x−)` of all jumps in the knot range.
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        (0..self.xs.len().saturating_sub(1))
            .filter(|&i| self.xs[i + 1] == self.xs[i] && self.vs[i + 1] != self.vs[i])
            .map(|i| (self.xs[i], self.vs[i + 1] - self.vs[i]))
            .collect()
    }

    pub fn is_continuous(&self) -> bool {
        self.jumps().is_empty()
    }

    /// Lipschitz constant, or `None` when the function jumps.
    pub fn lipschitz_constant(&self) -> Option<f64> {
        self.is_continuous().then(|| self.max_slope())
    }

    fn right_window_values(&self) -> Vec<f64> {
        match self.right {
            Extension::Constant => vec![self.vs[self.vs.len() - 1]],
            Extension::Periodic(p) => {
                let start = self.x_last() - p;
                let mut v: Vec<f64> = self
                    .knots()
                    .filter(|&(x, _)| x >= start)
                    .map(|(_, v)| v)
                    .collect();
                v.push(self.prefix_value(start, Side::Right));
                v
            }
        }
    }

    /// `limsup_{x→∞} f(x)`, an exact maximum over one tail period.
    pub fn tail_sup(&self) -> f64 {
        self.right_window_values()
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn tail_inf(&self) -> f64 {
        self.right_window_values()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// `limsup_{x→∞} |f(x)|`.
    pub fn tail_sup_abs(&self) -> f64 {
        self.tail_sup().abs().max(self.tail_inf().abs())
    }

    /// Extremes of `f(x + h) − f(x)` over the tail, `0 ≤ h ≤ δ`.
    fn tail_differences(&self, delta: f64) -> (f64, f64) {
        let p = match self.right {
            Extension::Constant => return (0.0, 0.0),
            Extension::Periodic(p) => p,
        };
        if delta >= p {
            let r = self.tail_sup() - self.tail_inf();
            return (r, -r);
        }
        let t = self.x_last();
        let mut xk = self.breakpoints_in(t - 1.0, t + p);
        xk.retain(|&x| x >= t);
        if xk.first().is_none_or(|&x| x > t) {
            xk.insert(0, t);
        }
        let mut ys = self.breakpoints_in(t - 1.0, t + p + delta + 1.0);
        ys.retain(|&y| y >= t && y <= t + p + delta);

        let mut candidates: Vec<(f64, f64)> = Vec::new();
        for &x in &xk {
            candidates.push((x, delta));
            for &y in &ys {
                let h = y - x;
                if (0.0..=delta).contains(&h) {
                    candidates.push((x, h));
                }
            }
        }
        for &y in &ys {
            let x = y - delta;
            if x >= t && x < t + p {
                candidates.push((x, delta));
            }
        }

        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for (x, h) in candidates {
            let fx = [self.eval_left(x), self.eval(x)];
            let fy = [self.eval_left(x + h), self.eval(x + h)];
            for (i, a) in fx.into_iter().enumerate() {
                for (j, b) in fy.into_iter().enumerate() {
                    // With h = 0 the point x + h cannot sit left of x.
                    if h == 0.0 && i == 1 && j == 0 {
                        continue;
                    }
                    let d = b - a;
                    hi = hi.max(d);
                    lo = lo.min(d);
                }
            }
        }
        (hi.max(0.0), lo.min(0.0))
    }

    /// `Ψ(δ) = limsup_{x→∞} sup_{0≤h≤δ} |f(x+h) − f(x)|`.
    pub fn oscillation_modulus(&self, delta: f64) -> Result<f64> {
        ensure_positive("δ", delta)?;
        let (hi, lo) = self.tail_differences(delta);
        Ok(hi.max(-lo))
    }

    /// `Ψ₋(δ) = −liminf_{x→∞} inf_{0≤h≤δ} (f(x+h) − f(x))`.
    pub fn decrease_modulus(&self, delta: f64) -> Result<f64> {
        ensure_positive("δ", delta)?;
        let (_, lo) = self.tail_differences(delta);
        Ok(-lo)
    }

    /// `x ↦ (λ/M) f(x/λ)`.
    pub fn rescale(&self, m: f64, lambda: f64) -> Result<Self> {
        ensure_positive("M", m)?;
        ensure_positive("λ", lambda)?;
        let c = lambda / m;
        let stretch = |e: Extension| match e {
            Extension::Constant => Extension::Constant,
            Extension::Periodic(p) => Extension::Periodic(lambda * p),
        };
        let knots: Vec<(f64, f64)> = self.knots().map(|(x, v)| (lambda * x, c * v)).collect();
        Self::new(&knots, stretch(self.left), stretch(self.right))
    }

    /// Plain-text form: a `prefix` line, a `tail` line and, unless the function is
    /// zero to the left, a `left` line.
    pub fn to_text(&self) -> String {
        let mut s = String::from("prefix");
        for (x, v) in self.knots() {
            let _ = write!(s, " {x:?} {v:?}");
        }
        s.push('\n');
        match self.right {
            Extension::Constant => {
                let _ = writeln!(s, "tail constant {:?}", self.vs[self.vs.len() - 1]);
            }
            Extension::Periodic(p) => {
                let _ = writeln!(s, "tail periodic {p:?}");
            }
        }
        match self.left {
            Extension::Constant if self.vs[0] == 0.0 => {}
            Extension::Constant => {
                let _ = writeln!(s, "left constant {:?}", self.vs[0]);
            }
            Extension::Periodic(p) => {
                let _ = writeln!(s, "left periodic {p:?}");
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut knots: Option<Vec<(f64, f64)>> = None;
        let mut right: Option<(Extension, Option<f64>)> = None;
        let mut left: Option<(Extension, Option<f64>)> = None;
        let perr = |line: usize, message: String| Error::Parse { line, message };
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or_default();
            let nums: std::result::Result<Vec<f64>, _> = match head {
                "prefix" => words.map(str::parse::<f64>).collect(),
                "tail" | "left" => {
                    let kind = words.next().unwrap_or_default().to_string();
                    let rest: std::result::Result<Vec<f64>, _> =
                        words.map(str::parse::<f64>).collect();
                    let rest = rest.map_err(|e| perr(line_no, e.to_string()))?;
                    if rest.len() != 1 {
                        return Err(perr(line_no, format!("`{head} {kind}` takes one number")));
                    }
                    let ext = match kind.as_str() {
                        "constant" => (Extension::Constant, Some(rest[0])),
                        "periodic" => (Extension::Periodic(rest[0]), None),
                        other => return Err(perr(line_no, format!("unknown extension `{other}`"))),
                    };
                    let slot = if head == "tail" { &mut right } else { &mut left };
                    if slot.replace(ext).is_some() {
                        return Err(perr(line_no, format!("duplicate `{head}` line")));
                    }
                    continue;
                }
                other => return Err(perr(line_no, format!("unknown directive `{other}`"))),
            };
            let nums = nums.map_err(|e| perr(line_no, e.to_string()))?;
            if nums.is_empty() || nums.len() % 2 != 0 {
                return Err(perr(line_no, "prefix needs x v pairs".into()));
            }
            if knots.replace(nums.chunks(2).map(|c| (c[0], c[1])).collect()).is_some() {
                return Err(perr(line_no, "duplicate `prefix` line".into()));
            }
        }
        let knots = knots.ok_or_else(|| perr(0, "missing `prefix` line".into()))?;
        let (right, right_c) = right.ok_or_else(|| perr(0, "missing `tail` line".into()))?;
        let (left, left_c) = left.unwrap_or((Extension::Constant, Some(0.0)));
        let f = Self::new(&knots, left, right)?;
        if let Some(c) = right_c {
            if c != f.vs[f.vs.len() - 1] {
                return Err(perr(0, format!("tail constant {c} differs from the last value")));
            }
        }
        if let Some(c) = left_c {
            if c != f.vs[0] {
                return Err(perr(0, format!("left constant {c} differs from the first value")));
            }
        }
        Ok(f)
    }
}

fn lerp(x0: f64, v0: f64, x1: f64, v1: f64, y: f64) -> f64 {
    if x1 == x0 {
        return v1;
    }
    let t = (y - x0) / (x1 - x0);
    v0 + t * (v1 - v0)
}

/// Zero up to 0, slope 1 up to π/2, then the triangle wave of period 2π and
/// amplitude π/2.
pub fn build_two_sided_extremal() -> PiecewiseLinear {
    PiecewiseLinear::new(
        &[
            (0.0, 0.0),
            (FRAC_PI_2, FRAC_PI_2),
            (1.5 * PI, -FRAC_PI_2),
            (2.5 * PI, FRAC_PI_2),
        ],
        Extension::Constant,
        Extension::Periodic(2.0 * PI),
    )
    .expect("static knot table")
}

/// The even triangle wave with `α(0) = π/2` and period 2π.
pub fn build_alpha() -> PiecewiseLinear {
    PiecewiseLinear::new(
        &[(-PI, -FRAC_PI_2), (0.0, FRAC_PI_2), (PI, -FRAC_PI_2)],
        Extension::Periodic(2.0 * PI),
        Extension::Periodic(2.0 * PI),
    )
    .expect("static knot table")
}

/// Zero up to 0, `−x` on `[0, 1]`, `−x + N` on `[N − 1, N + 1]` for even `N`.
///
/// The function jumps by +2 at every odd integer.
pub fn build_one_sided_extremal() -> PiecewiseLinear {
    PiecewiseLinear::new(
        &[
            (0.0, 0.0),
            (1.0, -1.0),
            (1.0, 1.0),
            (3.0, -1.0),
            (3.0, 1.0),
            (4.0, 0.0),
        ],
        Extension::Constant,
        Extension::Periodic(2.0),
    )
    .expect("static knot table")
}

/// The even step-modified triangle wave `γ` built from two levels `β₀`, `β₁`
/// with `β₂ = −5β₁/2`.
pub fn build_gamma(beta0: f64, beta1: f64) -> Result<PiecewiseLinear> {
    ensure_positive("β₁", beta1)?;
    if !beta0.is_finite() {
        return Err(Error::InvalidInput("β₀ must be finite".into()));
    }
    let b2 = -2.5 * beta1;
    let half: Vec<(f64, f64)> = vec![
        (FRAC_PI_2, beta0),
        (FRAC_PI_2, 0.5 * beta1),
        (PI, 0.5 * beta1 - FRAC_PI_2),
        (PI, b2 - FRAC_PI_2),
        (1.5 * PI, b2),
        (1.5 * PI, beta1),
        (2.0 * PI, FRAC_PI_2 + beta1),
        (2.5 * PI, beta1),
        (2.5 * PI, -beta1),
        (3.0 * PI, -FRAC_PI_2 - beta1),
        (3.5 * PI, -beta1),
        (3.5 * PI, beta1),
        (4.0 * PI, FRAC_PI_2 + beta1),
    ];
    let mut knots: Vec<(f64, f64)> = half.iter().rev().map(|&(x, v)| (-x, v)).collect();
    knots.push((0.0, beta0 + FRAC_PI_2));
    knots.extend(half);
    PiecewiseLinear::new(
        &knots,
        Extension::Periodic(2.0 * PI),
        Extension::Periodic(2.0 * PI),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Upper,
    Lower,
}

/// Slopes ±1 on `[−π/2, π/2]` meeting at `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZigZag {
    pub peak_location: f64,
    pub peak_value: f64,
    pub orientation: Orientation,
}

impl ZigZag {
    pub fn new(peak_location: f64, peak_value: f64, orientation: Orientation) -> Result<Self> {
        if !(peak_location.abs() <= FRAC_PI_2) || !peak_value.is_finite() {
            return Err(Error::InvalidInput(format!(
                "peak location {peak_location} must lie in [−π/2, π/2]"
            )));
        }
        Ok(ZigZag {
            peak_location,
            peak_value,
            orientation,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let d = (x - self.peak_location).abs();
        match self.orientation {
            Orientation::Upper => self.peak_value - d,
            Orientation::Lower => self.peak_value + d,
        }
    }

    pub fn left_value(&self) -> f64 {
        self.eval(-FRAC_PI_2)
    }

    pub fn to_pwl(&self) -> PiecewiseLinear {
        let mut knots = vec![(-FRAC_PI_2, self.left_value())];
        let c = self.peak_location;
        if c > -FRAC_PI_2 && c < FRAC_PI_2 {
            knots.push((c, self.peak_value));
        }
        knots.push((FRAC_PI_2, self.eval(FRAC_PI_2)));
        PiecewiseLinear::new(&knots, Extension::Constant, Extension::Constant)
            .expect("zig-zag knots are ordered")
    }
}

/// Slope +1 on `[−π/2, 0]` from `z(−π/2)`, slope −1 on `(0, π/2]`, with the level
/// after the jump set by `β₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpFunction {
    pub left_start: f64,
    pub beta1: f64,
}

impl JumpFunction {
    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            self.left_start + (x + FRAC_PI_2)
        } else {
            2.0 * self.beta1 - self.left_start + FRAC_PI_2 - x
        }
    }

    /// `j(0+) − j(0−)`.
    pub fn jump(&self) -> f64 {
        2.0 * (self.beta1 - self.left_start)
    }

    pub fn to_pwl(&self) -> PiecewiseLinear {
        let z = self.left_start;
        PiecewiseLinear::new(
            &[
                (-FRAC_PI_2, z),
                (0.0, z + FRAC_PI_2),
                (0.0, 2.0 * self.beta1 - z + FRAC_PI_2),
                (FRAC_PI_2, 2.0 * self.beta1 - z),
            ],
            Extension::Constant,
            Extension::Constant,
        )
        .expect("jump function knots are ordered")
    }
}

/// The sliding average `τ_δ(x) = δ⁻¹ ∫_x^{x+δ} f`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowAverage {
    pub f: PiecewiseLinear,
    pub delta: f64,
}

pub fn window_average(f: &PiecewiseLinear, delta: f64) -> Result<WindowAverage> {
    ensure_positive("δ", delta)?;
    Ok(WindowAverage {
        f: f.clone(),
        delta,
    })
}

impl WindowAverage {
    pub fn eval(&self, x: f64) -> f64 {
        self.f.integral(x, x + self.delta) / self.delta
    }

    /// `τ_δ'(x) = (f(x + δ) − f(x))/δ` (right derivative).
    pub fn derivative(&self, x: f64) -> f64 {
        (self.f.eval(x + self.delta) - self.f.eval(x)) / self.delta
    }

    /// `Ψ(δ)/δ`, bounding the slope of `τ_δ` in the tail.
    pub fn tail_lipschitz_bound(&self) -> f64 {
        self.f
            .oscillation_modulus(self.delta)
            .map(|p| p / self.delta)
            .unwrap_or(f64::INFINITY)
    }
}

fn bump_raw(u: f64) -> f64 {
    let w = 1.0 - u * u;
    if w <= 0.0 {
        0.0
    } else {
        (-1.0 / w).exp()
    }
}

/// `∫₋₁¹ exp(−1/(1 − u²)) du`.
pub fn bump_normalisation() -> f64 {
    static Z: OnceLock<f64> = OnceLock::new();
    *Z.get_or_init(|| {
        integrate_with(&bump_raw, -1.0, 1.0, &[0.0], &QuadOptions::relative(1e-16, 1e-13))
            .expect("smooth bump integrates")
            .value
    })
}

/// The unit-mass bump `ψ` supported in `(1, 3)`.
pub fn bump(x: f64) -> f64 {
    bump_raw(x - 2.0) / bump_normalisation()
}

/// `∫_{−∞}^x ψ`.
pub fn bump_cdf(x: f64) -> f64 {
    if x <= 1.0 {
        return 0.0;
    }
    if x >= 3.0 {
        return 1.0;
    }
    let r = integrate_with(&bump, 1.0, x, &[], &QuadOptions::relative(1e-16, 1e-13))
        .expect("smooth bump integrates");
    r.value
}

/// `ψ_n(x) = n ψ(n x)`.
pub fn scaled_bump(n: u32, x: f64) -> f64 {
    let n = n as f64;
    n * bump(n * x)
}

/// Grid configuration for sampled mollified sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierGrid {
    pub x_max: f64,
    /// Grid points per bump width `2/n`.
    pub samples_per_bump: usize,
    pub max_points: usize,
}

impl Default for MollifierGrid {
    fn default() -> Self {
        MollifierGrid {
            x_max: 20.0,
            samples_per_bump: 64,
            max_points: 4_000_000,
        }
    }
}

/// `ρ_n = ψ_n ∗ dτ` for the one-sided example, sampled on a uniform grid of `[0, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MollifiedSequence {
    pub n: u32,
    pub dx: f64,
    pub values: Vec<f64>,
    primitive: Vec<f64>,
}

pub fn mollified_sequence(n: u32) -> Result<MollifiedSequence> {
    mollified_sequence_on(n, &MollifierGrid::default())
}

/// `ρ_n(x) = −∫_0^x ψ_n + 2 Σ_k ψ_n(x − 2k − 1)`: the slope −1 part smoothed, plus
/// the jumps of size 2 at the odd integers smoothed.
pub fn mollified_value(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    let mut v = -bump_cdf(nf * x);
    let lo = 1.0 / nf;
    let hi = 3.0 / nf;
    let k_max = ((x - 1.0 - lo) / 2.0).floor() as i64 + 1;
    for k in 0..=k_max.max(-1) {
        let y = x - 2.0 * k as f64 - 1.0;
        if y > lo && y < hi {
            v += 2.0 * scaled_bump(n, y);
        }
    }
    v
}

pub fn mollified_sequence_on(n: u32, grid: &MollifierGrid) -> Result<MollifiedSequence> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    ensure_positive("x_max", grid.x_max)?;
    if grid.samples_per_bump < 8 {
        return Err(Error::Resolution("at least 8 samples per bump are needed".into()));
    }
    let dx = 2.0 / (n as f64 * grid.samples_per_bump as f64);
    let steps = (grid.x_max / dx).ceil();
    if !(steps < grid.max_points as f64) {
        return Err(Error::Resolution(format!(
            "n = {n} needs {steps} grid points on [0, {}], more than the configured {}",
            grid.x_max, grid.max_points
        )));
    }
    let steps = steps as usize;
    let values: Vec<f64> = (0..=steps).map(|i| mollified_value(n, i as f64 * dx)).collect();
    let mut primitive = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    primitive.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * dx * (w[0] + w[1]);
        primitive.push(acc);
    }
    Ok(MollifiedSequence {
        n,
        dx,
        values,
        primitive,
    })
}

impl MollifiedSequence {
    pub fn x_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.dx
    }

    pub fn grid_min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Trapezoidal `∫_0^x ρ_n` from the samples.
    pub fn primitive(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let last = self.values.len() - 1;
        let pos = x / self.dx;
        let i = (pos.floor() as usize).min(last.saturating_sub(1));
        let t = (x - i as f64 * self.dx).clamp(0.0, self.dx);
        let v0 = self.values[i];
        let v1 = self.values[(i + 1).min(last)];
        let vx = v0 + (v1 - v0) * t / self.dx;
        self.primitive[i] + 0.5 * t * (v0 + vx)
    }

    /// `(ψ_n ∗ τ)(x) = ∫ ψ_n(u) τ(x − u) du`, by adaptive quadrature.
    pub fn smoothed_profile(&self, tau: &PiecewiseLinear, x: f64) -> Result<f64> {
        let nf = self.n as f64;
        let (lo, hi) = (1.0 / nf, 3.0 / nf);
        let cuts: Vec<f64> = tau.breakpoints_in(x - hi, x - lo).iter().map(|b| x - b).collect();
        let f = |u: f64| scaled_bump(self.n, u) * tau.eval(x - u);
        Ok(integrate_with(&f, lo, hi, &cuts, &QuadOptions::relative(1e-13, 1e-12))?.value)
    }
}

/// Total order helper for sorting sample points.
pub fn cmp_f64(a: &f64, b: &f64) -> Ordering {
    a.total_cmp(b)
}
