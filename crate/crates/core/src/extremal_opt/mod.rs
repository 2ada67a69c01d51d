//! Discretised versions of the extremal comparison arguments on the window
//! `[−π/2, π/2]`.
//!
//! The central object is the LP "minimise `∫ f(x) K(x + Nπ) dx` over 1-Lipschitz
//! `f` with `f(−π/2) = s` and `∫ f K ≤ I`" (the inequality reversed for odd `N`),
//! which is compared against the one-parameter family of zig-zag functions.

pub mod simplex;

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::kernels::{eval_kernel_derivative, sharp_kernel};
use crate::pwl::{Orientation, ZigZag};
use crate::quadrature::{integrate_with, simpson_weights, QuadOptions};

pub use simplex::{LinearProgram, LpStatus, RowKind, Sense, SimplexResult};

/// Step of the zig-zag peak scan.
pub const ZIGZAG_SCAN_STEP: f64 = PI / 2000.0;

fn opts() -> QuadOptions {
    QuadOptions::relative(1e-15, 1e-13)
}

fn shifted_kernel(shift: u32) -> impl Fn(f64) -> f64 {
    let d = shift as f64 * PI;
    move |x| sharp_kernel(x + d)
}

fn window_integral(f: &dyn Fn(f64) -> f64, breaks: &[f64]) -> f64 {
    integrate_with(f, -FRAC_PI_2, FRAC_PI_2, breaks, &opts())
        .expect("smooth integrand on the window")
        .value
}

struct WindowConstants {
    mass: f64,
    ramp: f64,
}

fn window_constants() -> &'static WindowConstants {
    static C: OnceLock<WindowConstants> = OnceLock::new();
    C.get_or_init(|| WindowConstants {
        mass: window_integral(&sharp_kernel, &[]),
        ramp: window_integral(&|x| (x + FRAC_PI_2) * sharp_kernel(x), &[]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub holds: bool,
    /// `∫(s − (x + π/2))K`.
    pub lower: f64,
    /// `∫(s + (x + π/2))K`.
    pub upper: f64,
}

/// Whether the budget `I` lies between the integrals of the two extreme
/// slope-±1 lines through `(−π/2, s)`.
pub fn check_condition(s: f64, budget: f64) -> ConditionVerdict {
    let c = window_constants();
    let lower = s * c.mass - c.ramp;
    let upper = s * c.mass + c.ramp;
    ConditionVerdict {
        holds: lower <= budget && budget <= upper,
        lower,
        upper,
    }
}

/// `∫_{−π/2}^{π/2} K`.
pub fn window_mass() -> f64 {
    window_constants().mass
}

/// Whether `∫ f K` is bounded above (`AtMost`, even `N`) or below (`AtLeast`, odd `N`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BudgetSense {
    AtMost,
    AtLeast,
}

impl BudgetSense {
    pub fn for_shift(shift: u32) -> Self {
        if shift.is_multiple_of(2) {
            BudgetSense::AtMost
        } else {
            BudgetSense::AtLeast
        }
    }
}

fn check_shift_and_grid(shift: u32, n: usize) -> Result<()> {
    if shift == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    if n < 51 || n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("grid size {n} must be odd and at least 51")));
    }
    Ok(())
}

/// The discretised Lipschitz problem on a uniform grid with Simpson weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzLp {
    pub shift: u32,
    pub grid: Vec<f64>,
    pub objective_weights: Vec<f64>,
    pub constraint_weights: Vec<f64>,
    pub lipschitz_step: f64,
    pub lipschitz_constant: f64,
    pub boundary_value: f64,
    pub budget: f64,
    pub sense: BudgetSense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub values: Vec<f64>,
    pub objective: f64,
    pub status: LpStatus,
    pub max_residual: f64,
    pub iterations: usize,
}

impl LipschitzLp {
    pub fn new(shift: u32, s: f64, budget: f64, n: usize) -> Result<Self> {
        check_shift_and_grid(shift, n)?;
        ensure_finite("s", s)?;
        ensure_finite("I", budget)?;
        let w = simpson_weights(-FRAC_PI_2, FRAC_PI_2, n)?;
        let h = PI / (n - 1) as f64;
        let grid: Vec<f64> = (0..n).map(|i| -FRAC_PI_2 + i as f64 * h).collect();
        let kn = shifted_kernel(shift);
        Ok(LipschitzLp {
            shift,
            objective_weights: grid.iter().zip(&w).map(|(&x, wi)| wi * kn(x)).collect(),
            constraint_weights: grid.iter().zip(&w).map(|(&x, wi)| wi * sharp_kernel(x)).collect(),
            grid,
            lipschitz_step: h,
            lipschitz_constant: 1.0,
            boundary_value: s,
            budget,
            sense: BudgetSense::for_shift(shift),
        })
    }

    pub fn with_lipschitz_constant(mut self, l: f64) -> Self {
        self.lipschitz_constant = l;
        self
    }

    pub fn objective_of(&self, f: &[f64]) -> f64 {
        self.objective_weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    pub fn constraint_of(&self, f: &[f64]) -> f64 {
        self.constraint_weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    /// Worst violation of the boundary value, the slope bound and the budget.
    pub fn max_violation(&self, f: &[f64]) -> f64 {
        let mut worst = (f[0] - self.boundary_value).abs();
        let step = self.lipschitz_constant * self.lipschitz_step;
        for w in f.windows(2) {
            worst = worst.max((w[1] - w[0]).abs() - step);
        }
        let c = self.constraint_of(f);
        let budget = match self.sense {
            BudgetSense::AtMost => c - self.budget,
            BudgetSense::AtLeast => self.budget - c,
        };
        worst.max(budget).max(0.0)
    }

    /// `f_i = s + Σ_{j<i} d_j` with `|d_j| ≤ L h`, leaving one budget row.
    pub fn to_program(&self) -> LinearProgram {
        let n = self.grid.len();
        let tail = |w: &[f64]| {
            let mut out = vec![0.0; n - 1];
            let mut acc = 0.0;
            for j in (0..n - 1).rev() {
                acc += w[j + 1];
                out[j] = acc;
            }
            out
        };
        let mut lp = LinearProgram::new(Sense::Minimize, tail(&self.objective_weights));
        let step = self.lipschitz_constant * self.lipschitz_step;
        lp.lower = vec![-step; n - 1];
        lp.upper = vec![step; n - 1];
        let base: f64 = self.constraint_weights.iter().sum::<f64>() * self.boundary_value;
        let kind = match self.sense {
            BudgetSense::AtMost => RowKind::Le,
            BudgetSense::AtLeast => RowKind::Ge,
        };
        lp.add_row(tail(&self.constraint_weights), kind, self.budget - base);
        lp
    }

    pub fn values_from_increments(&self, d: &[f64]) -> Vec<f64> {
        let mut f = Vec::with_capacity(d.len() + 1);
        let mut v = self.boundary_value;
        f.push(v);
        for &di in d {
            v += di;
            f.push(v);
        }
        f
    }

    pub fn solve(&self) -> LpSolution {
        let r = self.to_program().solve();
        let values = self.values_from_increments(&r.x);
        LpSolution {
            objective: self.objective_of(&values),
            max_residual: self.max_violation(&values),
            values,
            status: r.status,
            iterations: r.iterations,
        }
    }

    pub fn to_json(&self, solution: Option<&LpSolution>) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            instance: &'a LipschitzLp,
            solution: Option<&'a LpSolution>,
        }
        serde_json::to_string_pretty(&Dump {
            instance: self,
            solution,
        })
        .expect("plain data serialises")
    }
}

/// LP lower bound over 1-Lipschitz grid functions.
pub fn min_over_lipschitz(shift: u32, s: f64, budget: f64, n: usize) -> Result<LpSolution> {
    let cond = check_condition(s, budget);
    if !cond.holds {
        return Err(Error::Precondition(format!(
            "I = {budget} is outside [{}, {}]",
            cond.lower, cond.upper
        )));
    }
    Ok(LipschitzLp::new(shift, s, budget, n)?.solve())
}

/// Masses and absolute moments `∫|x − c| w(x)` for the two weights `K` and `K(· + Nπ)`.
pub trait ZigZagMoments {
    fn mass(&self) -> f64;
    fn shifted_mass(&self) -> f64;
    fn abs_moment(&self, c: f64) -> f64;
    fn shifted_abs_moment(&self, c: f64) -> f64;
}

/// Moments by adaptive quadrature.
pub struct ContinuumMoments {
    shift: u32,
    mass: f64,
    shifted_mass: f64,
}

impl ContinuumMoments {
    pub fn new(shift: u32) -> Self {
        let kn = shifted_kernel(shift);
        ContinuumMoments {
            shift,
            mass: window_mass(),
            shifted_mass: window_integral(&kn, &[]),
        }
    }
}

impl ZigZagMoments for ContinuumMoments {
    fn mass(&self) -> f64 {
        self.mass
    }
    fn shifted_mass(&self) -> f64 {
        self.shifted_mass
    }
    fn abs_moment(&self, c: f64) -> f64 {
        window_integral(&|x| (x - c).abs() * sharp_kernel(x), &[c])
    }
    fn shifted_abs_moment(&self, c: f64) -> f64 {
        let kn = shifted_kernel(self.shift);
        window_integral(&|x| (x - c).abs() * kn(x), &[c])
    }
}

/// Moments with the LP's Simpson weights, so that zig-zag values match LP objectives.
pub struct GridMoments<'a> {
    lp: &'a LipschitzLp,
}

impl<'a> GridMoments<'a> {
    pub fn new(lp: &'a LipschitzLp) -> Self {
        GridMoments { lp }
    }
}

impl ZigZagMoments for GridMoments<'_> {
    fn mass(&self) -> f64 {
        self.lp.constraint_weights.iter().sum()
    }
    fn shifted_mass(&self) -> f64 {
        self.lp.objective_weights.iter().sum()
    }
    fn abs_moment(&self, c: f64) -> f64 {
        self.lp.grid.iter().zip(&self.lp.constraint_weights).map(|(x, w)| (x - c).abs() * w).sum()
    }
    fn shifted_abs_moment(&self, c: f64) -> f64 {
        self.lp.grid.iter().zip(&self.lp.objective_weights).map(|(x, w)| (x - c).abs() * w).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZigZagOptimum {
    pub value: f64,
    pub zigzag: ZigZag,
    /// The minimiser sits on the boundary `z(−π/2) = s` of the feasible family.
    pub on_boundary: bool,
}

struct Family<'m, M: ZigZagMoments> {
    m: &'m M,
    s: f64,
    budget: f64,
    orientation: Orientation,
}

impl<M: ZigZagMoments> Family<'_, M> {
    fn peak(&self, c: f64) -> f64 {
        let j = self.m.abs_moment(c);
        match self.orientation {
            Orientation::Upper => (self.budget + j) / self.m.mass(),
            Orientation::Lower => (self.budget - j) / self.m.mass(),
        }
    }

    // z(−π/2) − s for upper, s − z(−π/2) for lower: feasible iff ≤ 0.
    fn slack(&self, c: f64) -> f64 {
        let p = self.peak(c);
        match self.orientation {
            Orientation::Upper => p - (c + FRAC_PI_2) - self.s,
            Orientation::Lower => self.s - (p + c + FRAC_PI_2),
        }
    }

    fn value(&self, c: f64) -> f64 {
        let p = self.peak(c);
        let jn = self.m.shifted_abs_moment(c);
        match self.orientation {
            Orientation::Upper => p * self.m.shifted_mass() - jn,
            Orientation::Lower => p * self.m.shifted_mass() + jn,
        }
    }

    fn value_if_feasible(&self, c: f64) -> f64 {
        if self.slack(c) <= 0.0 {
            self.value(c)
        } else {
            f64::INFINITY
        }
    }

    fn optimum(&self, c: f64, on_boundary: bool) -> ZigZagOptimum {
        ZigZagOptimum {
            value: self.value(c),
            zigzag: ZigZag {
                peak_location: c,
                peak_value: self.peak(c),
                orientation: self.orientation,
            },
            on_boundary,
        }
    }
}

fn zigzag_search<M: ZigZagMoments>(shift: u32, s: f64, budget: f64, m: &M) -> Result<ZigZagOptimum> {
    if shift == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    ensure_finite("s", s)?;
    ensure_finite("I", budget)?;
    let fam = Family {
        m,
        s,
        budget,
        orientation: if shift.is_multiple_of(2) {
            Orientation::Upper
        } else {
            Orientation::Lower
        },
    };
    let steps = (PI / ZIGZAG_SCAN_STEP).round() as usize;
    let cs: Vec<f64> = (0..=steps)
        .map(|k| (-FRAC_PI_2 + k as f64 * ZIGZAG_SCAN_STEP).min(FRAC_PI_2))
        .collect();
    let slack: Vec<f64> = cs.iter().map(|&c| fam.slack(c)).collect();
    let vals: Vec<f64> = cs
        .iter()
        .zip(&slack)
        .map(|(&c, &g)| if g <= 0.0 { fam.value(c) } else { f64::INFINITY })
        .collect();

    let mut best: Option<ZigZagOptimum> = None;
    let mut consider = |cand: ZigZagOptimum| {
        let better = match &best {
            None => true,
            Some(b) => {
                cand.value < b.value
                    || (cand.value == b.value && cand.zigzag.peak_location < b.zigzag.peak_location)
            }
        };
        if better {
            best = Some(cand);
        }
    };

    // Boundary roots of the slack between scan points of opposite feasibility.
    for k in 0..steps {
        let (g0, g1) = (slack[k], slack[k + 1]);
        if (g0 <= 0.0) == (g1 <= 0.0) {
            continue;
        }
        let (mut lo, mut hi) = (cs[k], cs[k + 1]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (fam.slack(mid) <= 0.0) == (g0 <= 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let c = if g0 <= 0.0 { lo } else { hi };
        if fam.slack(c) <= 0.0 {
            consider(fam.optimum(c, true));
        }
    }

    // Best scan point, refined by trisection within its neighbours.
    let mut k_best: Option<usize> = None;
    for k in 0..=steps {
        if vals[k].is_finite() && k_best.is_none_or(|b| vals[k] < vals[b]) {
            k_best = Some(k);
        }
    }
    if let Some(k) = k_best {
        consider(fam.optimum(cs[k], false));
        let mut lo = cs[k.saturating_sub(1)];
        let mut hi = cs[(k + 1).min(steps)];
        for _ in 0..200 {
            if hi - lo < 1e-13 {
                break;
            }
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if fam.value_if_feasible(m1) <= fam.value_if_feasible(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let c = 0.5 * (lo + hi);
        if fam.slack(c) <= 0.0 {
            consider(fam.optimum(c, false));
        }
    }
    best.ok_or(Error::EmptyFamily)
}

/// Minimum of `∫ z(x) K(x + Nπ) dx` over the feasible zig-zag family.
pub fn min_over_zigzag(shift: u32, s: f64, budget: f64) -> Result<ZigZagOptimum> {
    zigzag_search(shift, s, budget, &ContinuumMoments::new(shift))
}

/// The same search with the Simpson weights of `lp`.
pub fn min_over_zigzag_on_grid(lp: &LipschitzLp) -> Result<ZigZagOptimum> {
    zigzag_search(lp.shift, lp.boundary_value, lp.budget, &GridMoments::new(lp))
}

/// The zig-zag used when the budget falls outside the admissible window:
/// slope +1 throughout for even `N`, slope −1 throughout for odd `N`.
pub fn fallback_zigzag(shift: u32, s: f64) -> ZigZag {
    if shift.is_multiple_of(2) {
        ZigZag {
            peak_location: FRAC_PI_2,
            peak_value: s + PI,
            orientation: Orientation::Upper,
        }
    } else {
        ZigZag {
            peak_location: FRAC_PI_2,
            peak_value: s - PI,
            orientation: Orientation::Lower,
        }
    }
}

/// Draws an instance satisfying the admissibility condition, with `I` uniformly
/// inside 90% of the admissible window.
pub fn random_instance<R: Rng>(rng: &mut R) -> (u32, f64, f64) {
    let shift = rng.gen_range(2..=4u32);
    let s: f64 = rng.gen_range(-1.0..1.0);
    let u: f64 = rng.gen_range(-0.9..0.9);
    let c = window_constants();
    (shift, s, s * c.mass + u * c.ramp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingOrientation {
    /// Positive measure, non-increasing weight.
    PositiveNonIncreasing,
    /// Negative measure, non-decreasing weight.
    NegativeNonDecreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingVerdict {
    pub lhs: f64,
    pub rhs: f64,
    pub crossing: f64,
    pub pass: bool,
}

/// Tolerance below which `∫fφμ < ∫gφμ` counts as a violation.
pub const CROSSING_TOL: f64 = 1e-10;

const PRECONDITION_SAMPLES: usize = 2001;

/// Compares `∫ f φ dμ` with `∫ g φ dμ` for `dμ = K dx` on `[a, b]`.
pub fn check_single_crossing(
    f: &dyn Fn(f64) -> f64,
    g: &dyn Fn(f64) -> f64,
    phi: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
) -> Result<CrossingVerdict> {
    check_single_crossing_with(f, g, phi, &sharp_kernel, a, b, CrossingOrientation::PositiveNonIncreasing)
}

pub fn check_single_crossing_with(
    f: &dyn Fn(f64) -> f64,
    g: &dyn Fn(f64) -> f64,
    phi: &dyn Fn(f64) -> f64,
    density: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    orientation: CrossingOrientation,
) -> Result<CrossingVerdict> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInput(format!("[{a}, {b}] is not an interval")));
    }
    let pre = |m: String| Err(Error::Precondition(m));
    let xs: Vec<f64> = (0..PRECONDITION_SAMPLES)
        .map(|i| a + (b - a) * i as f64 / (PRECONDITION_SAMPLES - 1) as f64)
        .collect();

    let d: Vec<f64> = xs.iter().map(|&x| f(x) - g(x)).collect();
    let scale = 1.0 + d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * scale;
    let first_neg = d.iter().position(|&v| v < -tol);
    let crossing = match first_neg {
        None => b,
        Some(0) => a,
        Some(k) => {
            if d[k..].iter().any(|&v| v > tol) {
                return pre("f − g changes sign more than once".into());
            }
            xs[k - 1]
        }
    };
    if first_neg == Some(0) && d.iter().any(|&v| v > tol) {
        return pre("f − g changes sign more than once".into());
    }

    let ph: Vec<f64> = xs.iter().map(|&x| phi(x)).collect();
    let ptol = 1e-12 * (1.0 + ph.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    let (want_sign, monotone_ok) = match orientation {
        CrossingOrientation::PositiveNonIncreasing => (1.0, ph.windows(2).all(|w| w[1] <= w[0] + ptol)),
        CrossingOrientation::NegativeNonDecreasing => (-1.0, ph.windows(2).all(|w| w[1] >= w[0] - ptol)),
    };
    if !monotone_ok {
        return pre("φ has the wrong monotonicity".into());
    }
    if xs.iter().any(|&x| want_sign * density(x) < 0.0) {
        return pre("the measure has the wrong sign".into());
    }

    let q = QuadOptions::relative(1e-13, 1e-12);
    let mass_f = integrate_with(&|x| f(x) * density(x), a, b, &[crossing], &q)?.value;
    let mass_g = integrate_with(&|x| g(x) * density(x), a, b, &[crossing], &q)?.value;
    if (mass_f - mass_g).abs() > 1e-9 {
        return pre(format!("∫f dμ − ∫g dμ = {:e}", mass_f - mass_g));
    }
    let lhs = integrate_with(&|x| f(x) * phi(x) * density(x), a, b, &[crossing], &q)?.value;
    let rhs = integrate_with(&|x| g(x) * phi(x) * density(x), a, b, &[crossing], &q)?.value;
    Ok(CrossingVerdict {
        lhs,
        rhs,
        crossing,
        pass: lhs >= rhs - CROSSING_TOL,
    })
}

/// A random single-crossing pair `f = g + A(c − x)e(x)` with `c` placed at the
/// `e dμ`-barycentre so that the two integrals agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingInstance {
    pub a: f64,
    pub b: f64,
    pub g: [f64; 4],
    pub e: [f64; 3],
    pub amplitude: f64,
    pub crossing: f64,
    pub phi_base: f64,
    pub phi_steps: Vec<[f64; 3]>,
    pub orientation: CrossingOrientation,
}

impl CrossingInstance {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let a = -FRAC_PI_2 + rng.gen_range(0.0..1.0);
        let b = FRAC_PI_2 - rng.gen_range(0.0..1.0);
        let g = [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.5..4.0),
        ];
        let e = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5)];
        let phi_steps = (0..3)
            .map(|_| [rng.gen_range(0.0..1.0), rng.gen_range(0.5..8.0), rng.gen_range(a..b)])
            .collect();
        let orientation = if rng.gen_bool(0.5) {
            CrossingOrientation::PositiveNonIncreasing
        } else {
            CrossingOrientation::NegativeNonDecreasing
        };
        let mut inst = CrossingInstance {
            a,
            b,
            g,
            e,
            amplitude: rng.gen_range(0.05..3.0),
            crossing: 0.0,
            phi_base: rng.gen_range(-1.0..1.0),
            phi_steps,
            orientation,
        };
        let q = QuadOptions::relative(1e-13, 1e-12);
        let w = |x: f64| inst.envelope(x) * sharp_kernel(x);
        let m0 = integrate_with(&w, a, b, &[], &q).expect("smooth").value;
        let m1 = integrate_with(&|x| x * w(x), a, b, &[], &q).expect("smooth").value;
        inst.crossing = m1 / m0;
        inst
    }

    fn envelope(&self, x: f64) -> f64 {
        (self.e[0] + self.e[1] * x + self.e[2] * x * x).exp()
    }

    pub fn g(&self, x: f64) -> f64 {
        self.g[0] + self.g[1] * x + self.g[2] * (self.g[3] * x).sin()
    }

    pub fn f(&self, x: f64) -> f64 {
        self.g(x) + self.amplitude * (self.crossing - x) * self.envelope(x)
    }

    pub fn phi(&self, x: f64) -> f64 {
        let rise: f64 = self.phi_steps.iter().map(|p| p[0] * (p[1] * (x - p[2])).tanh()).sum();
        match self.orientation {
            CrossingOrientation::PositiveNonIncreasing => self.phi_base - rise,
            CrossingOrientation::NegativeNonDecreasing => self.phi_base + rise,
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match self.orientation {
            CrossingOrientation::PositiveNonIncreasing => sharp_kernel(x),
            CrossingOrientation::NegativeNonDecreasing => -sharp_kernel(x),
        }
    }

    pub fn check(&self) -> Result<CrossingVerdict> {
        check_single_crossing_with(
            &|x| self.f(x),
            &|x| self.g(x),
            &|x| self.phi(x),
            &|x| self.density(x),
            self.a,
            self.b,
            self.orientation,
        )
    }
}

/// LP over monotone grid functions `ρ` (non-increasing on `[−π/2, 0]`,
/// non-decreasing on `[0, π/2]`, `ρ(−π/2) ≤ −1`) maximising `∫ K' ρ`, with or
/// without the side condition `∫ K ρ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimLp {
    pub grid: Vec<f64>,
    pub kernel_weights: Vec<f64>,
    pub derivative_weights: Vec<f64>,
    pub with_balance: bool,
}

impl ClaimLp {
    pub fn new(n: usize, with_balance: bool) -> Result<Self> {
        if n < 101 || n.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("grid size {n} must be odd and at least 101")));
        }
        let w = simpson_weights(-FRAC_PI_2, FRAC_PI_2, n)?;
        let h = PI / (n - 1) as f64;
        let grid: Vec<f64> = (0..n).map(|i| -FRAC_PI_2 + i as f64 * h).collect();
        let mut derivative_weights = Vec::with_capacity(n);
        for (&x, wi) in grid.iter().zip(&w) {
            derivative_weights.push(wi * eval_kernel_derivative(x)?);
        }
        Ok(ClaimLp {
            kernel_weights: grid.iter().zip(&w).map(|(&x, wi)| wi * sharp_kernel(x)).collect(),
            derivative_weights,
            grid,
            with_balance,
        })
    }

    /// Variables: `ρ₀` followed by the increments `ρ_{j+1} − ρ_j`.
    pub fn to_program(&self) -> LinearProgram {
        let n = self.grid.len();
        let mid = (n - 1) / 2;
        let coeffs = |w: &[f64]| {
            let mut out = vec![0.0; n];
            out[0] = w.iter().sum();
            let mut acc = 0.0;
            for j in (0..n - 1).rev() {
                acc += w[j + 1];
                out[j + 1] = acc;
            }
            out
        };
        let mut lp = LinearProgram::new(Sense::Maximize, coeffs(&self.derivative_weights));
        lp.lower = vec![0.0; n];
        lp.upper = vec![0.0; n];
        lp.lower[0] = f64::NEG_INFINITY;
        lp.upper[0] = -1.0;
        for j in 0..n - 1 {
            if j < mid {
                lp.lower[j + 1] = f64::NEG_INFINITY;
            } else {
                lp.upper[j + 1] = f64::INFINITY;
            }
        }
        if self.with_balance {
            lp.add_row(coeffs(&self.kernel_weights), RowKind::Eq, 0.0);
        }
        lp
    }

    pub fn values(&self, x: &[f64]) -> Vec<f64> {
        let mut v = Vec::with_capacity(x.len());
        let mut acc = x[0];
        v.push(acc);
        for &d in &x[1..] {
            acc += d;
            v.push(acc);
        }
        v
    }

    pub fn objective_of(&self, rho: &[f64]) -> f64 {
        self.derivative_weights.iter().zip(rho).map(|(w, r)| w * r).sum()
    }

    pub fn balance_of(&self, rho: &[f64]) -> f64 {
        self.kernel_weights.iter().zip(rho).map(|(w, r)| w * r).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimVerdict {
    pub status: LpStatus,
    pub optimum: Option<f64>,
    pub relaxed_status: LpStatus,
    /// `None` when the relaxation is unbounded.
    pub relaxed_optimum: Option<f64>,
    /// Optimum of the balanced LP is at most 1e-8.
    pub infeasible: bool,
    /// Dropping the balance condition makes the optimum positive.
    pub relaxation_positive: bool,
}

pub const CLAIM_TOL: f64 = 1e-8;

pub fn claim_infeasibility(n: usize) -> Result<ClaimVerdict> {
    let solve = |with_balance: bool| -> Result<(LpStatus, Option<f64>)> {
        let c = ClaimLp::new(n, with_balance)?;
        let r = c.to_program().solve();
        let value = (r.status == LpStatus::Optimal).then(|| c.objective_of(&c.values(&r.x)));
        Ok((r.status, value))
    };
    let (status, optimum) = solve(true)?;
    let (relaxed_status, relaxed_optimum) = solve(false)?;
    if matches!(status, LpStatus::IterationLimit) {
        return Err(Error::NotConverged {
            value: f64::NAN,
            error_estimate: f64::NAN,
            subdivisions: simplex::MAX_ITERATIONS,
        });
    }
    Ok(ClaimVerdict {
        infeasible: status == LpStatus::Optimal && optimum.is_some_and(|v| v <= CLAIM_TOL),
        relaxation_positive: relaxed_status == LpStatus::Unbounded
            || relaxed_optimum.is_some_and(|v| v > CLAIM_TOL),
        status,
        optimum,
        relaxed_status,
        relaxed_optimum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::extremum_location;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn condition_window() {
        let w = window_mass();
        assert!((w - 0.5894898722360838).abs() < 1e-13);
        let v = check_condition(0.7, 0.7 * w);
        assert!(v.holds);
        assert!((v.upper - v.lower - PI * w).abs() < 1e-12);
        assert!(!check_condition(0.0, v.lower - 1.0).holds);
    }

    #[test]
    fn constant_function_bounds_lp() {
        let s = 0.3;
        let lp = LipschitzLp::new(2, s, 10.0, 101).unwrap();
        let sol = lp.solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        let constant = vec![s; 101];
        assert!(sol.objective <= lp.objective_of(&constant) + 1e-12);
        assert!(sol.max_residual < 1e-9);
    }

    #[test]
    fn sandwich_small_instance() {
        let lp = min_over_lipschitz(2, 0.0, 0.0, 201).unwrap();
        let zz = min_over_zigzag(2, 0.0, 0.0).unwrap();
        assert_eq!(lp.status, LpStatus::Optimal);
        assert!(lp.objective >= zz.value - 1e-6, "{} vs {}", lp.objective, zz.value);
        let c = zz.zigzag.peak_location;
        assert!(c > -FRAC_PI_2 + 1e-3 && c < FRAC_PI_2 - 1e-3);
    }

    #[test]
    fn grid_zigzag_is_lp_feasible() {
        // Small s makes the start constraint active, so the minimiser lies in the LP's feasible set.
        for (shift, s, u) in [(2, -0.5, 0.4), (3, 0.5, -0.4), (4, 0.0, 0.8)] {
            let budget = s * window_mass() + u * window_constants().ramp;
            let lp = LipschitzLp::new(shift, s, budget, 201).unwrap();
            let zz = min_over_zigzag_on_grid(&lp).unwrap();
            let sol = lp.solve();
            assert!(sol.objective >= zz.value - 1e-9, "{} vs {}", sol.objective, zz.value);
            if zz.on_boundary {
                let samples: Vec<f64> = lp.grid.iter().map(|&x| zz.zigzag.eval(x)).collect();
                assert!(lp.max_violation(&samples) < 1e-9);
                assert!((lp.objective_of(&samples) - zz.value).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn empty_family() {
        // Budget far above what any zig-zag starting below s can reach.
        assert!(matches!(min_over_zigzag(2, 0.0, 100.0), Err(Error::EmptyFamily)));
    }

    #[test]
    fn claim_lp() {
        let v = claim_infeasibility(201).unwrap();
        assert!(v.infeasible, "{v:?}");
        assert!(v.relaxation_positive, "{v:?}");
        let c = ClaimLp::new(201, true).unwrap();
        let minus_one = vec![-1.0; 201];
        assert!(c.objective_of(&minus_one).abs() < 1e-15);
    }

    #[test]
    fn single_crossing() {
        let f = |x: f64| 1.0 - x;
        let v = check_single_crossing(&f, &f, &|x| -x, -1.0, 1.0).unwrap();
        assert!(v.pass && (v.lhs - v.rhs).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let inst = CrossingInstance::random(&mut rng);
            let v = inst.check().unwrap();
            assert!(v.pass, "{inst:?} {v:?}");
        }
        // Two crossings.
        let r = check_single_crossing(&|x: f64| x.sin(), &|_| 0.0, &|x| -x, -4.0, 4.0);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn symmetric_minimiser_near_extremum() {
        // With s large the boundary is inactive and the minimiser tracks e_N.
        let n = 2;
        let s = 5.0;
        let zz = min_over_zigzag(n, s, s * window_mass()).unwrap();
        assert!(!zz.on_boundary);
        let e = extremum_location(n).unwrap();
        assert!((zz.zigzag.peak_location - e).abs() < 0.2, "{} vs {e}", zz.zigzag.peak_location);
    }
}
