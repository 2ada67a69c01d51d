//! Command plumbing shared by the `tauberian` binary: the verification suite,
//! the constants table, parameter sweeps and the Lipschitz LP report.
//!
//! Every command returns a [`CmdOutput`] instead of printing, so the binary stays
//! a thin wrapper and the commands can be tested directly.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    self, fejer_argument, full_convolution, graham_vaaler_window, one_sided_bound, one_sided_chain,
    osc_bound, osc_objective, theta_sharpness, two_sided_bound, BoundReport,
};
use crate::error::{Error, Result};
use crate::extremal_opt::{
    check_condition, claim_infeasibility, min_over_lipschitz, min_over_zigzag, random_instance,
    CrossingInstance,
};
use crate::kernels::{
    alpha_telescoped_sum, eval_kernel_derivative, eval_kernel_derivative2, eval_ratio,
    extremum_location, kernel_constant, sharp_kernel, BandLimitedKernel, KernelKind,
};
use crate::laplace::{
    boundary_probe, closed_form_mollified, closed_form_one_sided, closed_form_two_sided,
    interior_grid, laplace_pwl_exact, mollified_transform, LaplaceClosedForm,
};
use crate::pwl::{build_alpha, build_one_sided_extremal, build_two_sided_extremal, mollified_sequence};
use crate::quadrature::{integrate_periodic_tail_with, integrate_with, QuadOptions, TailOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::InvalidInput(format!("unknown format `{s}`, expected csv|json|table"))),
        }
    }
}

/// Named tolerances of the verification suite and their defaults.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("kernel_mass", 1e-9),
    ("kernel_window", 1e-8),
    ("kernel_half_pi", 1e-12),
    ("alpha_mass", 1e-8),
    ("alpha_window", 1e-8),
    ("extremum", 1e-6),
    ("crossing", 1e-10),
    ("sandwich", 1e-6),
    ("refinement", 1e-4),
    ("claim", 1e-8),
    ("laplace", 1e-10),
    ("laplace_origin", 1e-8),
    ("convolution", 1e-2),
    ("jackson", 1e-6),
    ("theta_floor", 1e-12),
    ("theta_ends", 1e-3),
    ("chain", 1e-3),
    ("fejer_mass", 1e-8),
    ("osc", 1e-9),
    ("mollified_min", 1e-3),
    ("mollified_primitive", 0.05),
];

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_GRID: usize = 201;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    tolerances: BTreeMap<String, f64>,
    /// Lipschitz and claim LP grid size; refinement uses `2n − 1`.
    pub grid: usize,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerances: BTreeMap::new(),
            grid: DEFAULT_GRID,
            format: Format::Table,
            seed: DEFAULT_SEED,
        }
    }
}

impl RunConfig {
    /// Applies `NAME=VALUE`; `all=VALUE` overrides every tolerance.
    pub fn set_tolerance(&mut self, arg: &str) -> Result<()> {
        let (name, value) = arg
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("expected NAME=VALUE, got `{arg}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("tolerance `{value}` is not a number")))?;
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be finite and non-negative, got {value}")));
        }
        let name = name.trim();
        if name == "all" {
            for (n, _) in TOLERANCES {
                self.tolerances.insert(n.to_string(), value);
            }
            return Ok(());
        }
        if !TOLERANCES.iter().any(|(n, _)| *n == name) {
            return Err(Error::InvalidInput(format!("unknown tolerance `{name}`")));
        }
        self.tolerances.insert(name.to_string(), value);
        Ok(())
    }

    pub fn with_tolerance(mut self, arg: &str) -> Result<Self> {
        self.set_tolerance(arg)?;
        Ok(self)
    }

    pub fn with_grid(mut self, n: usize) -> Result<Self> {
        if n < 101 || n.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("grid size {n} must be odd and at least 101")));
        }
        self.grid = n;
        Ok(self)
    }

    pub fn tol(&self, name: &str) -> f64 {
        if let Some(v) = self.tolerances.get(name) {
            return *v;
        }
        TOLERANCES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| panic!("tolerance `{name}` is not registered"))
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmdOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl CmdOutput {
    fn ok(stdout: String) -> Self {
        CmdOutput { stdout, stderr: String::new(), code: 0 }
    }

    fn config_error(e: Error) -> Self {
        CmdOutput { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 }
    }
}

/// Comparison rows for one acceptance criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub criterion: u8,
    pub reports: Vec<BoundReport>,
}

impl Check {
    pub fn pass(&self) -> bool {
        !self.reports.is_empty() && self.reports.iter().all(|r| r.pass)
    }
}

fn row(name: &str, computed: f64, reference: f64, tolerance: f64, pass: bool) -> BoundReport {
    BoundReport {
        name: name.to_string(),
        computed,
        reference,
        tolerance,
        pass,
    }
}

fn at_most(name: &str, computed: f64, bound: f64) -> BoundReport {
    row(name, computed, bound, 0.0, computed <= bound)
}

fn within(name: &str, computed: f64, lo: f64, hi: f64) -> BoundReport {
    row(name, computed, 0.5 * (lo + hi), 0.5 * (hi - lo), computed > lo && computed < hi)
}

fn failed(e: &Error) -> BoundReport {
    let name: String = format!("evaluation failed: {e}").chars().take(72).collect();
    BoundReport {
        name,
        computed: f64::NAN,
        reference: f64::NAN,
        tolerance: 0.0,
        pass: false,
    }
}

/// `∫ℝ |g|` for an even `g` whose sign pattern repeats with period `2π` beyond `start`.
fn even_abs_mass(g: &dyn Fn(f64) -> f64, start: f64, breaks: &[f64]) -> Result<f64> {
    let a = |x: f64| g(x).abs();
    let core = integrate_with(&a, 0.0, start, &[FRAC_PI_2], &QuadOptions::relative(1e-14, 1e-13))?.value;
    let tail = integrate_periodic_tail_with(&a, start, 2.0 * PI, &TailOptions::with_breaks(1e-11, breaks))?.value;
    Ok(2.0 * (core + tail))
}

fn kernel_identities(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let k = BandLimitedKernel::sharp();
    let mass = bounds::kernel_mass(&k, 1e-11)?.value;
    let start = k.core_radius();
    let abs_mass = even_abs_mass(&sharp_kernel, start, &k.tail_breaks(start))?;
    let window = crate::kernels::window_mass()?;
    Ok(vec![
        BoundReport::new("int K", mass, 1.0, cfg.tol("kernel_mass")),
        BoundReport::new("2 int_window K - int |K|", 2.0 * window - abs_mass, 0.0, cfg.tol("kernel_window")),
        BoundReport::new("K(pi/2)", sharp_kernel(FRAC_PI_2), 1.0 / (2.0 * PI), cfg.tol("kernel_half_pi")),
    ])
}

fn alpha_orthogonality(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let alpha = build_alpha();
    let ka = |x: f64| alpha.eval(x) * sharp_kernel(x);
    let periods = 8;
    let t = alpha_telescoped_sum(periods)?;
    let x_max = 2.0 * PI * periods as f64;
    let cuts: Vec<f64> = (1..4 * periods).map(|j| j as f64 * FRAC_PI_2).collect();
    let q = QuadOptions::relative(1e-14, 1e-13);
    let direct = integrate_with(&ka, 0.0, x_max, &cuts, &q)?.value;
    let window = 2.0 * integrate_with(&ka, 0.0, FRAC_PI_2, &[], &q)?.value;
    // Zeros of α and K and the kinks of α, relative to π/2.
    let breaks = [0.0, FRAC_PI_2, PI, 1.5 * PI];
    let abs_mass = even_abs_mass(&ka, FRAC_PI_2, &breaks)?;
    let numeric = full_convolution(&alpha, &BandLimitedKernel::sharp(), 0.0, 1e-11)?.value;
    Ok(vec![
        BoundReport::new("int K alpha (telescoped)", 2.0 * t.limit, 0.0, cfg.tol("alpha_mass")),
        BoundReport::new("int K alpha (quadrature)", numeric, 0.0, cfg.tol("alpha_mass")),
        at_most("telescoped remainder vs bound", (t.partial - direct).abs(), t.remainder_bound),
        BoundReport::new("2 int_window K alpha - int |K alpha|", 2.0 * window - abs_mass, 0.0, cfg.tol("alpha_window")),
    ])
}

fn kernel_concavity(_cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let (a, b) = (0.001, FRAC_PI_2 - 0.001);
    let mut d1 = f64::NEG_INFINITY;
    let mut d2 = f64::NEG_INFINITY;
    for i in 0..200 {
        let x = a + (b - a) * i as f64 / 199.0;
        d1 = d1.max(eval_kernel_derivative(x)?);
        d2 = d2.max(eval_kernel_derivative2(x)?);
    }
    Ok(vec![
        row("max K'", d1, 0.0, 0.0, d1 < 0.0),
        row("max K''", d2, 0.0, 0.0, d2 < 0.0),
    ])
}

fn ratio_extrema(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for n in 2..=6u32 {
        let e = extremum_location(n)?;
        // The extremum lies in (−π/(4N − 2), 0); bracket generously.
        let (lo, hi) = (-PI / (2.0 * n as f64), PI / (8.0 * n as f64));
        let f = |x: f64| eval_ratio(n, x).unwrap_or(f64::NAN);
        let mid = f(0.5 * (lo + hi));
        let sign = if mid > 0.5 * (f(lo) + f(hi)) { -1.0 } else { 1.0 };
        let (x, _) = bounds::golden_section(&|x| sign * f(x), lo, hi, 1e-12);
        out.push(BoundReport::new(&format!("argextremum N={n}"), x, e, cfg.tol("extremum")));
    }
    Ok(out)
}

fn crossing_suite(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let mut rng = cfg.rng(5);
    let tol = cfg.tol("crossing");
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let v = CrossingInstance::random(&mut rng).check()?;
        let slack = v.lhs - v.rhs;
        worst = worst.min(slack);
        if slack < -tol {
            violations += 1;
        }
    }
    Ok(vec![
        row("violations in 1000 instances", violations as f64, 0.0, 0.0, violations == 0),
        row("min slack", worst, -tol, 0.0, worst >= -tol),
    ])
}

fn lp_sandwich(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let mut rng = cfg.rng(6);
    let n = cfg.grid;
    let fine = 2 * n - 1;
    let mut worst_gap = f64::INFINITY;
    let mut worst_shift = 0.0f64;
    let mut count = 0;
    while count < 20 {
        let (shift, s, i) = random_instance(&mut rng);
        if !check_condition(s, i).holds {
            continue;
        }
        count += 1;
        let z = min_over_zigzag(shift, s, i)?.value;
        let coarse = min_over_lipschitz(shift, s, i, n)?.objective;
        let refined = min_over_lipschitz(shift, s, i, fine)?.objective;
        worst_gap = worst_gap.min(coarse - z);
        worst_shift = worst_shift.max(((refined - z) - (coarse - z)).abs());
    }
    let sandwich = cfg.tol("sandwich");
    let refinement = cfg.tol("refinement");
    Ok(vec![
        row(&format!("min gap (n={n})"), worst_gap, -sandwich, sandwich, worst_gap >= -sandwich),
        row(&format!("max |gap({fine}) - gap({n})|"), worst_shift, 0.0, refinement, worst_shift < refinement),
    ])
}

fn claim_lp(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let v = claim_infeasibility(cfg.grid)?;
    let tol = cfg.tol("claim");
    let opt = v.optimum.unwrap_or(f64::NAN);
    // An unbounded relaxation is reported as +inf.
    let relaxed = v.relaxed_optimum.unwrap_or(f64::INFINITY);
    Ok(vec![
        row("balanced optimum", opt, tol, 0.0, opt <= tol),
        row("relaxed optimum", relaxed, tol, 0.0, v.relaxation_positive),
    ])
}

fn transforms(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let mut rng = cfg.rng(8);
    let tol = cfg.tol("laplace");
    let two = build_two_sided_extremal();
    let one = build_one_sided_extremal();
    let mut worst = [0.0f64; 2];
    for _ in 0..20 {
        let s = Complex64::new(rng.gen_range(1e-3..=2.0), rng.gen_range(-8.0..8.0));
        let pairs = [
            (laplace_pwl_exact(&two, s)?, closed_form_two_sided(s)?),
            (laplace_pwl_exact(&one, s)?, closed_form_one_sided(s)?),
        ];
        for (w, (exact, closed)) in worst.iter_mut().zip(pairs) {
            *w = w.max((exact - closed).norm() / (1.0 + closed.norm()));
        }
    }
    let p2 = boundary_probe(&LaplaceClosedForm::two_sided(), &interior_grid(-0.99, 0.99, 199));
    let p1 = boundary_probe(&LaplaceClosedForm::one_sided(), &interior_grid(-0.99 * PI, 0.99 * PI, 199));
    let origin = tol.max(cfg.tol("laplace_origin"));
    let eps = Complex64::new(1e-9, 0.0);
    let z2 = laplace_pwl_exact(&two, eps)?;
    let z1 = laplace_pwl_exact(&one, eps)?;
    Ok(vec![
        at_most("two-sided exact vs closed (rel)", worst[0], tol),
        at_most("one-sided exact vs closed (rel)", worst[1], tol),
        row("two-sided boundary max |G|", p2.max_abs, 0.0, 0.0, !p2.blow_up),
        row("one-sided boundary max |G|", p1.max_abs, 0.0, 0.0, !p1.blow_up),
        BoundReport::new("two-sided G(0)", closed_form_two_sided(Complex64::new(0.0, 0.0))?.re, PI * PI / 8.0, cfg.tol("laplace_origin")),
        BoundReport::new("one-sided G(0)", closed_form_one_sided(Complex64::new(0.0, 0.0))?.re, -1.0 / 6.0, cfg.tol("laplace_origin")),
        BoundReport::new("two-sided exact at s=1e-9", z2.re, PI * PI / 8.0, origin),
        BoundReport::new("one-sided exact at s=1e-9", z1.re, -1.0 / 6.0, origin),
    ])
}

fn convolution_decay(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let tau = build_two_sided_extremal();
    let k = BandLimitedKernel::sharp();
    let mut out = Vec::new();
    let mut prev = f64::INFINITY;
    let mut last = 0.0;
    for h in [25.0, 50.0, 100.0, 200.0] {
        let v = full_convolution(&tau, &k, h, 1e-12)?.value.abs();
        out.push(row(&format!("|tau*K|({h})"), v, prev, 0.0, v < prev));
        prev = v;
        last = v;
    }
    out.push(row("|tau*K|(200) bound", last, cfg.tol("convolution"), 0.0, last < cfg.tol("convolution")));
    Ok(out)
}

fn constants_table(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let j = kernel_constant(&BandLimitedKernel::jackson())?;
    let jv = j.value().unwrap_or(f64::NAN);
    let reference = bounds::kernel_constant_reference(KernelKind::Jackson).unwrap_or(f64::NAN);
    let mut out = vec![
        BoundReport::new("Jackson constant", jv, reference, cfg.tol("jackson")),
        at_most("Jackson constant below 6", jv, 6.0),
        BoundReport::new("two_sided_bound(1,1)", two_sided_bound(1.0, 1.0)?, FRAC_PI_2, 0.0),
        BoundReport::new("one_sided_bound(pi,1)", one_sided_bound(PI, 1.0)?, 1.0, 0.0),
    ];
    out.extend(bounds::sharpness_witnesses()?);
    Ok(out)
}

fn theta_grid() -> Vec<f64> {
    let (a, b) = (1e-3f64.ln(), 50f64.ln());
    (0..400).map(|i| (a + (b - a) * i as f64 / 399.0).exp()).collect()
}

fn theta_product(theta: f64) -> Result<f64> {
    Ok((1.0 / theta + FRAC_PI_2) * theta * theta_sharpness(theta)?)
}

fn theta_check(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let grid = theta_grid();
    let mut floor = f64::INFINITY;
    for &t in &grid {
        floor = floor.min(theta_product(t)?);
    }
    let ends = cfg.tol("theta_ends");
    let first = theta_product(grid[0])?;
    let last = theta_product(grid[grid.len() - 1])?;
    Ok(vec![
        row("min over grid", floor, FRAC_PI_2, cfg.tol("theta_floor"), floor >= FRAC_PI_2 - cfg.tol("theta_floor")),
        BoundReport::new("value at theta=1e-3", first, FRAC_PI_2, ends),
        BoundReport::new("value at theta=50", last, FRAC_PI_2, ends),
    ])
}

fn chain_check(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let mut prev = f64::NEG_INFINITY;
    let mut worst_drop = 0.0f64;
    for i in 1..=200 {
        let v = one_sided_chain(10.0 * i as f64 / 200.0)?;
        worst_drop = worst_drop.max(prev - v);
        prev = v;
    }
    Ok(vec![
        BoundReport::new("chain(1e-4)", one_sided_chain(1e-4)?, 1.0, cfg.tol("chain")),
        row("largest decrease on grid", worst_drop, 0.0, 0.0, worst_drop <= 0.0),
    ])
}

fn fejer_check(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let r = fejer_argument(bounds::FEJER_DEFAULT_S, bounds::FEJER_DEFAULT_EPSILON)?;
    Ok(vec![
        within("2 int phi on [-2.35, 5.85]", r.first_constant, 9.78, 9.80),
        within("int (8.2-(x+2.35)) phi", r.second_constant, 25.76, 25.78),
        BoundReport::new("int phi", r.mass, 2.0 * PI, cfg.tol("fejer_mass")),
        row("first strict inequality", r.first_constant, r.first_threshold, 0.0, r.first_holds),
        row("second strict inequality", r.second_constant, r.second_threshold, 0.0, r.second_holds),
    ])
}

fn osc_check(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let t = build_two_sided_extremal();
    let psi = |d: f64| t.oscillation_modulus(d).unwrap_or(f64::NAN);
    let at = osc_objective(&psi, 1.0, true, 1e-3);
    let inf = osc_bound(&psi, 1.0, true)?;
    Ok(vec![
        BoundReport::new("objective at delta=1e-3", at, FRAC_PI_2 + 1e-3, cfg.tol("osc")),
        BoundReport::new("objective at scan minimum", inf.value, FRAC_PI_2 + inf.delta, cfg.tol("osc")),
        at_most("scan minimum above pi/2 by at most", inf.value - FRAC_PI_2, 1.01 * bounds::OSC_DELTA_MIN),
    ])
}

/// Fifty points of `(0, 20)` at distance at least 0.2 from every odd integer.
pub fn mollifier_test_points() -> Vec<f64> {
    let mut out = Vec::with_capacity(50);
    let mut k = 0;
    while out.len() < 50 {
        let x = 0.1 + 0.2 * k as f64;
        k += 1;
        let odd = 2.0 * ((x - 1.0) / 2.0).round() + 1.0;
        if (x - odd).abs() >= 0.2 {
            out.push(x);
        }
    }
    out
}

fn mollified_check(cfg: &RunConfig) -> Result<Vec<BoundReport>> {
    let n = 64;
    let m = mollified_sequence(n)?;
    let tau = build_one_sided_extremal();
    let worst = mollifier_test_points()
        .into_iter()
        .map(|x| (m.primitive(x) - tau.eval(x)).abs())
        .fold(0.0f64, f64::max);
    let at_zero = mollified_transform(n, Complex64::new(0.0, 0.0))?;
    let boundary_zero = closed_form_mollified(n, 0.0)?;
    Ok(vec![
        BoundReport::new("grid min rho_64", m.grid_min(), -1.0, cfg.tol("mollified_min")),
        row("L{rho_64; 0}", at_zero.norm(), 0.0, 0.0, at_zero == Complex64::new(0.0, 0.0)),
        row("G_64(i0)", boundary_zero.norm(), 0.0, 0.0, boundary_zero == Complex64::new(0.0, 0.0)),
        at_most("max |int rho_64 - tau|", worst, cfg.tol("mollified_primitive")),
    ])
}

type CheckFn = fn(&RunConfig) -> Result<Vec<BoundReport>>;

/// The acceptance checks in criterion order; ids sort in the same order.
pub const CHECKS: &[(&str, u8, CheckFn)] = &[
    ("c01_kernel_identities", 1, kernel_identities),
    ("c02_alpha_orthogonality", 2, alpha_orthogonality),
    ("c03_kernel_concavity", 3, kernel_concavity),
    ("c04_ratio_extrema", 4, ratio_extrema),
    ("c05_single_crossing", 5, crossing_suite),
    ("c06_lp_sandwich", 6, lp_sandwich),
    ("c07_claim_infeasibility", 7, claim_lp),
    ("c08_extremal_transforms", 8, transforms),
    ("c09_convolution_decay", 9, convolution_decay),
    ("c10_constants", 10, constants_table),
    ("c11_theta_sharpness", 11, theta_check),
    ("c12_one_sided_chain", 12, chain_check),
    ("c13_fejer_kernel", 13, fejer_check),
    ("c14_oscillation_bound", 14, osc_check),
    ("c15_mollified_sequence", 15, mollified_check),
];

pub fn run_check(id: &str, cfg: &RunConfig) -> Option<Check> {
    let (id, criterion, f) = CHECKS.iter().find(|(n, _, _)| *n == id)?;
    let reports = f(cfg).unwrap_or_else(|e| vec![failed(&e)]);
    Some(Check { id, criterion: *criterion, reports })
}

pub fn run_suite(cfg: &RunConfig) -> Vec<Check> {
    CHECKS.iter().filter_map(|(id, _, _)| run_check(id, cfg)).collect()
}

fn flatten(checks: &[Check]) -> Vec<BoundReport> {
    checks
        .iter()
        .flat_map(|c| {
            c.reports.iter().map(move |r| BoundReport {
                name: format!("{}: {}", c.id, r.name),
                ..r.clone()
            })
        })
        .collect()
}

fn reports_csv(reports: &[BoundReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidInput(e.to_string());
    w.write_record(["name", "computed", "reference", "tolerance", "pass"]).map_err(io)?;
    for r in reports {
        w.write_record([
            r.name.clone(),
            r.computed.to_string(),
            r.reference.to_string(),
            r.tolerance.to_string(),
            r.pass.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
}

pub fn cmd_verify(cfg: &RunConfig) -> CmdOutput {
    let checks = run_suite(cfg);
    let failures: Vec<&Check> = checks.iter().filter(|c| !c.pass()).collect();
    let stdout = match cfg.format {
        Format::Table => {
            let mut s = render_suite(&checks);
            let _ = writeln!(s, "\n{} of {} checks passed", checks.len() - failures.len(), checks.len());
            s
        }
        Format::Json => serde_json::to_string_pretty(&checks).expect("plain data serialises") + "\n",
        Format::Csv => match reports_csv(&flatten(&checks)) {
            Ok(s) => s,
            Err(e) => return CmdOutput::config_error(e),
        },
    };
    let mut stderr = String::new();
    for c in &failures {
        for r in c.reports.iter().filter(|r| !r.pass) {
            let _ = writeln!(stderr, "FAIL {}: {} (computed {}, reference {})", c.id, r.name, r.computed, r.reference);
        }
    }
    CmdOutput {
        stdout,
        stderr,
        code: if failures.is_empty() { 0 } else { 1 },
    }
}

/// Per-check PASS/FAIL header followed by the detail table.
pub fn render_suite(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        let _ = writeln!(s, "{} {}", if c.pass() { "PASS" } else { "FAIL" }, c.id);
    }
    s.push('\n');
    s.push_str(&bounds::render_table(&flatten(checks)));
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantRow {
    pub name: String,
    pub value: f64,
    /// `published`, `derived` or `exact`.
    pub provenance: &'static str,
}

fn constant(name: &str, value: f64, provenance: &'static str) -> ConstantRow {
    ConstantRow { name: name.to_string(), value, provenance }
}

pub fn constants_rows() -> Result<Vec<ConstantRow>> {
    let jackson = kernel_constant(&BandLimitedKernel::jackson())?.value().unwrap_or(f64::NAN);
    let fejer = fejer_argument(bounds::FEJER_DEFAULT_S, bounds::FEJER_DEFAULT_EPSILON)?;
    let mut rows = vec![
        constant("two-sided constant pi/2", two_sided_bound(1.0, 1.0)?, "published"),
        constant("one-sided constant pi", one_sided_bound(1.0, 1.0)?, "published"),
        constant("Jackson constant 12 log 2/pi", 12.0 * 2f64.ln() / PI, "published"),
        constant("Jackson constant (quadrature)", jackson, "derived"),
        constant("Ingham constant", 6.0, "published"),
        constant("K(pi/2)", sharp_kernel(FRAC_PI_2), "exact"),
        constant("Fejer 2 int phi on [-2.35, 5.85]", fejer.first_constant, "derived"),
        constant("Fejer int (8.2-(x+2.35)) phi", fejer.second_constant, "derived"),
        constant("Fejer int phi", fejer.mass, "exact"),
        constant("gamma margin (beta1=1)", bounds::gamma_margin(1.0)?, "derived"),
    ];
    for theta in [1e-3, 50.0] {
        rows.push(constant(&format!("Theta({theta})"), theta_sharpness(theta)?, "derived"));
        rows.push(constant(&format!("(1/theta + pi/2) theta Theta at {theta}"), theta_product(theta)?, "derived"));
    }
    for theta in [0.5, 1.0, 2.0] {
        let (lo, hi) = graham_vaaler_window(theta, 1.0, 1.0)?;
        rows.push(constant(&format!("Graham-Vaaler lower (theta={theta})"), lo, "derived"));
        rows.push(constant(&format!("Graham-Vaaler upper (theta={theta})"), hi, "derived"));
    }
    Ok(rows)
}

pub fn cmd_constants(cfg: &RunConfig) -> CmdOutput {
    let rows = match constants_rows() {
        Ok(r) => r,
        Err(e) => {
            return CmdOutput { stdout: String::new(), stderr: format!("error: {e}\n"), code: 1 };
        }
    };
    let stdout = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("plain data serialises") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut res = w.write_record(["name", "value", "provenance"]);
            for r in &rows {
                res = res.and_then(|_| w.write_record([r.name.clone(), r.value.to_string(), r.provenance.to_string()]));
            }
            match res.map_err(|e| Error::InvalidInput(e.to_string())).and_then(|_| {
                w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))
            }) {
                Ok(b) => String::from_utf8(b).expect("csv writes utf-8"),
                Err(e) => return CmdOutput::config_error(e),
            }
        }
        Format::Table => {
            let w = rows.iter().map(|r| r.name.len()).max().unwrap_or(4);
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(s, "{:<w$}  {:>22.16}  {}", r.name, r.value, r.provenance);
            }
            s
        }
    };
    CmdOutput::ok(stdout)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Theta,
    U,
    Delta,
    H,
}

impl std::str::FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(SweepKind::Theta),
            "u" => Ok(SweepKind::U),
            "delta" => Ok(SweepKind::Delta),
            "h" => Ok(SweepKind::H),
            _ => Err(Error::InvalidInput(format!("unknown sweep `{s}`, expected theta|u|delta|h"))),
        }
    }
}

/// Geometric spacing from `lo` to `hi`, both ends included.
pub fn sweep_points(what: SweepKind, lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be at least 1".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInput(format!("range [{lo}, {hi}] is empty or inverted")));
    }
    if lo <= 0.0 {
        return Err(Error::InvalidInput(format!("{what:?} sweeps need a positive lower end, got {lo}")));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let last = steps - 1;
    let ratio = hi / lo;
    Ok((0..steps)
        .map(|i| if i == last { hi } else { lo * ratio.powf(i as f64 / last as f64) })
        .collect())
}

pub fn sweep(what: SweepKind, lo: f64, hi: f64, steps: usize) -> Result<String> {
    let points = sweep_points(what, lo, hi, steps)?;
    let tau = build_two_sided_extremal();
    let kernel = BandLimitedKernel::sharp();
    let psi = |d: f64| tau.oscillation_modulus(d).unwrap_or(f64::NAN);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidInput(e.to_string());
    w.write_record(["param", "value"]).map_err(io)?;
    for p in points {
        let v = match what {
            SweepKind::Theta => theta_sharpness(p)?,
            SweepKind::U => one_sided_chain(p)?,
            SweepKind::Delta => osc_objective(&psi, 1.0, true, p),
            SweepKind::H => full_convolution(&tau, &kernel, p, 1e-12)?.value,
        };
        w.write_record([p.to_string(), v.to_string()]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
}

pub fn cmd_sweep(what: SweepKind, lo: f64, hi: f64, steps: usize, _cfg: &RunConfig) -> CmdOutput {
    match sweep(what, lo, hi, steps) {
        Ok(s) => CmdOutput::ok(s),
        Err(e) => CmdOutput::config_error(e),
    }
}

pub fn lp_report(shift: u32, s: f64, budget: f64, n: usize) -> Result<serde_json::Value> {
    let cond = check_condition(s, budget);
    if !cond.holds {
        return Err(Error::Precondition(format!(
            "I = {budget} is outside the admissible window [{}, {}] for s = {s}",
            cond.lower, cond.upper
        )));
    }
    let lip = min_over_lipschitz(shift, s, budget, n)?;
    let zig = min_over_zigzag(shift, s, budget)?;
    Ok(serde_json::json!({
        "N": shift,
        "s": s,
        "I": budget,
        "n": n,
        "lipschitz_optimum": lip.objective,
        "lipschitz_status": lip.status,
        "lipschitz_residual": lip.max_residual,
        "zigzag_optimum": zig.value,
        "gap": lip.objective - zig.value,
        "zigzag_c": zig.zigzag.peak_location,
        "zigzag_peak": zig.zigzag.peak_value,
        "zigzag_on_boundary": zig.on_boundary,
    }))
}

pub fn cmd_lp(shift: u32, s: f64, budget: f64, n: usize, _cfg: &RunConfig) -> CmdOutput {
    match lp_report(shift, s, budget, n) {
        Ok(v) => CmdOutput::ok(serde_json::to_string_pretty(&v).expect("plain data serialises") + "\n"),
        Err(e @ Error::Precondition(_)) => CmdOutput { stdout: String::new(), stderr: format!("error: {e}\n"), code: 1 },
        Err(e) => CmdOutput::config_error(e),
    }
}
