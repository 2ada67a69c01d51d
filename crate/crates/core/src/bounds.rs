//! Tauberian constants, their sharpness witnesses, and convolutions of
//! piecewise-linear functions with band-limited kernels.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::kernels::{sharp_kernel, sinc, BandLimitedKernel, KernelKind};
use crate::pwl::{build_alpha, build_gamma, Extension, PiecewiseLinear};
use crate::quadrature::{
    integrate_periodic_tail_with, integrate_with, QuadOptions, QuadratureResult, TailOptions,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub computed: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl BoundReport {
    pub fn new(name: &str, computed: f64, reference: f64, tolerance: f64) -> Self {
        BoundReport {
            name: name.to_string(),
            computed,
            reference,
            tolerance,
            pass: (computed - reference).abs() <= tolerance,
        }
    }
}

pub fn reports_to_json(reports: &[BoundReport]) -> String {
    serde_json::to_string_pretty(reports).expect("plain data serialises")
}

/// Aligned plain-text table of reports.
pub fn render_table(reports: &[BoundReport]) -> String {
    let w = reports.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let mut s = format!(
        "{:<w$}  {:>22}  {:>22}  {:>9}  {}\n",
        "name", "computed", "reference", "tol", "pass"
    );
    for r in reports {
        let _ = writeln!(
            s,
            "{:<w$}  {:>22.16}  {:>22.16}  {:>9.1e}  {}",
            r.name,
            r.computed,
            r.reference,
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    s
}

fn check_m(m: f64) -> Result<()> {
    if !(m.is_finite() && m >= 0.0) {
        return Err(Error::InvalidInput(format!("M must be non-negative, got {m}")));
    }
    Ok(())
}

/// `πM/(2λ)`.
pub fn two_sided_bound(lambda: f64, m: f64) -> Result<f64> {
    ensure_positive("λ", lambda)?;
    check_m(m)?;
    Ok(PI * m / (2.0 * lambda))
}

/// `πM/λ`.
pub fn one_sided_bound(lambda: f64, m: f64) -> Result<f64> {
    ensure_positive("λ", lambda)?;
    check_m(m)?;
    Ok(PI * m / lambda)
}

/// `(1 + π/(2δλ))ψ(δ)` for two-sided conditions, `(1 + π/(δλ))ψ(δ)` otherwise.
pub fn osc_objective(psi: &dyn Fn(f64) -> f64, lambda: f64, two_sided: bool, delta: f64) -> f64 {
    let c = if two_sided { PI / 2.0 } else { PI };
    let p = psi(delta);
    if p == 0.0 {
        return 0.0;
    }
    (1.0 + c / (delta * lambda)) * p
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscBound {
    pub value: f64,
    pub delta: f64,
}

pub const OSC_DELTA_MIN: f64 = 1e-4;
pub const OSC_DELTA_MAX: f64 = 1e2;
pub const SCAN_POINTS_PER_DECADE: usize = 400;

/// `inf_δ` of [`osc_objective`]: a log-grid scan over `[1e−4, 1e2]` refined by
/// golden-section search around the best grid point.
pub fn osc_bound(psi: &dyn Fn(f64) -> f64, lambda: f64, two_sided: bool) -> Result<OscBound> {
    ensure_positive("λ", lambda)?;
    let obj = |d: f64| osc_objective(psi, lambda, two_sided, d);
    let decades = (OSC_DELTA_MAX / OSC_DELTA_MIN).log10();
    let n = (decades * SCAN_POINTS_PER_DECADE as f64).round() as usize;
    let grid: Vec<f64> = (0..=n)
        .map(|i| OSC_DELTA_MIN * 10f64.powf(decades * i as f64 / n as f64))
        .collect();
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for (i, &d) in grid.iter().enumerate() {
        let v = obj(d);
        if v < best_v {
            best_v = v;
            best = i;
        }
    }
    if !best_v.is_finite() {
        return Ok(OscBound {
            value: f64::INFINITY,
            delta: f64::NAN,
        });
    }
    let lo = grid[best.saturating_sub(1)].ln();
    let hi = grid[(best + 1).min(n)].ln();
    let (d, v) = golden_section(&|t: f64| obj(t.exp()), lo, hi, 1e-10);
    if v < best_v {
        Ok(OscBound {
            value: v,
            delta: d.exp(),
        })
    } else {
        Ok(OscBound {
            value: best_v,
            delta: grid[best],
        })
    }
}

/// Golden-section minimisation on `[a, b]` down to relative width `rel`.
pub fn golden_section(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, rel: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..500 {
        if (b - a).abs() <= rel * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `(1 + θπ/(2λ))Θ`.
pub fn ingham_refined_bound(theta: f64, lambda: f64, big_theta: f64) -> Result<f64> {
    ensure_positive("θ", theta)?;
    ensure_positive("λ", lambda)?;
    if !(big_theta.is_finite() && big_theta >= 0.0) {
        return Err(Error::InvalidInput(format!("Θ must be non-negative, got {big_theta}")));
    }
    Ok((1.0 + theta * PI / (2.0 * lambda)) * big_theta)
}

/// `Θ(θ) = (e^{πθ} − 1)/(θ(1 + e^{πθ})) = tanh(πθ/2)/θ`.
pub fn theta_sharpness(theta: f64) -> Result<f64> {
    ensure_positive("θ", theta)?;
    if theta < 1e-4 {
        // tanh(y)/y = 1 − y²/3 + 2y⁴/15
        let y = FRAC_PI_2 * theta;
        let y2 = y * y;
        return Ok(FRAC_PI_2 * (1.0 - y2 / 3.0 + 2.0 * y2 * y2 / 15.0));
    }
    Ok((FRAC_PI_2 * theta).tanh() / theta)
}

fn chain_ratio(u: f64) -> f64 {
    if u < 1e-2 {
        // (u − 1 + e^{−u})/(u(1 − e^{−u})) as a ratio of two power series.
        let mut num = 0.0;
        let mut den = 0.0;
        let mut term = 1.0; // (−u)^k / k!
        for k in 0..14 {
            if k >= 2 {
                num += term;
            }
            if k >= 1 {
                den -= term;
            }
            term *= -u / (k as f64 + 1.0);
        }
        let q = num / (u * u);
        let d = den / u;
        return q / d;
    }
    (u + (-u).exp_m1()) / (u * -(-u).exp_m1())
}

/// `g(u) = (1 + u/4)·2(ue^u − e^u + 1)/(u(e^u − 1))`.
pub fn one_sided_chain(u: f64) -> Result<f64> {
    ensure_positive("u", u)?;
    Ok((1.0 + 0.25 * u) * 2.0 * chain_ratio(u))
}

/// `(v/(e^v − 1)·M/θ, v/(1 − e^{−v})·M/θ)` with `v = 2πθ/λ`.
pub fn graham_vaaler_window(theta: f64, lambda: f64, m: f64) -> Result<(f64, f64)> {
    ensure_positive("θ", theta)?;
    ensure_positive("λ", lambda)?;
    check_m(m)?;
    let v = 2.0 * PI * theta / lambda;
    let lower = v / v.exp_m1() * m / theta;
    let upper = v / -(-v).exp_m1() * m / theta;
    Ok((lower, upper))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FejerReport {
    pub s: f64,
    pub epsilon: f64,
    /// `2∫_{−2.35}^{5.85} φ`.
    pub first_constant: f64,
    /// `∫_{−2.35}^{5.85} (8.2 − (x + 2.35))φ`.
    pub second_constant: f64,
    /// `∫ℝ φ`.
    pub mass: f64,
    pub first_threshold: f64,
    pub second_threshold: f64,
    pub first_holds: bool,
    pub second_holds: bool,
}

pub const FEJER_DEFAULT_S: f64 = 4.2;
pub const FEJER_DEFAULT_EPSILON: f64 = 0.001;

pub fn fejer_argument(s: f64, epsilon: f64) -> Result<FejerReport> {
    ensure_finite("S", s)?;
    ensure_positive("ε", epsilon)?;
    if s <= 4.1 {
        return Err(Error::InvalidInput(format!("S = {s} must exceed 4.1")));
    }
    let k = BandLimitedKernel::fejer();
    let phi = |x: f64| k.eval(x);
    let q = QuadOptions::relative(1e-14, 1e-13);
    let (a, b) = (-2.35, 5.85);
    let first = 2.0 * integrate_with(&phi, a, b, &[0.0], &q)?.value;
    let second = integrate_with(&|x| (8.2 - (x + 2.35)) * phi(x), a, b, &[0.0], &q)?.value;
    let mass = kernel_mass(&k, 1e-11)?.value;
    let first_threshold = 2.0 * PI * (1.0 + epsilon / (s - 4.1));
    let second_threshold = 4.1 * 2.0 * PI + epsilon;
    Ok(FejerReport {
        s,
        epsilon,
        first_constant: first,
        second_constant: second,
        mass,
        first_threshold,
        second_threshold,
        first_holds: first > first_threshold,
        second_holds: second > second_threshold,
    })
}

fn kernel_breaks_mod(kernel: &BandLimitedKernel, start: f64, period: f64) -> Vec<f64> {
    let pk = kernel.oscillation_period();
    let copies = (period / pk).round().max(1.0) as usize;
    let mut out = Vec::new();
    for off in kernel.tail_breaks(start) {
        for j in 0..copies {
            out.push(off + j as f64 * pk);
        }
    }
    out
}

/// `∫_start^∞ kernel`.
fn kernel_tail(kernel: &BandLimitedKernel, start: f64, tol: f64) -> Result<QuadratureResult> {
    let f = |x: f64| kernel.eval(x);
    let p = kernel.oscillation_period();
    let opts = TailOptions::with_breaks(tol, &kernel.tail_breaks(start));
    Ok(integrate_periodic_tail_with(&f, start, p, &opts)?.result())
}

/// `∫ℝ kernel` from the core and the two tails.
pub fn kernel_mass(kernel: &BandLimitedKernel, tol: f64) -> Result<QuadratureResult> {
    let r = kernel.core_radius();
    let f = |x: f64| kernel.eval(x);
    let core = integrate_with(&f, 0.0, r, &kernel.singular_points, &QuadOptions::relative(tol / 4.0, 1e-13))?;
    let tail = kernel_tail(kernel, r, tol / 4.0)?;
    Ok((core + tail).scaled(2.0))
}

/// Smallest common period of `a` and `b`, if one exists with multipliers up to 64.
pub fn common_period(a: f64, b: f64) -> Option<f64> {
    for i in 1..=64u32 {
        let x = a * i as f64;
        let j = (x / b).round();
        if j >= 1.0 && (x - j * b).abs() <= 1e-12 * x {
            return Some(x);
        }
    }
    None
}

/// `∫_{−π/2}^{π/2} f(x + y) K(x) dx`.
pub fn windowed_convolution(f: &PiecewiseLinear, kernel: &BandLimitedKernel, y: f64) -> Result<f64> {
    ensure_finite("y", y)?;
    let mut cuts: Vec<f64> = f
        .breakpoints_in(y - FRAC_PI_2, y + FRAC_PI_2)
        .into_iter()
        .map(|b| b - y)
        .collect();
    cuts.extend(kernel.singular_points.iter().copied());
    let g = |x: f64| f.eval(x + y) * kernel.eval(x);
    Ok(integrate_with(&g, -FRAC_PI_2, FRAC_PI_2, &cuts, &QuadOptions::relative(1e-14, 1e-12))?.value)
}

fn side_tail(
    g: &dyn Fn(f64) -> f64,
    kernel: &BandLimitedKernel,
    start: f64,
    f_period: f64,
    f_breaks: Vec<f64>,
    tol: f64,
) -> Result<QuadratureResult> {
    let pk = kernel.oscillation_period();
    let p = common_period(f_period, pk).ok_or_else(|| {
        Error::InvalidInput(format!(
            "tail period {f_period} is not commensurate with the kernel period {pk}"
        ))
    })?;
    let mut breaks = kernel_breaks_mod(kernel, start, p);
    breaks.extend(f_breaks);
    let opts = TailOptions::with_breaks(tol, &breaks);
    Ok(integrate_periodic_tail_with(g, start, p, &opts)?.result())
}

/// `∫ℝ f(x + h) K(x) dx`: adaptive quadrature on a core interval plus both
/// tails by periodic summation with extrapolation.
pub fn full_convolution(
    f: &PiecewiseLinear,
    kernel: &BandLimitedKernel,
    h: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    ensure_finite("h", h)?;
    ensure_positive("tol", tol)?;
    let r = kernel.core_radius();
    let t_r = r.max(f.x_last() - h);
    let t_l = r.max(h - f.x_first());
    let part = tol / 3.0;

    let g = |x: f64| f.eval(x + h) * kernel.eval(x);
    let mut cuts: Vec<f64> = f
        .breakpoints_in(h - t_l, h + t_r)
        .into_iter()
        .map(|b| b - h)
        .collect();
    cuts.extend(kernel.singular_points.iter().copied());
    let core = integrate_with(&g, -t_l, t_r, &cuts, &QuadOptions::relative(part, 1e-12))?;

    let right = match f.right_extension() {
        Extension::Constant => {
            let c = f.eval(f.x_last());
            if c == 0.0 {
                QuadratureResult::ZERO
            } else {
                kernel_tail(kernel, t_r, part / c.abs())?.scaled(c)
            }
        }
        Extension::Periodic(p) => {
            let x0 = t_r + h;
            let pl = common_period(p, kernel.oscillation_period()).unwrap_or(p);
            let fb = f.breakpoints_in(x0, x0 + pl).into_iter().map(|b| b - x0).collect();
            side_tail(&g, kernel, t_r, p, fb, part)?
        }
    };

    // ∫_{−∞}^{−T} f(x + h)K(x) dx = ∫_T^∞ f(h − u)K(u) du, K even.
    let g_left = |u: f64| f.eval(h - u) * kernel.eval(u);
    let left = match f.left_extension() {
        Extension::Constant => {
            let c = f.eval(f.x_first() - 1.0);
            if c == 0.0 {
                QuadratureResult::ZERO
            } else {
                kernel_tail(kernel, t_l, part / c.abs())?.scaled(c)
            }
        }
        Extension::Periodic(p) => {
            let pl = common_period(p, kernel.oscillation_period()).unwrap_or(p);
            let fb = f
                .breakpoints_in(h - t_l - pl, h - t_l)
                .into_iter()
                .map(|b| h - b - t_l)
                .collect();
            side_tail(&g_left, kernel, t_l, p, fb, part)?
        }
    };
    let total = core + right + left;
    if total.error_estimate > tol {
        return Err(Error::NotConverged {
            value: total.value,
            error_estimate: total.error_estimate,
            subdivisions: total.subdivisions,
        });
    }
    Ok(total)
}

// cos x/(π² − 4x²) without the 0/0 at x = π/2.
fn damped_cos(x: f64) -> f64 {
    let u = FRAC_PI_2 - x;
    // cos x = sin u and π − 2x = 2u.
    0.5 * sinc(u) / (PI + 2.0 * x)
}

/// `48πβ₁ ∫₀^{π/2} x cos x /((π² − 4x²)(9π² − 4x²)) dx`.
pub fn gamma_margin(beta1: f64) -> Result<f64> {
    ensure_positive("β₁", beta1)?;
    let f = |x: f64| x * damped_cos(x) / (9.0 * PI * PI - 4.0 * x * x);
    let v = integrate_with(&f, 0.0, FRAC_PI_2, &[], &QuadOptions::relative(1e-16, 1e-13))?.value;
    Ok(48.0 * PI * beta1 * v)
}

/// `∫_{π/2}^{3π/2} (γ − γ̃)K` with `γ` from [`build_gamma`] (`β₀ = β₁`) and
/// `γ̃ = α + β₁ sign α`.
pub fn gamma_margin_direct(beta1: f64) -> Result<f64> {
    let gamma = build_gamma(beta1, beta1)?;
    let alpha = build_alpha();
    let tilde = |x: f64| {
        let a = alpha.eval(x);
        a + if a >= 0.0 { beta1 } else { -beta1 }
    };
    let g = |x: f64| (gamma.eval(x) - tilde(x)) * sharp_kernel(x);
    let opts = QuadOptions::relative(1e-15, 1e-13);
    Ok(integrate_with(&g, FRAC_PI_2, 1.5 * PI, &[PI], &opts)?.value)
}

/// Reports comparing the extremal examples' tail suprema with the bounds.
pub fn sharpness_witnesses() -> Result<Vec<BoundReport>> {
    let two = crate::pwl::build_two_sided_extremal();
    let one = crate::pwl::build_one_sided_extremal();
    Ok(vec![
        BoundReport::new("two_sided_bound(1,1) vs tail sup", two_sided_bound(1.0, 1.0)?, two.tail_sup_abs(), 0.0),
        BoundReport::new("one_sided_bound(pi,1) vs tail sup", one_sided_bound(PI, 1.0)?, one.tail_sup_abs(), 0.0),
    ])
}

/// The kernel's constant `∫|xφ|/∫φ` reported against a reference where one exists.
pub fn kernel_constant_reference(kind: KernelKind) -> Option<f64> {
    match kind {
        KernelKind::Jackson => Some(12.0 * 2f64.ln() / PI),
        _ => None,
    }
}
