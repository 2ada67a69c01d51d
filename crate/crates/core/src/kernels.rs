//! Band-limited kernels: the extremal kernel `K(x) = 2cos x/(π² − 4x²)`, the
//! Jackson kernel and the Fejér kernel.
//!
//! All three have Fourier transforms supported in `[−1, 1]` (with the convention
//! `φ̂(t) = ∫ φ(x) e^{−ixt} dx`) and 0/0 points in their defining formulas, which
//! are evaluated through short Taylor expansions.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::quadrature::{
    integrate_periodic_tail_with, integrate_with, period_integrals, QuadOptions,
    TailOptions,
};

/// Radius of the Taylor window around removable singularities.
pub const TAYLOR_WINDOW: f64 = 1e-4;

/// `sin u / u` with the 6th-order series inside the Taylor window.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < TAYLOR_WINDOW {
        let u2 = u * u;
        1.0 - u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0))
    } else {
        u.sin() / u
    }
}

/// `K(x) = 2 cos x / (π² − 4x²)`, finite everywhere.
pub fn sharp_kernel(x: f64) -> f64 {
    let u = x.abs() - FRAC_PI_2;
    if u.abs() < TAYLOR_WINDOW {
        sinc(u) / (2.0 * (PI + u))
    } else {
        2.0 * x.cos() / (PI * PI - 4.0 * x * x)
    }
}

pub fn eval_sharp_kernel(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(sharp_kernel(x))
}

/// `K̂(t) = cos(πt/2)` on `|t| ≤ 1`, zero outside.
pub fn sharp_kernel_ft(t: f64) -> f64 {
    if t.abs() <= 1.0 {
        (FRAC_PI_2 * t).cos()
    } else {
        0.0
    }
}

pub fn eval_sharp_kernel_ft(t: f64) -> Result<f64> {
    ensure_finite("t", t)?;
    Ok(sharp_kernel_ft(t))
}

fn spectral_integral(g: impl Fn(f64) -> f64) -> Result<f64> {
    let r = integrate_with(&g, -1.0, 1.0, &[0.0], &QuadOptions::relative(1e-14, 1e-13))?;
    Ok(r.value)
}

/// `K'(x) = −(1/2π) ∫₋₁¹ t sin(xt) cos(πt/2) dt`.
pub fn eval_kernel_derivative(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    let v = spectral_integral(|t| t * (x * t).sin() * (FRAC_PI_2 * t).cos())?;
    Ok(-v / (2.0 * PI))
}

/// `K''(x) = −(1/2π) ∫₋₁¹ t² cos(xt) cos(πt/2) dt`.
pub fn eval_kernel_derivative2(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    let v = spectral_integral(|t| t * t * (x * t).cos() * (FRAC_PI_2 * t).cos())?;
    Ok(-v / (2.0 * PI))
}

/// `e_N = π(−N + √(N² − 1))/2`, written without cancellation.
pub fn extremum_location(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let n = n as f64;
    Ok(-PI / (2.0 * (n + (n * n - 1.0).sqrt())))
}

/// `K(x + Nπ)/K(x)` on the open window `(−π/2, π/2)`.
pub fn eval_ratio(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    ensure_finite("x", x)?;
    if x.abs() >= FRAC_PI_2 {
        return Err(Error::InvalidInput(format!(
            "x = {x} is outside the open window (−π/2, π/2)"
        )));
    }
    let y = x + n as f64 * PI;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * (PI * PI - 4.0 * x * x) / (PI * PI - 4.0 * y * y))
}

/// `∫_x^∞ 2/(4t² − π²) dt`, the integrated majorant of `|K|` beyond `x > π/2`.
pub fn sharp_kernel_tail_majorant(x: f64) -> f64 {
    if x <= FRAC_PI_2 {
        return f64::INFINITY;
    }
    ((2.0 * x + PI) / (2.0 * x - PI)).ln() / (2.0 * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum KernelKind {
    Sharp,
    Jackson,
    Fejer,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandLimitedKernel {
    pub kind: KernelKind,
    pub name: &'static str,
    pub bandlimit: f64,
    pub singular_points: Vec<f64>,
}

impl BandLimitedKernel {
    pub fn sharp() -> Self {
        BandLimitedKernel {
            kind: KernelKind::Sharp,
            name: "sharp",
            bandlimit: 1.0,
            singular_points: vec![-FRAC_PI_2, FRAC_PI_2],
        }
    }

    /// `96 sin⁴(x/4) / (π x⁴)`, unit mass.
    pub fn jackson() -> Self {
        BandLimitedKernel {
            kind: KernelKind::Jackson,
            name: "jackson",
            bandlimit: 1.0,
            singular_points: vec![0.0],
        }
    }

    /// `(sin(x/2) / (x/2))²`, mass 2π.
    pub fn fejer() -> Self {
        BandLimitedKernel {
            kind: KernelKind::Fejer,
            name: "fejer",
            bandlimit: 1.0,
            singular_points: vec![0.0],
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            KernelKind::Sharp => sharp_kernel(x),
            KernelKind::Jackson => {
                if x.abs() < TAYLOR_WINDOW {
                    3.0 / (8.0 * PI) * sinc(0.25 * x).powi(4)
                } else {
                    96.0 * (0.25 * x).sin().powi(4) / (PI * x.powi(4))
                }
            }
            KernelKind::Fejer => sinc(0.5 * x).powi(2),
        }
    }

    pub fn fourier_transform(&self, t: f64) -> f64 {
        let a = t.abs();
        if a > self.bandlimit {
            return 0.0;
        }
        match self.kind {
            KernelKind::Sharp => sharp_kernel_ft(t),
            KernelKind::Jackson => {
                // 3/2 times the autoconvolution of the unit triangle, at 2|t|.
                let v = 2.0 * a;
                let m = if v <= 1.0 {
                    2.0 / 3.0 - v * v + 0.5 * v * v * v
                } else {
                    (2.0 - v).powi(3) / 6.0
                };
                1.5 * m
            }
            KernelKind::Fejer => 2.0 * PI * (1.0 - a),
        }
    }

    /// `∫ φ`, equal to the Fourier transform at the origin.
    pub fn mass(&self) -> f64 {
        self.fourier_transform(0.0)
    }

    /// Period of the oscillating factor in the tail of the kernel.
    pub fn oscillation_period(&self) -> f64 {
        match self.kind {
            KernelKind::Sharp | KernelKind::Fejer => 2.0 * PI,
            KernelKind::Jackson => 4.0 * PI,
        }
    }

    /// Zeros of the kernel reduced modulo the oscillation period.
    pub fn zeros_mod_period(&self) -> Vec<f64> {
        match self.kind {
            KernelKind::Sharp => vec![FRAC_PI_2, 1.5 * PI],
            KernelKind::Jackson | KernelKind::Fejer => vec![0.0],
        }
    }

    /// Offsets of the kernel zeros inside a period that begins at `start`.
    pub fn tail_breaks(&self, start: f64) -> Vec<f64> {
        let p = self.oscillation_period();
        self.zeros_mod_period()
            .into_iter()
            .map(|z| (z - start).rem_euclid(p))
            .collect()
    }

    /// Half-width of the region containing the singular points and the central lobe.
    pub fn core_radius(&self) -> f64 {
        match self.kind {
            KernelKind::Sharp => 1.5 * PI,
            KernelKind::Jackson => 4.0 * PI,
            KernelKind::Fejer => 2.0 * PI,
        }
    }
}

/// Either a finite constant or the marker for a divergent moment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum KernelConstant {
    Finite(f64),
    Divergent,
}

impl KernelConstant {
    pub fn value(self) -> Option<f64> {
        match self {
            KernelConstant::Finite(v) => Some(v),
            KernelConstant::Divergent => None,
        }
    }
}

/// `∫|xφ(x)| dx / ∫φ`, or [`KernelConstant::Divergent`] when `|xφ|` decays like `1/|x|`.
pub fn kernel_constant(kernel: &BandLimitedKernel) -> Result<KernelConstant> {
    let moment = |x: f64| (x * kernel.eval(x)).abs();
    let two_pi = 2.0 * PI;
    let zeros: Vec<f64> = kernel
        .zeros_mod_period()
        .iter()
        .map(|z| z.rem_euclid(two_pi))
        .collect();
    let opts = QuadOptions::relative(1e-300, 1e-12);
    let probe = |k: usize| -> Result<f64> {
        let a = two_pi * k as f64;
        Ok(period_integrals(&moment, a, two_pi, &zeros, 1, &opts)?[0].value)
    };
    let first = probe(1)?;
    let k = 50;
    if probe(k)? >= first / k as f64 {
        return Ok(KernelConstant::Divergent);
    }

    let start = kernel.core_radius();
    let core = integrate_with(&moment, 0.0, start, &[], &QuadOptions::relative(1e-14, 1e-13))?;
    let tail = integrate_periodic_tail_with(
        &moment,
        start,
        kernel.oscillation_period(),
        &TailOptions::with_breaks(1e-11, &kernel.tail_breaks(start)),
    )?;
    Ok(KernelConstant::Finite(
        2.0 * (core.value + tail.value) / kernel.mass(),
    ))
}

/// `(1/2π) ∫₀^{π/2} (π − 2x) cos x / (mπ ± 2x) dx`, the building block of the
/// period-by-period evaluation of `∫ K α`.
pub fn alpha_piece(m: i64, plus: bool) -> Result<f64> {
    match (m, plus) {
        (1, false) => return Ok(1.0 / (2.0 * PI)),
        (-1, true) => return Ok(-1.0 / (2.0 * PI)),
        _ => {}
    }
    let mf = m as f64;
    let sign = if plus { 1.0 } else { -1.0 };
    let den_min = (mf * PI).abs().min((mf * PI + sign * PI).abs());
    if den_min == 0.0 {
        return Err(Error::InvalidInput(format!(
            "denominator vanishes inside the window for m = {m}"
        )));
    }
    let g = |x: f64| (PI - 2.0 * x) * x.cos() / (mf * PI + sign * 2.0 * x);
    let r = integrate_with(&g, 0.0, FRAC_PI_2, &[], &QuadOptions::relative(1e-16, 1e-13))?;
    Ok(r.value / (2.0 * PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TelescopedSum {
    /// `∫₀^{2πM} K α` assembled from the telescoped pieces.
    pub partial: f64,
    /// Value of the full sum, `∫₀^∞ K α`.
    pub limit: f64,
    /// `∫_{2πM}^∞ K α`, equal to `limit − partial`.
    pub remainder: f64,
    /// Closed-form bound on `|remainder|`.
    pub remainder_bound: f64,
}

/// Sum of `∫ K α` over the first `periods` periods of `α` on `(0, ∞)`.
///
/// Splitting each period into four quarter-periods and shifting each piece to
/// `[0, π/2]` makes consecutive periods cancel, leaving two boundary terms at
/// each end.
pub fn alpha_telescoped_sum(periods: usize) -> Result<TelescopedSum> {
    if periods == 0 {
        return Err(Error::InvalidInput("at least one period is required".into()));
    }
    let m = periods as i64;
    let limit = -alpha_piece(-1, true)? - alpha_piece(1, false)?;
    let tail_terms = alpha_piece(4 * m - 1, true)? + alpha_piece(4 * m + 1, false)?;
    let partial = tail_terms + limit;
    // |piece(m, ±)| ≤ 2/(2π · (m − 1)π) since ∫₀^{π/2} (π − 2x) cos x dx = 2.
    let bound = |k: i64| 1.0 / (PI * PI * (k as f64 - 1.0));
    Ok(TelescopedSum {
        partial,
        limit,
        remainder: limit - partial,
        remainder_bound: bound(4 * m - 1) + bound(4 * m + 1),
    })
}

/// `∫_{−π/2}^{π/2} K`.
pub fn window_mass() -> Result<f64> {
    Ok(integrate_with(&sharp_kernel, -FRAC_PI_2, FRAC_PI_2, &[], &QuadOptions::relative(1e-15, 1e-13))?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    #[test]
    fn sharp_kernel_values() {
        assert!((sharp_kernel(0.0) - 2.0 / (PI * PI)).abs() < 1e-16);
        assert!((sharp_kernel(FRAC_PI_2) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((sharp_kernel(-FRAC_PI_2) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!(eval_sharp_kernel(f64::NAN).is_err());
    }

    #[test]
    fn taylor_window_is_seamless() {
        for &d in &[0.99e-4, 1.01e-4, 3e-5, 1e-6] {
            for &s in &[-1.0, 1.0] {
                let x = FRAC_PI_2 + s * d;
                // Two-term series in u = |x| − π/2 around the limit value.
                let u = x - FRAC_PI_2;
                let series = (1.0 - u * u / 6.0) / (2.0 * (PI + u));
                assert!((sharp_kernel(x) - series).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kernels_are_even() {
        let kernels = [
            BandLimitedKernel::sharp(),
            BandLimitedKernel::jackson(),
            BandLimitedKernel::fejer(),
        ];
        for k in &kernels {
            for i in 0..500 {
                let x = -40.0 + 0.1618 * i as f64;
                assert_eq!(k.eval(x), k.eval(-x), "{} at {x}", k.name);
            }
        }
    }

    #[test]
    fn fourier_transforms_vanish_outside_band() {
        for k in [
            BandLimitedKernel::sharp(),
            BandLimitedKernel::jackson(),
            BandLimitedKernel::fejer(),
        ] {
            assert_eq!(k.fourier_transform(1.0001), 0.0);
            assert_eq!(k.fourier_transform(-2.0), 0.0);
            assert!(k.fourier_transform(1.0).abs() < 1e-15);
        }
        assert_eq!(sharp_kernel_ft(0.0), 1.0);
    }

    #[test]
    fn jackson_transform_at_interior_frequency() {
        // ∫ φ(x) cos(tx) dx with t = 3/4; the product has period 8π.
        let k = BandLimitedKernel::jackson();
        let t = 0.75;
        let g = |x: f64| k.eval(x) * (t * x).cos();
        let core = integrate(&g, 0.0, 8.0 * PI, &[], 1e-14).unwrap().value;
        let tail = integrate_periodic_tail_with(&g, 8.0 * PI, 8.0 * PI, &TailOptions::default())
            .unwrap()
            .value;
        assert!((2.0 * (core + tail) - k.fourier_transform(t)).abs() < 1e-10);
    }

    #[test]
    fn derivatives_negative_on_half_window() {
        for i in 1..50 {
            let x = FRAC_PI_2 * i as f64 / 50.0;
            assert!(eval_kernel_derivative(x).unwrap() < 0.0);
            assert!(eval_kernel_derivative2(x).unwrap() < 0.0);
        }
        let x = 0.7;
        assert_eq!(eval_kernel_derivative2(x).unwrap(), eval_kernel_derivative2(-x).unwrap());
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        for &x in &[0.2, 0.9, 1.3, 2.5] {
            let h = 1e-5;
            let fd = (sharp_kernel(x + h) - sharp_kernel(x - h)) / (2.0 * h);
            assert!((eval_kernel_derivative(x).unwrap() - fd).abs() < 1e-9);
            let fd2 = (sharp_kernel(x + 1e-4) - 2.0 * sharp_kernel(x) + sharp_kernel(x - 1e-4)) / 1e-8;
            assert!((eval_kernel_derivative2(x).unwrap() - fd2).abs() < 1e-6);
        }
    }

    #[test]
    fn extremum_locations() {
        assert_eq!(extremum_location(1).unwrap(), -FRAC_PI_2);
        let e2 = extremum_location(2).unwrap();
        assert!((e2 - PI * (-2.0 + 3f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((e2 + 0.42087).abs() < 1e-4);
        for n in 2..200 {
            let e = extremum_location(n).unwrap();
            assert!(e < 0.0 && e > -PI / (4.0 * n as f64 - 2.0));
        }
        assert!(extremum_location(0).is_err());
    }

    #[test]
    fn ratio_matches_kernel_quotient() {
        for n in 1..6 {
            for i in 1..40 {
                let x = -FRAC_PI_2 + PI * i as f64 / 40.0;
                let direct = sharp_kernel(x + n as f64 * PI) / sharp_kernel(x);
                assert!((eval_ratio(n, x).unwrap() - direct).abs() < 1e-13 * direct.abs().max(1e-3));
            }
            let at_zero = sharp_kernel(n as f64 * PI) * PI * PI / 2.0;
            assert!((eval_ratio(n, 0.0).unwrap() - at_zero).abs() < 1e-15);
        }
        assert!(eval_ratio(2, FRAC_PI_2).is_err());
    }

    #[test]
    fn majorant_dominates_kernel() {
        for i in 0..100 {
            let x = FRAC_PI_2 + 0.05 + 0.37 * i as f64;
            assert!(sharp_kernel(x).abs() <= 2.0 / (4.0 * x * x - PI * PI) + 1e-16);
        }
        let x: f64 = 50.0;
        let direct = integrate_with(
            &|t: f64| 2.0 / (4.0 * t * t - PI * PI),
            x,
            1e6,
            &[],
            &QuadOptions::relative(1e-14, 1e-13),
        )
        .unwrap()
        .value
            + 2.0 / (4.0 * 1e6);
        assert!((sharp_kernel_tail_majorant(x) - direct).abs() < 1e-9);
    }

    #[test]
    fn jackson_constant() {
        let c = kernel_constant(&BandLimitedKernel::jackson()).unwrap();
        let v = c.value().unwrap();
        assert!((v - 12.0 * 2f64.ln() / PI).abs() < 1e-8, "{v}");
        assert!(v < 6.0);
    }

    #[test]
    fn slowly_decaying_moments_are_divergent() {
        assert_eq!(kernel_constant(&BandLimitedKernel::sharp()).unwrap(), KernelConstant::Divergent);
        assert_eq!(kernel_constant(&BandLimitedKernel::fejer()).unwrap(), KernelConstant::Divergent);
    }

    #[test]
    fn telescoped_alpha_pieces() {
        let t = alpha_telescoped_sum(100).unwrap();
        assert!(t.limit.abs() < 1e-15);
        assert!(t.remainder.abs() <= t.remainder_bound);
        let t2 = alpha_telescoped_sum(200).unwrap();
        assert!(t2.remainder.abs() < t.remainder.abs());
    }
}
