//! `∫_{π/2}^∞ |K|` by periodic summation, next to the plain partial sums.

use std::f64::consts::{FRAC_PI_2, PI};

use tauberian::kernels::{sharp_kernel, BandLimitedKernel};
use tauberian::quadrature::{integrate_periodic_tail_with, TailOptions};

fn main() -> tauberian::Result<()> {
    let k = BandLimitedKernel::sharp();
    let f = |x: f64| sharp_kernel(x).abs();
    for tol in [1e-6, 1e-9, 1e-11] {
        let t = integrate_periodic_tail_with(&f, FRAC_PI_2, 2.0 * PI, &TailOptions::with_breaks(tol, &k.tail_breaks(FRAC_PI_2)))?;
        println!(
            "tol {tol:.0e}: extrapolated {:.14}  partial over {} periods {:.14}  est {:.1e}",
            t.value, t.periods, t.truncated_sum, t.error_estimate
        );
    }
    Ok(())
}
