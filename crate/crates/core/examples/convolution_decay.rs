//! `(τ ∗ K)(h)` for the two-sided example as `h` grows geometrically.

use tauberian::bounds::full_convolution;
use tauberian::kernels::BandLimitedKernel;
use tauberian::pwl::build_two_sided_extremal;

fn main() -> tauberian::Result<()> {
    let tau = build_two_sided_extremal();
    let k = BandLimitedKernel::sharp();
    let mut h = 12.5;
    while h <= 400.0 {
        let r = full_convolution(&tau, &k, h, 1e-12)?;
        println!("h = {h:>6.1}: {:+.10}  (± {:.1e})", r.value, r.error_estimate);
        h *= 2.0;
    }
    Ok(())
}
