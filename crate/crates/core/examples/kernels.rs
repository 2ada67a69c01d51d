//! Kernel values, masses and the `∫|x|φ/∫φ` constants.

use std::f64::consts::PI;

use tauberian::bounds::kernel_mass;
use tauberian::kernels::{extremum_location, kernel_constant, sharp_kernel, BandLimitedKernel, KernelConstant};

fn main() -> tauberian::Result<()> {
    for x in [0.0, 0.5, PI / 2.0, 2.0, 10.0] {
        println!("K({x:.4}) = {:.12}", sharp_kernel(x));
    }
    for k in [BandLimitedKernel::sharp(), BandLimitedKernel::jackson(), BandLimitedKernel::fejer()] {
        let m = kernel_mass(&k, 1e-11)?;
        let c = match kernel_constant(&k)? {
            KernelConstant::Finite(v) => format!("{v:.10}"),
            KernelConstant::Divergent => "divergent".to_string(),
        };
        println!("{:8} mass {:.12} (± {:.1e})  constant {c}", k.name, m.value, m.error_estimate);
    }
    for n in [2, 3, 10, 100] {
        println!("argmax |K(x+Nπ)/K(x)| for N = {n}: {:.10}", extremum_location(n)?);
    }
    Ok(())
}
