//! The smoothed one-sided sequence: grid minima and primitive against the profile.

use tauberian::cli::mollifier_test_points;
use tauberian::pwl::{build_one_sided_extremal, mollified_sequence};

fn main() -> tauberian::Result<()> {
    let tau = build_one_sided_extremal();
    let xs = mollifier_test_points();
    for n in [4, 16, 64, 256] {
        let rho = mollified_sequence(n)?;
        let mut worst = 0.0f64;
        for &x in &xs {
            worst = worst.max((rho.primitive(x) - rho.smoothed_profile(&tau, x)?).abs());
        }
        println!("n = {n:>3}: min rho {:+.6}  max |P - psi*tau| {worst:.3e}", rho.grid_min());
    }
    Ok(())
}
