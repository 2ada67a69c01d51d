//! Bound reports for the sharp constants and the Fejér kernel constants.

use tauberian::bounds::{
    fejer_argument, graham_vaaler_window, ingham_refined_bound, one_sided_chain, render_table,
    sharpness_witnesses, theta_sharpness, FEJER_DEFAULT_EPSILON, FEJER_DEFAULT_S,
};

fn main() -> tauberian::Result<()> {
    print!("{}", render_table(&sharpness_witnesses()?));
    for theta in [0.01, 0.1, 1.0, 10.0] {
        let big = theta_sharpness(theta)?;
        let (lo, hi) = graham_vaaler_window(theta, 1.0, 1.0)?;
        println!(
            "theta {theta:>5}: Theta {big:.10}  refined {:.10}  window [{lo:.6}, {hi:.6}]",
            ingham_refined_bound(theta, 1.0, big)?
        );
    }
    for u in [0.01, 0.5, 1.0, 3.0] {
        println!("u {u:>4}: pi g(u) = {:.10}", std::f64::consts::PI * one_sided_chain(u)?);
    }
    let f = fejer_argument(FEJER_DEFAULT_S, FEJER_DEFAULT_EPSILON)?;
    println!(
        "Fejér: {:.6} > {:.6}: {}   {:.6} > {:.6}: {}",
        f.first_constant, f.first_threshold, f.first_holds, f.second_constant, f.second_threshold, f.second_holds
    );
    Ok(())
}
