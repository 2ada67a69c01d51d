//! Boundary values `G(it)` of the extremal transforms as CSV on stdout.

use tauberian::laplace::{boundary_probe, interior_grid, LaplaceClosedForm};

fn main() -> tauberian::Result<()> {
    let two = LaplaceClosedForm::two_sided();
    let r = boundary_probe(&two, &interior_grid(-0.99, 0.99, 21));
    print!("{}", r.to_csv()?);
    eprintln!("{}: max |G| {:.6} blow-up {}", r.name, r.max_abs, r.blow_up);

    let near: Vec<f64> = [1e-2, 1e-4, 1e-6].iter().map(|e| 1.0 - e).collect();
    let r = boundary_probe(&two, &near);
    for row in &r.rows {
        eprintln!("t = {:.8}: |G| = {:.3e}", row.t, row.value.map_or(f64::NAN, |v| v.norm()));
    }
    let one = LaplaceClosedForm::one_sided();
    let r = boundary_probe(&one, &interior_grid(-3.1, 3.1, 63));
    eprintln!("{}: max |G| {:.6} blow-up {}", r.name, r.max_abs, r.blow_up);
    Ok(())
}
