//! Text round trip and the moduli of continuity of the extremal examples.

use tauberian::pwl::{build_one_sided_extremal, build_two_sided_extremal, PiecewiseLinear};

fn main() -> tauberian::Result<()> {
    let two = build_two_sided_extremal();
    let text = two.to_text();
    print!("{text}");
    assert_eq!(PiecewiseLinear::from_text(&text)?, two);

    let one = build_one_sided_extremal();
    println!("one-sided jumps in [0, 6): {:?}", one.jumps().iter().filter(|j| j.0 < 6.0).collect::<Vec<_>>());
    println!("{:>8} {:>12} {:>12} {:>12}", "delta", "psi two", "psi one", "decr one");
    for d in [0.01, 0.1, 0.5, 1.0, 2.0, 4.0] {
        println!(
            "{d:>8.2} {:>12.6} {:>12.6} {:>12.6}",
            two.oscillation_modulus(d)?,
            one.oscillation_modulus(d)?,
            one.decrease_modulus(d)?
        );
    }
    Ok(())
}
