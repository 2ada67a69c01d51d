//! Lipschitz LP optimum against the zig-zag optimum for a few instances.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tauberian::extremal_opt::{min_over_lipschitz, min_over_zigzag, random_instance};

fn main() -> tauberian::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    println!("{:>2} {:>9} {:>9} {:>14} {:>14} {:>10} {:>8}", "N", "s", "I", "LP", "zig-zag", "gap", "boundary");
    for _ in 0..8 {
        let (n, s, budget) = random_instance(&mut rng);
        let lp = min_over_lipschitz(n, s, budget, 401)?;
        let zz = min_over_zigzag(n, s, budget)?;
        println!(
            "{n:>2} {s:>9.5} {budget:>9.5} {:>14.10} {:>14.10} {:>10.2e} {:>8}",
            lp.objective,
            zz.value,
            lp.objective - zz.value,
            zz.on_boundary
        );
    }
    Ok(())
}
