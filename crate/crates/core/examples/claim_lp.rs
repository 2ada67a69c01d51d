//! The infeasibility LP, with and without the balance row.

use tauberian::extremal_opt::claim_infeasibility;

fn main() -> tauberian::Result<()> {
    for n in [101, 201, 401] {
        let v = claim_infeasibility(n)?;
        println!(
            "n = {n}: balanced {:?} {:?}  relaxed {:?} {:?}  infeasible {} relaxation positive {}",
            v.status, v.optimum, v.relaxed_status, v.relaxed_optimum, v.infeasible, v.relaxation_positive
        );
    }
    Ok(())
}
