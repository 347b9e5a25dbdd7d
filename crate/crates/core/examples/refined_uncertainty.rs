//! The refined relation `U_x U_y ≥ ¼⟨Jz⟩²` on random states and its
//! comparison with the Robertson product.

use spinmus::random::{ginibre_state, seeded};
use spinmus::spin::{build_ops, DensityState};
use spinmus::uncertainty::report;

fn main() -> spinmus::Result<()> {
    let mut rng = seeded(7);
    println!("{:>5} {:>12} {:>12} {:>12} {:>12}", "2j", "bound", "refined", "robertson", "gap");
    for two_j in 1..=6 {
        let ops = build_ops(two_j)?;
        let state = ginibre_state(ops.j, &mut rng);
        let r = report(&state, &ops)?;
        println!(
            "{two_j:>5} {:>12.6e} {:>12.6e} {:>12.6e} {:>12.3e}",
            r.bound, r.lhs_refined, r.lhs_heisenberg, r.gap
        );
    }

    let ops = build_ops(4)?;
    let mixed = DensityState::maximally_mixed(ops.j);
    let r = report(&mixed, &ops)?;
    println!("maximally mixed j = 2: U_x = {:.3e}, bound = {:.3e}", r.x.u, r.bound);
    Ok(())
}
