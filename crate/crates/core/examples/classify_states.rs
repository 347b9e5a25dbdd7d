//! Sorting states into non-saturating, pure and rotated-Gibbs classes.

use spinmus::families::{classify, classify_with_rotation, rotated_gibbs};
use spinmus::random::{ginibre_state, seeded};
use spinmus::spin::{build_ops, coherent_state, rotation, DensityState};
use spinmus::numerics::Complex;

fn main() -> spinmus::Result<()> {
    let ops = build_ops(4)?;
    let r = rotation(&ops, [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2, 0.0], 0.9)?;
    let cases: Vec<(&str, DensityState)> = vec![
        ("random", ginibre_state(ops.j, &mut seeded(3))),
        ("coherent", coherent_state(ops.j, Complex::new(0.0, 0.0))?.to_density()),
        ("gibbs", rotated_gibbs(ops.j, 0.4, &spinmus::numerics::CMat::identity(5))?),
        ("maximally mixed", DensityState::maximally_mixed(ops.j)),
    ];
    for (name, state) in &cases {
        let c = classify(state, &ops)?;
        println!("{name:>16}: {:?}, purity {:.4}, fit {:?}", c.outcome, c.purity, c.gibbs_fit);
    }
    let tilted = rotated_gibbs(ops.j, 0.4, &r)?;
    println!("tilted Gibbs, fixed frame: {:?}", classify(&tilted, &ops)?.outcome);
    println!("tilted Gibbs, undone rotation: {:?}", classify_with_rotation(&tilted, &ops, &r)?.outcome);
    Ok(())
}
