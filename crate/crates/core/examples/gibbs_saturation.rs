//! Gibbs states `ρ ∝ s'^{2(j−Jz)}` saturate the refined relation for every
//! weight `s'`, including negative ones.

use spinmus::families::{gibbs_weights, verify_family, MusFamily};
use spinmus::spin::{build_ops, TwoJ};

fn main() -> spinmus::Result<()> {
    let j = TwoJ::new(2)?;
    let w = gibbs_weights(j, 0.5);
    println!("j = 1, s' = 0.5: weights (m = −1, 0, 1) = {:?} · 1/21", w.iter().map(|x| x * 21.0).collect::<Vec<_>>());

    for two_j in [1, 4, 7] {
        let ops = build_ops(two_j)?;
        for sp in [-2.0, -0.5, 0.1, 0.9, 5.0] {
            let rep = verify_family(&MusFamily::gibbs(ops.j, sp), &ops)?;
            println!(
                "2j = {two_j}, s' = {sp:+.1}: gap = {:+.2e}, residuals = ({:.1e}, {:.1e}), saturated = {}",
                rep.gap, rep.residual_a, rep.residual_b, rep.saturated
            );
        }
    }
    Ok(())
}
