//! The four structural lemmas of the recurrence, checked at sampled
//! coefficients.

use spinmus::numerics::Complex;
use spinmus::recurrence::{check_lemma1, check_lemma2_parity, check_lemma3, check_lemma4};
use spinmus::spin::TwoJ;

fn main() -> spinmus::Result<()> {
    let q = Complex::new(0.7, -0.4);
    for two_j in 2..=8 {
        let j = TwoJ::new(two_j)?;
        println!(
            "2j = {two_j}: lemma 1 |p_A − p_B| = {:.3e}, lemma 2 parity defect = {:.1e}, lemma 3 = {}, lemma 4 = {}",
            check_lemma1(j, q, 0.8, 0.3)?,
            check_lemma2_parity(j, q, 1.3)?,
            check_lemma3(j, q)?,
            check_lemma4(j, 1.7, 0.4)?,
        );
    }
    Ok(())
}
