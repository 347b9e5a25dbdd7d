//! Symbols of operators, ladder actions as differential operators, and the
//! closed-form solutions of the symbol equations.

use spinmus::numerics::{CMat, Complex};
use spinmus::spin::{build_ops, TwoJ};
use spinmus::wick::{
    apply_jplus_left, closed_form_condition1, closed_form_condition2, correspondence_check, matrix_of,
    residual_primed, su2_compose, symbol_of, symbol_trace, PrimedParams, WickPoly,
};

fn main() -> spinmus::Result<()> {
    let j = TwoJ::new(2)?;
    let one = WickPoly::one(j);
    println!("J₊ on the symbol 1 (j = 1): coeff[1][0] = {}", apply_jplus_left(&one).coeff[(1, 0)]);
    println!("tr of the identity from its symbol: {}", symbol_trace(&symbol_of(&CMat::identity(3), j)?));

    let p = closed_form_condition1(j, 0.5);
    let (r3, r4) = residual_primed(&p, &PrimedParams::condition1(0.5));
    println!("first condition, s' = 0.5: residuals ({r3:.1e}, {r4:.1e}), tr = {:.12}", symbol_trace(&p).re);
    let m = matrix_of(&p);
    println!("  its matrix squared has diagonal {:?}", (&m * &m).diag().iter().map(|z| z.re).collect::<Vec<_>>());

    let p = closed_form_condition2(j, 2.0, 4.0 * 2f64.sqrt())?;
    let (r3, r4) = residual_primed(&p, &PrimedParams::condition2(2.0, 4.0 * 2f64.sqrt()));
    println!("second condition, s' = 2, n = 1: residuals ({r3:.1e}, {r4:.1e})");

    let ops = build_ops(4)?;
    for k in [0.25, 4.0] {
        for two_n in [-4, 0, 2] {
            println!("matrix ↔ symbol, j = 2, k = {k}, n = {}: {:.1e}", two_n / 2, correspondence_check(&ops, two_n, k)?);
        }
    }

    let (t, psi) = su2_compose(Complex::new(0.3, 0.2))?;
    println!("Ω(1)Ω(0.3+0.2i) = Ω({t:.6}) e^(−iΨJz), Ψ = {psi:.6}");
    Ok(())
}
