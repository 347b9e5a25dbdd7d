//! Rebuilding √ρ from the saturation conditions alone, for spin ½ and spin 1.

use spinmus::families::gibbs_params;
use spinmus::recurrence::{solve_recurrence, solve_recurrence_qkl};
use spinmus::numerics::Complex;
use spinmus::spin::TwoJ;
use spinmus::uncertainty::SaturationParams;

fn main() -> spinmus::Result<()> {
    let half = TwoJ::new(1)?;
    // first condition with s = 2, t = −2
    let out = solve_recurrence(half, &SaturationParams::new(2.0, -2.0, 0.0, 0.0))?;
    println!("spin ½, s = 2, t = −2: consistent = {}, ρ =", out.consistent);
    print_rho(&out.state()?.rho().clone());

    // t = 0 sits on the second condition through (q, k, l)
    let v = 2.0;
    let out = solve_recurrence_qkl(half, Complex::new(v / 2.0, 0.0), 1.0, 0.0);
    println!("spin ½, t = 0, v = 2: consistent = {}, ρ =", out.consistent);
    print_rho(&out.state()?.rho().clone());

    let one = TwoJ::new(2)?;
    let out = solve_recurrence(one, &gibbs_params(0.5))?;
    println!("spin 1, Gibbs s' = 0.5: consistent = {}", out.consistent);
    print_rho(&out.state()?.rho().clone());

    let out = solve_recurrence(one, &SaturationParams::new(2.0, 0.5, 1.0, 1.0))?;
    println!(
        "spin 1, (s, t, u, v) = (2, 0.5, 1, 1): consistent = {}, worst residual = {:.3e}",
        out.consistent, out.worst_residual
    );
    Ok(())
}

fn print_rho(rho: &spinmus::numerics::CMat) {
    for r in 0..rho.dim() {
        let row: Vec<String> = rho.row(r).iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
        println!("  [{}]", row.join(", "));
    }
}
