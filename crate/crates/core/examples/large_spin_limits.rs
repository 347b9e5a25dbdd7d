//! Large-j limits: bosonization, coherent-state convergence and Gaussian
//! limits of the closed-form symbols.

use spinmus::limits::{coherent_convergence, hp_operator_error, schwinger_check, symbol_limit_condition1, symbol_limit_condition2};
use spinmus::numerics::Complex;
use spinmus::spin::TwoJ;

fn main() -> spinmus::Result<()> {
    let js: Vec<TwoJ> = [5.0, 10.0, 20.0, 40.0].iter().map(|&j| TwoJ::from_j(j)).collect::<Result<_, _>>()?;

    println!("coherent convergence at z = 1:");
    for r in coherent_convergence(Complex::new(1.0, 0.0), &js)? {
        println!("  j = {:>4}: 1 − F = {:.3e}", r.two_j as f64 / 2.0, r.infidelity);
    }
    println!("J₊/√(2j) − a† on five levels:");
    for j in &js {
        println!("  j = {:>4}: {:.3e}", j.j(), hp_operator_error(*j, 4)?);
    }

    let lim = symbol_limit_condition1(0.8, Complex::new(0.5, 0.3), Complex::new(-0.2, 0.4), &js)?;
    println!("first-condition symbol limit: orientation {:?}", lim.chosen);
    for r in &lim.chosen_table().rows {
        println!("  2j = {:>3}: relative error {:.3e}", r.two_j, r.rel_error);
    }
    let lim = symbol_limit_condition2(1.5, Complex::new(0.5, 0.6), &js)?;
    println!("second-condition symbol limit: orientation {:?}, final error {:.3e}", lim.chosen, lim.chosen_table().rows.last().map_or(f64::NAN, |r| r.rel_error));

    for two_j in [1, 4, 8] {
        let s = schwinger_check(two_j)?;
        println!("two-mode construction, 2j = {two_j}: max error {:.1e}, integer elements {}", s.max_error, s.integer_elements);
    }
    Ok(())
}
