//! Spin operators, rotations and coherent states.

use spinmus::numerics::Complex;
use spinmus::spin::{build_ops, coherent_state, decompose_rotation, rotation, so3_of, DensityState};

fn main() -> spinmus::Result<()> {
    let ops = build_ops(3)?;
    let comm = &ops.jx * &ops.jy - &ops.jy * &ops.jx;
    let err = (comm - ops.jz.scale(Complex::new(0.0, 1.0))).max_abs();
    println!("j = 3/2: ‖[Jx, Jy] − iJz‖ = {err:.1e}");

    let casimir = &ops.jx * &ops.jx + &ops.jy * &ops.jy + &ops.jz * &ops.jz;
    println!("J² eigenvalue = {:.12}", casimir[(0, 0)].re);

    let r = rotation(&ops, [0.0, 1.0, 0.0], std::f64::consts::FRAC_PI_2)?;
    let o = so3_of(&ops, &r);
    println!("SO(3) image of a quarter turn about y:");
    for row in o {
        println!("  [{:+.6} {:+.6} {:+.6}]", row[0], row[1], row[2]);
    }
    let (tau, alpha) = decompose_rotation(&ops, &r)?;
    println!("split as Ω_τ e^(−iαJz): τ = {tau:.6}, α = {alpha:.6}");

    let zeta = Complex::new(0.4, 0.7);
    let coh = coherent_state(ops.j, zeta)?.to_density();
    let mean = [coh.expect(&ops.jx), coh.expect(&ops.jy), coh.expect(&ops.jz)];
    let len = mean.iter().map(|x| x * x).sum::<f64>().sqrt();
    println!("coherent state ζ = {zeta}: |⟨J⟩| = {len:.12} (j = 1.5)");

    let lowest = DensityState::dicke(ops.j, -3)?;
    println!("⟨Jz⟩ on |j,−j⟩ = {}", lowest.expect(&ops.jz));
    Ok(())
}
