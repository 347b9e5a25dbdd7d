//! Pure states `e^{βJz} e^{−iπ/2 Jy}|j,n⟩`: saturation and the eigenvalue
//! identity for `(1/√k)J₊ + √k J₋`.

use spinmus::families::{intelligent_eigen_residual, intelligent_pure, verify_family, MusFamily};
use spinmus::numerics::CMat;
use spinmus::spin::build_ops;

fn main() -> spinmus::Result<()> {
    let ops = build_ops(4)?;
    for beta in [-1.0, 0.0, 0.3] {
        for two_n in (-4..=4).step_by(2) {
            let rep = verify_family(&MusFamily::intelligent(ops.j, two_n, beta), &ops)?;
            let phi = intelligent_pure(&ops, two_n, beta, &CMat::identity(ops.dim()))?;
            let jy = phi.to_density().expect(&ops.jy);
            println!(
                "β = {beta:+.1}, n = {:+}: gap = {:+.1e}, ⟨Jy⟩ = {:+.1e}, eigen residual = {:.1e}",
                two_n / 2,
                rep.gap,
                jy,
                intelligent_eigen_residual(&ops, two_n, beta)?
            );
        }
    }
    Ok(())
}
