//! Cyclic Jacobi diagonalization of complex Hermitian matrices and the
//! spectral matrix functions built on it.

use super::cmat::{CMat, Complex, ZERO};
use crate::error::{Error, Result};

/// Hermiticity tolerance used by every public entry point: `‖A − A†‖_F ≤ HERM_TOL·max(1,‖A‖_F)`.
pub const HERM_TOL: f64 = 1e-10;
/// Eigenvalues of PSD inputs in `[−PSD_CLAMP, 0)` are clamped to zero.
pub const PSD_CLAMP: f64 = 1e-12;
/// Eigenvalues at or below `SQRT_NOISE·dim·λ_max` are rounding residue and root
/// to zero, unless the input was exactly diagonal.
pub const SQRT_NOISE: f64 = 4.0 * f64::EPSILON;
/// Smallest eigenvalue accepted by the matrix logarithm.
pub const LOG_FLOOR: f64 = 1e-14;
/// Sweep budget for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `A = Q Λ Q†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: CMat,
    /// `‖offdiag(A)‖_F` of the input; zero means the eigenvalues are exact.
    pub off_diagonal: f64,
}

impl HermEig {
    /// Rebuilds `Q f(Λ) Q†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex) -> CMat {
        let q = &self.eigenvectors;
        let n = q.dim();
        let fl: Vec<Complex> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = CMat::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += q[(r, k)] * fl[k] * q[(c, k)].conj();
                }
                out[(r, c)] = acc;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMat {
        self.map(|l| Complex::new(l, 0.0))
    }
}

fn check_hermitian(a: &CMat) -> Result<()> {
    if !a.is_finite() {
        return Err(Error::NotHermitian { defect: f64::NAN });
    }
    let defect = a.hermiticity_defect();
    if defect > HERM_TOL * a.frobenius().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn herm_eig(a: &CMat) -> Result<HermEig> {
    check_hermitian(a)?;
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut q = CMat::identity(n);
    let scale = m.frobenius().max(f64::MIN_POSITIVE);

    let off_norm = |m: &CMat| -> f64 {
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    acc += m[(r, c)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let off_diagonal = off_norm(&m);
    let mut converged = n == 1;
    for _sweep in 0..MAX_SWEEPS {
        if off_norm(&m) <= f64::EPSILON * 1e-2 * scale {
            converged = true;
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for qi in p + 1..n {
                let b = m[(p, qi)];
                let babs = b.norm();
                let app = m[(p, p)].re;
                let aqq = m[(qi, qi)].re;
                // Below rounding of both diagonal entries: its effect is O(ε²).
                if babs <= f64::EPSILON * 1e-2 * (app.abs() + aqq.abs()) {
                    m[(p, qi)] = ZERO;
                    m[(qi, p)] = ZERO;
                    continue;
                }
                rotated = true;
                let phase = b / babs;
                let theta = (aqq - app) / (2.0 * babs);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane.
                let ph_c = phase.conj();
                let u_pp = Complex::new(c, 0.0);
                let u_pq = Complex::new(s, 0.0);
                let u_qp = ph_c * (-s);
                let u_qq = ph_c * c;

                // m ← m U
                for r in 0..n {
                    let mp = m[(r, p)];
                    let mq = m[(r, qi)];
                    m[(r, p)] = mp * u_pp + mq * u_qp;
                    m[(r, qi)] = mp * u_pq + mq * u_qq;
                }
                // m ← U† m
                for col in 0..n {
                    let mp = m[(p, col)];
                    let mq = m[(qi, col)];
                    m[(p, col)] = u_pp.conj() * mp + u_qp.conj() * mq;
                    m[(qi, col)] = u_pq.conj() * mp + u_qq.conj() * mq;
                }
                m[(p, qi)] = ZERO;
                m[(qi, p)] = ZERO;
                m[(p, p)] = Complex::new(m[(p, p)].re, 0.0);
                m[(qi, qi)] = Complex::new(m[(qi, qi)].re, 0.0);
                // q ← q U
                for r in 0..n {
                    let qp = q[(r, p)];
                    let qq = q[(r, qi)];
                    q[(r, p)] = qp * u_pp + qq * u_qp;
                    q[(r, qi)] = qp * u_pq + qq * u_qq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        let off = off_norm(&m);
        if off > 1e-13 * scale {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                off_norm: off,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re));
    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let eigenvectors = CMat::from_fn(n, |r, c| q[(r, order[c])]);
    Ok(HermEig {
        eigenvalues,
        eigenvectors,
        off_diagonal,
    })
}

/// Principal square root of a Hermitian PSD matrix.
pub fn psd_sqrt(a: &CMat) -> Result<CMat> {
    let eig = herm_eig(a)?;
    psd_sqrt_from_eig(&eig)
}

pub(crate) fn psd_sqrt_from_eig(eig: &HermEig) -> Result<CMat> {
    if let Some(&low) = eig.eigenvalues.first() {
        if low < -PSD_CLAMP {
            return Err(Error::NotPsd { eigenvalue: low });
        }
    }
    // rounding residue would become √ε-sized noise after rooting; a diagonal
    // input is read off exactly, so tiny Gibbs weights survive
    let top = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    let floor = if eig.off_diagonal == 0.0 {
        0.0
    } else {
        SQRT_NOISE * eig.eigenvalues.len() as f64 * top
    };
    Ok(eig
        .map(|l| {
            if l <= floor {
                Complex::new(0.0, 0.0)
            } else {
                Complex::new(l.sqrt(), 0.0)
            }
        })
        .hermitian_part())
}

/// `e^{i·scale·H}` for Hermitian `H`.
pub fn exp_i_hermitian(h: &CMat, scale: f64) -> Result<CMat> {
    let eig = herm_eig(h)?;
    Ok(eig.map(|l| Complex::from_polar(1.0, scale * l)))
}

/// `e^{A}` for Hermitian `A` (real spectrum, positive-definite result).
pub fn exp_hermitian(a: &CMat) -> Result<CMat> {
    let eig = herm_eig(a)?;
    Ok(eig.map(|l| Complex::new(l.exp(), 0.0)).hermitian_part())
}

/// Hermitian logarithm of a positive-definite matrix.
pub fn mat_log_hermitian(a: &CMat) -> Result<CMat> {
    let eig = herm_eig(a)?;
    if let Some(&low) = eig.eigenvalues.first() {
        if low < LOG_FLOOR {
            return Err(Error::SingularState {
                eigenvalue: low,
                threshold: LOG_FLOOR,
            });
        }
    }
    Ok(eig.map(|l| Complex::new(l.ln(), 0.0)).hermitian_part())
}

/// `tol·max(1, ‖A‖_F)`
pub fn hybrid_tol(tol: f64, a: &CMat) -> f64 {
    tol * a.frobenius().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::cmat::{I, ONE};

    fn half_sigma_x() -> CMat {
        CMat::from_row_major(
            2,
            vec![ZERO, Complex::new(0.5, 0.0), Complex::new(0.5, 0.0), ZERO],
        )
        .unwrap()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let eig = herm_eig(&CMat::identity(2)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0]);
        let q = &eig.eigenvectors;
        assert!((q.adjoint() * q - CMat::identity(2)).frobenius() < 1e-12);
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let eig = herm_eig(&CMat::from_real_diag(&[3.0, -1.0])).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0, 3.0]);
    }

    #[test]
    fn half_sigma_x_eigenvalues() {
        let eig = herm_eig(&half_sigma_x()).unwrap();
        assert!((eig.eigenvalues[0] + 0.5).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn complex_off_diagonal_is_diagonalized() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let a = CMat::from_row_major(2, vec![ONE, I, -I, ONE]).unwrap();
        let eig = herm_eig(&a).unwrap();
        assert!(eig.eigenvalues[0].abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 2.0).abs() < 1e-14);
        assert!((eig.reconstruct() - &a).frobenius() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = CMat::from_row_major(2, vec![ONE, ONE, ZERO, ONE]).unwrap();
        assert!(matches!(herm_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_examples() {
        let half = CMat::identity(2).scale_re(0.5);
        let r = psd_sqrt(&half).unwrap();
        assert!((r - CMat::identity(2).scale_re(0.5f64.sqrt())).frobenius() < 1e-15);

        let r = psd_sqrt(&CMat::from_real_diag(&[4.0, 1.0])).unwrap();
        assert!((r - CMat::from_real_diag(&[2.0, 1.0])).frobenius() < 1e-15);

        let s = 1.0 / 2f64.sqrt();
        let psi = [Complex::new(s, 0.0), Complex::new(0.0, s)];
        let proj = CMat::outer(&psi, &psi);
        assert!((psd_sqrt(&proj).unwrap() - &proj).frobenius() < 1e-12);
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let a = CMat::from_real_diag(&[1.0, -1e-6]);
        assert!(matches!(psd_sqrt(&a), Err(Error::NotPsd { .. })));
        // within the clamp
        let a = CMat::from_real_diag(&[1.0, -1e-13]);
        let r = psd_sqrt(&a).unwrap();
        assert_eq!(r[(1, 1)], ZERO);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = exp_i_hermitian(&CMat::zeros(3), 1.7).unwrap();
        assert!((u - CMat::identity(3)).frobenius() < 1e-15);
    }

    #[test]
    fn exp_of_half_sigma_z() {
        let jz = CMat::from_real_diag(&[-0.5, 0.5]);
        let u = exp_i_hermitian(&jz, -std::f64::consts::PI).unwrap();
        let expect = CMat::from_diag(&[
            Complex::from_polar(1.0, std::f64::consts::FRAC_PI_2),
            Complex::from_polar(1.0, -std::f64::consts::FRAC_PI_2),
        ]);
        assert!((u - expect).frobenius() < 1e-14);
    }

    #[test]
    fn log_rejects_singular() {
        let a = CMat::from_real_diag(&[1.0, 0.0]);
        assert!(matches!(
            mat_log_hermitian(&a),
            Err(Error::SingularState { .. })
        ));
    }

    #[test]
    fn log_inverts_exp() {
        let a = CMat::from_row_major(
            2,
            vec![
                Complex::new(0.7, 0.0),
                Complex::new(0.1, 0.2),
                Complex::new(0.1, -0.2),
                Complex::new(0.3, 0.0),
            ],
        )
        .unwrap();
        let l = mat_log_hermitian(&a).unwrap();
        assert!((exp_hermitian(&l).unwrap() - &a).frobenius() < 1e-12);
    }

    #[test]
    fn diagonal_inputs_keep_tiny_eigenvalues() {
        let a = CMat::from_real_diag(&[1.0, 1e-18]);
        let r = psd_sqrt(&a).unwrap();
        assert!((r[(1, 1)].re - 1e-9).abs() < 1e-24);
    }
}
