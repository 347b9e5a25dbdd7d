//! Rotations, displacements and spin coherent states.

use std::f64::consts::PI;

use super::{ln_binomial, PureState, SpinOps, TwoJ};
use crate::error::{Error, Result};
use crate::numerics::{exp_i_hermitian, CMat, Complex, I, ZERO};

/// Residual accepted by [`decompose_rotation`].
pub const DECOMPOSE_TOL: f64 = 1e-8;

/// Right-handed orthonormal triad `(n1, n2, n3)`.
pub type Frame = [[f64; 3]; 3];

/// `e^{−iθ w·J}` for a unit axis `w`.
pub fn rotation(ops: &SpinOps, axis: [f64; 3], angle: f64) -> Result<CMat> {
    let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitAxis { norm });
    }
    exp_i_hermitian(&ops.along(axis), -angle)
}

/// `Ω_τ = e^{τJ₊ − τ̄J₋}`, exponentiated through the Hermitian generator
/// `G = i(τJ₊ − τ̄J₋)` as `e^{−iG}`.
pub fn displacement(ops: &SpinOps, tau: Complex) -> Result<CMat> {
    if !(tau.re.is_finite() && tau.im.is_finite()) {
        return Err(Error::Domain {
            what: format!("non-finite displacement parameter {tau}"),
        });
    }
    let anti = ops.jplus.scale(tau) - ops.jminus.scale(tau.conj());
    let gen = anti.scale(I).hermitian_part();
    exp_i_hermitian(&gen, -1.0)
}

/// Spin coherent state `|ζ⟩ = (1+|ζ|²)^{−j} Σ_m √C(2j, j+m) ζ^{j+m} |j,m⟩`.
///
/// Amplitudes are evaluated in log-magnitude form, so large `|ζ|^{2j}` does not
/// overflow.
pub fn coherent_state(j: TwoJ, zeta: Complex) -> Result<PureState> {
    if !(zeta.re.is_finite() && zeta.im.is_finite()) {
        return Err(Error::Overflow {
            what: format!("coherent-state label {zeta} is not finite"),
        });
    }
    let tj = j.two_j();
    let r = zeta.norm();
    let phi = zeta.arg();
    let ln_norm = j.j() * (r * r).ln_1p();
    let amps = (0..=tj)
        .map(|a| {
            if r == 0.0 {
                return if a == 0 { Complex::new(1.0, 0.0) } else { ZERO };
            }
            let ln_mag = 0.5 * ln_binomial(tj, a) + a as f64 * r.ln() - ln_norm;
            Complex::from_polar(ln_mag.exp(), a as f64 * phi)
        })
        .collect();
    PureState::normalized(j, amps)
}

/// Splits an SU(2) image `R` as `Ω_τ e^{−iαJz}` with `α ∈ [0, 4π)`.
///
/// `τ` is read off the column `R|j,−j⟩ ∝ |ζ⟩`; `α` from the diagonal of
/// `Ω_τ† R`, with the `α` vs `α + 2π` ambiguity settled by residual, then by the
/// smaller angle.
pub fn decompose_rotation(ops: &SpinOps, r: &CMat) -> Result<(Complex, f64)> {
    let d = ops.dim();
    if r.dim() != d {
        return Err(Error::DimMismatch {
            expected: d,
            found: r.dim(),
        });
    }
    let defect = r.unitarity_defect();
    if defect > 1e-10 * (d as f64).max(1.0) {
        return Err(Error::NotUnitary { defect });
    }
    if d == 1 {
        let residual = (r[(0, 0)] - Complex::new(1.0, 0.0)).norm();
        if residual > DECOMPOSE_TOL {
            return Err(Error::NotSu2Element { residual });
        }
        return Ok((ZERO, 0.0));
    }

    let col = r.column(0);
    let tj = ops.j.two_j() as usize;
    let sqrt_2j = (tj as f64).sqrt();
    let tau = if col[0].norm() >= col[tj].norm() {
        let zeta = col[1] / (col[0] * sqrt_2j);
        Complex::from_polar(zeta.norm().atan(), zeta.arg())
    } else if col[tj - 1].norm() <= 1e-14 * col[tj].norm() {
        // antipodal: R|j,−j⟩ ∝ |j,j⟩, any azimuth works once α absorbs it
        Complex::new(PI / 2.0, 0.0)
    } else {
        let inv = col[tj - 1] / (col[tj] * sqrt_2j);
        // ζ = 1/inv
        let zeta = Complex::new(1.0, 0.0) / inv;
        Complex::from_polar(zeta.norm().atan(), zeta.arg())
    };

    let omega = displacement(ops, tau)?;
    let m = omega.adjoint() * r;
    let ratio = m[(1, 1)] * m[(0, 0)].conj();
    let alpha0 = (-ratio.arg()).rem_euclid(2.0 * PI);

    let residual_for = |alpha: f64| -> f64 {
        let mut acc = 0.0;
        for row in 0..d {
            for c in 0..d {
                let target = if row == c {
                    let two_m = ops.j.two_m_of(c) as f64;
                    Complex::from_polar(1.0, -alpha * two_m / 2.0)
                } else {
                    ZERO
                };
                acc += (m[(row, c)] - target).norm_sqr();
            }
        }
        acc.sqrt()
    };

    let mut best = (f64::INFINITY, 0.0);
    for alpha in [alpha0, alpha0 + 2.0 * PI] {
        let res = residual_for(alpha);
        if res < best.0 - 1e-12 {
            best = (res, alpha);
        }
    }
    if best.0 > DECOMPOSE_TOL {
        return Err(Error::NotSu2Element { residual: best.0 });
    }
    Ok((tau, best.1))
}

/// Checks a frame is orthonormal and right-handed and returns it as the
/// rotation matrix whose rows are `n1, n2, n3` (it maps `n_i → e_i`).
pub fn frame_matrix(frame: &Frame) -> Result<[[f64; 3]; 3]> {
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let mut defect: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            let target = if a == b { 1.0 } else { 0.0 };
            defect = defect.max((dot(&frame[a], &frame[b]) - target).abs());
        }
    }
    let [n1, n2, n3] = frame;
    let cross = [
        n1[1] * n2[2] - n1[2] * n2[1],
        n1[2] * n2[0] - n1[0] * n2[2],
        n1[0] * n2[1] - n1[1] * n2[0],
    ];
    let handed = dot(&cross, n3);
    defect = defect.max((handed - 1.0).abs());
    if !defect.is_finite() || defect > 1e-10 {
        return Err(Error::NonOrthonormalFrame { defect });
    }
    Ok(*frame)
}

/// Axis and angle (in `[0, π]`) of a proper 3×3 rotation matrix.
pub fn axis_angle_from_matrix(o: &[[f64; 3]; 3]) -> ([f64; 3], f64) {
    let v = [
        o[2][1] - o[1][2],
        o[0][2] - o[2][0],
        o[1][0] - o[0][1],
    ];
    let vnorm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let cos = ((o[0][0] + o[1][1] + o[2][2] - 1.0) / 2.0).clamp(-1.0, 1.0);
    let angle = (vnorm / 2.0).atan2(cos);
    if angle < 1e-12 {
        return ([0.0, 0.0, 1.0], 0.0);
    }
    if vnorm > 1e-6 {
        return ([v[0] / vnorm, v[1] / vnorm, v[2] / vnorm], angle);
    }
    // near π: O ≈ 2wwᵀ − I
    let diag = [o[0][0], o[1][1], o[2][2]];
    let k = (0..3).max_by(|&a, &b| diag[a].total_cmp(&diag[b])).unwrap();
    let mut w = [0.0; 3];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = (o[i][k] + o[k][i]) / 2.0 + if i == k { 1.0 } else { 0.0 };
    }
    let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    let mut w = [w[0] / n, w[1] / n, w[2] / n];
    if w[0] * v[0] + w[1] * v[1] + w[2] * v[2] < 0.0 {
        w = [-w[0], -w[1], -w[2]];
    }
    (w, angle)
}

/// SU(2) image `R` with `R J_{n_i} R† = J_{e_i}` for the frame `(n1, n2, n3)`.
///
/// Under `R = e^{−iθ w·J}` one has `R (n·J) R† = (O n)·J` with `O` the active
/// rotation about `w` by `θ`, so `R` is built from the axis-angle of the frame
/// matrix.
pub fn frame_rotation(ops: &SpinOps, frame: &Frame) -> Result<CMat> {
    let o = frame_matrix(frame)?;
    let (axis, angle) = axis_angle_from_matrix(&o);
    rotation(ops, axis, angle)
}

/// The 3×3 matrix `O` with `R J_a R† = Σ_b O[b][a] J_b`, read off by
/// Hilbert–Schmidt projection. Meaningless for `j = 0`.
pub fn so3_of(ops: &SpinOps, r: &CMat) -> [[f64; 3]; 3] {
    let norm = ops.hs_norm_sq();
    let comps = ops.cartesian();
    let mut o = [[0.0; 3]; 3];
    for (a, ja) in comps.iter().enumerate() {
        let rotated = r * *ja * r.adjoint();
        for (b, jb) in comps.iter().enumerate() {
            o[b][a] = rotated.trace_product(jb).re / norm;
        }
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::vec_inner;
    use crate::spin::{binomial, dicke};

    fn ops(tj: u32) -> SpinOps {
        SpinOps::new(TwoJ::new(tj).unwrap())
    }

    #[test]
    fn z_rotation_is_diagonal_phase() {
        for tj in 0..8 {
            let o = ops(tj);
            let theta = 0.731;
            let r = rotation(&o, [0.0, 0.0, 1.0], theta).unwrap();
            let expect = CMat::from_diag(
                &o.j
                    .magnetic_numbers()
                    .map(|m| Complex::from_polar(1.0, -theta * m))
                    .collect::<Vec<_>>(),
            );
            assert!((r - expect).frobenius() < 1e-12);
        }
    }

    #[test]
    fn rotation_rejects_non_unit_axis() {
        assert!(matches!(
            rotation(&ops(2), [1.0, 1.0, 0.0], 0.3),
            Err(Error::NonUnitAxis { .. })
        ));
    }

    #[test]
    fn displacement_basics() {
        let o = ops(5);
        let zero = displacement(&o, ZERO).unwrap();
        assert!((zero - CMat::identity(6)).frobenius() < 1e-14);
        let tau = Complex::new(0.4, -0.3);
        let a = displacement(&o, tau).unwrap();
        let b = displacement(&o, -tau).unwrap();
        assert!(a.unitarity_defect() < 1e-10);
        assert!((&a * &b - CMat::identity(6)).frobenius() < 1e-10);
        assert!((a.adjoint() - b).frobenius() < 1e-10);
    }

    #[test]
    fn displaced_lowest_weight_is_coherent() {
        for tj in [1, 2, 5, 9] {
            let o = ops(tj);
            let low = dicke(o.j, -(tj as i32)).unwrap();
            for (theta, phi) in [(0.3, 0.0), (1.2, 2.1), (2.9, -0.7)] {
                let tau = Complex::from_polar(theta / 2.0, phi);
                let zeta = Complex::from_polar((theta / 2.0f64).tan(), phi);
                let moved = displacement(&o, tau).unwrap().apply(&low);
                let coh = coherent_state(o.j, zeta).unwrap();
                let diff: f64 = moved
                    .iter()
                    .zip(coh.amplitudes())
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(diff < 1e-10, "tj={tj} theta={theta}: {diff}");
            }
        }
    }

    #[test]
    fn coherent_state_examples() {
        let j = TwoJ::new(6).unwrap();
        let c = coherent_state(j, ZERO).unwrap();
        assert_eq!(c.amplitudes(), dicke(j, -6).unwrap().as_slice());

        let half = TwoJ::new(1).unwrap();
        let c = coherent_state(half, Complex::new(1.0, 0.0)).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((c.amplitudes()[0] - Complex::new(s, 0.0)).norm() < 1e-15);
        assert!((c.amplitudes()[1] - Complex::new(s, 0.0)).norm() < 1e-15);
    }

    /// Oracle: direct binomial sum over unnormalized amplitudes.
    fn overlap_closed_form(tj: u32, z1: Complex, z2: Complex) -> Complex {
        let j = tj as f64 / 2.0;
        let one = Complex::new(1.0, 0.0);
        (one + z1.conj() * z2).powf(tj as f64)
            / ((1.0 + z1.norm_sqr()).powf(j) * (1.0 + z2.norm_sqr()).powf(j))
    }

    #[test]
    fn coherent_overlap_closed_form() {
        let grid = [
            Complex::new(0.0, 0.0),
            Complex::new(0.5, 0.2),
            Complex::new(-1.3, 0.7),
            Complex::new(2.0, -1.0),
        ];
        for tj in [1u32, 2, 3, 8] {
            let j = TwoJ::new(tj).unwrap();
            for &z1 in &grid {
                for &z2 in &grid {
                    let a = coherent_state(j, z1).unwrap();
                    let b = coherent_state(j, z2).unwrap();
                    let direct = vec_inner(a.amplitudes(), b.amplitudes());
                    // brute-force sum with explicit binomials
                    let mut brute = ZERO;
                    for k in 0..=tj {
                        brute += binomial(tj, k) * (z1.conj() * z2).powu(k);
                    }
                    let brute = brute
                        / ((1.0 + z1.norm_sqr()).powf(j.j()) * (1.0 + z2.norm_sqr()).powf(j.j()));
                    assert!((direct - brute).norm() < 1e-10);
                    assert!((direct - overlap_closed_form(tj, z1, z2)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn coherent_state_large_label_does_not_overflow() {
        let j = TwoJ::new(400).unwrap();
        let c = coherent_state(j, Complex::new(10.0, 3.0)).unwrap();
        assert!(c.amplitudes().iter().all(|a| a.re.is_finite()));
    }

    #[test]
    fn decompose_round_trips() {
        for tj in [1u32, 2, 3, 6] {
            let o = ops(tj);
            for (axis, angle) in [
                ([0.0, 0.0, 1.0], 0.9),
                ([0.0, 0.0, 1.0], 5.0),
                ([1.0, 0.0, 0.0], 1.1),
                ([0.0, 1.0, 0.0], PI),
                ([1.0, 0.0, 0.0], PI),
                ([0.6, 0.0, 0.8], 2.5),
                ([0.48, 0.6, 0.64], 4.0),
            ] {
                let r = rotation(&o, axis, angle).unwrap();
                let (tau, alpha) = decompose_rotation(&o, &r).unwrap();
                assert!((0.0..4.0 * PI).contains(&alpha));
                let rebuilt = displacement(&o, tau).unwrap()
                    * rotation(&o, [0.0, 0.0, 1.0], alpha).unwrap();
                assert!((rebuilt - &r).frobenius() < 1e-8, "tj={tj} axis={axis:?}");
            }
        }
    }

    #[test]
    fn decompose_z_rotation_recovers_angle() {
        let o = ops(3);
        for alpha in [0.2, 3.0, 7.5] {
            let r = rotation(&o, [0.0, 0.0, 1.0], alpha).unwrap();
            let (tau, a) = decompose_rotation(&o, &r).unwrap();
            assert!(tau.norm() < 1e-12);
            assert!((a - alpha).abs() < 1e-9);
        }
    }

    #[test]
    fn decompose_rejects_non_su2() {
        let o = ops(2);
        // a diagonal phase pattern no z-rotation produces
        let bad = CMat::from_diag(&[
            Complex::new(1.0, 0.0),
            Complex::new(-1.0, 0.0),
            Complex::new(1.0, 0.0),
        ]);
        let r = decompose_rotation(&o, &(bad * rotation(&o, [0.0, 0.0, 1.0], 0.1).unwrap()));
        assert!(matches!(r, Err(Error::NotSu2Element { .. })));
    }

    #[test]
    fn frame_rotation_maps_axes() {
        let o = ops(4);
        let s = 1.0 / 2f64.sqrt();
        let frames: [Frame; 3] = [
            [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
            [[s, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, s]],
            [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        ];
        for frame in &frames {
            let r = frame_rotation(&o, frame).unwrap();
            for (n, target) in frame.iter().zip(o.cartesian()) {
                let mapped = &r * o.along(*n) * r.adjoint();
                assert!((mapped - target).frobenius() < 1e-10);
            }
        }
        let bad: Frame = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
        assert!(matches!(
            frame_rotation(&o, &bad),
            Err(Error::NonOrthonormalFrame { .. })
        ));
    }

    #[test]
    fn so3_of_rotation_about_z() {
        let o = ops(2);
        let theta = 0.4;
        let r = rotation(&o, [0.0, 0.0, 1.0], theta).unwrap();
        let m = so3_of(&o, &r);
        assert!((m[0][0] - theta.cos()).abs() < 1e-12);
        assert!((m[1][0] - theta.sin()).abs() < 1e-12);
        assert!((m[2][2] - 1.0).abs() < 1e-12);
    }
}
