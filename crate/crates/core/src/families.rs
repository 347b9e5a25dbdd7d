//! State families that saturate the refined relation, and a classifier that
//! tests an arbitrary state against them.
//!
//! Up to a rotation `R`, a saturating state is either a Gibbs state of `Jz`
//! (weights `∝ s'^{2(j−m)}`) or an intelligent pure state
//! `R e^{βJz} e^{−iπ/2 Jy}|j,n⟩`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{exp_i_hermitian, mat_log_hermitian, CMat, Complex};
use crate::spin::{
    coherent_state, decompose_rotation, displacement, dicke, so3_of, DensityState, Frame,
    PureState, SpinOps, TwoJ,
};
use crate::uncertainty::{
    condition_residuals_tol, fit_saturation_params, report_rotated,
    solve_saturation_params, SaturationParams, SaturationReport, SATURATION_TOL,
};

/// Purity at or above `1 − PURITY_TOL` counts as pure.
pub const PURITY_TOL: f64 = 1e-9;
/// Relative residual of the `log ρ ∈ span{I, Jx, Jy, Jz}` test.
pub const LOG_SPAN_TOL: f64 = 1e-7;

/// A member of one of the saturating families.
#[derive(Debug, Clone, PartialEq)]
pub enum MusFamily {
    /// `|j,−j⟩`
    LowestWeight,
    /// Spin coherent state `|ζ⟩`.
    Coherent { zeta: Complex },
    /// `R·gibbs(s')·R†`; `s' = ±1` gives the maximally mixed state.
    RotatedGibbs { s_prime: f64, rotation: CMat },
    /// `R e^{βJz} e^{−iπ/2 Jy}|j,n⟩` with `n = two_n/2`.
    IntelligentPure { two_n: i32, beta: f64, rotation: CMat },
}

impl MusFamily {
    pub fn gibbs(j: TwoJ, s_prime: f64) -> Self {
        MusFamily::RotatedGibbs {
            s_prime,
            rotation: CMat::identity(j.dim()),
        }
    }

    pub fn intelligent(j: TwoJ, two_n: i32, beta: f64) -> Self {
        MusFamily::IntelligentPure {
            two_n,
            beta,
            rotation: CMat::identity(j.dim()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MusFamily::LowestWeight => "lowest",
            MusFamily::Coherent { .. } => "coherent",
            MusFamily::RotatedGibbs { .. } => "gibbs",
            MusFamily::IntelligentPure { .. } => "intelligent",
        }
    }

    /// The rotation taking the family's reference state to this member.
    pub fn rotation(&self, ops: &SpinOps) -> Result<CMat> {
        match self {
            MusFamily::LowestWeight => Ok(CMat::identity(ops.dim())),
            MusFamily::Coherent { zeta } => displacement(ops, coherent_tau(*zeta)),
            MusFamily::RotatedGibbs { rotation, .. } | MusFamily::IntelligentPure { rotation, .. } => {
                check_rotation(ops, rotation)?;
                Ok(rotation.clone())
            }
        }
    }
}

/// `τ = atan|ζ|·e^{i arg ζ}`, so that `Ω_τ|j,−j⟩ = |ζ⟩`.
pub fn coherent_tau(zeta: Complex) -> Complex {
    Complex::from_polar(zeta.norm().atan(), zeta.arg())
}

fn check_rotation(ops: &SpinOps, r: &CMat) -> Result<()> {
    if r.dim() != ops.dim() {
        return Err(Error::DimMismatch {
            expected: ops.dim(),
            found: r.dim(),
        });
    }
    let defect = r.unitarity_defect();
    if defect > 1e-10 * ops.dim() as f64 {
        return Err(Error::NotUnitary { defect });
    }
    if ops.dim() > 1 {
        decompose_rotation(ops, r)?;
    }
    Ok(())
}

/// Diagonal weights `∝ s'^{2(j−m)}` in basis order, normalized in log space.
pub fn gibbs_weights(j: TwoJ, s_prime: f64) -> Vec<f64> {
    let d = j.dim();
    let tj = j.two_j() as i32;
    if s_prime.abs() == 1.0 {
        return vec![1.0 / d as f64; d];
    }
    if s_prime == 0.0 {
        let mut w = vec![0.0; d];
        w[d - 1] = 1.0;
        return w;
    }
    // exponent 2(j − m) = 2(2j − a) for basis index a
    let ln = s_prime.abs().ln();
    let logs: Vec<f64> = (0..d).map(|a| 2.0 * (tj - a as i32) as f64 * ln).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// `e^{−βJz}/tr e^{−βJz}` with `β = 2 ln|s'|`.
pub fn gibbs_state(j: TwoJ, s_prime: f64) -> DensityState {
    let rho = CMat::from_real_diag(&gibbs_weights(j, s_prime));
    DensityState::new(j, rho).expect("Gibbs weights form a density matrix")
}

/// `R·gibbs(s')·R†`
pub fn rotated_gibbs(j: TwoJ, s_prime: f64, r: &CMat) -> Result<DensityState> {
    if r.dim() != j.dim() {
        return Err(Error::DimMismatch {
            expected: j.dim(),
            found: r.dim(),
        });
    }
    let defect = r.unitarity_defect();
    if defect > 1e-10 * j.dim() as f64 {
        return Err(Error::NotUnitary { defect });
    }
    gibbs_state(j, s_prime).conjugate_by(r)
}

/// `e^{βJz} e^{−iπ/2 Jy}|j,n⟩`, normalized. The boost is applied as
/// `e^{β(m − m_max)}` with the largest exponent shifted to zero, so only the
/// final normalization sees the dynamic range.
fn intelligent_unrotated(ops: &SpinOps, two_n: i32, beta: f64) -> Result<Vec<Complex>> {
    if !beta.is_finite() {
        return Err(Error::Overflow {
            what: format!("boost parameter {beta} is not finite"),
        });
    }
    let j = ops.j;
    let seed = dicke(j, two_n)?;
    let turned = exp_i_hermitian(&ops.jy, -std::f64::consts::FRAC_PI_2)?.apply(&seed);
    let shift = beta.abs() * j.j();
    let boosted: Vec<Complex> = turned
        .iter()
        .zip(j.magnetic_numbers())
        .map(|(a, m)| a * (beta * m - shift).exp())
        .collect();
    let norm = crate::numerics::vec_norm(&boosted);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::Overflow {
            what: format!("boost e^(βJz) with β = {beta} leaves no representable amplitude"),
        });
    }
    Ok(boosted.into_iter().map(|a| a / norm).collect())
}

/// `R e^{βJz} e^{−iπ/2 Jy}|j,n⟩`, normalized numerically.
///
/// Accurate for `|β| ≤ 30/max(1, j)`; beyond that the smallest amplitudes
/// underflow relative to the largest.
pub fn intelligent_pure(ops: &SpinOps, two_n: i32, beta: f64, r: &CMat) -> Result<PureState> {
    if r.dim() != ops.dim() {
        return Err(Error::DimMismatch {
            expected: ops.dim(),
            found: r.dim(),
        });
    }
    let defect = r.unitarity_defect();
    if defect > 1e-10 * ops.dim() as f64 {
        return Err(Error::NotUnitary { defect });
    }
    let v = intelligent_unrotated(ops, two_n, beta)?;
    PureState::normalized(ops.j, r.apply(&v))
}

/// `‖K φ − 2n φ‖` for `K = (1/√k)J₊ + √k J₋`, `k = e^{−2β}`, and
/// `φ = e^{βJz} e^{−iπ/2 Jy}|j,n⟩`.
pub fn intelligent_eigen_residual(ops: &SpinOps, two_n: i32, beta: f64) -> Result<f64> {
    let phi = intelligent_unrotated(ops, two_n, beta)?;
    let sk = (-beta).exp();
    let k_op = ops.jplus.scale_re(1.0 / sk) + ops.jminus.scale_re(sk);
    let image = k_op.apply(&phi);
    Ok(image
        .iter()
        .zip(&phi)
        .map(|(a, b)| (a - b * two_n as f64).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Density matrix of a family member.
pub fn build_state(fam: &MusFamily, ops: &SpinOps) -> Result<DensityState> {
    let j = ops.j;
    match fam {
        MusFamily::LowestWeight => DensityState::dicke(j, -(j.two_j() as i32)),
        MusFamily::Coherent { zeta } => Ok(coherent_state(j, *zeta)?.to_density()),
        MusFamily::RotatedGibbs { s_prime, rotation } => rotated_gibbs(j, *s_prime, rotation),
        MusFamily::IntelligentPure {
            two_n,
            beta,
            rotation,
        } => Ok(intelligent_pure(ops, *two_n, *beta, rotation)?.to_density()),
    }
}

/// Frame `(n1, n2, n3)` with `J_{n_i} = R J_{e_i} R†`; the relation in this
/// frame for `ρ` is the canonical relation for `R†ρR`.
pub fn adapted_frame(ops: &SpinOps, r: &CMat) -> Frame {
    let o = so3_of(ops, r);
    let col = |i: usize| [o[0][i], o[1][i], o[2][i]];
    [col(0), col(1), col(2)]
}

/// Saturation report for `R†ρR` with parameters solved from it, and whether a
/// skew information vanished. A vanishing skew information leaves the matching
/// parameter free; the verdict then rests on the gap alone.
fn saturation_in_reference_frame(
    unrotated: &DensityState,
    ops: &SpinOps,
    tol: f64,
) -> Result<(SaturationReport, bool)> {
    let degenerate = matches!(
        solve_saturation_params(unrotated, ops),
        Err(Error::DegenerateSkew { .. })
    );
    let params = fit_saturation_params(unrotated, ops)?;
    let mut rep = condition_residuals_tol(unrotated, ops, &params, tol)?;
    if degenerate {
        rep.saturated = rep.gap.abs() <= tol;
    }
    Ok((rep, degenerate))
}

/// Builds the member, moves to the frame adapted to its rotation, and checks
/// both saturation conditions there.
pub fn verify_family(fam: &MusFamily, ops: &SpinOps) -> Result<SaturationReport> {
    verify_family_tol(fam, ops, SATURATION_TOL)
}

pub fn verify_family_tol(fam: &MusFamily, ops: &SpinOps, tol: f64) -> Result<SaturationReport> {
    let state = build_state(fam, ops)?;
    let r = fam.rotation(ops)?;
    let unrotated = state.conjugate_by(&r.adjoint())?;
    let (mut rep, degenerate) = saturation_in_reference_frame(&unrotated, ops, tol)?;
    if ops.dim() > 1 {
        let scale = tol * ops.dim() as f64;
        let residuals_ok = degenerate || (rep.residual_a <= scale && rep.residual_b <= scale);
        rep.gap = report_rotated(&state, ops, &adapted_frame(ops, &r))?.gap;
        rep.saturated = residuals_ok && rep.gap.abs() <= tol;
    }
    Ok(rep)
}

/// Outcome of [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    NotSaturating,
    SaturatingPure,
    SaturatingRotatedGibbs,
    /// Saturating, mixed, and not of Gibbs form: expected never to occur.
    SaturatingUnclassified,
}

/// `ρ ∝ e^{−β n̂·J}` with `n̂` in the upper hemisphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GibbsFit {
    pub beta: f64,
    pub axis: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub outcome: Outcome,
    pub saturation: SaturationReport,
    pub purity: f64,
    /// `‖L − proj L‖_F / ‖L‖_F` with `L = log ρ`; only for mixed saturating states.
    pub log_residual: Option<f64>,
    pub gibbs_fit: Option<GibbsFit>,
}

/// Classifies in the fixed `(x, y, z)` frame: saturation, then purity, then
/// whether `log ρ` lies in `span{I, Jx, Jy, Jz}`.
pub fn classify(state: &DensityState, ops: &SpinOps) -> Result<Classification> {
    let (saturation, _) = saturation_in_reference_frame(state, ops, SATURATION_TOL)?;
    let purity = state.purity();
    let mut out = Classification {
        outcome: Outcome::NotSaturating,
        saturation,
        purity,
        log_residual: None,
        gibbs_fit: None,
    };
    if !saturation.saturated {
        return Ok(out);
    }
    if purity >= 1.0 - PURITY_TOL {
        out.outcome = Outcome::SaturatingPure;
        return Ok(out);
    }
    let (residual, fit) = gibbs_projection(state, ops)?;
    out.log_residual = Some(residual);
    if residual <= LOG_SPAN_TOL {
        out.outcome = Outcome::SaturatingRotatedGibbs;
        out.gibbs_fit = Some(fit);
    } else {
        out.outcome = Outcome::SaturatingUnclassified;
    }
    Ok(out)
}

/// Classifies `R†ρR`, i.e. tests `ρ` in the frame adapted to `R`.
pub fn classify_with_rotation(state: &DensityState, ops: &SpinOps, r: &CMat) -> Result<Classification> {
    classify(&state.conjugate_by(&r.adjoint())?, ops)
}

/// Hilbert–Schmidt projection of `log ρ` onto `span{I, Jx, Jy, Jz}`.
pub fn gibbs_projection(state: &DensityState, ops: &SpinOps) -> Result<(f64, GibbsFit)> {
    let log = mat_log_hermitian(state.rho())?;
    let d = ops.dim();
    let c0 = log.trace().re / d as f64;
    let mut fitted = CMat::identity(d).scale_re(c0);
    let mut b = [0.0; 3];
    if d > 1 {
        let norm = ops.hs_norm_sq();
        for (bi, op) in b.iter_mut().zip(ops.cartesian()) {
            *bi = log.trace_product(op).re / norm;
            fitted = fitted + op.scale_re(*bi);
        }
    }
    let scale = log.frobenius();
    let residual = if scale == 0.0 {
        0.0
    } else {
        (&log - &fitted).frobenius() / scale
    };
    Ok((residual, canonical_fit(b)))
}

fn canonical_fit(b: [f64; 3]) -> GibbsFit {
    let norm = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    if norm == 0.0 {
        return GibbsFit {
            beta: 0.0,
            axis: [0.0, 0.0, 1.0],
        };
    }
    let mut axis = [b[0] / norm, b[1] / norm, b[2] / norm];
    let upper = if axis[2] != 0.0 {
        axis[2] > 0.0
    } else if axis[0] != 0.0 {
        axis[0] > 0.0
    } else {
        axis[1] > 0.0
    };
    if !upper {
        axis = [-axis[0], -axis[1], -axis[2]];
    }
    let along = b[0] * axis[0] + b[1] * axis[1] + b[2] * axis[2];
    GibbsFit { beta: -along, axis }
}

/// Parameters of the first saturation condition for a Gibbs weight `s'`:
/// `s = (1 + s')/(1 − s')`, `t = −s`, `u = v = 0`.
pub fn gibbs_params(s_prime: f64) -> SaturationParams {
    let s = (1.0 + s_prime) / (1.0 - s_prime);
    SaturationParams::new(s, -s, 0.0, 0.0)
}
