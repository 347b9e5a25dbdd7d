//! Variance, Wigner–Yanase skew information and the refined uncertainty
//! relation `U(ρ,Jx)·U(ρ,Jy) ≥ ¼(tr ρJz)²`, together with the operator
//! conditions a state must satisfy to saturate it.
//!
//! For a state `ρ` and observable `X` with `X₀ = X − tr(ρX)`:
//!
//! | symbol | definition |
//! |---|---|
//! | `V` | `tr ρX² − (tr ρX)²` |
//! | `I` | `tr ρX² − tr(√ρ X √ρ X)` |
//! | `C` | `tr(√ρ X₀ √ρ X₀)` |
//! | `J` | `½ tr({√ρ, X₀}²)` |
//! | `U` | `√(I·J)` |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{herm_eig, psd_sqrt_from_eig, CMat, Complex, I};
use crate::spin::{frame_matrix, DensityState, Frame, SpinOps};

/// Small negative values of `V` and `I` down to this are rounding and clamp to 0.
pub const CLAMP_TOL: f64 = 1e-12;
/// Below this skew information the matching saturation parameter is unconstrained.
pub const SKEW_FLOOR: f64 = 1e-12;
/// Default saturation tolerance on the gap and on per-dimension residuals.
pub const SATURATION_TOL: f64 = 1e-8;

/// The five functionals of one observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisFunctionals {
    pub v: f64,
    pub i: f64,
    pub j: f64,
    pub c: f64,
    pub u: f64,
}

/// Every quantity entering the refined relation for one state and frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub x: AxisFunctionals,
    pub y: AxisFunctionals,
    pub mean_x: f64,
    pub mean_y: f64,
    pub mean_z: f64,
    /// `¼·mean_z²`
    pub bound: f64,
    /// `U_x·U_y`
    pub lhs_refined: f64,
    /// `V_x·V_y`
    pub lhs_heisenberg: f64,
    /// `lhs_refined − bound`
    pub gap: f64,
}

/// `ρ` together with its square root, computed once.
struct Prepared<'a> {
    rho: &'a CMat,
    sqrt: CMat,
}

impl<'a> Prepared<'a> {
    fn new(state: &'a DensityState) -> Result<Self> {
        let eig = herm_eig(state.rho())?;
        Ok(Prepared {
            rho: state.rho(),
            sqrt: psd_sqrt_from_eig(&eig)?,
        })
    }

    fn check_dim(&self, x: &CMat) -> Result<()> {
        if x.dim() != self.rho.dim() {
            return Err(Error::DimMismatch {
                expected: self.rho.dim(),
                found: x.dim(),
            });
        }
        Ok(())
    }

    fn mean(&self, x: &CMat) -> f64 {
        self.rho.trace_product(x).re
    }

    fn variance(&self, x: &CMat) -> f64 {
        let m = self.mean(x);
        let second = self.rho.trace_product(&(x * x)).re;
        clamp(second - m * m)
    }

    fn functionals(&self, x: &CMat) -> AxisFunctionals {
        let n = x.dim();
        let mean = self.mean(x);
        let x0 = x - CMat::identity(n).scale_re(mean);
        let second = self.rho.trace_product(&(x * x)).re;

        let v = clamp(second - mean * mean);
        let sx = &self.sqrt * x;
        let i = clamp(second - sx.trace_product(&sx).re);
        let sx0 = &self.sqrt * &x0;
        let c = sx0.trace_product(&sx0).re;
        let anti = &sx0 + &x0 * &self.sqrt;
        let j = 0.5 * anti.trace_product(&anti).re;
        let u = (i * j.max(0.0)).sqrt();
        AxisFunctionals { v, i, j, c, u }
    }
}

fn clamp(x: f64) -> f64 {
    if (-CLAMP_TOL..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

/// `V(ρ, X)`
pub fn variance(state: &DensityState, x: &CMat) -> Result<f64> {
    if x.dim() != state.dim() {
        return Err(Error::DimMismatch {
            expected: state.dim(),
            found: x.dim(),
        });
    }
    let m = state.expect(x);
    Ok(clamp(state.expect(&(x * x)) - m * m))
}

fn axis(state: &DensityState, x: &CMat) -> Result<AxisFunctionals> {
    let p = Prepared::new(state)?;
    p.check_dim(x)?;
    Ok(p.functionals(x))
}

/// Wigner–Yanase skew information `I(ρ, X)`.
pub fn skew_information(state: &DensityState, x: &CMat) -> Result<f64> {
    axis(state, x).map(|f| f.i)
}

/// `J(ρ, X) = ½ tr({√ρ, X₀}²)`
pub fn j_functional(state: &DensityState, x: &CMat) -> Result<f64> {
    axis(state, x).map(|f| f.j)
}

/// Classical part `C(ρ, X) = tr(√ρ X₀ √ρ X₀)`; zero on pure states.
pub fn classical_uncertainty(state: &DensityState, x: &CMat) -> Result<f64> {
    axis(state, x).map(|f| f.c)
}

/// `U(ρ, X) = √(I·J)`
pub fn quantum_uncertainty(state: &DensityState, x: &CMat) -> Result<f64> {
    axis(state, x).map(|f| f.u)
}

/// All functionals for the observables `(X, Y)` with commutator partner `Z`.
pub fn report_for_ops(state: &DensityState, x: &CMat, y: &CMat, z: &CMat) -> Result<UncertaintyReport> {
    let p = Prepared::new(state)?;
    for op in [x, y, z] {
        p.check_dim(op)?;
    }
    let fx = p.functionals(x);
    let fy = p.functionals(y);
    let mean_z = p.mean(z);
    let bound = 0.25 * mean_z * mean_z;
    let lhs_refined = fx.u * fy.u;
    Ok(UncertaintyReport {
        x: fx,
        y: fy,
        mean_x: p.mean(x),
        mean_y: p.mean(y),
        mean_z,
        bound,
        lhs_refined,
        lhs_heisenberg: p.variance(x) * p.variance(y),
        gap: lhs_refined - bound,
    })
}

/// Report in the canonical `(x, y, z)` frame.
pub fn report(state: &DensityState, ops: &SpinOps) -> Result<UncertaintyReport> {
    report_for_ops(state, &ops.jx, &ops.jy, &ops.jz)
}

const CANONICAL: Frame = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Report for the relation `U(ρ,J_{n1})·U(ρ,J_{n2}) ≥ ¼(tr ρJ_{n3})²`.
///
/// Equals [`report`] of `RρR†` where `R` maps the triad onto `(x, y, z)`; the
/// canonical triad takes exactly the same path as [`report`].
pub fn report_rotated(state: &DensityState, ops: &SpinOps, frame: &Frame) -> Result<UncertaintyReport> {
    let frame = frame_matrix(frame)?;
    if frame == CANONICAL {
        return report(state, ops);
    }
    report_for_ops(
        state,
        &ops.along(frame[0]),
        &ops.along(frame[1]),
        &ops.along(frame[2]),
    )
}

/// Scalars `(s, t, u, v)` of the two saturation conditions, plus the derived
/// recurrence coefficients where they are defined (`s ≠ −1`, `t ≠ 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationParams {
    pub s: f64,
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub q: Option<Complex>,
    pub k: Option<f64>,
    pub l: Option<f64>,
    /// `(s − 1)/(s + 1)`
    pub s_prime: Option<f64>,
}

impl SaturationParams {
    pub fn new(s: f64, t: f64, u: f64, v: f64) -> Self {
        let sp1 = s + 1.0;
        let omt = 1.0 - t;
        let regular = sp1 != 0.0 && omt != 0.0;
        let (q, k, l) = if regular {
            (
                Some(Complex::new(v / (2.0 * omt), -u / (2.0 * sp1))),
                Some((s + t) / (sp1 * omt)),
                Some((s * t + 1.0) / (sp1 * omt)),
            )
        } else {
            (None, None, None)
        };
        SaturationParams {
            s,
            t,
            u,
            v,
            q,
            k,
            l,
            s_prime: (sp1 != 0.0).then(|| (s - 1.0) / sp1),
        }
    }

    /// True on the excluded lines `s = −1` or `t = 1`.
    pub fn is_special(&self) -> bool {
        self.q.is_none()
    }
}

/// Residual norms of the two operator conditions and the saturation verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationReport {
    pub params: SaturationParams,
    pub residual_a: f64,
    pub residual_b: f64,
    pub gap: f64,
    pub saturated: bool,
}

/// Left-hand sides of the two saturation conditions as matrices:
///
/// ```text
/// A = (s−1)(J₋√ρ − √ρJ₊) + (s+1)(J₊√ρ − √ρJ₋) − iu√ρ
/// B = (t+1)(J₋√ρ + √ρJ₊) + (1−t)(J₊√ρ + √ρJ₋) − v√ρ
/// ```
pub fn condition_matrices(sqrt_rho: &CMat, ops: &SpinOps, p: &SaturationParams) -> (CMat, CMat) {
    let (lower_a, raise_b) = ladder_pieces(sqrt_rho, ops);
    let a = (lower_a.0.scale_re(p.s - 1.0) + lower_a.1.scale_re(p.s + 1.0))
        - sqrt_rho.scale(I * p.u);
    let b = (raise_b.0.scale_re(p.t + 1.0) + raise_b.1.scale_re(1.0 - p.t)) - sqrt_rho.scale_re(p.v);
    (a, b)
}

/// `((J₋P − PJ₊, J₊P − PJ₋), (J₋P + PJ₊, J₊P + PJ₋))`
fn ladder_pieces(p: &CMat, ops: &SpinOps) -> ((CMat, CMat), (CMat, CMat)) {
    let lm = &ops.jminus * p;
    let rp = p * &ops.jplus;
    let lp = &ops.jplus * p;
    let rm = p * &ops.jminus;
    ((&lm - &rp, &lp - &rm), (lm + rp, lp + rm))
}

fn sqrt_of(state: &DensityState) -> Result<CMat> {
    psd_sqrt_from_eig(&herm_eig(state.rho())?)
}

/// Solves `(s, t, u, v)` from the state: `|s| = √(J_y/I_x)`, `|t| = √(J_x/I_y)`,
/// signs by smaller condition residual, `u = 4 tr ρJy`, `v = 4 tr ρJx`.
pub fn solve_saturation_params(state: &DensityState, ops: &SpinOps) -> Result<SaturationParams> {
    let rep = report(state, ops)?;
    if rep.x.i <= SKEW_FLOOR {
        return Err(Error::DegenerateSkew { axis: 'x' });
    }
    if rep.y.i <= SKEW_FLOOR {
        return Err(Error::DegenerateSkew { axis: 'y' });
    }
    let sqrt = sqrt_of(state)?;
    let u = 4.0 * rep.mean_y;
    let v = 4.0 * rep.mean_x;
    let s_abs = (rep.y.j.max(0.0) / rep.x.i).sqrt();
    let t_abs = (rep.x.j.max(0.0) / rep.y.i).sqrt();
    Ok(pick_signs(&sqrt, ops, s_abs, t_abs, u, v))
}

fn pick_signs(sqrt: &CMat, ops: &SpinOps, s_abs: f64, t_abs: f64, u: f64, v: f64) -> SaturationParams {
    let res = |s: f64, t: f64| {
        let (a, b) = condition_matrices(sqrt, ops, &SaturationParams::new(s, t, u, v));
        (a.frobenius(), b.frobenius())
    };
    let s = if res(s_abs, 0.0).0 <= res(-s_abs, 0.0).0 {
        s_abs
    } else {
        -s_abs
    };
    let t = if res(0.0, t_abs).1 <= res(0.0, -t_abs).1 {
        t_abs
    } else {
        -t_abs
    };
    SaturationParams::new(s, t, u, v)
}

/// Like [`solve_saturation_params`], but an axis with vanishing skew
/// information gets its (then unconstrained) parameter by real least squares
/// on the corresponding condition, instead of failing.
pub fn fit_saturation_params(state: &DensityState, ops: &SpinOps) -> Result<SaturationParams> {
    match solve_saturation_params(state, ops) {
        Err(Error::DegenerateSkew { .. }) => {}
        other => return other,
    }
    let rep = report(state, ops)?;
    let sqrt = sqrt_of(state)?;
    let u = 4.0 * rep.mean_y;
    let v = 4.0 * rep.mean_x;
    let ((minus_a, plus_a), (minus_b, plus_b)) = ladder_pieces(&sqrt, ops);

    // A(s) = s·(D₁ + D₂) + (D₂ − D₁ − iu√ρ), linear in real s
    let s = if rep.x.i > SKEW_FLOOR {
        (rep.y.j.max(0.0) / rep.x.i).sqrt()
    } else {
        least_squares(&(&minus_a + &plus_a), &(&plus_a - &minus_a - sqrt.scale(I * u)))
    };
    let t = if rep.y.i > SKEW_FLOOR {
        (rep.x.j.max(0.0) / rep.y.i).sqrt()
    } else {
        // B(t) = t·(E₁ − E₂) + (E₁ + E₂ − v√ρ)
        least_squares(&(&minus_b - &plus_b), &(&minus_b + &plus_b - sqrt.scale_re(v)))
    };
    let sign_s = rep.x.i > SKEW_FLOOR;
    let sign_t = rep.y.i > SKEW_FLOOR;
    let signed = pick_signs(&sqrt, ops, s.abs(), t.abs(), u, v);
    Ok(SaturationParams::new(
        if sign_s { signed.s } else { s },
        if sign_t { signed.t } else { t },
        u,
        v,
    ))
}

/// Real `x` minimizing `‖x·A + B‖_F`; zero when `A` vanishes.
fn least_squares(a: &CMat, b: &CMat) -> f64 {
    let norm = a.hs_inner(a).re;
    if norm <= 1e-300 {
        0.0
    } else {
        -a.hs_inner(b).re / norm
    }
}

/// Residuals of both conditions for the given parameters, with the default tolerance.
pub fn condition_residuals(state: &DensityState, ops: &SpinOps, params: &SaturationParams) -> Result<SaturationReport> {
    condition_residuals_tol(state, ops, params, SATURATION_TOL)
}

/// `saturated ⇔ residual_a, residual_b ≤ tol·dim ∧ gap ≤ tol`.
pub fn condition_residuals_tol(
    state: &DensityState,
    ops: &SpinOps,
    params: &SaturationParams,
    tol: f64,
) -> Result<SaturationReport> {
    if ops.dim() != state.dim() {
        return Err(Error::DimMismatch {
            expected: state.dim(),
            found: ops.dim(),
        });
    }
    let sqrt = sqrt_of(state)?;
    let (a, b) = condition_matrices(&sqrt, ops, params);
    let gap = report(state, ops)?.gap;
    let residual_a = a.frobenius();
    let residual_b = b.frobenius();
    let scale = tol * state.dim() as f64;
    Ok(SaturationReport {
        params: *params,
        residual_a,
        residual_b,
        gap,
        saturated: residual_a <= scale && residual_b <= scale && gap <= tol,
    })
}
