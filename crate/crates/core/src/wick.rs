//! Wick symbols on the SU(2) Bargmann space.
//!
//! With the unnormalized coherent state `‖η⟩ = Σ_b √C(2j,b) η^b |b⟩` (basis
//! index `b = j + m`), an operator `T` has symbol
//! `T̂(ξ, η) = ⟨ξ‖T‖η⟩ = Σ_{a,b} T_{ab} √C(2j,a) √C(2j,b) ξ̄^a η^b`,
//! a polynomial of degree ≤ 2j in each of `ξ̄` and `η`. Products with `J±`
//! act as first-order differential operators:
//!
//! ```text
//! J₊T ↦ (2jξ̄ − ξ̄²∂_ξ̄) T̂     J₋T ↦ ∂_ξ̄ T̂
//! TJ₋ ↦ (2jη − η²∂_η) T̂      TJ₊ ↦ ∂_η T̂
//! ```
//!
//! All of these are exact index shifts on the coefficient grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::intelligent_pure;
use crate::numerics::{CMat, Complex, ZERO};
use crate::spin::{binomial, SpinOps, TwoJ};
use crate::uncertainty::SaturationParams;

/// Coefficient grid: entry `(a, b)` multiplies `ξ̄^a η^b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WickPoly {
    #[serde(rename = "two_j")]
    pub j: TwoJ,
    pub coeff: CMat,
}

impl WickPoly {
    pub fn new(j: TwoJ, coeff: CMat) -> Result<Self> {
        if coeff.dim() != j.dim() {
            return Err(Error::DimMismatch {
                expected: j.dim(),
                found: coeff.dim(),
            });
        }
        Ok(WickPoly { j, coeff })
    }

    pub fn zero(j: TwoJ) -> Self {
        WickPoly {
            j,
            coeff: CMat::zeros(j.dim()),
        }
    }

    /// The constant polynomial `1`.
    pub fn one(j: TwoJ) -> Self {
        let mut p = Self::zero(j);
        p.coeff[(0, 0)] = Complex::new(1.0, 0.0);
        p
    }

    fn degree(&self) -> usize {
        self.j.two_j() as usize
    }

    fn map_grid(&self, f: impl Fn(usize, usize) -> Complex) -> WickPoly {
        WickPoly {
            j: self.j,
            coeff: CMat::from_fn(self.j.dim(), f),
        }
    }

    fn at(&self, a: i64, b: i64) -> Complex {
        let d = self.j.dim() as i64;
        if a < 0 || b < 0 || a >= d || b >= d {
            ZERO
        } else {
            self.coeff[(a as usize, b as usize)]
        }
    }

    /// `T̂(ξ̄, η)` at a point, by Horner in both variables.
    pub fn eval(&self, xi_bar: Complex, eta: Complex) -> Complex {
        let d = self.j.dim();
        let mut acc = ZERO;
        for a in (0..d).rev() {
            let mut row = ZERO;
            for b in (0..d).rev() {
                row = row * eta + self.coeff[(a, b)];
            }
            acc = acc * xi_bar + row;
        }
        acc
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeff.max_abs()
    }

    pub fn scale(&self, s: Complex) -> WickPoly {
        WickPoly {
            j: self.j,
            coeff: self.coeff.scale(s),
        }
    }

    fn combine(&self, other: &WickPoly, f: impl Fn(Complex, Complex) -> Complex) -> WickPoly {
        self.map_grid(|a, b| f(self.coeff[(a, b)], other.coeff[(a, b)]))
    }
}

fn sqrt_binomials(j: TwoJ) -> Vec<f64> {
    (0..=j.two_j()).map(|a| binomial(j.two_j(), a).sqrt()).collect()
}

/// Symbol of an operator given in the Dicke basis.
pub fn symbol_of(t: &CMat, j: TwoJ) -> Result<WickPoly> {
    if t.dim() != j.dim() {
        return Err(Error::DimMismatch {
            expected: j.dim(),
            found: t.dim(),
        });
    }
    let sb = sqrt_binomials(j);
    Ok(WickPoly {
        j,
        coeff: CMat::from_fn(j.dim(), |a, b| t[(a, b)] * (sb[a] * sb[b])),
    })
}

/// Inverse of [`symbol_of`].
pub fn matrix_of(p: &WickPoly) -> CMat {
    let sb = sqrt_binomials(p.j);
    CMat::from_fn(p.j.dim(), |a, b| p.coeff[(a, b)] / (sb[a] * sb[b]))
}

/// `∂_ξ̄ T̂`, the symbol of `J₋T`.
pub fn apply_jminus_left(p: &WickPoly) -> WickPoly {
    p.map_grid(|a, b| p.at(a as i64 + 1, b as i64) * (a as f64 + 1.0))
}

/// `(2jξ̄ − ξ̄²∂_ξ̄) T̂`, the symbol of `J₊T`.
pub fn apply_jplus_left(p: &WickPoly) -> WickPoly {
    let tj = p.degree() as f64;
    p.map_grid(|a, b| p.at(a as i64 - 1, b as i64) * (tj - a as f64 + 1.0))
}

/// `∂_η T̂`, the symbol of `TJ₊`.
pub fn apply_jplus_right(p: &WickPoly) -> WickPoly {
    p.map_grid(|a, b| p.at(a as i64, b as i64 + 1) * (b as f64 + 1.0))
}

/// `(2jη − η²∂_η) T̂`, the symbol of `TJ₋`.
pub fn apply_jminus_right(p: &WickPoly) -> WickPoly {
    let tj = p.degree() as f64;
    p.map_grid(|a, b| p.at(a as i64, b as i64 - 1) * (tj - b as f64 + 1.0))
}

/// `(u', v', s', t')` with `u' = u/(1+s)`, `v' = v/(1−t)`, `s' = (s−1)/(s+1)`,
/// `t' = (1+t)/(1−t)`: the symbol equations read
///
/// ```text
/// (2j(ξ̄−η) − iu′) T̂ = (ξ̄² − s′) ∂_ξ̄T̂ − (η² − s′) ∂_ηT̂
/// (2j(ξ̄+η) − v′) T̂ = (ξ̄² − t′) ∂_ξ̄T̂ + (η² − t′) ∂_ηT̂
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimedParams {
    pub u: f64,
    pub v: f64,
    pub s: f64,
    pub t: f64,
}

impl PrimedParams {
    pub fn from_params(p: &SaturationParams) -> Result<Self> {
        if p.s == -1.0 || p.t == 1.0 {
            return Err(Error::ExcludedParams);
        }
        Ok(PrimedParams {
            u: p.u / (1.0 + p.s),
            v: p.v / (1.0 - p.t),
            s: (p.s - 1.0) / (p.s + 1.0),
            t: (1.0 + p.t) / (1.0 - p.t),
        })
    }

    /// First condition with Gibbs weight `s'`: `t' = −s'`, `u' = v' = 0`.
    pub fn condition1(s_prime: f64) -> Self {
        PrimedParams {
            u: 0.0,
            v: 0.0,
            s: s_prime,
            t: -s_prime,
        }
    }

    /// Second condition: `t' = s'`, `u' = 0`.
    pub fn condition2(s_prime: f64, v_prime: f64) -> Self {
        PrimedParams {
            u: 0.0,
            v: v_prime,
            s: s_prime,
            t: s_prime,
        }
    }
}

/// Max coefficient of `LHS − RHS` for both symbol equations, evaluated as
/// `s'(J₋T − TJ₊) + (J₊T − TJ₋) − iu'T` and `t'(J₋T + TJ₊) + (J₊T + TJ₋) − v'T`.
pub fn residual_primed(p: &WickPoly, pp: &PrimedParams) -> (f64, f64) {
    let lm = apply_jminus_left(p);
    let lp = apply_jplus_left(p);
    let rp = apply_jplus_right(p);
    let rm = apply_jminus_right(p);
    let iu = Complex::new(0.0, pp.u);
    let res_a = p.map_grid(|a, b| {
        let g = |w: &WickPoly| w.coeff[(a, b)];
        (g(&lm) - g(&rp)) * pp.s + (g(&lp) - g(&rm)) - iu * p.coeff[(a, b)]
    });
    let res_b = p.map_grid(|a, b| {
        let g = |w: &WickPoly| w.coeff[(a, b)];
        (g(&lm) + g(&rp)) * pp.t + (g(&lp) + g(&rm)) - p.coeff[(a, b)] * pp.v
    });
    (res_a.max_abs(), res_b.max_abs())
}

/// Residuals of the two symbol equations for unprimed parameters.
pub fn residual_eq3_eq4(p: &WickPoly, params: &SaturationParams) -> Result<(f64, f64)> {
    Ok(residual_primed(p, &PrimedParams::from_params(params)?))
}

/// Residuals on the lines `s = −1`, `t = 1`:
/// `(iu/2)T̂ = ∂_ηT̂ − ∂_ξ̄T̂` and `(v/2)T̂ = ∂_ξ̄T̂ + ∂_ηT̂`.
pub fn residual_special(p: &WickPoly, u: f64, v: f64) -> (f64, f64) {
    let dx = apply_jminus_left(p);
    let de = apply_jplus_right(p);
    let half_iu = Complex::new(0.0, u / 2.0);
    let a = p.combine(&dx, |t, x| t * half_iu + x);
    let a = a.combine(&de, |acc, e| acc - e);
    let b = dx.combine(&de, |x, e| x + e);
    let b = b.combine(p, |acc, t| acc - t * (v / 2.0));
    (a.max_abs(), b.max_abs())
}

/// `c(ξ̄η + s')^{2j}` with `c` chosen so that the matrix squares to the
/// unit-trace Gibbs state.
pub fn closed_form_condition1(j: TwoJ, s_prime: f64) -> WickPoly {
    let tj = j.two_j();
    let c = if s_prime.abs() == 1.0 {
        1.0 / (j.dim() as f64).sqrt()
    } else {
        ((1.0 - s_prime * s_prime) / (1.0 - s_prime.powi(2 * tj as i32 + 2))).sqrt()
    };
    let mut p = WickPoly::zero(j);
    for a in 0..=tj {
        let val = c * binomial(tj, a) * s_prime.powi((tj - a) as i32);
        p.coeff[(a as usize, a as usize)] = Complex::new(val, 0.0);
    }
    p
}

/// `2n = v'/(2√s')` checked against the magnetic numbers of `j`.
pub fn condition2_label(j: TwoJ, s_prime: f64, v_prime: f64) -> Result<i32> {
    if !(s_prime > 0.0) {
        return Err(Error::NegativeSPrime { s_prime });
    }
    let n = v_prime / (4.0 * s_prime.sqrt());
    let two_n = 2.0 * n;
    let rounded = two_n.round();
    let tj = j.two_j() as f64;
    if (two_n - rounded).abs() > 1e-9 || rounded.abs() > tj || (rounded + tj) as i64 % 2 != 0 {
        return Err(Error::QuantizationViolated { n, j: j.j() });
    }
    Ok(rounded as i32)
}

/// Coefficients of `(x + r)^{e1} (x − r)^{e2}` in ascending powers.
fn factor_poly(r: f64, e1: u32, e2: u32) -> Vec<f64> {
    let mut poly = vec![1.0];
    for root in std::iter::repeat_n(-r, e1 as usize).chain(std::iter::repeat_n(r, e2 as usize)) {
        // multiply by (x − root)
        let mut next = vec![0.0; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= root * c;
        }
        poly = next;
    }
    poly
}

/// `c·f(ξ̄)·f(η)` with `f(x) = (x + √s')^{j+n} (x − √s')^{j−n}`,
/// `n = v'/(4√s')`, normalized so the matrix is a unit-trace projector.
pub fn closed_form_condition2(j: TwoJ, s_prime: f64, v_prime: f64) -> Result<WickPoly> {
    let two_n = condition2_label(j, s_prime, v_prime)?;
    let tj = j.two_j() as i32;
    let e1 = ((tj + two_n) / 2) as u32;
    let e2 = ((tj - two_n) / 2) as u32;
    let f = factor_poly(s_prime.sqrt(), e1, e2);
    let norm_sq: f64 = f
        .iter()
        .enumerate()
        .map(|(a, fa)| fa * fa / binomial(tj as u32, a as u32))
        .sum();
    let c = 1.0 / norm_sq;
    Ok(WickPoly {
        j,
        coeff: CMat::from_fn(j.dim(), |a, b| Complex::new(c * f[a] * f[b], 0.0)),
    })
}

/// Scale-free comparison of two coefficient grids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proportionality {
    /// `min_c ‖A − cB‖/‖A‖`
    pub residual: f64,
    /// `|⟨A, B⟩|/(‖A‖‖B‖)`
    pub cosine: f64,
}

pub fn proportionality(a: &WickPoly, b: &WickPoly) -> Proportionality {
    let na = a.coeff.frobenius();
    let nb = b.coeff.frobenius();
    if na == 0.0 || nb == 0.0 {
        let same = na == nb;
        return Proportionality {
            residual: if same { 0.0 } else { 1.0 },
            cosine: if same { 1.0 } else { 0.0 },
        };
    }
    let inner = b.coeff.hs_inner(&a.coeff);
    let c = inner / (nb * nb);
    let residual = (&a.coeff - b.coeff.scale(c)).frobenius() / na;
    Proportionality {
        residual,
        cosine: inner.norm() / (na * nb),
    }
}

/// Builds `|φ_n⟩ = e^{−½ln k·Jz} e^{−iπ/2 Jy}|j,n⟩`, takes the symbol of
/// `√ρ = |φ_n⟩⟨φ_n|`, and returns its proportionality residual against
/// [`closed_form_condition2`] with `s' = k`, `v' = 4n√k`.
pub fn correspondence_check(ops: &SpinOps, two_n: i32, k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Domain {
            what: format!("correspondence needs k > 0, got {k}"),
        });
    }
    let j = ops.j;
    let phi = intelligent_pure(ops, two_n, -0.5 * k.ln(), &CMat::identity(j.dim()))?;
    let sqrt_rho = phi.projector();
    let from_matrix = symbol_of(&sqrt_rho, j)?;
    let closed = closed_form_condition2(j, k, 2.0 * two_n as f64 * k.sqrt())?;
    Ok(proportionality(&from_matrix, &closed).residual)
}

/// Symbol of `√gibbs(s')` against [`closed_form_condition1`].
pub fn condition1_correspondence(j: TwoJ, s_prime: f64) -> Result<Proportionality> {
    let gibbs = crate::families::gibbs_state(j, s_prime);
    let sqrt = crate::numerics::psd_sqrt(gibbs.rho())?;
    Ok(proportionality(&symbol_of(&sqrt, j)?, &closed_form_condition1(j, s_prime)))
}

/// `T = (1+τ)/(1−τ)` and `Ψ = 2 arg(1−τ)`, so that
/// `Ω(1)·Ω(τ) = Ω(T)·e^{−iΨJz}` in the 2×2 representation.
pub fn su2_compose(tau: Complex) -> Result<(Complex, f64)> {
    let one = Complex::new(1.0, 0.0);
    if (one - tau).norm() == 0.0 {
        return Err(Error::PoleAtOne);
    }
    Ok(((one + tau) / (one - tau), 2.0 * (one - tau).arg()))
}

/// `Ω(α) = (1/√(1+|α|²)) [[1, α], [−ᾱ, 1]]`
pub fn omega_2x2(alpha: Complex) -> CMat {
    let one = Complex::new(1.0, 0.0);
    let n = 1.0 / (1.0 + alpha.norm_sqr()).sqrt();
    CMat::from_row_major(2, vec![one * n, alpha * n, -alpha.conj() * n, one * n])
        .expect("2×2 layout")
}

/// `‖Ω(1)Ω(τ) − Ω(T)e^{−iΨJz}‖_F` by explicit 2×2 products.
pub fn su2_compose_residual(tau: Complex) -> Result<f64> {
    let (t, psi) = su2_compose(tau)?;
    let lhs = omega_2x2(Complex::new(1.0, 0.0)) * omega_2x2(tau);
    let phase = CMat::from_diag(&[
        Complex::from_polar(1.0, -psi / 2.0),
        Complex::from_polar(1.0, psi / 2.0),
    ]);
    Ok((lhs - omega_2x2(t) * phase).frobenius())
}

/// `Σ conj(P_ab) Q_ab / (C(2j,a) C(2j,b))`, the Bargmann-measure pairing
/// applied in each variable; equals `tr(P̌† Q̌)` for the matrices.
pub fn symbol_inner_product(p: &WickPoly, q: &WickPoly) -> Result<Complex> {
    if p.j != q.j {
        return Err(Error::DimMismatch {
            expected: p.j.dim(),
            found: q.j.dim(),
        });
    }
    let tj = p.j.two_j();
    let d = p.j.dim();
    let mut acc = ZERO;
    for a in 0..d {
        for b in 0..d {
            let w = binomial(tj, a as u32) * binomial(tj, b as u32);
            acc += p.coeff[(a, b)].conj() * q.coeff[(a, b)] / w;
        }
    }
    Ok(acc)
}

/// `tr T = Σ_a T̂_{aa} / C(2j, a)`
pub fn symbol_trace(p: &WickPoly) -> Complex {
    let tj = p.j.two_j();
    (0..p.j.dim())
        .map(|a| p.coeff[(a, a)] / binomial(tj, a as u32))
        .sum()
}
