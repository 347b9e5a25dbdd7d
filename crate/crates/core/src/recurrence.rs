//! Element-wise re-derivation of saturating states from the two operator
//! conditions.
//!
//! Written on matrix elements `p_{m,n} = ⟨j,m|√ρ|j,n⟩`, and with
//! `q = v/(2(1−t)) − iu/(2(s+1))`, `k = (s+t)/((s+1)(1−t))`,
//! `l = (st+1)/((s+1)(1−t))`, the conditions become a row equation (R) and
//! a column equation (C):
//!
//! ```text
//! (R)  c_{m−1} p_{m−1,n} = q̄ p_{m,n} − k c_m p_{m+1,n} − l c_n p_{m,n+1}
//! (C)  c_{n−1} p_{m,n−1} = q p_{m,n} − l c_m p_{m+1,n} − k c_n p_{m,n+1}
//! ```
//!
//! Seeding `p_{j,j} = 1`, the top row follows from (C) alone (`c_j = 0`
//! removes `l`), and every lower row from (R). The system is overdetermined:
//! each instance not used for filling is a consistency check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CMat, Complex, ZERO};
use crate::spin::{c_index, DensityState, SpinOps, TwoJ};
use crate::uncertainty::{report, SaturationParams};

/// Relative consistency tolerance, scaled by `max(1, max|p|)`.
pub const CONSISTENCY_TOL: f64 = 1e-8;
/// Tolerance for "on a condition" and for quantization in scans.
pub const CONDITION_TOL: f64 = 1e-8;

/// Grid of `p_{m,n}`, stored as a matrix with row `j+m`, column `j+n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqrtMatrixElems {
    pub j: TwoJ,
    pub p: CMat,
}

impl SqrtMatrixElems {
    /// `p_{m,n}` addressed by `2m`, `2n`.
    pub fn get(&self, two_m: i32, two_n: i32) -> Result<Complex> {
        let a = self.j.index_of(two_m)?;
        let b = self.j.index_of(two_n)?;
        Ok(self.p[(a, b)])
    }

    pub fn max_abs(&self) -> f64 {
        self.p.max_abs()
    }
}

/// Which relation a residual belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    J1,
    J2,
    Hermiticity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub two_m: i32,
    pub two_n: i32,
    pub equation: Equation,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceOutcome {
    pub elems: Option<SqrtMatrixElems>,
    pub consistent: bool,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub violated_equations: Vec<Violation>,
    /// `P P†/tr(P P†)`, present when consistent.
    pub rho: Option<CMat>,
}

impl RecurrenceOutcome {
    /// The state, or [`Error::SeedVanishes`] when the equations admit only
    /// `p_{j,j} = 0`, which forces every element (and `ρ`) to zero.
    pub fn state(&self) -> Result<DensityState> {
        match (&self.elems, &self.rho) {
            (Some(e), Some(rho)) if self.consistent => DensityState::new(e.j, rho.clone()),
            _ => Err(Error::SeedVanishes),
        }
    }
}

fn p_at(p: &CMat, a: i64, b: i64) -> Complex {
    let d = p.dim() as i64;
    if a < 0 || b < 0 || a >= d || b >= d {
        ZERO
    } else {
        p[(a as usize, b as usize)]
    }
}

/// Top row `a = 2j` from (C): `c_{n−1} p_{j,n−1} = q p_{j,n} − k c_n p_{j,n+1}`.
pub fn top_row(j: TwoJ, q: Complex, k: f64) -> Vec<Complex> {
    let d = j.dim();
    let c = |i: i64| c_index(j, i);
    let mut row = vec![ZERO; d];
    row[d - 1] = Complex::new(1.0, 0.0);
    for b in (1..d).rev() {
        let next = if b + 1 < d { row[b + 1] } else { ZERO };
        row[b - 1] = (q * row[b] - next * (k * c(b as i64))) / c(b as i64 - 1);
    }
    row
}

/// Fills the full grid from the seed `p_{j,j} = 1`.
pub fn fill(j: TwoJ, q: Complex, k: f64, l: f64) -> CMat {
    let d = j.dim();
    let c = |i: i64| c_index(j, i);
    let mut p = CMat::zeros(d);
    for (b, v) in top_row(j, q, k).into_iter().enumerate() {
        p[(d - 1, b)] = v;
    }
    for a in (0..d as i64 - 1).rev() {
        for b in 0..d as i64 {
            let val = q.conj() * p_at(&p, a + 1, b)
                - p_at(&p, a + 2, b) * (k * c(a + 1))
                - p_at(&p, a + 1, b + 1) * (l * c(b));
            p[(a as usize, b as usize)] = val / c(a);
        }
    }
    p
}

/// `(LHS − RHS)` of (R) and (C) at grid point `(a, b)`.
fn equation_residuals(j: TwoJ, p: &CMat, q: Complex, k: f64, l: f64, a: i64, b: i64) -> (f64, f64) {
    let c = |i: i64| c_index(j, i);
    let here = p_at(p, a, b);
    let down = p_at(p, a + 1, b) * c(a);
    let right = p_at(p, a, b + 1) * c(b);
    let row_eq = p_at(p, a - 1, b) * c(a - 1) - (q.conj() * here - down * k - right * l);
    let col_eq = p_at(p, a, b - 1) * c(b - 1) - (q * here - down * l - right * k);
    (row_eq.norm(), col_eq.norm())
}

/// Solves in terms of `(q, k, l)` directly, which also covers limits such as
/// `s → ∞` where the `(s, t, u, v)` form is singular.
pub fn solve_recurrence_qkl(j: TwoJ, q: Complex, k: f64, l: f64) -> RecurrenceOutcome {
    solve_recurrence_qkl_tol(j, q, k, l, CONSISTENCY_TOL)
}

pub fn solve_recurrence_qkl_tol(j: TwoJ, q: Complex, k: f64, l: f64, tol: f64) -> RecurrenceOutcome {
    let p = fill(j, q, k, l);
    let d = j.dim() as i64;
    let scale = tol * p.max_abs().max(1.0);
    let finite = p.is_finite();

    let mut worst: f64 = 0.0;
    let mut violations = Vec::new();
    let mut record = |a: i64, b: i64, equation: Equation, residual: f64| {
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        worst = worst.max(residual);
        if residual > scale {
            violations.push(Violation {
                two_m: j.two_m_of(a as usize),
                two_n: j.two_m_of(b as usize),
                equation,
                residual,
            });
        }
    };
    for a in 0..d {
        for b in 0..d {
            let (r1, r2) = equation_residuals(j, &p, q, k, l, a, b);
            record(a, b, Equation::J1, r1);
            record(a, b, Equation::J2, r2);
        }
    }
    for a in 0..d {
        for b in a + 1..d {
            let h = (p[(a as usize, b as usize)] - p[(b as usize, a as usize)].conj()).norm();
            record(a, b, Equation::Hermiticity, h);
        }
    }

    let consistent = finite && worst <= scale;
    let rho = consistent.then(|| {
        let pp = &p * p.adjoint();
        let tr = pp.trace().re;
        pp.scale_re(1.0 / tr).hermitian_part()
    });
    RecurrenceOutcome {
        elems: Some(SqrtMatrixElems { j, p }),
        consistent,
        worst_residual: worst,
        tolerance: scale,
        violated_equations: violations,
        rho,
    }
}

/// Solves for parameters off the excluded lines `s = −1`, `t = 1`.
pub fn solve_recurrence(j: TwoJ, params: &SaturationParams) -> Result<RecurrenceOutcome> {
    solve_recurrence_tol(j, params, CONSISTENCY_TOL)
}

pub fn solve_recurrence_tol(j: TwoJ, params: &SaturationParams, tol: f64) -> Result<RecurrenceOutcome> {
    match (params.q, params.k, params.l) {
        (Some(q), Some(k), Some(l)) => Ok(solve_recurrence_qkl_tol(j, q, k, l, tol)),
        _ => Err(Error::ExcludedParams),
    }
}

/// On the lines `s = −1` or `t = 1` the only saturating state is `|j,−j⟩`.
pub fn solve_special(j: TwoJ) -> DensityState {
    DensityState::dicke(j, -(j.two_j() as i32)).expect("lowest weight is a valid index")
}

fn require_j_at_least_one(j: TwoJ) -> Result<()> {
    if j.two_j() < 2 {
        return Err(Error::Domain {
            what: format!("lemma checks need j ≥ 1, got j = {}", j.j()),
        });
    }
    Ok(())
}

/// `|p_A − p_B|` for the two independent computations of `p_{j−1,j−2}`:
/// (R) at `(j, j−2)` versus (C) at `(j−1, j−1)`. Vanishes iff `q·l = 0`.
pub fn check_lemma1(j: TwoJ, q: Complex, k: f64, l: f64) -> Result<f64> {
    require_j_at_least_one(j)?;
    let top = j.two_j() as i64;
    let c = |i: i64| c_index(j, i);
    let (c1, c2) = (c(top - 1), c(top - 2));
    let row = top_row(j, q, k);
    let r = |b: i64| row[b as usize];
    // second row from (R) at m = j
    let below = |b: i64| {
        let right = if b < top { r(b + 1) } else { ZERO };
        (q.conj() * r(b) - right * (l * c(b))) / c1
    };
    let via_row = below(top - 2);
    let via_col = (q * below(top - 1) - r(top - 1) * (l * c1) - below(top) * (k * c1)) / c2;
    Ok((via_row - via_col).norm())
}

/// `max_d |p_{j,j−d}(−q) − (−1)^d p_{j,j−d}(q)|` over the top row: the
/// even/odd structure of the row polynomials in `q`.
pub fn check_lemma2_parity(j: TwoJ, q: Complex, k: f64) -> Result<f64> {
    require_j_at_least_one(j)?;
    let plus = top_row(j, q, k);
    let minus = top_row(j, -q, k);
    let d = j.dim();
    Ok((0..d)
        .map(|b| {
            let dist = d - 1 - b;
            let sign = if dist.is_multiple_of(2) { 1.0 } else { -1.0 };
            (minus[b] - plus[b] * sign).norm()
        })
        .fold(0.0, f64::max))
}

/// Residual of the boundary equation (C) at `(m, n) = (j, −j)` when `k = 0`:
/// `q·p_{j,−j} = q^{2j+1}/∏ c`.
pub fn lemma3_boundary_residual(j: TwoJ, q: Complex) -> f64 {
    let row = top_row(j, q, 0.0);
    (q * row[0]).norm()
}

/// True iff `k = 0` with `q ≠ 0` is inconsistent, as the lemma asserts.
pub fn check_lemma3(j: TwoJ, q: Complex) -> Result<bool> {
    if q == ZERO {
        return Err(Error::Domain {
            what: "lemma 3 check needs q ≠ 0".into(),
        });
    }
    Ok(lemma3_boundary_residual(j, q) > 0.0)
}

/// Residual of the equation that rules out `l ≠ 0` when `q = 0`, `k ≠ 0`:
/// (C) at `(j−1, −j)` for integer `j`, and (C) at `(j, −j)` for half-integer
/// `j`, where it forces `k = 0` instead.
pub fn lemma4_residual(j: TwoJ, k: f64, l: f64) -> f64 {
    let p = fill(j, ZERO, k, l);
    let top = j.two_j() as i64;
    let a = if j.is_integer() { top - 1 } else { top };
    let (_, r2) = equation_residuals(j, &p, ZERO, k, l, a, 0);
    r2
}

/// True iff `q = 0` with `k ≠ 0 ≠ l` is inconsistent.
pub fn check_lemma4(j: TwoJ, k: f64, l: f64) -> Result<bool> {
    require_j_at_least_one(j)?;
    if k == 0.0 || l == 0.0 {
        return Err(Error::Domain {
            what: "lemma 4 check needs k ≠ 0 and l ≠ 0".into(),
        });
    }
    Ok(lemma4_residual(j, k, l) > 0.0)
}

/// Which saturation condition a parameter point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OnCondition {
    /// `s = −t`, `u = v = 0`
    First,
    /// `st = −1`, `u = 0`
    Second,
}

pub fn on_condition(p: &SaturationParams) -> Option<OnCondition> {
    let small = |x: f64| x.abs() <= CONDITION_TOL;
    if small(p.s + p.t) && small(p.u) && small(p.v) {
        Some(OnCondition::First)
    } else if small(p.s * p.t + 1.0) && small(p.u) {
        Some(OnCondition::Second)
    } else {
        None
    }
}

/// For the second condition, `n = q/(2√k)` when `k > 0` and `q` is real.
pub fn intelligent_label(p: &SaturationParams) -> Option<f64> {
    let (q, k) = (p.q?, p.k?);
    (k > 0.0 && q.im.abs() <= CONDITION_TOL).then(|| q.re / (2.0 * k.sqrt()))
}

/// Whether an on-condition point should yield a state: always for the first
/// condition; for the second, when `k > 0` and `n` is a magnetic number of `j`.
pub fn quantization_valid(j: TwoJ, p: &SaturationParams) -> bool {
    match on_condition(p) {
        Some(OnCondition::First) => true,
        Some(OnCondition::Second) => match intelligent_label(p) {
            Some(n) => {
                let two_n = 2.0 * n;
                let rounded = two_n.round();
                (two_n - rounded).abs() <= 1e-9
                    && rounded.abs() <= j.two_j() as f64
                    && (rounded as i64 + j.two_j() as i64) % 2 == 0
            }
            None => false,
        },
        None => false,
    }
}

/// Axis values of an `(s, t, u, v)` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl Default for ParamGrid {
    /// 7×7×3×3, keeping at least 0.5 away from `s = −1` and `t = 1`.
    fn default() -> Self {
        let st = vec![-3.0, -2.0, -0.5, 0.0, 0.5, 2.0, 3.0];
        ParamGrid {
            s: st.clone(),
            t: st,
            u: vec![-1.0, 0.0, 1.0],
            v: vec![-1.0, 0.0, 1.0],
        }
    }
}

impl ParamGrid {
    /// Points in `s`-major order.
    pub fn points(&self) -> Vec<SaturationParams> {
        let mut out = Vec::with_capacity(self.s.len() * self.t.len() * self.u.len() * self.v.len());
        for &s in &self.s {
            for &t in &self.t {
                for &u in &self.u {
                    for &v in &self.v {
                        out.push(SaturationParams::new(s, t, u, v));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub s: f64,
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub consistent: bool,
    pub worst_residual: f64,
    /// Refined-relation gap of the recovered state, when consistent.
    pub gap: Option<f64>,
    pub on_condition: Option<OnCondition>,
    pub quantization_valid: bool,
}

impl ScanRow {
    /// A consistent point off both conditions, or an expected solution missing.
    pub fn contradicts_proposition(&self) -> bool {
        (self.consistent && self.on_condition.is_none())
            || (self.quantization_valid && !self.consistent)
    }
}

fn scan_point(j: TwoJ, ops: &SpinOps, p: &SaturationParams, tol: f64) -> Result<ScanRow> {
    let out = solve_recurrence_tol(j, p, tol)?;
    let gap = if out.consistent {
        Some(report(&out.state()?, ops)?.gap)
    } else {
        None
    };
    Ok(ScanRow {
        s: p.s,
        t: p.t,
        u: p.u,
        v: p.v,
        consistent: out.consistent,
        worst_residual: out.worst_residual,
        gap,
        on_condition: on_condition(p),
        quantization_valid: quantization_valid(j, p),
    })
}

/// Runs the recurrence over every grid point (in parallel, rows in grid
/// order). Points on `s = −1` or `t = 1` are rejected.
pub fn proposition1_scan(j: TwoJ, grid: &ParamGrid) -> Result<Vec<ScanRow>> {
    proposition1_scan_tol(j, grid, CONSISTENCY_TOL)
}

pub fn proposition1_scan_tol(j: TwoJ, grid: &ParamGrid, tol: f64) -> Result<Vec<ScanRow>> {
    let ops = SpinOps::new(j);
    grid.points()
        .par_iter()
        .map(|p| scan_point(j, &ops, p, tol))
        .collect()
}
