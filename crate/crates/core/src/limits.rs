//! Large-j behaviour: Holstein–Primakoff and Schwinger bosonizations,
//! coherent-state convergence with `z = √(2j) ζ`, and limits of the closed-form
//! symbols.
//!
//! The Dicke index `a = j + m` is the boson number, so `|j,−j⟩ ↔ |0⟩`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{vec_inner, CMat, Complex, ZERO};
use crate::spin::{build_ops, coherent_state, TwoJ};
use crate::wick::{closed_form_condition1, closed_form_condition2};

/// One bosonic mode truncated to `|0⟩..|nmax⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockTrunc {
    pub nmax: usize,
    pub a: CMat,
    pub adag: CMat,
}

impl FockTrunc {
    pub fn new(nmax: usize) -> Self {
        let d = nmax + 1;
        let a = CMat::from_fn(d, |r, c| {
            if c == r + 1 {
                Complex::new((c as f64).sqrt(), 0.0)
            } else {
                ZERO
            }
        });
        let adag = a.adjoint();
        FockTrunc { nmax, a, adag }
    }

    /// Number operator `a†a`.
    pub fn number(&self) -> CMat {
        &self.adag * &self.a
    }

    /// `‖[a, a†] − I‖` on `n < nmax`; the last row is a truncation artifact.
    pub fn commutator_defect(&self) -> f64 {
        let comm = &self.a * &self.adag - &self.adag * &self.a;
        let keep: Vec<usize> = (0..self.nmax).collect();
        (comm.submatrix(&keep) - CMat::identity(self.nmax)).max_abs()
    }
}

/// `‖J₊/√(2j) − a†‖_F` on the lowest `nmax + 1` Dicke states.
pub fn hp_operator_error(j: TwoJ, nmax: usize) -> Result<f64> {
    let tj = j.two_j();
    if nmax > tj as usize {
        return Err(Error::TruncationTooLarge { nmax, two_j: tj });
    }
    if nmax == 0 {
        return Ok(0.0);
    }
    let ops = build_ops(tj)?;
    let keep: Vec<usize> = (0..=nmax).collect();
    let jp = ops.jplus.submatrix(&keep).scale_re(1.0 / (tj as f64).sqrt());
    Ok((jp - FockTrunc::new(nmax).adag).frobenius())
}

/// Normalized `Σ_{n≤nmax} z^n/√(n!) |n⟩`, built in log space.
pub fn truncated_boson_coherent(z: Complex, nmax: usize) -> Vec<Complex> {
    if z.norm() == 0.0 {
        let mut v = vec![ZERO; nmax + 1];
        v[0] = Complex::new(1.0, 0.0);
        return v;
    }
    let (r, phi) = (z.norm(), z.arg());
    let mut ln_fact = 0.0;
    let logs: Vec<f64> = (0..=nmax)
        .map(|n| {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            n as f64 * r.ln() - 0.5 * ln_fact
        })
        .collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut amps: Vec<Complex> = logs
        .iter()
        .enumerate()
        .map(|(n, l)| Complex::from_polar((l - top).exp(), n as f64 * phi))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    amps
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentRow {
    pub two_j: u32,
    pub fidelity: f64,
    pub infidelity: f64,
}

/// Overlap of the spin coherent state with `ζ = z/√(2j)` and the truncated
/// bosonic coherent state `|z⟩`, one row per `j`.
pub fn coherent_convergence(z: Complex, j_list: &[TwoJ]) -> Result<Vec<CoherentRow>> {
    j_list
        .iter()
        .map(|&j| {
            let tj = j.two_j();
            if tj == 0 {
                return Err(Error::Domain {
                    what: "coherent convergence needs j > 0".into(),
                });
            }
            let spin = coherent_state(j, z / (tj as f64).sqrt())?;
            let boson = truncated_boson_coherent(z, tj as usize);
            let fidelity = vec_inner(&boson, spin.amplitudes()).norm_sqr().min(1.0);
            Ok(CoherentRow {
                two_j: tj,
                fidelity,
                infidelity: 1.0 - fidelity,
            })
        })
        .collect()
}

/// Which side of a limit formula carries the complex conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// `ξ̄ ↔ ᾱ/√(2j)`: targets `e^{ᾱβ/s'}` and `e^{−ᾱ²/(2s')}`.
    ConjugateAlpha,
    /// Conjugate on the other variable: `e^{αβ̄/s'}` and `e^{−α²/(2s')}`.
    ConjugateBeta,
}

impl Orientation {
    pub fn label(self) -> &'static str {
        match self {
            Orientation::ConjugateAlpha => "conj_alpha",
            Orientation::ConjugateBeta => "conj_beta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub two_j: u32,
    pub value: Complex,
    pub target: Complex,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationTable {
    pub orientation: Orientation,
    pub rows: Vec<LimitRow>,
    /// Errors strictly decrease and the last one is within `bound`.
    pub converges: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolLimit {
    pub chosen: Orientation,
    pub bound: f64,
    pub candidates: Vec<OrientationTable>,
}

impl SymbolLimit {
    pub fn chosen_table(&self) -> &OrientationTable {
        self.candidates
            .iter()
            .find(|c| c.orientation == self.chosen)
            .expect("chosen orientation is among the candidates")
    }
}

fn assemble(
    values: &[(u32, Complex)],
    targets: [(Orientation, Complex); 2],
    bound_numerator: f64,
) -> SymbolLimit {
    let j_max = values.iter().map(|(tj, _)| *tj as f64 / 2.0).fold(0.0, f64::max);
    let bound = bound_numerator / j_max;
    let candidates: Vec<OrientationTable> = targets
        .iter()
        .map(|&(orientation, target)| {
            let rows: Vec<LimitRow> = values
                .iter()
                .map(|&(two_j, value)| LimitRow {
                    two_j,
                    value,
                    target,
                    rel_error: (value - target).norm() / target.norm(),
                })
                .collect();
            let monotone = rows.windows(2).all(|w| w[1].rel_error < w[0].rel_error);
            let last_ok = rows.last().is_some_and(|r| r.rel_error <= bound);
            OrientationTable {
                orientation,
                rows,
                converges: monotone && last_ok,
            }
        })
        .collect();
    let chosen = candidates
        .iter()
        .min_by(|a, b| {
            let key = |t: &OrientationTable| (!t.converges, t.rows.last().map_or(f64::INFINITY, |r| r.rel_error));
            key(a).partial_cmp(&key(b)).expect("finite errors")
        })
        .map(|t| t.orientation)
        .unwrap_or(Orientation::ConjugateAlpha);
    SymbolLimit {
        chosen,
        bound,
        candidates,
    }
}

fn sorted_nonempty(j_list: &[TwoJ]) -> Result<Vec<TwoJ>> {
    let mut js = j_list.to_vec();
    js.sort();
    js.dedup();
    if js.is_empty() || js[0].two_j() == 0 {
        return Err(Error::Domain {
            what: "symbol limits need a non-empty list of j > 0".into(),
        });
    }
    Ok(js)
}

/// Evaluates the first-condition symbol `c(ξ̄η + s')^{2j}` at
/// `ξ̄ = ᾱ/√(2j)`, `η = β/√(2j)`, divided by its value at the origin, against
/// `e^{ᾱβ/s'}` and `e^{αβ̄/s'}`.
pub fn symbol_limit_condition1(
    s_prime: f64,
    alpha: Complex,
    beta: Complex,
    j_list: &[TwoJ],
) -> Result<SymbolLimit> {
    if s_prime == 0.0 || !s_prime.is_finite() {
        return Err(Error::Domain {
            what: format!("symbol limit needs finite s' ≠ 0, got {s_prime}"),
        });
    }
    let js = sorted_nonempty(j_list)?;
    let x = alpha.conj() * beta / s_prime;
    let mut values = Vec::with_capacity(js.len());
    for j in js {
        let tj = j.two_j() as f64;
        if (x / tj).norm() >= 1.0 {
            return Err(Error::Domain {
                what: format!("|ᾱβ/(2js')| ≥ 1 at 2j = {tj}"),
            });
        }
        let poly = closed_form_condition1(j, s_prime);
        let scale = 1.0 / tj.sqrt();
        let v = poly.eval(alpha.conj() * scale, beta * scale) / poly.eval(ZERO, ZERO);
        values.push((j.two_j(), v));
    }
    let y = alpha * beta.conj() / s_prime;
    Ok(assemble(
        &values,
        [
            (Orientation::ConjugateAlpha, x.exp()),
            (Orientation::ConjugateBeta, y.exp()),
        ],
        2.0 * x.norm_sqr(),
    ))
}

/// Evaluates the univariate factor `f(ξ̄)/f(0)` of the second-condition symbol
/// with `n = 0` at `ξ̄ = ᾱ/√(2j)`, that is `(1 − ᾱ²/(2js'))^j`, against
/// `e^{−ᾱ²/(2s')}` and `e^{−α²/(2s')}`. Only integer `j` admits `n = 0`.
pub fn symbol_limit_condition2(s_prime: f64, alpha: Complex, j_list: &[TwoJ]) -> Result<SymbolLimit> {
    if !(s_prime > 0.0) {
        return Err(Error::NegativeSPrime { s_prime });
    }
    let js = sorted_nonempty(j_list)?;
    let y = alpha.conj() * alpha.conj() / (2.0 * s_prime);
    let mut values = Vec::with_capacity(js.len());
    for j in js {
        if !j.is_integer() {
            return Err(Error::Domain {
                what: format!("n = 0 needs integer j, got 2j = {}", j.two_j()),
            });
        }
        let tj = j.two_j() as f64;
        if (y / j.j()).norm() >= 1.0 {
            return Err(Error::Domain {
                what: format!("|ᾱ²/(2js')| ≥ 1 at 2j = {tj}"),
            });
        }
        let poly = closed_form_condition2(j, s_prime, 0.0)?;
        let v = poly.eval(alpha.conj() / tj.sqrt(), ZERO) / poly.eval(ZERO, ZERO);
        values.push((j.two_j(), v));
    }
    let y_other = alpha * alpha / (2.0 * s_prime);
    Ok(assemble(
        &values,
        [
            (Orientation::ConjugateAlpha, (-y).exp()),
            (Orientation::ConjugateBeta, (-y_other).exp()),
        ],
        2.0 * y.norm_sqr(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchwingerReport {
    pub two_j: u32,
    /// Largest entry of `|J_k(bosons) − J_k(spin)|` over `J₊, J₋, Jz`.
    pub max_error: f64,
    /// `|⟨a+1|J₊|a⟩|²` and `2⟨a|Jz|a⟩` are integers.
    pub integer_elements: bool,
}

/// Two modes truncated at `2j` quanta each; `J₊ = a†b`, `J₋ = ab†`,
/// `Jz = ½(a†a − b†b)` restricted to `n_a + n_b = 2j`, ordered by `n_a`.
pub fn schwinger_check(two_j: u32) -> Result<SchwingerReport> {
    let ops = build_ops(two_j)?;
    let mode = FockTrunc::new(two_j as usize);
    let id = CMat::identity(mode.nmax + 1);
    let a = mode.a.kron(&id);
    let adag = mode.adag.kron(&id);
    let b = id.kron(&mode.a);
    let bdag = id.kron(&mode.adag);
    let width = two_j as usize + 1;
    let sector: Vec<usize> = (0..width).map(|na| na * width + (two_j as usize - na)).collect();
    let jp = (&adag * &b).submatrix(&sector);
    let jm = (&a * &bdag).submatrix(&sector);
    let jz = (&adag * &a - &bdag * &b).scale_re(0.5).submatrix(&sector);
    let max_error = [(&jp, &ops.jplus), (&jm, &ops.jminus), (&jz, &ops.jz)]
        .iter()
        .map(|(x, y)| (*x - *y).max_abs())
        .fold(0.0, f64::max);
    let near_int = |x: f64| (x - x.round()).abs() < 1e-9;
    let integer_elements = (0..width).all(|r| {
        (0..width).all(|c| near_int(jp[(r, c)].norm_sqr()) && near_int(2.0 * jz[(r, c)].re))
    });
    Ok(SchwingerReport {
        two_j,
        max_error,
        integer_elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tj(n: u32) -> TwoJ {
        TwoJ::new(n).unwrap()
    }

    #[test]
    fn fock_truncation() {
        let f = FockTrunc::new(6);
        assert!(f.commutator_defect() < 1e-14);
        assert_eq!(f.a.column(0), vec![ZERO; 7]);
        assert!((f.a[(2, 3)].re - 3f64.sqrt()).abs() < 1e-15);
        assert!((f.number()[(5, 5)].re - 5.0).abs() < 1e-14);
    }

    #[test]
    fn hp_error_matches_closed_form_and_decreases() {
        // ⟨a+1|J₊/√(2j) − a†|a⟩ = √(a+1)(√(1 − a/2j) − 1)
        for n in [8u32, 20, 40] {
            let nmax = 4;
            let oracle: f64 = (0..nmax)
                .map(|a| {
                    let af = a as f64;
                    ((af + 1.0).sqrt() * ((1.0 - af / n as f64).sqrt() - 1.0)).powi(2)
                })
                .sum::<f64>()
                .sqrt();
            assert!((hp_operator_error(tj(n), nmax).unwrap() - oracle).abs() < 1e-12);
        }
        let errs: Vec<f64> = [20u32, 40, 100]
            .iter()
            .map(|&n| hp_operator_error(tj(n), 4).unwrap())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert_eq!(hp_operator_error(tj(6), 0).unwrap(), 0.0);
        // first rung is exact
        assert!(hp_operator_error(tj(10), 1).unwrap() < 1e-15);
        assert!(matches!(
            hp_operator_error(tj(2), 3),
            Err(Error::TruncationTooLarge { nmax: 3, two_j: 2 })
        ));
    }

    #[test]
    fn coherent_states_converge() {
        let js: Vec<TwoJ> = [10u32, 20, 40, 80].iter().map(|&n| tj(n)).collect();
        let rows = coherent_convergence(Complex::new(1.0, 0.0), &js).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].fidelity > w[0].fidelity);
        }
        assert!(rows[3].infidelity * 3.0 < rows[1].infidelity);
        for r in coherent_convergence(ZERO, &js).unwrap() {
            assert_eq!(r.fidelity, 1.0);
        }
    }

    #[test]
    fn boson_coherent_amplitudes() {
        let z = Complex::new(0.6, -0.8);
        let v = truncated_boson_coherent(z, 60);
        let direct_ratio = v[3] / v[2];
        assert!((direct_ratio - z / 3f64.sqrt()).norm() < 1e-13);
    }

    #[test]
    fn condition1_limit_picks_the_converging_orientation() {
        let js: Vec<TwoJ> = [10u32, 20, 40, 80].iter().map(|&n| tj(n)).collect();
        let lim = symbol_limit_condition1(
            0.8,
            Complex::new(0.7, 0.4),
            Complex::new(-0.3, 0.9),
            &js,
        )
        .unwrap();
        assert_eq!(lim.chosen, Orientation::ConjugateAlpha);
        assert!(lim.chosen_table().converges);
        let other = lim
            .candidates
            .iter()
            .find(|c| c.orientation == Orientation::ConjugateBeta)
            .unwrap();
        assert!(!other.converges);
        // the finite-j value is (1 + x/2j)^{2j}
        let x = Complex::new(0.7, -0.4) * Complex::new(-0.3, 0.9) / 0.8;
        let row = lim.chosen_table().rows[0];
        assert!((row.value - (Complex::new(1.0, 0.0) + x / 10.0).powi(10)).norm() < 1e-12);
    }

    #[test]
    fn condition2_limit() {
        let js: Vec<TwoJ> = [10u32, 20, 40, 80].iter().map(|&n| tj(n)).collect();
        let lim = symbol_limit_condition2(1.5, Complex::new(0.5, 0.6), &js).unwrap();
        assert_eq!(lim.chosen, Orientation::ConjugateAlpha);
        assert!(lim.chosen_table().converges);
        assert!(lim.candidates.iter().filter(|c| c.converges).count() == 1);
        assert!(symbol_limit_condition2(1.5, Complex::new(0.5, 0.6), &[tj(3)]).is_err());
        assert!(symbol_limit_condition2(-1.0, ZERO, &js).is_err());
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            symbol_limit_condition1(0.1, Complex::new(2.0, 0.0), Complex::new(2.0, 0.0), &[tj(4)]),
            Err(Error::Domain { .. })
        ));
        assert!(symbol_limit_condition1(0.0, ZERO, ZERO, &[tj(4)]).is_err());
    }

    #[test]
    fn schwinger_reproduces_spin_operators() {
        for n in 0..=8 {
            let r = schwinger_check(n).unwrap();
            assert!(r.max_error < 1e-12, "2j={n}: {}", r.max_error);
            assert!(r.integer_elements);
        }
    }
}
