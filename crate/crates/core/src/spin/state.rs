use super::TwoJ;
use crate::error::{Error, Result};
use crate::numerics::{herm_eig, vec_norm, CMat, Complex, PSD_CLAMP};

/// Normalization tolerance for pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity and trace tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-10;

/// Normalized state vector on the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    j: TwoJ,
    amplitudes: Vec<Complex>,
}

impl PureState {
    /// Validates dimension and normalization.
    pub fn new(j: TwoJ, amplitudes: Vec<Complex>) -> Result<Self> {
        if amplitudes.len() != j.dim() {
            return Err(Error::DimMismatch {
                expected: j.dim(),
                found: amplitudes.len(),
            });
        }
        let norm = vec_norm(&amplitudes);
        if !norm.is_finite() || (norm * norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "pure state norm² = {} differs from 1",
                norm * norm
            )));
        }
        Ok(PureState { j, amplitudes })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(j: TwoJ, mut amplitudes: Vec<Complex>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState(format!(
                "cannot normalize vector of norm {norm}"
            )));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(j, amplitudes)
    }

    pub fn j(&self) -> TwoJ {
        self.j
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex> {
        self.amplitudes
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> CMat {
        CMat::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn to_density(&self) -> DensityState {
        DensityState {
            j: self.j,
            rho: self.projector(),
        }
    }

    /// `|⟨self|other⟩|²`
    pub fn fidelity(&self, other: &PureState) -> f64 {
        crate::numerics::vec_inner(&self.amplitudes, &other.amplitudes).norm_sqr()
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix on the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    j: TwoJ,
    rho: CMat,
}

impl DensityState {
    /// Validates every density-matrix invariant.
    pub fn new(j: TwoJ, rho: CMat) -> Result<Self> {
        if rho.dim() != j.dim() {
            return Err(Error::DimMismatch {
                expected: j.dim(),
                found: rho.dim(),
            });
        }
        if !rho.is_finite() {
            return Err(Error::InvalidState("non-finite matrix entry".into()));
        }
        let herm = rho.hermiticity_defect();
        if herm > STATE_TOL {
            return Err(Error::NotHermitian { defect: herm });
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "trace = {}{:+}i differs from 1",
                tr.re, tr.im
            )));
        }
        let eig = herm_eig(&rho)?;
        if let Some(&low) = eig.eigenvalues.first() {
            if low < -PSD_CLAMP {
                return Err(Error::NotPsd { eigenvalue: low });
            }
        }
        Ok(DensityState { j, rho })
    }

    /// Normalizes `a` to unit trace after symmetrizing it; PSD is still checked.
    pub fn from_unnormalized(j: TwoJ, a: &CMat) -> Result<Self> {
        let h = a.hermitian_part();
        let tr = h.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr} is not positive")));
        }
        Self::new(j, h.scale_re(1.0 / tr))
    }

    pub fn maximally_mixed(j: TwoJ) -> Self {
        let d = j.dim();
        DensityState {
            j,
            rho: CMat::identity(d).scale_re(1.0 / d as f64),
        }
    }

    /// `|j,m⟩⟨j,m|`
    pub fn dicke(j: TwoJ, two_m: i32) -> Result<Self> {
        let v = super::dicke(j, two_m)?;
        Ok(PureState::new(j, v)?.to_density())
    }

    pub fn j(&self) -> TwoJ {
        self.j
    }

    pub fn rho(&self) -> &CMat {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn purity(&self) -> f64 {
        self.rho.trace_product(&self.rho).re
    }

    /// `tr(ρX)`, real part.
    pub fn expect(&self, x: &CMat) -> f64 {
        self.rho.trace_product(x).re
    }

    /// `U ρ U†`. Unitarity is the caller's responsibility; the result is re-validated.
    pub fn conjugate_by(&self, u: &CMat) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        let rotated = (u * &self.rho * u.adjoint()).hermitian_part();
        Self::new(self.j, rotated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{ONE, ZERO};

    #[test]
    fn rejects_bad_density_matrices() {
        let j = TwoJ::new(1).unwrap();
        let not_trace_one = CMat::identity(2);
        assert!(DensityState::new(j, not_trace_one).is_err());

        let indefinite = CMat::from_real_diag(&[1.5, -0.5]);
        assert!(matches!(
            DensityState::new(j, indefinite),
            Err(Error::NotPsd { .. })
        ));

        let mut non_herm = CMat::identity(2).scale_re(0.5);
        non_herm[(0, 1)] = Complex::new(0.1, 0.0);
        assert!(matches!(
            DensityState::new(j, non_herm),
            Err(Error::NotHermitian { .. })
        ));

        let wrong_dim = CMat::identity(3).scale_re(1.0 / 3.0);
        assert!(matches!(
            DensityState::new(j, wrong_dim),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn pure_state_normalization() {
        let j = TwoJ::new(1).unwrap();
        assert!(PureState::new(j, vec![ONE, ONE]).is_err());
        let p = PureState::normalized(j, vec![ONE, ONE]).unwrap();
        assert!((p.to_density().purity() - 1.0).abs() < 1e-14);
        assert!(PureState::normalized(j, vec![ZERO, ZERO]).is_err());
    }
}
