//! Spin-j kinematics on the Dicke basis.
//!
//! Basis vectors are ordered by magnetic number, index `i = j + m`, so index
//! 0 is the lowest weight `|j,−j⟩` and index `2j` is `|j,j⟩`. Half-integers are
//! carried as doubled integers (`two_j`, `two_m`) throughout.

mod rotation;
mod state;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CMat, Complex, I, ZERO};

pub use rotation::{
    axis_angle_from_matrix, coherent_state, decompose_rotation, displacement, frame_matrix,
    frame_rotation, rotation, so3_of, Frame,
};
pub use state::{DensityState, PureState};

/// Default cap on `two_j`; `C(400, 200) ≈ 1e119` stays well inside double range.
pub const MAX_TWO_J: u32 = 400;

/// Spin quantum number stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TwoJ(u32);

impl TwoJ {
    pub fn new(two_j: u32) -> Result<Self> {
        Self::with_cap(two_j, MAX_TWO_J)
    }

    pub fn with_cap(two_j: u32, cap: u32) -> Result<Self> {
        if two_j > cap {
            return Err(Error::CapExceeded { two_j, cap });
        }
        Ok(TwoJ(two_j))
    }

    /// From a (half-)integer `j`; fails unless `2j` is a nonnegative integer.
    pub fn from_j(j: f64) -> Result<Self> {
        let two = 2.0 * j;
        if !(two >= 0.0) || (two - two.round()).abs() > 1e-9 {
            return Err(Error::IndexOutOfRange {
                what: format!("j = {j} is not a nonnegative half-integer"),
            });
        }
        Self::new(two.round() as u32)
    }

    #[inline]
    pub fn two_j(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn j(self) -> f64 {
        self.0 as f64 / 2.0
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn is_integer(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Basis index of `|j,m⟩` given `2m`.
    pub fn index_of(self, two_m: i32) -> Result<usize> {
        let tj = self.0 as i32;
        if two_m < -tj || two_m > tj || (two_m + tj) % 2 != 0 {
            return Err(Error::IndexOutOfRange {
                what: format!("2m = {two_m} is not a magnetic number for 2j = {tj}"),
            });
        }
        Ok(((two_m + tj) / 2) as usize)
    }

    /// `2m` of basis index `i`.
    #[inline]
    pub fn two_m_of(self, index: usize) -> i32 {
        2 * index as i32 - self.0 as i32
    }

    /// Magnetic numbers `m = −j, …, j` in basis order.
    pub fn magnetic_numbers(self) -> impl Iterator<Item = f64> {
        let tj = self.0 as i32;
        (0..=self.0).map(move |i| (2 * i as i32 - tj) as f64 / 2.0)
    }
}

/// `c_m = √((j−m)(j+m+1))`, the `J₊` matrix element `⟨j,m+1|J₊|j,m⟩`.
pub fn cm(j: TwoJ, two_m: i32) -> Result<f64> {
    let idx = j.index_of(two_m)?;
    Ok(c_index(j, idx as i64))
}

/// `c_m` addressed by basis index `i = j + m`; zero outside `0..=2j`, which
/// supplies the ladder boundary conditions (`c_j = 0`, `c_{−j−1} = 0`).
#[inline]
pub fn c_index(j: TwoJ, index: i64) -> f64 {
    let tj = j.two_j() as i64;
    if index < 0 || index > tj {
        return 0.0;
    }
    (((tj - index) * (index + 1)) as f64).sqrt()
}

/// `C(n, k)` by multiplicative recurrence.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 1..=k {
        acc *= (n - k + i) as f64 / i as f64;
    }
    acc
}

/// `ln C(n, k)`
pub fn ln_binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (1..=k)
        .map(|i| ((n - k + i) as f64).ln() - (i as f64).ln())
        .sum()
}

/// Angular-momentum operators of one spin-j irrep (ħ = 1).
#[derive(Debug, Clone)]
pub struct SpinOps {
    pub j: TwoJ,
    pub jx: CMat,
    pub jy: CMat,
    pub jz: CMat,
    pub jplus: CMat,
    pub jminus: CMat,
}

impl SpinOps {
    pub fn new(j: TwoJ) -> Self {
        let d = j.dim();
        let mut jplus = CMat::zeros(d);
        for i in 0..d - 1 {
            jplus[(i + 1, i)] = Complex::new(c_index(j, i as i64), 0.0);
        }
        let jminus = jplus.adjoint();
        let jx = (&jplus + &jminus).scale_re(0.5);
        let jy = (&jplus - &jminus).scale(-I * 0.5);
        let jz = CMat::from_real_diag(&j.magnetic_numbers().collect::<Vec<_>>());
        SpinOps {
            j,
            jx,
            jy,
            jz,
            jplus,
            jminus,
        }
    }

    /// `n·J` for a real 3-vector `n`.
    pub fn along(&self, n: [f64; 3]) -> CMat {
        let mut out = self.jx.scale_re(n[0]);
        out = out + self.jy.scale_re(n[1]);
        out + self.jz.scale_re(n[2])
    }

    /// The three Cartesian components in order.
    pub fn cartesian(&self) -> [&CMat; 3] {
        [&self.jx, &self.jy, &self.jz]
    }

    /// `j(j+1)(2j+1)/3`, the common value of `tr J_a²`.
    pub fn hs_norm_sq(&self) -> f64 {
        let j = self.j.j();
        j * (j + 1.0) * (2.0 * j + 1.0) / 3.0
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }
}

/// Builds `SpinOps` after validating `two_j` against the default cap.
pub fn build_ops(two_j: u32) -> Result<SpinOps> {
    Ok(SpinOps::new(TwoJ::new(two_j)?))
}

/// Dicke basis vector `|j,m⟩`.
pub fn dicke(j: TwoJ, two_m: i32) -> Result<Vec<Complex>> {
    let idx = j.index_of(two_m)?;
    let mut v = vec![ZERO; j.dim()];
    v[idx] = Complex::new(1.0, 0.0);
    Ok(v)
}
