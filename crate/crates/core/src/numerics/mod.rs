//! Dense complex linear algebra: matrices, Hermitian eigendecomposition and
//! spectral matrix functions.

mod cmat;
mod eig;

pub use cmat::{vec_inner, vec_norm, CMat, Complex, I, ONE, ZERO};
pub use eig::{
    exp_hermitian, exp_i_hermitian, herm_eig, hybrid_tol, mat_log_hermitian, psd_sqrt, HermEig,
    HERM_TOL, LOG_FLOOR, MAX_SWEEPS, PSD_CLAMP, SQRT_NOISE,
};
pub(crate) use eig::psd_sqrt_from_eig;
