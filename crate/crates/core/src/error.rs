use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("Jacobi diagonalization did not converge within {sweeps} sweeps (off-norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },

    #[error("state is singular (eigenvalue {eigenvalue:.3e} below {threshold:.1e})")]
    SingularState { eigenvalue: f64, threshold: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("two_j = {two_j} exceeds the cap of {cap}")]
    CapExceeded { two_j: u32, cap: u32 },

    #[error("index out of range: {what}")]
    IndexOutOfRange { what: String },

    #[error("rotation axis is not a unit vector (norm {norm})")]
    NonUnitAxis { norm: f64 },

    #[error("numerical overflow: {what}")]
    Overflow { what: String },

    #[error("matrix is not an SU(2) group element (best residual {residual:.3e})")]
    NotSu2Element { residual: f64 },

    #[error("skew information along {axis} vanishes; saturation parameter is unconstrained")]
    DegenerateSkew { axis: char },

    #[error("frame is not right-handed orthonormal (defect {defect:.3e})")]
    NonOrthonormalFrame { defect: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("recurrence forces the seed element p_(j,j) to vanish")]
    SeedVanishes,

    #[error("parameters s = -1 or t = 1 are excluded here; use the special-case routine")]
    ExcludedParams,

    #[error("quantization violated: n = {n} is not a valid magnetic number for j = {j}")]
    QuantizationViolated { n: f64, j: f64 },

    #[error("s' must be positive, got {s_prime}")]
    NegativeSPrime { s_prime: f64 },

    #[error("composition has a pole at tau = 1")]
    PoleAtOne,

    #[error("truncation nmax = {nmax} exceeds 2j = {two_j}")]
    TruncationTooLarge { nmax: usize, two_j: u32 },

    #[error("domain error: {what}")]
    Domain { what: String },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
