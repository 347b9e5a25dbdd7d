use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Complex = Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMat {
    dim: usize,
    data: Vec<Complex>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "CMat dimension must be positive");
        CMat {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[Complex]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails if `data` is not square.
    pub fn from_row_major(dim: usize, data: Vec<Complex>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::DimMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(CMat { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        CMat { dim, data }
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &[Complex], b: &[Complex]) -> Self {
        assert_eq!(a.len(), b.len());
        Self::from_fn(a.len(), |r, c| a[r] * b[c].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, c: usize) -> Vec<Complex> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    pub fn diag(&self) -> Vec<Complex> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        CMat {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex) -> Self {
        CMat {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex::new(s, 0.0))
    }

    /// `‖A − A†‖_F`
    pub fn hermiticity_defect(&self) -> f64 {
        let mut acc = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += (self[(r, c)] - self[(c, r)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖A A† − I‖_F`
    pub fn unitarity_defect(&self) -> f64 {
        (self * &self.adjoint() - CMat::identity(self.dim)).frobenius()
    }

    /// Hilbert–Schmidt inner product `tr(A† B)`.
    pub fn hs_inner(&self, other: &CMat) -> Complex {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &CMat) -> Complex {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for r in 0..n {
            for k in 0..n {
                acc += self[(r, k)] * other[(k, r)];
            }
        }
        acc
    }

    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Kronecker product `A ⊗ B`.
    pub fn kron(&self, other: &CMat) -> CMat {
        let (n, m) = (self.dim, other.dim);
        CMat::from_fn(n * m, |r, c| self[(r / m, c / m)] * other[(r % m, c % m)])
    }

    /// Restriction to the rows/columns listed in `idx`, in that order.
    pub fn submatrix(&self, idx: &[usize]) -> CMat {
        CMat::from_fn(idx.len(), |r, c| self[(idx[r], idx[c])])
    }

    /// Projects onto the Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> CMat {
        CMat::from_fn(self.dim, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex {
        &mut self.data[r * self.dim + c]
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = self
                .row(r)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn matmul(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.dim, b.dim, "matrix dimensions differ");
    let n = a.dim;
    let mut out = CMat::zeros(n);
    for r in 0..n {
        for k in 0..n {
            let ark = a.data[r * n + k];
            if ark == ZERO {
                continue;
            }
            let brow = &b.data[k * n..(k + 1) * n];
            let orow = &mut out.data[r * n..(r + 1) * n];
            for (o, bv) in orow.iter_mut().zip(brow) {
                *o += ark * bv;
            }
        }
    }
    out
}

impl Mul<&CMat> for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        matmul(self, rhs)
    }
}

impl Mul<CMat> for CMat {
    type Output = CMat;
    fn mul(self, rhs: CMat) -> CMat {
        matmul(&self, &rhs)
    }
}

impl Mul<&CMat> for CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        matmul(&self, rhs)
    }
}

impl Mul<CMat> for &CMat {
    type Output = CMat;
    fn mul(self, rhs: CMat) -> CMat {
        matmul(self, &rhs)
    }
}

macro_rules! elementwise {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&CMat> for &CMat {
            type Output = CMat;
            fn $method(self, rhs: &CMat) -> CMat {
                assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
                CMat {
                    dim: self.dim,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }
        impl $trait<CMat> for CMat {
            type Output = CMat;
            fn $method(self, rhs: CMat) -> CMat {
                &self $op &rhs
            }
        }
        impl $trait<&CMat> for CMat {
            type Output = CMat;
            fn $method(self, rhs: &CMat) -> CMat {
                &self $op rhs
            }
        }
        impl $trait<CMat> for &CMat {
            type Output = CMat;
            fn $method(self, rhs: CMat) -> CMat {
                self $op &rhs
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl Neg for CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale_re(-1.0)
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale_re(-1.0)
    }
}

/// Rows of `[re, im]` pairs.
impl Serialize for CMat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim)
            .map(|r| self.row(r).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(serde::de::Error::custom(format!(
                    "row {r} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&[re, im]| Complex::new(re, im)));
        }
        CMat::from_row_major(dim, data).map_err(serde::de::Error::custom)
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a|b⟩`
pub fn vec_inner(a: &[Complex], b: &[Complex]) -> Complex {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
