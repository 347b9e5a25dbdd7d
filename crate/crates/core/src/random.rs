//! Seeded random matrices for property tests and sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numerics::{vec_inner, vec_norm, CMat, Complex};
use crate::spin::{DensityState, TwoJ};

/// Deterministic generator used everywhere a seed is exposed.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex number with independent standard normal parts.
pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix of i.i.d. complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    CMat::from_fn(dim, |_, _| gaussian_complex(rng))
}

/// `GG†/tr(GG†)` with `G` Ginibre: a full-rank density matrix almost surely.
pub fn ginibre_state<R: Rng + ?Sized>(j: TwoJ, rng: &mut R) -> DensityState {
    let g = ginibre(j.dim(), rng);
    let gg = &g * g.adjoint();
    DensityState::from_unnormalized(j, &gg).expect("GG† is positive semidefinite")
}

/// Hermitian part of a Ginibre matrix.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    ginibre(dim, rng).hermitian_part()
}

/// Haar-distributed unitary via Gram–Schmidt on Ginibre columns.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let g = ginibre(dim, rng);
    let mut cols: Vec<Vec<Complex>> = Vec::with_capacity(dim);
    for c in 0..dim {
        let mut v = g.column(c);
        for prev in &cols {
            let proj = vec_inner(prev, &v);
            for (x, p) in v.iter_mut().zip(prev) {
                *x -= proj * p;
            }
        }
        let n = vec_norm(&v);
        for x in &mut v {
            *x /= n;
        }
        cols.push(v);
    }
    CMat::from_fn(dim, |r, c| cols[c][r])
}

/// A generic (non-Hermitian) operator.
pub fn random_operator<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    ginibre(dim, rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded(3);
        for d in [1, 2, 5, 9] {
            assert!(random_unitary(d, &mut rng).unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn same_seed_same_state() {
        let j = TwoJ::new(3).unwrap();
        let a = ginibre_state(j, &mut seeded(11));
        let b = ginibre_state(j, &mut seeded(11));
        assert_eq!(a, b);
    }
}
