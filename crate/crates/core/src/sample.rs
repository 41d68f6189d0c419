use nalgebra::DVector;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::CVector;
use crate::{lit, Real};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in the square `[-1, 1] + i[-1, 1]`.
pub(crate) fn random_vector<T: Real>(rng: &mut ChaCha8Rng, n: usize) -> CVector<T> {
    DVector::from_fn(n, |_, _| {
        Complex::new(
            lit(rng.random_range(-1.0..1.0)),
            lit(rng.random_range(-1.0..1.0)),
        )
    })
}

pub(crate) fn basis_vector<T: Real>(n: usize, i: usize) -> CVector<T> {
    let mut v = CVector::zeros(n);
    v[i] = Complex::new(T::one(), T::zero());
    v
}
