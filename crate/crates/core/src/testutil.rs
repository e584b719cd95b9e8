//! Shared fixtures for unit tests.

use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::Mat;
use crate::poly::MultiPoly;
use crate::scalar::Coeff;

/// -sum x_i^4 + 2 sum_{i<j} x_i^2 x_j^2 + 8 x1 x2 x3 x4: the generating
/// polynomial of G(4,2), hyperbolic w.r.t. the all-ones vector.
pub fn quartic_terms<T: Coeff>() -> Vec<(Vec<u32>, T)> {
    let mut terms = Vec::new();
    for i in 0..4 {
        let mut e = vec![0u32; 4];
        e[i] = 4;
        terms.push((e, T::from_int(-1)));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let mut e = vec![0u32; 4];
            e[i] = 2;
            e[j] = 2;
            terms.push((e, T::from_int(2)));
        }
    }
    terms.push((vec![1, 1, 1, 1], T::from_int(8)));
    terms
}

pub fn quartic_f64() -> MultiPoly<f64> {
    MultiPoly::from_terms(4, quartic_terms::<f64>()).unwrap()
}

pub fn quartic_rat() -> MultiPoly<BigRational> {
    MultiPoly::from_terms(4, quartic_terms::<BigRational>()).unwrap()
}

/// Random integer matrix with entries in [-bound, bound], as exact rationals.
pub fn random_int_mat(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Mat<BigRational> {
    Mat::from_fn(n, n, |_, _| {
        BigRational::from_int(rng.random_range(-bound..=bound))
    })
}
