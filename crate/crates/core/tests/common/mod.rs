#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use pellet_core::{ComplexMatrix, MatrixPolynomial};

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn cplx<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn matrix<R: Rng>(rng: &mut R, m: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, m, |_, _| cplx(rng) * scale)
}

/// Coefficient `j` is scaled by `10^u`, `u` uniform in `[-spread, spread]`.
pub fn poly<R: Rng>(rng: &mut R, m: usize, n: usize, spread: f64) -> MatrixPolynomial {
    let coeffs = (0..=n)
        .map(|_| {
            let s = if spread > 0.0 { 10f64.powf(rng.random_range(-spread..spread)) } else { 1.0 };
            matrix(rng, m, s)
        })
        .collect();
    MatrixPolynomial::new(coeffs).unwrap()
}

pub fn monic_poly<R: Rng>(rng: &mut R, m: usize, n: usize, spread: f64) -> MatrixPolynomial {
    let mut c = poly(rng, m, n, spread).coeffs().to_vec();
    c[n] = ComplexMatrix::identity(m);
    MatrixPolynomial::new(c).unwrap()
}

/// Largest `|a_i - b_pi(i)| / max(1, |b_pi(i)|)` under greedy nearest matching.
pub fn multiset_mismatch(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut a = a.to_vec();
    a.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for z in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (z - w).norm() / w.norm().max(1.0)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}
