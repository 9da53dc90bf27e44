//! Lacunary scalar polynomials `a z^n + b z^{n-1} + c z^{n-2} + alpha z^2 +
//! beta z + gamma` written as `det` of a 2x2 matrix polynomial.
//!
//! For small `n` the two coefficient clusters share powers of `z`; the
//! scalar polynomial then sums them, and so does the embedding.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::matpoly::MatrixPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LacunaryPolynomial {
    pub n: usize,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

const I: Complex64 = Complex64::new(0.0, 1.0);

impl LacunaryPolynomial {
    /// Needs `a * alpha != 0` and `n >= 2`.
    pub fn new(n: usize, [a, b, c, alpha, beta, gamma]: [Complex64; 6]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDegree(n));
        }
        if [a, b, c, alpha, beta, gamma].iter().any(|z| !z.is_finite()) {
            return Err(Error::Input("lacunary coefficients must be finite".into()));
        }
        if a * alpha == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroLeading);
        }
        Ok(Self {
            n,
            a,
            b,
            c,
            alpha,
            beta,
            gamma,
        })
    }

    /// Real-coefficient shorthand.
    pub fn from_real(n: usize, coeffs: [f64; 6]) -> Result<Self> {
        Self::new(n, coeffs.map(|x| Complex64::new(x, 0.0)))
    }

    /// Ascending scalar coefficients of `p`.
    pub fn scalar_coeffs(&self) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        out[n] += self.a;
        out[n - 1] += self.b;
        out[n - 2] += self.c;
        out[2] += self.alpha;
        out[1] += self.beta;
        out[0] += self.gamma;
        out
    }

    pub fn to_scalar_polynomial(&self) -> Result<MatrixPolynomial> {
        MatrixPolynomial::from_scalar(&self.scalar_coeffs())
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.scalar_coeffs()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn blocks(&self) -> Blocks {
        let sa = self.a.sqrt();
        let sal = self.alpha.sqrt();
        let s1 = (self.c - self.b * self.b / (4.0 * self.a)).sqrt();
        let s2 = (self.gamma - self.beta * self.beta / (4.0 * self.alpha)).sqrt();
        let u = self.b / (2.0 * sa);
        let w = self.beta / (2.0 * sal);
        let zero = Complex64::new(0.0, 0.0);
        Blocks {
            sa,
            b_plus: u + I * s1,
            b_minus: u - I * s1,
            v: ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
                (0, 1) => -sal,
                (1, 0) => sal,
                _ => zero,
            }),
            w: ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
                (0, 1) => -w - I * s2,
                (1, 0) => w - I * s2,
                _ => zero,
            }),
        }
    }
}

struct Blocks {
    sa: Complex64,
    b_plus: Complex64,
    b_minus: Complex64,
    v: ComplexMatrix,
    w: ComplexMatrix,
}

fn diag2(x: Complex64, y: Complex64) -> ComplexMatrix {
    ComplexMatrix::from_diag(&[x, y])
}

fn assemble(degree: usize, terms: Vec<(usize, ComplexMatrix)>) -> Result<MatrixPolynomial> {
    let mut coeffs = vec![ComplexMatrix::zeros(2, 2); degree + 1];
    for (j, m) in terms {
        coeffs[j] = &coeffs[j] + &m;
    }
    MatrixPolynomial::new(coeffs)
}

/// `Q_even(z) = A z^{n/2} + B z^{n/2-1} + V z + W` with `det Q_even = p`.
pub fn embed_even(p: &LacunaryPolynomial) -> Result<MatrixPolynomial> {
    if p.n % 2 == 1 {
        return Err(Error::InvalidDegree(p.n));
    }
    let h = p.n / 2;
    let bl = p.blocks();
    assemble(
        h,
        vec![
            (h, diag2(bl.sa, bl.sa)),
            (h - 1, diag2(bl.b_plus, bl.b_minus)),
            (1, bl.v),
            (0, bl.w),
        ],
    )
}

/// `Q_odd(z) = C z^{(n+1)/2} + D z^{(n-1)/2} + E z^{(n-3)/2} + V z + W`.
/// The leading coefficient is singular: one eigenvalue is infinite and the
/// finite ones are the zeros of `p`.
pub fn embed_odd(p: &LacunaryPolynomial) -> Result<MatrixPolynomial> {
    if p.n % 2 == 0 {
        return Err(Error::InvalidDegree(p.n));
    }
    let h = (p.n + 1) / 2;
    let bl = p.blocks();
    let zero = Complex64::new(0.0, 0.0);
    assemble(
        h,
        vec![
            (h, diag2(bl.sa, zero)),
            (h - 1, diag2(bl.b_plus, bl.sa)),
            (h - 2, diag2(zero, bl.b_minus)),
            (1, bl.v),
            (0, bl.w),
        ],
    )
}

/// `embed_even` or `embed_odd` by the parity of `n`.
pub fn embed(p: &LacunaryPolynomial) -> Result<MatrixPolynomial> {
    if p.n % 2 == 0 {
        embed_even(p)
    } else {
        embed_odd(p)
    }
}

/// Determinant of a 2x2 matrix.
pub fn det2(m: &ComplexMatrix) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(n: usize, seed: u64) -> LacunaryPolynomial {
        let mut s = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let coeffs = [(); 6].map(|_| c(3.0 * next(), 3.0 * next()));
        LacunaryPolynomial::new(n, coeffs).unwrap()
    }

    fn sorted_moduli(v: &[Complex64]) -> Vec<f64> {
        let mut m: Vec<f64> = v.iter().map(|z| z.norm()).collect();
        m.sort_by(f64::total_cmp);
        m
    }

    #[test]
    fn det_of_w_is_constant_term() {
        let p = LacunaryPolynomial::from_real(4, [1.0, 0.0, 0.0, -1.0, 3.0, -2.0]).unwrap();
        let q = embed_even(&p).unwrap();
        assert!((det2(q.coeff(0)) - c(-2.0, 0.0)).norm() < 1e-14);
        assert!((det2(&q.evaluate(c(0.0, 0.0))) - p.evaluate(c(0.0, 0.0))).norm() < 1e-14);
    }

    #[test]
    fn determinant_identity_even_and_odd() {
        for n in 2..=13 {
            let p = sample(n, n as u64);
            let q = embed(&p).unwrap();
            assert_eq!(q.degree(), n.div_ceil(2));
            for i in 0..20 {
                let r = 0.5 * 1.1f64.powi(i);
                let z = Complex64::from_polar(r, 0.7 * i as f64);
                let (d, v) = (det2(&q.evaluate(z)), p.evaluate(z));
                assert!((d - v).norm() <= 1e-12 * v.norm().max(1.0), "n={n} z={z}: {d} vs {v}");
            }
        }
    }

    #[test]
    fn sparse_cases() {
        let p = LacunaryPolynomial::from_real(6, [2.0, 0.0, 0.0, 3.0, 0.0, 0.0]).unwrap();
        let q = embed_even(&p).unwrap();
        assert!(q.coeff(2).is_zero());
        assert!(q.coeff(0).is_zero());
        assert!((q.coeff(3) - &ComplexMatrix::identity(2).scale(c(2f64.sqrt(), 0.0))).max_abs() < 1e-15);
        let z = c(0.3, 1.1);
        assert!((det2(&q.evaluate(z)) - (2.0 * z.powu(6) + 3.0 * z * z)).norm() < 1e-13);

        let p = LacunaryPolynomial::from_real(5, [2.0, 0.0, 0.0, 3.0, 0.0, 0.0]).unwrap();
        let q = embed_odd(&p).unwrap();
        assert!((det2(&q.evaluate(z)) - (2.0 * z.powu(5) + 3.0 * z * z)).norm() < 1e-13);
    }

    #[test]
    fn odd_leading_and_e_singular() {
        let p = sample(7, 3);
        let q = embed_odd(&p).unwrap();
        assert_eq!(det2(q.leading()), c(0.0, 0.0));
        assert_eq!(det2(q.coeff(2)), c(0.0, 0.0));
    }

    #[test]
    fn parity_and_leading_checks() {
        assert!(matches!(embed_even(&sample(5, 1)), Err(Error::InvalidDegree(5))));
        assert!(matches!(embed_odd(&sample(6, 1)), Err(Error::InvalidDegree(6))));
        assert!(matches!(
            LacunaryPolynomial::from_real(6, [0.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
            Err(Error::ZeroLeading)
        ));
        assert!(matches!(
            LacunaryPolynomial::from_real(6, [1.0, 1.0, 1.0, 0.0, 1.0, 1.0]),
            Err(Error::ZeroLeading)
        ));
        assert!(matches!(LacunaryPolynomial::from_real(1, [1.0; 6]), Err(Error::InvalidDegree(1))));
    }

    #[test]
    fn even_eigenvalues_match_scalar_roots() {
        for n in [4, 6, 8, 10, 12] {
            let p = sample(n, 100 + n as u64);
            let q = embed_even(&p).unwrap().monicize().unwrap();
            let s = p.to_scalar_polynomial().unwrap().monicize().unwrap();
            let a = sorted_moduli(&eigenvalues(&q.companion().unwrap()).unwrap());
            let b = sorted_moduli(&eigenvalues(&s.companion().unwrap()).unwrap());
            assert_eq!(a.len(), n);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-7 * y.max(1.0), "n={n}: {x} vs {y}");
            }
        }
    }
}
