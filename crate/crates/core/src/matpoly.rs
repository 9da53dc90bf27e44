//! Matrix polynomials `P(z) = A_n z^n + ... + A_1 z + A_0` and the
//! structural transforms applied to them before bounding.
//!
//! Coefficients are stored in ascending order (`A_0` first).

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{norm, ComplexMatrix, Lu, NormKind};

/// Maximum `||A_n - I||_inf` for a polynomial to count as monic.
pub const MONIC_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    m: usize,
    coeffs: Vec<ComplexMatrix>,
}

impl MatrixPolynomial {
    /// Builds `sum_j coeffs[j] z^j`. Needs degree at least one, square
    /// coefficients of a common size, and a nonzero leading coefficient.
    pub fn new(coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Dimension(format!(
                "a matrix polynomial needs degree >= 1, got {} coefficient(s)",
                coeffs.len()
            )));
        }
        let m = coeffs[0].rows();
        if let Some(j) = coeffs.iter().position(|a| a.rows() != m || a.cols() != m) {
            return Err(Error::Dimension(format!(
                "coefficient {j} is {}x{}, expected {m}x{m}",
                coeffs[j].rows(),
                coeffs[j].cols()
            )));
        }
        if coeffs.last().is_some_and(ComplexMatrix::is_zero) {
            return Err(Error::Dimension("leading coefficient is the zero matrix".into()));
        }
        Ok(Self { m, coeffs })
    }

    /// Scalar polynomial from ascending coefficients.
    pub fn from_scalar(ascending: &[Complex64]) -> Result<Self> {
        Self::new(ascending.iter().map(|&z| ComplexMatrix::scalar(z)).collect())
    }

    /// Scalar polynomial from real coefficients in descending order,
    /// e.g. `[1, -3, 2]` for `z^2 - 3z + 2`. Leading zeros are dropped.
    pub fn from_real_descending(desc: &[f64]) -> Result<Self> {
        let start = desc.iter().position(|&x| x != 0.0).unwrap_or(desc.len());
        let asc: Vec<Complex64> = desc[start..]
            .iter()
            .rev()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        Self::from_scalar(&asc)
    }

    /// Block size.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &ComplexMatrix {
        &self.coeffs[j]
    }

    pub fn leading(&self) -> &ComplexMatrix {
        &self.coeffs[self.degree()]
    }

    /// Total eigenvalue count `n * m`, infinite ones included.
    pub fn dimension(&self) -> usize {
        self.degree() * self.m
    }

    /// `||A_j||` for every coefficient.
    pub fn coeff_norms(&self, kind: NormKind) -> Vec<f64> {
        self.coeffs.iter().map(|a| norm(a, kind)).collect()
    }

    /// `||A_n - I||_inf`.
    pub fn monic_defect(&self) -> f64 {
        norm(&(self.leading() - &ComplexMatrix::identity(self.m)), NormKind::Inf)
    }

    pub fn is_monic(&self) -> bool {
        self.monic_defect() <= MONIC_TOL
    }

    fn require_monic(&self) -> Result<()> {
        let defect = self.monic_defect();
        if defect <= MONIC_TOL {
            Ok(())
        } else {
            Err(Error::NotMonic(defect))
        }
    }

    /// Horner evaluation of `P(z)`.
    pub fn evaluate(&self, z: Complex64) -> ComplexMatrix {
        let mut acc = self.leading().clone();
        for a in self.coeffs.iter().rev().skip(1) {
            acc = &acc.scale(z) + a;
        }
        acc
    }

    /// `A_n^{-1} P` with an exact identity as leading coefficient.
    pub fn monicize(&self) -> Result<Self> {
        self.precondition(self.degree())
    }

    /// `A_k^{-1} P`; the k-th coefficient becomes an exact identity.
    pub fn precondition(&self, k: usize) -> Result<Self> {
        if k > self.degree() {
            return Err(Error::IndexOutOfRange {
                k,
                lo: 0,
                hi: self.degree(),
            });
        }
        let lu = Lu::new(&self.coeffs[k])
            .map_err(|e| Error::Singular(format!("coefficient {k}: {e}")))?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, a)| {
                if j == k {
                    Ok(ComplexMatrix::identity(self.m))
                } else {
                    lu.solve(a)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }

    /// `M P` for a nonsingular `M`.
    pub fn left_multiply(&self, mat: &ComplexMatrix) -> Result<Self> {
        if mat.rows() != self.m || mat.cols() != self.m {
            return Err(Error::Dimension(format!(
                "left factor is {}x{}, expected {m}x{m}",
                mat.rows(),
                mat.cols(),
                m = self.m
            )));
        }
        Lu::new(mat)?;
        Self::new(self.coeffs.iter().map(|a| mat.matmul(a)).collect())
    }

    /// Reciprocal polynomial `z^n A_0^{-1} P(1/z)`: the coefficient of `z^i`
    /// is `A_0^{-1} A_{n-i}`, so the result is monic with constant term
    /// `A_0^{-1} A_n`.
    pub fn reciprocal(&self) -> Result<Self> {
        let lu = Lu::new(&self.coeffs[0])
            .map_err(|e| Error::Singular(format!("constant coefficient: {e}")))?;
        let n = self.degree();
        let coeffs = (0..=n)
            .map(|i| {
                if i == n {
                    Ok(ComplexMatrix::identity(self.m))
                } else {
                    lu.solve(&self.coeffs[n - i])
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }

    /// `z P(z)`: degree grows by one, `m` extra zero eigenvalues.
    pub fn shift_by_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ComplexMatrix::zeros(self.m, self.m));
        coeffs.extend(self.coeffs.iter().cloned());
        Self { m: self.m, coeffs }
    }

    /// Block companion matrix: identities on the block subdiagonal and
    /// `-A_0, ..., -A_{n-1}` down the last block column.
    pub fn companion(&self) -> Result<ComplexMatrix> {
        self.require_monic()?;
        let (m, n) = (self.m, self.degree());
        let mut c = ComplexMatrix::zeros(n * m, n * m);
        let eye = ComplexMatrix::identity(m);
        for i in 1..n {
            c.set_block(i * m, (i - 1) * m, &eye);
        }
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            c.set_block(i * m, (n - 1) * m, &-a);
        }
        Ok(c)
    }

    /// Repartitions the square of the block companion matrix into the
    /// companion of a degree-`n/2` polynomial `Q` with `2m x 2m`
    /// coefficients; the eigenvalues of `Q` are the squares of those of `P`.
    pub fn square_repartition(&self) -> Result<Self> {
        self.require_monic()?;
        let n = self.degree();
        if n % 2 == 1 {
            return Err(Error::OddDegree(n));
        }
        let a = &self.coeffs;
        let last = &a[n - 1];
        let mut coeffs = Vec::with_capacity(n / 2 + 1);
        // B_0 = [[A_0, -A_0 A_{n-1}], [A_1, -A_1 A_{n-1} + A_0]]
        coeffs.push(ComplexMatrix::from_blocks(&[
            vec![a[0].clone(), -&a[0].matmul(last)],
            vec![a[1].clone(), &a[0] - &a[1].matmul(last)],
        ])?);
        for j in 1..n / 2 {
            let (lo, even, odd) = (&a[2 * j - 1], &a[2 * j], &a[2 * j + 1]);
            coeffs.push(ComplexMatrix::from_blocks(&[
                vec![even.clone(), lo - &even.matmul(last)],
                vec![odd.clone(), even - &odd.matmul(last)],
            ])?);
        }
        coeffs.push(ComplexMatrix::identity(2 * self.m));
        Self::new(coeffs)
    }

    /// `Q_R`: the squared repartition of the reciprocal polynomial.
    pub fn q_reciprocal(&self) -> Result<Self> {
        if self.degree() % 2 == 1 {
            return Err(Error::OddDegree(self.degree()));
        }
        self.reciprocal()?.square_repartition()
    }

    pub fn max_coeff_norm(&self, kind: NormKind) -> f64 {
        self.coeff_norms(kind).into_iter().fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct Repr {
    m: usize,
    n: usize,
    coeffs: Vec<Vec<Vec<[f64; 2]>>>,
}

impl Serialize for MatrixPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                (0..a.rows())
                    .map(|i| a.row(i).iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        Repr {
            m: self.m,
            n: self.degree(),
            coeffs,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatrixPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = Repr::deserialize(deserializer)?;
        Self::try_from(repr).map_err(D::Error::custom)
    }
}

impl TryFrom<Repr> for MatrixPolynomial {
    type Error = Error;

    fn try_from(repr: Repr) -> Result<Self> {
        if repr.coeffs.len() != repr.n + 1 {
            return Err(Error::Input(format!(
                "n = {} needs {} coefficients, got {}",
                repr.n,
                repr.n + 1,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .into_iter()
            .map(|rows| {
                if rows.len() != repr.m || rows.iter().any(|r| r.len() != repr.m) {
                    return Err(Error::Input(format!("coefficient is not {m}x{m}", m = repr.m)));
                }
                let data = rows
                    .into_iter()
                    .flatten()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect();
                ComplexMatrix::new(repr.m, repr.m, data)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

impl MatrixPolynomial {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite entries serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))
    }
}
