//! Dense complex matrices, induced norms and the small set of
//! factorizations the bounds need.
//!
//! Matrices are stored row-major. Every constructor checks that entries are
//! finite; arithmetic results are not re-checked.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative pivot threshold: a pivot below `SINGULAR_RTOL * ||A||_inf` is singular.
pub const SINGULAR_RTOL: f64 = 1e-13;

/// Default dimension cap for the dense eigensolver.
pub const EIGEN_DIM_CAP: usize = 2000;

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 10_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which induced matrix norm to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// Maximum absolute column sum.
    One,
    /// Maximum absolute row sum.
    Inf,
    /// Largest singular value.
    Two,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::One, NormKind::Inf, NormKind::Two];

    pub fn as_str(self) -> &'static str {
        match self {
            NormKind::One => "one",
            NormKind::Inf => "inf",
            NormKind::Two => "two",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "one" | "1" => Ok(NormKind::One),
            "inf" | "infinity" => Ok(NormKind::Inf),
            "two" | "2" | "spectral" => Ok(NormKind::Two),
            other => Err(Error::Input(format!("unknown norm '{other}'"))),
        }
    }
}

/// A dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::new(rows.len(), ncols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn scalar(z: Complex64) -> Self {
        Self::from_diag(&[z])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Copy of the `rows x cols` block starting at `(i0, j0)`.
    pub fn block(&self, i0: usize, j0: usize, rows: usize, cols: usize) -> Self {
        assert!(i0 + rows <= self.rows && j0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |i, j| self[(i0 + i, j0 + j)])
    }

    /// Overwrites the block starting at `(i0, j0)` with `src`.
    pub fn set_block(&mut self, i0: usize, j0: usize, src: &ComplexMatrix) {
        assert!(
            i0 + src.rows <= self.rows && j0 + src.cols <= self.cols,
            "block out of range"
        );
        for i in 0..src.rows {
            let dst = (i0 + i) * self.cols + j0;
            self.data[dst..dst + src.cols].copy_from_slice(src.row(i));
        }
    }

    /// Assembles a matrix from a grid of equally sized blocks.
    pub fn from_blocks(grid: &[Vec<ComplexMatrix>]) -> Result<Self> {
        let br = grid.first().map_or(0, |r| r.len());
        let first = grid
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::Dimension("empty block grid".into()))?;
        let (h, w) = (first.rows, first.cols);
        if grid
            .iter()
            .any(|r| r.len() != br || r.iter().any(|b| b.rows != h || b.cols != w))
        {
            return Err(Error::Dimension("blocks differ in size".into()));
        }
        let mut out = Self::zeros(grid.len() * h, br * w);
        for (bi, row) in grid.iter().enumerate() {
            for (bj, b) in row.iter().enumerate() {
                out.set_block(bi * h, bj * w, b);
            }
        }
        Ok(out)
    }

    /// Block-diagonal matrix with `a` and `b` on the diagonal.
    pub fn block_diag(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        let mut out = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        out.set_block(0, 0, a);
        out.set_block(a.rows, a.cols, b);
        out
    }

    /// `self * other`; panics on a shape mismatch.
    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    fn zip_with(&self, other: &ComplexMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "elementwise shape mismatch"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}

/// Induced matrix norm of `a`.
pub fn norm(a: &ComplexMatrix, kind: NormKind) -> f64 {
    match kind {
        NormKind::One => (0..a.cols)
            .map(|j| (0..a.rows).map(|i| a[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Inf => (0..a.rows)
            .map(|i| a.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Two => spectral_norm(a),
    }
}

/// Largest singular value: power iteration on `A^H A`, with a full SVD
/// when the iteration stalls or lands below the trivial lower bound.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    // ||A||_2 is at least the largest row or column 2-norm.
    let row_floor = (0..a.rows)
        .map(|i| a.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>())
        .fold(0.0, f64::max);
    let col_floor = (0..a.cols)
        .map(|j| (0..a.rows).map(|i| a[(i, j)].norm_sqr()).sum::<f64>())
        .fold(0.0, f64::max);
    let floor = row_floor.max(col_floor).sqrt();

    if a.rows == 1 || a.cols == 1 {
        return floor;
    }
    match power_iteration(a) {
        Some(sigma) if sigma >= floor * (1.0 - 1e-12) => sigma.max(floor),
        _ => svd_norm(a).max(floor),
    }
}

fn power_iteration(a: &ComplexMatrix) -> Option<f64> {
    let gram = a.conj_transpose().matmul(a);
    let n = gram.rows;

    // Start from A^H e_i for the heaviest row i; this lies in range(A^H).
    let heaviest = (0..a.rows)
        .max_by(|&x, &y| {
            let nx: f64 = a.row(x).iter().map(|z| z.norm_sqr()).sum();
            let ny: f64 = a.row(y).iter().map(|z| z.norm_sqr()).sum();
            nx.total_cmp(&ny)
        })
        .unwrap_or(0);
    let mut v: Vec<Complex64> = a.row(heaviest).iter().map(|z| z.conj()).collect();
    normalize(&mut v)?;

    let mut w = vec![ZERO; n];
    for _ in 0..POWER_MAX_ITER {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = gram.row(i).iter().zip(&v).map(|(&g, &x)| g * x).sum();
        }
        let lambda: f64 = v.iter().zip(&w).map(|(x, y)| (x.conj() * y).re).sum();
        if !(lambda > 0.0) {
            return None;
        }
        let residual: f64 = w
            .iter()
            .zip(&v)
            .map(|(y, x)| (y - x * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual <= POWER_TOL * lambda {
            return Some(lambda.sqrt());
        }
        std::mem::swap(&mut v, &mut w);
        normalize(&mut v)?;
    }
    None
}

fn normalize(v: &mut [Complex64]) -> Option<()> {
    let len = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(len > 0.0) || !len.is_finite() {
        return None;
    }
    v.iter_mut().for_each(|z| *z /= len);
    Some(())
}

fn to_faer(a: &ComplexMatrix) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(a.rows, a.cols, |i, j| a[(i, j)])
}

fn svd_norm(a: &ComplexMatrix) -> f64 {
    to_faer(a)
        .singular_values()
        .ok()
        .and_then(|s| s.first().copied())
        .unwrap_or(f64::NAN)
}

/// Row-pivoted LU factors of a square matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    factors: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factors `a`, declaring it singular when a pivot falls below
    /// `SINGULAR_RTOL * ||a||_inf`.
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows, a.cols
            )));
        }
        let n = a.rows;
        let threshold = SINGULAR_RTOL * norm(a, NormKind::Inf);
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("non-empty range");
            if !(pivot > threshold) {
                return Err(Error::Singular(format!(
                    "pivot {pivot:e} at step {k} is below {threshold:e}"
                )));
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / d;
                lu[(i, k)] = l;
                if l == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Self { factors: lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.factors.rows
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim();
        if b.rows != n {
            return Err(Error::Dimension(format!(
                "right-hand side has {} rows, expected {n}",
                b.rows
            )));
        }
        let lu = &self.factors;
        let mut x = ComplexMatrix::from_fn(n, b.cols, |i, j| b[(self.perm[i], j)]);
        for c in 0..b.cols {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in i + 1..n {
                    s -= lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / lu[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.solve(&ComplexMatrix::identity(self.dim()))
            .expect("identity has matching rows")
    }
}

/// Explicit inverse of `a`.
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(Lu::new(a)?.inverse())
}

/// `1 / ||a^{-1}||`, the coefficient that multiplies the dominant power in
/// the radial polynomials.
pub fn inv_norm_inv(a: &ComplexMatrix, kind: NormKind) -> Result<f64> {
    let inv = inverse(a)?;
    let n = norm(&inv, kind);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Singular(format!("inverse has norm {n}")));
    }
    Ok(1.0 / n)
}

/// Solves `a x = b` for `x`.
pub fn left_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    Lu::new(a)?.solve(b)
}

/// All eigenvalues of a square matrix, with multiplicity, in no particular order.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    eigenvalues_with_cap(a, EIGEN_DIM_CAP)
}

pub fn eigenvalues_with_cap(a: &ComplexMatrix, cap: usize) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    if a.rows > cap {
        return Err(Error::TooLarge { dim: a.rows, cap });
    }
    let mut balanced = a.clone();
    balance(&mut balanced);
    let values = to_faer(&balanced)
        .eigenvalues()
        .map_err(|_| Error::NoConvergence)?;
    if values.len() != a.rows || values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NoConvergence);
    }
    Ok(values)
}

/// Diagonal similarity scaling by powers of two so that row and column
/// off-diagonal sums are comparable. Exact in floating point.
fn balance(a: &mut ComplexMatrix) {
    const RADIX: f64 = 2.0;
    const MAX_SWEEPS: usize = 100;
    let n = a.rows;
    for _ in 0..MAX_SWEEPS {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].l1_norm();
                    r += a[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn constructor_rejects_bad_shapes_and_nan() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![ONE; 3]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![ONE, c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(ComplexMatrix::new(0, 0, vec![]).is_err());
    }

    #[test]
    fn norms_of_small_examples() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, -2.0], &[3.0, 4.0]]).unwrap();
        assert_eq!(norm(&a, NormKind::One), 6.0);
        assert_eq!(norm(&a, NormKind::Inf), 7.0);
        let d = ComplexMatrix::from_diag(&[c(3.0, 0.0), c(-4.0, 0.0)]);
        assert!((norm(&d, NormKind::Two) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_norm_of_rank_one_matrix() {
        // All-ones start vector would be annihilated here.
        let a = ComplexMatrix::from_real_rows(&[&[1.0, -1.0], &[1.0, -1.0]]).unwrap();
        assert!((spectral_norm(&a) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_matches_svd() {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| c((i * 3 + j) as f64 - 5.0, (i as f64) - (j as f64) * 0.5));
        let p = spectral_norm(&a);
        let s = svd_norm(&a);
        assert!((p - s).abs() <= 1e-10 * s, "{p} vs {s}");
    }

    #[test]
    fn inv_norm_inv_examples() {
        assert_eq!(inv_norm_inv(&ComplexMatrix::identity(3), NormKind::One).unwrap(), 1.0);
        let d = ComplexMatrix::from_diag(&[c(2.0, 0.0), c(5.0, 0.0)]);
        assert!((inv_norm_inv(&d, NormKind::One).unwrap() - 2.0).abs() < 1e-15);
        let s = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        for kind in NormKind::ALL {
            assert!(matches!(inv_norm_inv(&s, kind), Err(Error::Singular(_))));
        }
    }

    #[test]
    fn zero_matrix_is_singular() {
        assert!(matches!(Lu::new(&ComplexMatrix::zeros(2, 2)), Err(Error::Singular(_))));
    }

    #[test]
    fn left_solve_examples() {
        let b = ComplexMatrix::from_fn(2, 3, |i, j| c(i as f64 + 1.0, j as f64));
        assert_eq!(left_solve(&ComplexMatrix::identity(2), &b).unwrap(), b);

        let d = ComplexMatrix::from_diag(&[c(2.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(left_solve(&d, &d).unwrap(), ComplexMatrix::identity(2));

        let a = ComplexMatrix::new(2, 2, vec![c(0.3, -1.2), c(2.0, 0.5), c(-0.7, 0.1), c(1.1, 1.9)]).unwrap();
        let x = left_solve(&a, &a).unwrap();
        let err = (&x - &ComplexMatrix::identity(2)).max_abs();
        assert!(err < 1e-12, "{err}");
        // multiply back
        let y = ComplexMatrix::from_fn(2, 1, |i, _| c(i as f64, 1.0));
        let sol = left_solve(&a, &y).unwrap();
        assert!((&a.matmul(&sol) - &y).max_abs() < 1e-12);
    }

    #[test]
    fn eigenvalue_examples() {
        let d = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(2.0, 1.0)]);
        let ev = sorted(eigenvalues(&d).unwrap());
        assert!((ev[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((ev[1] - c(2.0, 1.0)).norm() < 1e-14);

        let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let ev = sorted(eigenvalues(&swap).unwrap());
        assert!((ev[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((ev[1] - c(1.0, 0.0)).norm() < 1e-14);

        // companion of z^2 - 3z + 2
        let comp = ComplexMatrix::from_real_rows(&[&[0.0, -2.0], &[1.0, 3.0]]).unwrap();
        let ev = sorted(eigenvalues(&comp).unwrap());
        assert!((ev[0] - c(1.0, 0.0)).norm() < 1e-13);
        assert!((ev[1] - c(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn eigenvalues_respect_cap() {
        let a = ComplexMatrix::identity(4);
        assert!(matches!(
            eigenvalues_with_cap(&a, 3),
            Err(Error::TooLarge { dim: 4, cap: 3 })
        ));
    }

    #[test]
    fn balancing_preserves_spectrum_of_badly_scaled_matrix() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1e6, 0.0], &[1e-6, 2.0, 1e6], &[0.0, 1e-6, 3.0]]).unwrap();
        let mut b = a.clone();
        balance(&mut b);
        assert!(norm(&b, NormKind::One) < norm(&a, NormKind::One));
        let ev = sorted(eigenvalues(&a).unwrap());
        let trace: Complex64 = ev.iter().sum();
        assert!((trace - c(6.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn norm_kind_parsing() {
        assert_eq!("one".parse::<NormKind>().unwrap(), NormKind::One);
        assert_eq!("INF".parse::<NormKind>().unwrap(), NormKind::Inf);
        assert_eq!("2".parse::<NormKind>().unwrap(), NormKind::Two);
        assert!("three".parse::<NormKind>().is_err());
    }
}
