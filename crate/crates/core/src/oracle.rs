//! Brute-force eigenvalues and containment checks for reported bounds.

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::{CauchyBounds, GapResult, GapStatus};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_with_cap, EIGEN_DIM_CAP};
use crate::matpoly::MatrixPolynomial;

/// Relative slack for all containment checks.
pub const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenReport {
    /// Ascending.
    pub moduli: Vec<f64>,
    pub values: Vec<Complex64>,
    pub count: usize,
}

impl EigenReport {
    pub fn from_values(values: Vec<Complex64>) -> Self {
        let mut moduli: Vec<f64> = values.iter().map(|z| z.norm()).collect();
        moduli.sort_by(f64::total_cmp);
        Self {
            count: values.len(),
            moduli,
            values,
        }
    }

    pub fn max_modulus(&self) -> f64 {
        self.moduli.last().copied().unwrap_or(0.0)
    }

    pub fn min_modulus(&self) -> f64 {
        self.moduli.first().copied().unwrap_or(0.0)
    }
}

/// All `n m` eigenvalues via the companion matrix of `A_n^{-1} P`.
pub fn eigen_oracle(p: &MatrixPolynomial) -> Result<EigenReport> {
    eigen_oracle_with_cap(p, EIGEN_DIM_CAP)
}

pub fn eigen_oracle_with_cap(p: &MatrixPolynomial, cap: usize) -> Result<EigenReport> {
    if p.dimension() > cap {
        return Err(Error::TooLarge {
            dim: p.dimension(),
            cap,
        });
    }
    let monic = if p.is_monic() {
        p.clone()
    } else {
        p.monicize()
            .map_err(|e| Error::Singular(format!("infinite eigenvalues present ({e})")))?
    };
    let values = eigenvalues_with_cap(&monic.companion()?, cap)?;
    Ok(EigenReport::from_values(values))
}

/// Moduli `<= radius (1 + tol)`.
pub fn count_in_disk(rep: &EigenReport, radius: f64, tol: f64) -> usize {
    let r = radius * (1.0 + tol);
    rep.moduli.partition_point(|&x| x <= r)
}

/// Moduli strictly inside `(x1 (1 + tol), x2 (1 - tol))`.
pub fn count_in_annulus(rep: &EigenReport, x1: f64, x2: f64, tol: f64) -> usize {
    let (lo, hi) = (x1 * (1.0 + tol), x2 * (1.0 - tol));
    rep.moduli.iter().filter(|&&x| x > lo && x < hi).count()
}

/// Moduli `>= x2 (1 - tol)` that are not already counted in the disk.
pub fn count_outside(rep: &EigenReport, x1: f64, x2: f64, tol: f64) -> usize {
    let (lo, hi) = (x1 * (1.0 + tol), x2 * (1.0 - tol));
    rep.moduli.iter().filter(|&&x| x > lo && x >= hi).count()
}

pub fn check_cauchy(rep: &EigenReport, b: &CauchyBounds, tol: f64) -> Result<()> {
    if let Some(r) = b.upper {
        let max = rep.max_modulus();
        if max > r * (1.0 + tol) {
            return Err(Error::Soundness(format!(
                "{} {} upper bound {r:e} below max modulus {max:e}",
                b.variant, b.norm_kind
            )));
        }
    }
    if let Some(r) = b.lower {
        let min = rep.min_modulus();
        if min < r * (1.0 - tol) {
            return Err(Error::Soundness(format!(
                "{} {} lower bound {r:e} above min modulus {min:e}",
                b.variant, b.norm_kind
            )));
        }
    }
    Ok(())
}

pub fn check_gap(rep: &EigenReport, g: &GapResult, tol: f64) -> Result<()> {
    let fail = |msg: String| {
        Err(Error::Soundness(format!(
            "{} {} gap at k = {}: {msg}",
            g.variant, g.norm_kind, g.k
        )))
    };
    match g.status {
        GapStatus::NoGap => Ok(()),
        GapStatus::Gap { x1, x2 } => {
            let inside = count_in_disk(rep, x1, tol);
            let ring = count_in_annulus(rep, x1, x2, tol);
            if inside != g.eig_count_inside {
                return fail(format!("{inside} moduli in |z| <= {x1:e}, expected {}", g.eig_count_inside));
            }
            if ring != 0 {
                return fail(format!("{ring} moduli in ({x1:e}, {x2:e})"));
            }
            Ok(())
        }
        GapStatus::UpperOnly { x } => {
            let below = rep.moduli.partition_point(|&m| m < x * (1.0 - tol));
            if below != g.eig_count_inside {
                return fail(format!("{below} moduli below {x:e}, expected {}", g.eig_count_inside));
            }
            Ok(())
        }
    }
}
