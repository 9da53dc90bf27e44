//! Cauchy radii and Pellet gaps for matrix polynomials, plain, left
//! preconditioned, and through the squared block companion.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inv_norm_inv, NormKind};
use crate::matpoly::MatrixPolynomial;
use crate::rootloc::{PositiveRoots, SignedRadialPolynomial};

/// Which polynomial a bound was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Plain,
    Preconditioned,
    SquaredQ,
    SquaredQR,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Preconditioned => "preconditioned",
            Variant::SquaredQ => "squared-q",
            Variant::SquaredQR => "squared-qr",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Radii with every eigenvalue modulus in `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyBounds {
    /// Absent when the coefficient it needs is singular.
    pub upper: Option<f64>,
    pub lower: Option<f64>,
    pub norm_kind: NormKind,
    pub variant: Variant,
    /// A non-monic input was monicized before squaring.
    pub monicized: bool,
    /// An odd degree was lifted with `z P(z)`.
    pub shifted: bool,
    /// Index `j` of a `B_j^{-1}` left factor.
    pub preconditioner: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GapStatus {
    NoGap,
    /// Exactly `eig_count_inside` eigenvalues in `|z| <= x1`, none in
    /// `x1 < |z| < x2`.
    Gap { x1: f64, x2: f64 },
    /// The lower coefficients vanish: `eig_count_inside` eigenvalues sit at
    /// the origin and none lie in `0 < |z| < x`.
    UpperOnly { x: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapResult {
    /// Index on the original polynomial (`k_even` for squared gaps).
    pub k: usize,
    pub status: GapStatus,
    pub eig_count_inside: usize,
    /// The existence decision was close to the tangency threshold.
    pub marginal: bool,
    pub norm_kind: NormKind,
    pub variant: Variant,
}

impl GapResult {
    pub fn gap(&self) -> Option<(f64, f64)> {
        match self.status {
            GapStatus::Gap { x1, x2 } => Some((x1, x2)),
            _ => None,
        }
    }

    pub fn has_gap(&self) -> bool {
        self.gap().is_some()
    }
}

fn singular_to_none(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Singular(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Root `R` of `v x^n - sum_{j<n} c_j x^j`; zero when every `c_j` vanishes.
fn upper_radius(norms: &[f64], v: f64) -> Result<f64> {
    let n = norms.len() - 1;
    let mut c = norms.to_vec();
    c[n] = 0.0;
    if c.iter().all(|&x| x == 0.0) {
        return Ok(0.0);
    }
    match SignedRadialPolynomial::new(c, n, v)?.positive_roots()? {
        PositiveRoots::One(x) => Ok(x),
        other => unreachable!("one sign change gave {other:?}"),
    }
}

/// Root `r` of `sum_{j>=1} c_j x^j - v`.
fn lower_radius(norms: &[f64], v: f64) -> Result<f64> {
    let mut c = norms.to_vec();
    c[0] = 0.0;
    match SignedRadialPolynomial::new(c, 0, v)?.positive_roots()? {
        PositiveRoots::One(x) => Ok(x),
        other => unreachable!("one sign change gave {other:?}"),
    }
}

fn cauchy_upper(p: &MatrixPolynomial, kind: NormKind, precondition: bool) -> Result<Option<f64>> {
    let r = if precondition {
        match p.monicize() {
            Ok(q) => upper_radius(&q.coeff_norms(kind), 1.0),
            Err(e) => Err(e),
        }
    } else {
        inv_norm_inv(p.leading(), kind).and_then(|v| upper_radius(&p.coeff_norms(kind), v))
    };
    singular_to_none(r)
}

fn cauchy_lower(p: &MatrixPolynomial, kind: NormKind, precondition: bool) -> Result<Option<f64>> {
    let r = if precondition {
        match p.precondition(0) {
            Ok(q) => lower_radius(&q.coeff_norms(kind), 1.0),
            Err(e) => Err(e),
        }
    } else {
        inv_norm_inv(p.coeff(0), kind).and_then(|v| lower_radius(&p.coeff_norms(kind), v))
    };
    singular_to_none(r)
}

/// Outer radius `R` (needs `A_n` nonsingular) and inner radius `r` (needs
/// `A_0` nonsingular). With `precondition` the radii come from `A_n^{-1} P`
/// and `A_0^{-1} P`.
pub fn cauchy_bounds(p: &MatrixPolynomial, kind: NormKind, precondition: bool) -> Result<CauchyBounds> {
    Ok(CauchyBounds {
        upper: cauchy_upper(p, kind, precondition)?,
        lower: cauchy_lower(p, kind, precondition)?,
        norm_kind: kind,
        variant: if precondition {
            Variant::Preconditioned
        } else {
            Variant::Plain
        },
        monicized: false,
        shifted: false,
        preconditioner: None,
    })
}

fn gap_from_norms(norms: Vec<f64>, k: usize, v: f64) -> Result<(GapStatus, bool)> {
    let mut c = norms;
    c[k] = 0.0;
    let a = SignedRadialPolynomial::new(c, k, v)?.analyze();
    let status = match a.roots {
        PositiveRoots::None => GapStatus::NoGap,
        PositiveRoots::One(x) => GapStatus::UpperOnly { x },
        PositiveRoots::Two(x1, x2) => GapStatus::Gap { x1, x2 },
    };
    Ok((status, a.marginal))
}

/// Pellet gap at index `k` (`1 <= k <= n-1`); a gap certifies exactly `k m`
/// eigenvalues in `|z| <= x1` and none in `x1 < |z| < x2`.
pub fn pellet_gap(p: &MatrixPolynomial, k: usize, kind: NormKind, precondition: bool) -> Result<GapResult> {
    let n = p.degree();
    if k < 1 || k + 1 > n {
        return Err(Error::IndexOutOfRange {
            k,
            lo: 1,
            hi: n.saturating_sub(1),
        });
    }
    let (status, marginal) = if precondition {
        let q = p.precondition(k)?;
        gap_from_norms(q.coeff_norms(kind), k, 1.0)?
    } else {
        let v = inv_norm_inv(p.coeff(k), kind)
            .map_err(|e| Error::Singular(format!("coefficient {k}: {e}")))?;
        gap_from_norms(p.coeff_norms(kind), k, v)?
    };
    Ok(GapResult {
        k,
        status,
        eig_count_inside: k * p.m(),
        marginal,
        norm_kind: kind,
        variant: if precondition {
            Variant::Preconditioned
        } else {
            Variant::Plain
        },
    })
}

/// Monic, even-degree lift used by the squared variants.
fn prepare(p: &MatrixPolynomial, reciprocal: bool) -> Result<(MatrixPolynomial, bool, bool)> {
    let (base, monicized) = if reciprocal {
        (p.reciprocal()?, false)
    } else if p.is_monic() {
        (p.clone(), false)
    } else {
        (p.monicize()?, true)
    };
    if base.degree() % 2 == 1 {
        Ok((base.shift_by_z(), monicized, true))
    } else {
        Ok((base, monicized, false))
    }
}

fn squared_radii(
    p: &MatrixPolynomial,
    kind: NormKind,
    reciprocal: bool,
    precondition_index: Option<usize>,
) -> Result<(Option<f64>, Option<f64>, bool, bool)> {
    let (base, monicized, shifted) = prepare(p, reciprocal)?;
    let mut q = base.square_repartition()?;
    if let Some(j) = precondition_index {
        q = q.precondition(j)?;
    }
    let rho = cauchy_upper(&q, kind, false)?;
    let tau = cauchy_lower(&q, kind, false)?;
    Ok((rho, tau, monicized, shifted))
}

fn recip_sqrt(y: f64) -> Option<f64> {
    (y > 0.0).then(|| 1.0 / y.sqrt())
}

/// Cauchy radii through `Q` (or `Q_R` when `use_reciprocal`): `sqrt(rho)`
/// and `sqrt(tau)` for `Q`, `1/sqrt(tau_R)` and `1/sqrt(rho_R)` for `Q_R`.
/// Odd degrees are lifted by `z`; the lifted `Q` has a singular `B_0`, so its
/// lower bound is taken from `z P_r(z)` instead. `precondition_index = Some(j)`
/// uses `B_j^{-1} Q`.
pub fn squared_bounds(
    p: &MatrixPolynomial,
    kind: NormKind,
    use_reciprocal: bool,
    precondition_index: Option<usize>,
) -> Result<CauchyBounds> {
    let odd = p.degree() % 2 == 1;
    let (upper, lower, monicized, shifted) = if use_reciprocal {
        let (rho, tau, m, s) = squared_radii(p, kind, true, precondition_index)?;
        (tau.and_then(recip_sqrt), rho.and_then(recip_sqrt), m, s)
    } else {
        let (rho, tau, m, s) = squared_radii(p, kind, false, precondition_index)?;
        let mut lower = tau.map(f64::sqrt);
        if odd && lower.is_none() {
            lower = match squared_radii(p, kind, true, precondition_index) {
                Ok((rho_r, ..)) => rho_r.and_then(recip_sqrt),
                Err(Error::Singular(_)) => None,
                Err(e) => return Err(e),
            };
        }
        (rho.map(f64::sqrt), lower, m, s)
    };
    Ok(CauchyBounds {
        upper,
        lower,
        norm_kind: kind,
        variant: if use_reciprocal {
            Variant::SquaredQR
        } else {
            Variant::SquaredQ
        },
        monicized,
        shifted,
        preconditioner: precondition_index,
    })
}

/// Pellet gap through `Q` at the even index `k_even` (`2 <= k_even <= n-2`),
/// i.e. index `k_even / 2` of `Q`; a gap certifies `k_even m` eigenvalues in
/// `|z| <= x1`. With `precondition` the gap comes from `B_{k/2}^{-1} Q`.
pub fn squared_gap(p: &MatrixPolynomial, k_even: usize, kind: NormKind, precondition: bool) -> Result<GapResult> {
    let n = p.degree();
    if n % 2 == 1 {
        return Err(Error::OddDegree(n));
    }
    if k_even % 2 == 1 {
        return Err(Error::OddIndex(k_even));
    }
    if k_even < 2 || k_even + 2 > n {
        return Err(Error::IndexOutOfRange {
            k: k_even,
            lo: 2,
            hi: n.saturating_sub(2),
        });
    }
    let base = if p.is_monic() { p.clone() } else { p.monicize()? };
    let q = base.square_repartition()?;
    let g = pellet_gap(&q, k_even / 2, kind, precondition)?;
    let status = match g.status {
        GapStatus::NoGap => GapStatus::NoGap,
        GapStatus::Gap { x1, x2 } => GapStatus::Gap {
            x1: x1.sqrt(),
            x2: x2.sqrt(),
        },
        GapStatus::UpperOnly { x } => GapStatus::UpperOnly { x: x.sqrt() },
    };
    Ok(GapResult {
        k: k_even,
        status,
        eig_count_inside: k_even * p.m(),
        marginal: g.marginal,
        norm_kind: kind,
        variant: Variant::SquaredQ,
    })
}
