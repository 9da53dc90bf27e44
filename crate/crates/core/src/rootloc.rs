//! Positive roots of real polynomials with nonnegative coefficients and a
//! single negative term, `f(x) = sum_{j != k} c_j x^j - v x^k`.
//!
//! Work is done in `t = ln x`. Dividing by `v x^k` turns `f(x) = 0` into
//! `L(t) = ln v` with `L(t) = ln sum_j c_j e^{(j-k)t}`, a convex function
//! evaluated as a log-sum-exp so that degree 100 with wildly scaled
//! coefficients neither overflows nor underflows.

use crate::error::{Error, Result};

/// Relative tolerance on `min_x f(x) / (v x^k)` below which two roots are
/// not claimed.
pub const EPS_GAP: f64 = 1e-10;

/// Factor on [`EPS_GAP`] inside which a decision is flagged as marginal.
pub const MARGINAL_FACTOR: f64 = 10.0;

/// Minimum relative separation of two reported roots.
pub const MIN_SEPARATION: f64 = 1e-12;

const MAX_ITER: usize = 200;
const MAX_EXPANSIONS: usize = 64;

/// `f(x) = sum_{j != k} c_j x^j - neg_value * x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedRadialPolynomial {
    coeffs: Vec<f64>,
    neg_index: usize,
    neg_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PositiveRoots {
    None,
    One(f64),
    Two(f64, f64),
}

/// Root isolation outcome with the diagnostics used for gap reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootAnalysis {
    pub roots: PositiveRoots,
    /// `min_x f(x) / (v x^k)` when `f` has an interior minimum.
    pub min_excess: Option<f64>,
    /// The two-root decision was within [`MARGINAL_FACTOR`] of the threshold.
    pub marginal: bool,
}

impl SignedRadialPolynomial {
    /// Degree is `coeffs.len() - 1`. `coeffs[neg_index]` must be zero.
    pub fn new(coeffs: Vec<f64>, neg_index: usize, neg_value: f64) -> Result<Self> {
        if coeffs.is_empty() || neg_index >= coeffs.len() {
            return Err(Error::InvalidShape(format!(
                "negative index {neg_index} outside 0..{}",
                coeffs.len()
            )));
        }
        if !(neg_value.is_finite() && neg_value > 0.0) {
            return Err(Error::InvalidShape(format!("negative coefficient {neg_value} must be positive")));
        }
        if let Some(j) = coeffs.iter().position(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidShape(format!("coefficient {j} = {} is not a nonnegative number", coeffs[j])));
        }
        if coeffs[neg_index] != 0.0 {
            return Err(Error::InvalidShape(format!("coefficient at the negative index {neg_index} must be zero")));
        }
        if coeffs.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidShape("f is negative on the whole positive axis".into()));
        }
        Ok(Self {
            coeffs,
            neg_index,
            neg_value,
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn neg_index(&self) -> usize {
        self.neg_index
    }

    pub fn neg_value(&self) -> f64 {
        self.neg_value
    }

    /// Direct evaluation of `f(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (j, &c) in self.coeffs.iter().enumerate().rev() {
            let c = if j == self.neg_index { -self.neg_value } else { c };
            acc = acc * x + c;
        }
        acc
    }

    /// Coefficients of `f` in ascending order with the negative term in place.
    pub fn signed_coeffs(&self) -> Vec<f64> {
        let mut out = self.coeffs.clone();
        out[self.neg_index] = -self.neg_value;
        out
    }

    fn terms(&self) -> Terms {
        let k = self.neg_index as f64;
        let (exps, logs) = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0.0)
            .map(|(j, &c)| (j as f64 - k, c.ln()))
            .unzip();
        Terms {
            exps,
            logs,
            target: self.neg_value.ln(),
        }
    }

    pub fn positive_roots(&self) -> Result<PositiveRoots> {
        Ok(self.analyze().roots)
    }

    pub fn analyze(&self) -> RootAnalysis {
        let terms = self.terms();
        let has_lo = terms.exps.iter().any(|&e| e < 0.0);
        let has_hi = terms.exps.iter().any(|&e| e > 0.0);
        if !(has_lo && has_hi) {
            // L is monotone: exactly one crossing.
            let t = terms.monotone_root(has_hi);
            return RootAnalysis {
                roots: PositiveRoots::One(t.exp()),
                min_excess: None,
                marginal: false,
            };
        }
        let t_star = terms.argmin();
        let excess = (terms.lse(t_star) - terms.target).exp_m1();
        let marginal = excess.abs() < MARGINAL_FACTOR * EPS_GAP;
        let none = RootAnalysis {
            roots: PositiveRoots::None,
            min_excess: Some(excess),
            marginal,
        };
        if excess > -EPS_GAP {
            return none;
        }
        let t1 = terms.side_root(t_star, -1.0);
        let t2 = terms.side_root(t_star, 1.0);
        let (x1, x2) = (t1.exp(), t2.exp());
        if !(x2 > x1 * (1.0 + MIN_SEPARATION)) {
            return none;
        }
        RootAnalysis {
            roots: PositiveRoots::Two(x1, x2),
            min_excess: Some(excess),
            marginal,
        }
    }
}

/// Nonzero terms `exp(logs[i] + exps[i] t)` and the target `ln v`.
struct Terms {
    exps: Vec<f64>,
    logs: Vec<f64>,
    target: f64,
}

impl Terms {
    fn lse(&self, t: f64) -> f64 {
        let top = self.max_arg(t);
        let s: f64 = self
            .exps
            .iter()
            .zip(&self.logs)
            .map(|(&e, &l)| (l + e * t - top).exp())
            .sum();
        top + s.ln()
    }

    fn max_arg(&self, t: f64) -> f64 {
        self.exps
            .iter()
            .zip(&self.logs)
            .map(|(&e, &l)| l + e * t)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `L(t)`, `L'(t)` and `L''(t)`; the derivatives are the mean and
    /// variance of the exponents under softmax weights.
    fn derivs(&self, t: f64) -> (f64, f64, f64) {
        let top = self.max_arg(t);
        let (mut s, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for (&e, &l) in self.exps.iter().zip(&self.logs) {
            let w = (l + e * t - top).exp();
            s += w;
            s1 += w * e;
            s2 += w * e * e;
        }
        let mean = s1 / s;
        (top + s.ln(), mean, (s2 / s - mean * mean).max(0.0))
    }

    fn g(&self, t: f64) -> f64 {
        self.lse(t) - self.target
    }

    /// Initial guess near the crossing: the point where the dominant term alone
    /// would reach the target.
    fn guess(&self) -> f64 {
        let mut best = 0.0;
        let mut best_val = f64::NEG_INFINITY;
        for (&e, &l) in self.exps.iter().zip(&self.logs) {
            if e != 0.0 && l.is_finite() {
                let t = (self.target - l) / e;
                let v = l + e * t;
                if v > best_val {
                    best_val = v;
                    best = t;
                }
            }
        }
        best
    }

    /// Root of `g` when `L` is monotone (increasing iff `increasing`).
    fn monotone_root(&self, increasing: bool) -> f64 {
        let t0 = self.guess();
        let dir = if increasing { 1.0 } else { -1.0 };
        // g(lo_side) < 0 < g(hi_side) along the direction of increase.
        let (neg, pos) = self.expand(t0, dir);
        self.refine(neg, pos)
    }

    /// From `t0`, finds `neg` with `g <= 0` and `pos` with `g >= 0`, where
    /// `g` increases in direction `dir`.
    fn expand(&self, t0: f64, dir: f64) -> (f64, f64) {
        let mut step = 1.0;
        let mut neg = t0;
        let mut pos = t0;
        let mut n = 0;
        while self.g(neg) > 0.0 && n < MAX_EXPANSIONS {
            neg -= dir * step;
            step *= 2.0;
            n += 1;
        }
        step = 1.0;
        n = 0;
        while self.g(pos) < 0.0 && n < MAX_EXPANSIONS {
            pos += dir * step;
            step *= 2.0;
            n += 1;
        }
        (neg, pos)
    }

    /// Minimizer of `L` when exponents of both signs are present.
    fn argmin(&self) -> f64 {
        let d = |t: f64| self.derivs(t).1;
        let t0 = 0.0;
        let mut step = 1.0;
        let (mut lo, mut hi) = (t0, t0);
        let mut n = 0;
        while d(lo) > 0.0 && n < MAX_EXPANSIONS {
            lo -= step;
            step *= 2.0;
            n += 1;
        }
        step = 1.0;
        n = 0;
        while d(hi) < 0.0 && n < MAX_EXPANSIONS {
            hi += step;
            step *= 2.0;
            n += 1;
        }
        let mut t = 0.5 * (lo + hi);
        for _ in 0..MAX_ITER {
            let (_, d1, d2) = self.derivs(t);
            if d1 == 0.0 {
                return t;
            }
            if d1 < 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let newton = t - d1 / d2;
            let next = if d2 > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0) || hi - lo <= 4.0 * f64::EPSILON * t.abs().max(1.0) {
                return next;
            }
            t = next;
        }
        t
    }

    /// Root of `g` on one side of the minimizer (`side` = -1 left, +1 right).
    fn side_root(&self, t_star: f64, side: f64) -> f64 {
        // g(t_star) < 0; walk outward until g > 0.
        let mut step = 1.0;
        let mut pos = t_star + side * step;
        let mut n = 0;
        while self.g(pos) < 0.0 && n < MAX_EXPANSIONS {
            step *= 2.0;
            pos = t_star + side * step;
            n += 1;
        }
        self.refine(t_star, pos)
    }

    /// Safeguarded Newton for `g = 0` given `g(neg) <= 0 <= g(pos)`.
    fn refine(&self, mut neg: f64, mut pos: f64) -> f64 {
        let mut t = 0.5 * (neg + pos);
        for _ in 0..MAX_ITER {
            let (l, d1, _) = self.derivs(t);
            let g = l - self.target;
            if g == 0.0 {
                return t;
            }
            if g < 0.0 {
                neg = t;
            } else {
                pos = t;
            }
            let (a, b) = if neg < pos { (neg, pos) } else { (pos, neg) };
            let newton = t - g / d1;
            let next = if d1 != 0.0 && newton > a && newton < b {
                newton
            } else {
                0.5 * (a + b)
            };
            let scale = 4.0 * f64::EPSILON * t.abs().max(1.0);
            if (next - t).abs() <= scale || b - a <= scale {
                return next;
            }
            t = next;
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn srp(c: &[f64], k: usize, v: f64) -> SignedRadialPolynomial {
        SignedRadialPolynomial::new(c.to_vec(), k, v).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn pellet_quadratic_two_roots() {
        match srp(&[2.0, 0.0, 1.0], 1, 3.0).positive_roots().unwrap() {
            PositiveRoots::Two(x1, x2) => {
                assert!(close(x1, 1.0, 1e-14) && close(x2, 2.0, 1e-14), "{x1} {x2}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pellet_quadratic_no_roots() {
        assert_eq!(srp(&[1.0, 0.0, 1.0], 1, 1.0).positive_roots().unwrap(), PositiveRoots::None);
    }

    #[test]
    fn cauchy_shape_single_root() {
        match srp(&[0.0, 0.0, 1.0], 0, 4.0).positive_roots().unwrap() {
            PositiveRoots::One(x) => assert!(close(x, 2.0, 1e-15)),
            other => panic!("{other:?}"),
        }
        match srp(&[1.0, 2.0, 0.0], 2, 1.0).positive_roots().unwrap() {
            PositiveRoots::One(x) => assert!(close(x, 1.0 + 2f64.sqrt(), 1e-15)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wide_quadratic() {
        let d = (100.0f64 * 100.0 - 4.0).sqrt();
        let (r1, r2) = (2.0 / (100.0 + d), (100.0 + d) / 2.0);
        match srp(&[1.0, 0.0, 1.0], 1, 100.0).positive_roots().unwrap() {
            PositiveRoots::Two(x1, x2) => {
                assert!(close(x1, r1, 1e-13) && close(x2, r2, 1e-13));
                assert!(close(x1, 0.010001, 1e-5) && close(x2, 99.98999, 1e-6));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_tangency_is_none() {
        let a = srp(&[1.0, 0.0, 1.0], 1, 2.0).analyze();
        assert_eq!(a.roots, PositiveRoots::None);
        assert!(a.marginal);
        let a = srp(&[1.0, 0.0, 1.0], 1, 2.0 * (1.0 + 0.5 * EPS_GAP)).analyze();
        assert_eq!(a.roots, PositiveRoots::None);
        let a = srp(&[1.0, 0.0, 1.0], 1, 2.0 * (1.0 + 1e-6)).analyze();
        assert!(matches!(a.roots, PositiveRoots::Two(..)));
        assert!(!a.marginal);
    }

    #[test]
    fn upper_only_shape() {
        // lower coefficients all zero: one root
        match srp(&[0.0, 0.0, 1.0, 1.0], 1, 2.0).positive_roots().unwrap() {
            PositiveRoots::One(x) => assert!(close(x, 1.0, 1e-14)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn extreme_scaling_degree_100() {
        let mut c = vec![0.0; 101];
        c[100] = 1e-200;
        c[0] = 1e200;
        let f = srp(&c, 50, 3.0);
        match f.positive_roots().unwrap() {
            PositiveRoots::Two(x1, x2) => {
                assert!(x1 > 1.0 && x2 > x1);
                assert!(close(x1.log10(), 4.0, 1e-2), "{x1}");
                assert!(close(x2.log10(), 4.0, 1e-2), "{x2}");
                let s = (3.0 - 5f64.sqrt()) / 2.0;
                assert!(close(x1.ln(), (1e200f64.ln() + s.ln()) / 50.0, 1e-12));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation() {
        assert!(SignedRadialPolynomial::new(vec![1.0, 0.0], 1, 0.0).is_err());
        assert!(SignedRadialPolynomial::new(vec![1.0, 0.0], 2, 1.0).is_err());
        assert!(SignedRadialPolynomial::new(vec![-1.0, 0.0], 1, 1.0).is_err());
        assert!(SignedRadialPolynomial::new(vec![0.0, 0.0], 1, 1.0).is_err());
        assert!(SignedRadialPolynomial::new(vec![1.0, 1.0], 1, 1.0).is_err());
        assert!(SignedRadialPolynomial::new(vec![f64::NAN, 0.0], 1, 1.0).is_err());
    }

    #[test]
    fn eval_matches_signed_coeffs() {
        let f = srp(&[2.0, 0.0, 1.0], 1, 3.0);
        assert_eq!(f.signed_coeffs(), vec![2.0, -3.0, 1.0]);
        assert_eq!(f.eval(1.5), 2.0 - 4.5 + 2.25);
    }
}
