//! Seeded random ensembles comparing the bound variants, with every reported
//! bound checked against the eigenvalue oracle as it is produced.

use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::bounds::{cauchy_bounds, pellet_gap, squared_bounds, squared_gap, CauchyBounds, GapResult};
use crate::embed::{embed_even, LacunaryPolynomial};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, NormKind};
use crate::matpoly::MatrixPolynomial;
use crate::oracle::{check_cauchy, check_gap, eigen_oracle, EigenReport, CHECK_TOL};
use crate::report::{Cell, Report, Table};

pub const DEFAULT_TRIALS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExampleId {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
}

impl ExampleId {
    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::Ex1 => "ex1",
            ExampleId::Ex2 => "ex2",
            ExampleId::Ex3 => "ex3",
            ExampleId::Ex4 => "ex4",
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ex1" | "1" => Ok(ExampleId::Ex1),
            "ex2" | "2" => Ok(ExampleId::Ex2),
            "ex3" | "3" => Ok(ExampleId::Ex3),
            "ex4" | "4" => Ok(ExampleId::Ex4),
            _ => Err(Error::Input(format!("unknown example {s:?} (expected ex1..ex4)"))),
        }
    }
}

/// How the Example 1 scale factor is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleMode {
    /// One factor per coefficient matrix.
    #[default]
    PerMatrix,
    /// One factor per entry.
    PerEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub example: ExampleId,
    pub trials: usize,
    pub seed: u64,
    pub norm_kinds: Vec<NormKind>,
    /// Block sizes (Example 1).
    pub ms: Vec<usize>,
    /// Sizes of the `A_13` entries (Example 2).
    pub etas: Vec<f64>,
    /// Degrees (Example 4).
    pub ns: Vec<usize>,
    pub scale_mode: ScaleMode,
}

impl ExperimentConfig {
    /// Default grid and norms for `example`.
    pub fn new(example: ExampleId) -> Self {
        let norm_kinds = match example {
            ExampleId::Ex1 => NormKind::ALL.to_vec(),
            ExampleId::Ex2 => vec![NormKind::One],
            ExampleId::Ex3 | ExampleId::Ex4 => vec![NormKind::Two],
        };
        Self {
            example,
            trials: DEFAULT_TRIALS,
            seed: 0,
            norm_kinds,
            ms: vec![1, 2, 10, 25],
            etas: vec![1.0, 0.5, 0.25, 0.0],
            ns: vec![20, 40, 80],
            scale_mode: ScaleMode::PerMatrix,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Input("trials must be at least 1".into()));
        }
        if self.norm_kinds.is_empty() {
            return Err(Error::Input("at least one norm is required".into()));
        }
        match self.example {
            ExampleId::Ex1 if self.ms.is_empty() || self.ms.contains(&0) => {
                Err(Error::Input("Example 1 needs block sizes m >= 1".into()))
            }
            ExampleId::Ex2 if self.etas.is_empty() || self.etas.iter().any(|e| !(e.is_finite() && *e >= 0.0)) => {
                Err(Error::Input("Example 2 needs finite eta >= 0".into()))
            }
            ExampleId::Ex4 if self.ns.is_empty() || self.ns.iter().any(|&n| n < 6 || n % 2 == 1) => {
                Err(Error::Input("Example 4 needs even degrees n >= 6".into()))
            }
            _ => Ok(()),
        }
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for one trial: the key depends on the seed, the example and the
/// parameter row; the trial index selects the ChaCha stream.
pub fn trial_rng(seed: u64, example: ExampleId, row: usize, trial: usize) -> ChaCha20Rng {
    let mut state = splitmix(seed ^ splitmix(example.tag() ^ splitmix(row as u64)));
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(trial as u64);
    rng
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn random_matrix<R: Rng + ?Sized>(rng: &mut R, m: usize, half_width: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, m, |_, _| {
        let re = uniform(rng, -half_width, half_width);
        let im = uniform(rng, -half_width, half_width);
        Complex64::new(re, im)
    })
}

/// Monic degree 10; entries of `A_0..A_9` have parts in `[-1, 1]` times a
/// factor uniform in `[0, 10]`.
pub fn gen_ex1<R: Rng + ?Sized>(rng: &mut R, m: usize, mode: ScaleMode) -> MatrixPolynomial {
    let mut coeffs = Vec::with_capacity(11);
    for _ in 0..10 {
        let a = match mode {
            ScaleMode::PerMatrix => {
                let s = uniform(rng, 0.0, 10.0);
                random_matrix(rng, m, 1.0).scale(Complex64::new(s, 0.0))
            }
            ScaleMode::PerEntry => ComplexMatrix::from_fn(m, m, |_, _| {
                let s = uniform(rng, 0.0, 10.0);
                let re = uniform(rng, -1.0, 1.0);
                let im = uniform(rng, -1.0, 1.0);
                Complex64::new(re * s, im * s)
            }),
        };
        coeffs.push(a);
    }
    coeffs.push(ComplexMatrix::identity(m));
    MatrixPolynomial::new(coeffs).expect("identity leading coefficient")
}

/// Monic degree 14 with 25x25 blocks; `A_11`, `A_12` large, `A_13` of size
/// `eta`, the rest in `[-2, 2]`.
pub fn gen_ex2<R: Rng + ?Sized>(rng: &mut R, eta: f64) -> MatrixPolynomial {
    const M: usize = 25;
    let mut coeffs = Vec::with_capacity(15);
    for j in 0..14 {
        let w = match j {
            11 => 50.0 * 50.0 / 2.0,
            12 => 200.0 * 200.0 / 2.0,
            13 => eta,
            _ => 2.0,
        };
        coeffs.push(random_matrix(rng, M, w));
    }
    coeffs.push(ComplexMatrix::identity(M));
    MatrixPolynomial::new(coeffs).expect("identity leading coefficient")
}

fn signed_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let x = uniform(rng, lo, hi);
    if rng.random::<bool>() {
        x
    } else {
        -x
    }
}

/// Monic real scalar polynomial of degree 20 with enlarged coefficients at
/// indices 3, 4, 5, 11, 12, 13.
pub fn gen_ex3<R: Rng + ?Sized>(rng: &mut R) -> MatrixPolynomial {
    let mut asc = Vec::with_capacity(21);
    for j in 0..20 {
        let a = match j {
            3 | 5 | 11 | 13 => signed_uniform(rng, 1.0, 2.0),
            4 => signed_uniform(rng, 8.0, 10.0),
            12 => signed_uniform(rng, 14.0, 16.0),
            _ => uniform(rng, -1.0, 1.0),
        };
        asc.push(Complex64::new(a, 0.0));
    }
    asc.push(Complex64::new(1.0, 0.0));
    MatrixPolynomial::from_scalar(&asc).expect("monic")
}

/// Lacunary polynomial of degree `n` with six coefficients uniform in
/// `[-50, 50]`; `a` and `alpha` are redrawn while zero.
pub fn gen_ex4<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<LacunaryPolynomial> {
    let mut draw = |nonzero: bool| loop {
        let x = uniform(rng, -50.0, 50.0);
        if !nonzero || x != 0.0 {
            break x;
        }
    };
    let a = draw(true);
    let b = draw(false);
    let c = draw(false);
    let alpha = draw(true);
    let beta = draw(false);
    let gamma = draw(false);
    LacunaryPolynomial::from_real(n, [a, b, c, alpha, beta, gamma])
}

/// Welford accumulator for mean and sample standard deviation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct TrialStats {
    pub count: usize,
    mean: f64,
    m2: f64,
}

impl TrialStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            f64::NAN
        } else {
            self.mean
        }
    }

    pub fn std(&self) -> f64 {
        match self.count {
            0 => f64::NAN,
            1 => 0.0,
            n => (self.m2 / (n - 1) as f64).sqrt(),
        }
    }

    fn cell(&self) -> Cell {
        Cell::MeanStd(self.mean(), self.std())
    }
}

/// Index of the best available value; ties go to the earliest entry.
fn best_index(values: &[Option<f64>], smaller_is_better: bool) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = *v {
            let better = match best {
                None => true,
                Some((_, b)) => {
                    if smaller_is_better {
                        v < b
                    } else {
                        v > b
                    }
                }
            };
            if better {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Maps `Singular` (the variant does not apply to this instance) to `None`.
fn applicable<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Singular(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

struct Checker<'a> {
    rep: &'a EigenReport,
    checks: &'a mut u64,
}

impl Checker<'_> {
    fn cauchy(&mut self, b: &CauchyBounds) -> Result<()> {
        check_cauchy(self.rep, b, CHECK_TOL)?;
        *self.checks += 1;
        Ok(())
    }

    fn gap(&mut self, g: &GapResult) -> Result<()> {
        check_gap(self.rep, g, CHECK_TOL)?;
        *self.checks += 1;
        Ok(())
    }
}

/// `(x2 - x1)` over the true gap between moduli `c` and `c + 1`, in percent.
fn gap_ratio(g: &GapResult, rep: &EigenReport) -> Option<(f64, f64)> {
    let (x1, x2) = g.gap()?;
    let c = g.eig_count_inside;
    let actual = rep.moduli[c] - rep.moduli[c - 1];
    Some((x2 - x1, 100.0 * (x2 - x1) / actual))
}

/// Gap detections of two competing variants.
#[derive(Debug, Default, Clone)]
struct PairTally {
    total: [u64; 2],
    only: [u64; 2],
    ratio: [TrialStats; 2],
    both: u64,
    second_wider: u64,
}

impl PairTally {
    fn record(&mut self, a: Option<(f64, f64)>, b: Option<(f64, f64)>) {
        for (i, g) in [a, b].iter().enumerate() {
            if let Some((_, r)) = g {
                self.total[i] += 1;
                self.ratio[i].push(*r);
            }
        }
        match (a, b) {
            (Some((wa, _)), Some((wb, _))) => {
                self.both += 1;
                if wb > wa {
                    self.second_wider += 1;
                }
            }
            (Some(_), None) => self.only[0] += 1,
            (None, Some(_)) => self.only[1] += 1,
            (None, None) => {}
        }
    }

    fn wider_percent(&self) -> f64 {
        if self.both == 0 {
            f64::NAN
        } else {
            100.0 * self.second_wider as f64 / self.both as f64
        }
    }
}

/// Counts of trials in which each variant gave gaps at both indices.
#[derive(Debug, Default, Clone)]
struct BothTally {
    total: [u64; 2],
    only: [u64; 2],
}

impl BothTally {
    fn record(&mut self, a: bool, b: bool) {
        self.total[0] += a as u64;
        self.total[1] += b as u64;
        self.only[0] += (a && !b) as u64;
        self.only[1] += (b && !a) as u64;
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let mut checks = 0u64;
    let tables = match cfg.example {
        ExampleId::Ex1 => run_ex1(cfg, &mut checks)?,
        ExampleId::Ex2 => run_ex2(cfg, &mut checks)?,
        ExampleId::Ex3 => run_ex3(cfg, &mut checks)?,
        ExampleId::Ex4 => run_ex4(cfg, &mut checks)?,
    };
    Ok(Report {
        example: cfg.example.as_str().into(),
        trials: cfg.trials,
        seed: cfg.seed,
        checks,
        tables,
    })
}

fn text(s: impl Into<String>) -> Cell {
    Cell::Text(s.into())
}

const EX1_UPPER: [&str; 2] = ["P", "Q"];
const EX1_LOWER: [&str; 5] = ["P", "Q", "A0^-1P", "B0^-1Q", "Q_R"];
const EX1_LOWER_BEST: [&str; 3] = ["A0^-1P", "B0^-1Q", "Q_R"];

#[derive(Default, Clone)]
struct Ex1Acc {
    upper: [TrialStats; 2],
    upper_best: [u64; 2],
    lower: [TrialStats; 5],
    lower_best: [u64; 3],
}

fn run_ex1(cfg: &ExperimentConfig, checks: &mut u64) -> Result<Vec<Table>> {
    let nk = cfg.norm_kinds.len();
    let mut acc = vec![vec![Ex1Acc::default(); cfg.ms.len()]; nk];
    for (row, &m) in cfg.ms.iter().enumerate() {
        for t in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, ExampleId::Ex1, row, t);
            let p = gen_ex1(&mut rng, m, cfg.scale_mode);
            let rep = eigen_oracle(&p)?;
            let (max, min) = (rep.max_modulus(), rep.min_modulus());
            let mut ck = Checker { rep: &rep, checks };
            for (ni, &kind) in cfg.norm_kinds.iter().enumerate() {
                let plain = cauchy_bounds(&p, kind, false)?;
                let pre = cauchy_bounds(&p, kind, true)?;
                let q = squared_bounds(&p, kind, false, None)?;
                let qb0 = applicable(squared_bounds(&p, kind, false, Some(0)))?;
                let qr = applicable(squared_bounds(&p, kind, true, None))?;
                for b in [Some(&plain), Some(&pre), Some(&q), qb0.as_ref(), qr.as_ref()].into_iter().flatten() {
                    ck.cauchy(b)?;
                }
                let a = &mut acc[ni][row];
                let ups = [plain.upper, q.upper].map(|u| u.map(|u| 100.0 * u / max));
                for (s, u) in a.upper.iter_mut().zip(ups) {
                    if let Some(u) = u {
                        s.push(u);
                    }
                }
                if let Some(i) = best_index(&ups, true) {
                    a.upper_best[i] += 1;
                }
                let lows = [
                    plain.lower,
                    q.lower,
                    pre.lower,
                    qb0.and_then(|b| b.lower),
                    qr.and_then(|b| b.lower),
                ]
                .map(|l| l.map(|l| 100.0 * l / min));
                for (s, l) in a.lower.iter_mut().zip(lows) {
                    if let Some(l) = l {
                        s.push(l);
                    }
                }
                if let Some(i) = best_index(&lows[2..], false) {
                    a.lower_best[i] += 1;
                }
            }
        }
    }

    let mut header = vec!["norm", "m"];
    header.extend(EX1_UPPER);
    let mut upper = Table::new("upper_ratio", "Upper bound / largest modulus (%), mean (std)", &header);
    let mut upper_best = Table::new("upper_best", "Best upper bound frequencies", &header);
    let mut header = vec!["norm", "m"];
    header.extend(EX1_LOWER);
    let mut lower = Table::new("lower_ratio", "Lower bound / smallest modulus (%), mean (std)", &header);
    let mut header = vec!["norm", "m"];
    header.extend(EX1_LOWER_BEST);
    let mut lower_best = Table::new("lower_best", "Best lower bound frequencies", &header);
    for (ni, kind) in cfg.norm_kinds.iter().enumerate() {
        for (row, &m) in cfg.ms.iter().enumerate() {
            let a = &acc[ni][row];
            let key = || vec![text(kind.as_str()), Cell::Int(m as u64)];
            let mut r = key();
            r.extend(a.upper.iter().map(TrialStats::cell));
            upper.push(r);
            let mut r = key();
            r.extend(a.upper_best.iter().map(|&c| Cell::Int(c)));
            upper_best.push(r);
            let mut r = key();
            r.extend(a.lower.iter().map(TrialStats::cell));
            lower.push(r);
            let mut r = key();
            r.extend(a.lower_best.iter().map(|&c| Cell::Int(c)));
            lower_best.push(r);
        }
    }
    Ok(vec![upper, upper_best, lower, lower_best])
}

fn pair_tables(name: &str, title: &str, key: &[&str], names: [&str; 2], rows: &[(Vec<Cell>, PairTally)]) -> [Table; 2] {
    let mut h = key.to_vec();
    let (t0, t1) = (format!("{} total", names[0]), format!("{} total", names[1]));
    let (o0, o1) = (format!("{} only", names[0]), format!("{} only", names[1]));
    h.extend([t0.as_str(), t1.as_str(), o0.as_str(), o1.as_str()]);
    let mut freq = Table::new(&format!("{name}_frequency"), &format!("{title}: gap frequency"), &h);
    let mut h = key.to_vec();
    let wider = format!("% Gap({}) > Gap({})", names[1], names[0]);
    h.extend([names[0], names[1], wider.as_str()]);
    let mut ratio = Table::new(&format!("{name}_ratio"), &format!("{title}: computed / true gap (%), mean (std)"), &h);
    for (k, tally) in rows {
        let mut r = k.clone();
        r.extend([tally.total[0], tally.total[1], tally.only[0], tally.only[1]].map(Cell::Int));
        freq.push(r);
        let mut r = k.clone();
        r.extend([tally.ratio[0].cell(), tally.ratio[1].cell(), Cell::Real(tally.wider_percent())]);
        ratio.push(r);
    }
    [freq, ratio]
}

fn run_ex2(cfg: &ExperimentConfig, checks: &mut u64) -> Result<Vec<Table>> {
    const K: usize = 12;
    let nk = cfg.norm_kinds.len();
    let mut plain = vec![vec![PairTally::default(); cfg.etas.len()]; nk];
    let mut pre = plain.clone();
    for (row, &eta) in cfg.etas.iter().enumerate() {
        for t in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, ExampleId::Ex2, row, t);
            let p = gen_ex2(&mut rng, eta);
            let rep = eigen_oracle(&p)?;
            let mut ck = Checker { rep: &rep, checks };
            for (ni, &kind) in cfg.norm_kinds.iter().enumerate() {
                let gp = applicable(pellet_gap(&p, K, kind, false))?;
                let gq = applicable(squared_gap(&p, K, kind, false))?;
                let gpp = applicable(pellet_gap(&p, K, kind, true))?;
                let gqp = applicable(squared_gap(&p, K, kind, true))?;
                for g in [&gp, &gq, &gpp, &gqp].into_iter().flatten() {
                    ck.gap(g)?;
                }
                let r = |g: &Option<GapResult>| g.as_ref().and_then(|g| gap_ratio(g, &rep));
                plain[ni][row].record(r(&gp), r(&gq));
                pre[ni][row].record(r(&gpp), r(&gqp));
            }
        }
    }
    let key = ["norm", "eta"];
    let rows = |tallies: &[Vec<PairTally>]| {
        let mut out = Vec::new();
        for (ni, kind) in cfg.norm_kinds.iter().enumerate() {
            for (row, &eta) in cfg.etas.iter().enumerate() {
                out.push((vec![text(kind.as_str()), Cell::Real(eta)], tallies[ni][row].clone()));
            }
        }
        out
    };
    let [a, b] = pair_tables("gap", "P vs Q, k = 12", &key, ["P", "Q"], &rows(&plain));
    let [c, d] = pair_tables(
        "gap_preconditioned",
        "Ak^-1P vs Bk/2^-1Q, k = 12",
        &key,
        ["Ak^-1P", "Bk/2^-1Q"],
        &rows(&pre),
    );
    Ok(vec![a, b, c, d])
}

fn run_ex3(cfg: &ExperimentConfig, checks: &mut u64) -> Result<Vec<Table>> {
    const KS: [usize; 2] = [4, 12];
    let nk = cfg.norm_kinds.len();
    let mut tallies = vec![[PairTally::default(), PairTally::default()]; nk];
    let mut both = vec![BothTally::default(); nk];
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, ExampleId::Ex3, 0, t);
        let p = gen_ex3(&mut rng);
        let rep = eigen_oracle(&p)?;
        let mut ck = Checker { rep: &rep, checks };
        for (ni, &kind) in cfg.norm_kinds.iter().enumerate() {
            let mut found = [[false; 2]; 2];
            for (ki, &k) in KS.iter().enumerate() {
                let gp = applicable(pellet_gap(&p, k, kind, false))?;
                let gq = applicable(squared_gap(&p, k, kind, true))?;
                for g in [&gp, &gq].into_iter().flatten() {
                    ck.gap(g)?;
                }
                let r = |g: &Option<GapResult>| g.as_ref().and_then(|g| gap_ratio(g, &rep));
                let (rp, rq) = (r(&gp), r(&gq));
                found[0][ki] = rp.is_some();
                found[1][ki] = rq.is_some();
                tallies[ni][ki].record(rp, rq);
            }
            both[ni].record(found[0][0] && found[0][1], found[1][0] && found[1][1]);
        }
    }
    let mut rows = Vec::new();
    for (ni, kind) in cfg.norm_kinds.iter().enumerate() {
        for (ki, &k) in KS.iter().enumerate() {
            rows.push((vec![text(kind.as_str()), Cell::Int(k as u64)], tallies[ni][ki].clone()));
        }
    }
    let names = ["p", "Bk/2^-1Q"];
    let [a, b] = pair_tables("gap", "p vs Bk/2^-1Q", &["norm", "k"], names, &rows);
    let mut c = Table::new(
        "gap_both_frequency",
        "Gap frequency for both k = 4 and k = 12",
        &["norm", "p total", "Bk/2^-1Q total", "p only", "Bk/2^-1Q only"],
    );
    for (ni, kind) in cfg.norm_kinds.iter().enumerate() {
        let bt = &both[ni];
        let mut r = vec![text(kind.as_str())];
        r.extend([bt.total[0], bt.total[1], bt.only[0], bt.only[1]].map(Cell::Int));
        c.push(r);
    }
    Ok(vec![a, b, c])
}

#[derive(Default, Clone)]
struct Ex4Acc {
    upper: [TrialStats; 2],
    lower: [TrialStats; 2],
    upper_better: u64,
    lower_better: u64,
    both_better: u64,
    gaps: [PairTally; 2],
    both: BothTally,
}

fn percent(count: u64, of: usize) -> f64 {
    100.0 * count as f64 / of as f64
}

fn run_ex4(cfg: &ExperimentConfig, checks: &mut u64) -> Result<Vec<Table>> {
    let nk = cfg.norm_kinds.len();
    let mut acc = vec![vec![Ex4Acc::default(); cfg.ns.len()]; nk];
    for (row, &n) in cfg.ns.iter().enumerate() {
        for t in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, ExampleId::Ex4, row, t);
            let lac = gen_ex4(&mut rng, n)?;
            let p = lac.to_scalar_polynomial()?;
            let q = embed_even(&lac)?;
            let rep = eigen_oracle(&p)?;
            let (max, min) = (rep.max_modulus(), rep.min_modulus());
            let mut ck = Checker { rep: &rep, checks };
            for (ni, &kind) in cfg.norm_kinds.iter().enumerate() {
                let a = &mut acc[ni][row];
                let bp = cauchy_bounds(&p, kind, false)?;
                let bq = cauchy_bounds(&q, kind, false)?;
                ck.cauchy(&bp)?;
                ck.cauchy(&bq)?;
                let ups = [bp.upper, bq.upper].map(|u| u.map(|u| 100.0 * u / max));
                let lows = [bp.lower, bq.lower].map(|l| l.map(|l| 100.0 * l / min));
                for i in 0..2 {
                    if let Some(u) = ups[i] {
                        a.upper[i].push(u);
                    }
                    if let Some(l) = lows[i] {
                        a.lower[i].push(l);
                    }
                }
                let ub = matches!(ups, [Some(s), Some(m)] if m < s);
                let lb = matches!(lows, [Some(s), Some(m)] if m > s);
                a.upper_better += ub as u64;
                a.lower_better += lb as u64;
                a.both_better += (ub && lb) as u64;

                let mut found = [[false; 2]; 2];
                for (ki, (kp, kq)) in [(2, 1), (n - 2, n / 2 - 1)].into_iter().enumerate() {
                    let gp = applicable(pellet_gap(&p, kp, kind, false))?;
                    let gq = applicable(pellet_gap(&q, kq, kind, false))?;
                    for g in [&gp, &gq].into_iter().flatten() {
                        ck.gap(g)?;
                    }
                    let r = |g: &Option<GapResult>| g.as_ref().and_then(|g| gap_ratio(g, &rep));
                    let (rp, rq) = (r(&gp), r(&gq));
                    found[0][ki] = rp.is_some();
                    found[1][ki] = rq.is_some();
                    a.gaps[ki].record(rp, rq);
                }
                a.both.record(found[0][0] && found[0][1], found[1][0] && found[1][1]);
            }
        }
    }

    let mut bounds = Table::new(
        "bounds",
        "Bound / extreme modulus (%), mean (std), and % of trials where the matrix bound is better",
        &[
            "norm",
            "n",
            "upper scalar",
            "upper matrix",
            "lower scalar",
            "lower matrix",
            "% upper better",
            "% lower better",
            "% upper and lower better",
        ],
    );
    let mut freq = Table::new(
        "gap_frequency",
        "Gap frequency for k = 2 and k = n-2",
        &[
            "norm",
            "n",
            "k=2 scalar",
            "k=2 matrix",
            "k=2 scalar only",
            "k=2 matrix only",
            "k=n-2 scalar",
            "k=n-2 matrix",
            "k=n-2 scalar only",
            "k=n-2 matrix only",
        ],
    );
    let mut both = Table::new(
        "gap_both_frequency",
        "Gap frequency for both k = 2 and k = n-2",
        &["norm", "n", "scalar", "matrix", "scalar only", "matrix only"],
    );
    let mut ratio = Table::new(
        "gap_ratio",
        "Computed / true gap (%), mean (std)",
        &[
            "norm",
            "n",
            "k=2 scalar",
            "k=2 matrix",
            "k=2 % matrix better",
            "k=n-2 scalar",
            "k=n-2 matrix",
            "k=n-2 % matrix better",
        ],
    );
    for (ni, kind) in cfg.norm_kinds.iter().enumerate() {
        for (row, &n) in cfg.ns.iter().enumerate() {
            let a = &acc[ni][row];
            let key = || vec![text(kind.as_str()), Cell::Int(n as u64)];
            let mut r = key();
            r.extend([a.upper[0].cell(), a.upper[1].cell(), a.lower[0].cell(), a.lower[1].cell()]);
            r.extend(
                [a.upper_better, a.lower_better, a.both_better].map(|c| Cell::Real(percent(c, cfg.trials))),
            );
            bounds.push(r);
            let mut r = key();
            for g in &a.gaps {
                r.extend([g.total[0], g.total[1], g.only[0], g.only[1]].map(Cell::Int));
            }
            freq.push(r);
            let mut r = key();
            r.extend([a.both.total[0], a.both.total[1], a.both.only[0], a.both.only[1]].map(Cell::Int));
            both.push(r);
            let mut r = key();
            for g in &a.gaps {
                r.extend([g.ratio[0].cell(), g.ratio[1].cell(), Cell::Real(g.wider_percent())]);
            }
            ratio.push(r);
        }
    }
    Ok(vec![bounds, freq, both, ratio])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ex1_generator_shape_and_range() {
        let mut rng = trial_rng(7, ExampleId::Ex1, 0, 0);
        let p = gen_ex1(&mut rng, 3, ScaleMode::PerMatrix);
        assert_eq!((p.degree(), p.m()), (10, 3));
        assert_eq!(p.leading(), &ComplexMatrix::identity(3));
        for a in &p.coeffs()[..10] {
            assert!(a.data().iter().all(|z| z.re.abs() <= 10.0 && z.im.abs() <= 10.0));
        }
        let mut rng2 = trial_rng(7, ExampleId::Ex1, 0, 0);
        assert_eq!(gen_ex1(&mut rng2, 3, ScaleMode::PerMatrix), p);
        let mut rng3 = trial_rng(7, ExampleId::Ex1, 0, 1);
        assert_ne!(gen_ex1(&mut rng3, 3, ScaleMode::PerMatrix), p);
    }

    #[test]
    fn ex2_generator_ranges() {
        let mut rng = trial_rng(1, ExampleId::Ex2, 0, 0);
        let p = gen_ex2(&mut rng, 0.0);
        assert_eq!((p.degree(), p.m()), (14, 25));
        assert!(p.coeff(13).is_zero());
        let within = |j: usize, w: f64| p.coeff(j).data().iter().all(|z| z.re.abs() <= w && z.im.abs() <= w);
        assert!(within(11, 1250.0) && within(12, 20000.0) && within(0, 2.0));
        assert!(p.coeff(12).max_abs() > 2000.0);
    }

    #[test]
    fn ex3_generator_ranges() {
        for t in 0..20 {
            let mut rng = trial_rng(3, ExampleId::Ex3, 0, t);
            let p = gen_ex3(&mut rng);
            let a = |j: usize| p.coeff(j)[(0, 0)].re.abs();
            assert!((8.0..=10.0).contains(&a(4)));
            assert!((14.0..=16.0).contains(&a(12)));
            assert!((1.0..=2.0).contains(&a(3)) && (1.0..=2.0).contains(&a(13)));
            assert!(a(0) <= 1.0 && a(19) <= 1.0);
            assert_eq!(a(20), 1.0);
        }
    }

    #[test]
    fn ex4_generator_ranges() {
        for t in 0..20 {
            let mut rng = trial_rng(4, ExampleId::Ex4, 0, t);
            let l = gen_ex4(&mut rng, 20).unwrap();
            let cs = [l.a, l.b, l.c, l.alpha, l.beta, l.gamma];
            assert!(cs.iter().all(|z| z.re.abs() <= 50.0 && z.im == 0.0));
            assert!(l.a * l.alpha != Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn stats_and_best() {
        let mut s = TrialStats::default();
        for x in [1.0, 2.0, 3.0, 4.0] {
            s.push(x);
        }
        assert_eq!(s.mean(), 2.5);
        assert!((s.std() - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(TrialStats::default().mean().is_nan());
        assert_eq!(best_index(&[Some(2.0), Some(1.0), Some(1.0)], true), Some(1));
        assert_eq!(best_index(&[Some(2.0), Some(2.0)], true), Some(0));
        assert_eq!(best_index(&[None, Some(3.0), Some(5.0)], false), Some(2));
        assert_eq!(best_index(&[None, None], false), None);
    }

    #[test]
    fn small_runs_are_deterministic_and_consistent() {
        for ex in [ExampleId::Ex1, ExampleId::Ex3, ExampleId::Ex4] {
            let mut cfg = ExperimentConfig::new(ex);
            cfg.trials = 6;
            cfg.seed = 11;
            cfg.ms = vec![1, 2];
            cfg.ns = vec![20];
            let a = run_experiment(&cfg).unwrap();
            let b = run_experiment(&cfg).unwrap();
            assert_eq!(a.to_csv(), b.to_csv());
            assert!(a.checks > 0);
        }
        let mut cfg = ExperimentConfig::new(ExampleId::Ex1);
        cfg.trials = 5;
        cfg.ms = vec![2];
        let r = run_experiment(&cfg).unwrap();
        for row in &r.table("upper_best").unwrap().rows {
            let total: u64 = row[2..].iter().map(|c| if let Cell::Int(i) = c { *i } else { 0 }).sum();
            assert_eq!(total, 5);
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::new(ExampleId::Ex4);
        cfg.ns = vec![7];
        assert!(cfg.validate().is_err());
        cfg.ns = vec![20];
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        assert_eq!("EX2".parse::<ExampleId>().unwrap(), ExampleId::Ex2);
        assert!("ex5".parse::<ExampleId>().is_err());
    }
}
