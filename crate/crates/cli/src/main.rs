use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use pellet_core::embed::embed;
use pellet_core::experiments::{run_experiment, ExampleId, ExperimentConfig, ScaleMode};
use pellet_core::oracle::{check_cauchy, check_gap, CHECK_TOL};
use pellet_core::report::{Cell, Table};
use pellet_core::{
    cauchy_bounds, eigen_oracle, pellet_gap, squared_bounds, squared_gap, CauchyBounds, Error, GapResult, GapStatus,
    LacunaryPolynomial, MatrixPolynomial, NormKind,
};

#[derive(Parser, Debug)]
#[command(name = "pellet", version, about = "Eigenvalue localization bounds for matrix polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cauchy radii for the requested variants and norms.
    Bounds {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
        /// Repeatable; defaults to `p`.
        #[arg(long, value_enum)]
        variant: Vec<VariantArg>,
        /// Verify each bound against the eigenvalue oracle.
        #[arg(long)]
        check: bool,
    },
    /// Pellet gap at index k (an even index of the original polynomial for `q`).
    Gap {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "p")]
        variant: VariantArg,
        #[arg(long)]
        check: bool,
    },
    /// Squared block companion polynomial Q (or Q_R) as JSON.
    Square {
        #[command(flatten)]
        input: Input,
        /// Square the reciprocal polynomial instead.
        #[arg(long)]
        reciprocal: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 2x2 embedding of a lacunary polynomial as JSON.
    Embed {
        /// Degree of the lacunary polynomial.
        #[arg(long, required_unless_present = "input")]
        n: Option<usize>,
        /// Real coefficients "a,b,c,alpha,beta,gamma".
        #[arg(long, required_unless_present = "input", allow_hyphen_values = true)]
        coeffs: Option<String>,
        /// JSON file with a lacunary polynomial; `-` reads stdin.
        #[arg(long, conflicts_with_all = ["n", "coeffs"])]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues sorted by modulus.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random experiment tables.
    Experiment {
        /// One of ex1, ex2, ex3, ex4.
        #[arg(long)]
        example: String,
        /// Repeatable; defaults to the example's norms.
        #[arg(long, value_enum)]
        norm: Vec<NormArg>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Block sizes for ex1 (repeatable).
        #[arg(long)]
        m: Vec<usize>,
        /// Entry sizes for ex2 (repeatable).
        #[arg(long)]
        eta: Vec<f64>,
        /// Degrees for ex4 (repeatable).
        #[arg(long)]
        n: Vec<usize>,
        /// Draw one ex1 scale factor per entry instead of per matrix.
        #[arg(long)]
        per_entry_scale: bool,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// JSON file with a matrix polynomial; `-` reads stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Descending real scalar coefficients, e.g. "1,-3,2".
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
}

#[derive(Args, Debug)]
struct Common {
    /// Repeatable.
    #[arg(long, value_enum, default_values = ["one"])]
    norm: Vec<NormArg>,
    #[arg(long)]
    precondition: bool,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum NormArg {
    One,
    Inf,
    Two,
}

impl From<NormArg> for NormKind {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::One => NormKind::One,
            NormArg::Inf => NormKind::Inf,
            NormArg::Two => NormKind::Two,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum VariantArg {
    P,
    Q,
    Qr,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Md,
    Json,
}

/// Failure with its process exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Input(_) | Error::Dimension(_) | Error::NonFinite { .. } | Error::InvalidShape(_) => 1,
            Error::Singular(_)
            | Error::NotMonic(_)
            | Error::OddDegree(_)
            | Error::OddIndex(_)
            | Error::IndexOutOfRange { .. }
            | Error::InvalidDegree(_)
            | Error::ZeroLeading => 2,
            Error::NoConvergence | Error::TooLarge { .. } | Error::Soundness(_) => 3,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

fn read_source(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| input_error(format!("reading {}: {e}", path.display())))
    }
}

fn parse_reals(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| input_error(format!("cannot parse coefficient {:?}", t.trim())))
        })
        .collect()
}

fn load_poly(input: &Input) -> Result<MatrixPolynomial, Failure> {
    match (&input.input, &input.poly) {
        (Some(path), _) => Ok(MatrixPolynomial::from_json(&read_source(path)?)?),
        (None, Some(s)) => Ok(MatrixPolynomial::from_real_descending(&parse_reals(s)?)?),
        (None, None) => Err(input_error("one of --input or --poly is required")),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| input_error(format!("writing {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| input_error(format!("writing stdout: {e}"))),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn opt_real(x: Option<f64>) -> Cell {
    Cell::Real(x.unwrap_or(f64::NAN))
}

fn render(table: &Table, format: Format, records: String) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Md => table.to_markdown(),
        Format::Json => records,
    }
}

fn bounds_cmd(p: &MatrixPolynomial, common: &Common, variants: &[VariantArg], check: bool) -> Result<String, Failure> {
    let variants = if variants.is_empty() { &[VariantArg::P][..] } else { variants };
    let oracle = if check { Some(eigen_oracle(p)?) } else { None };
    let mut records: Vec<CauchyBounds> = Vec::new();
    for &v in variants {
        for &norm in &common.norm {
            let kind = norm.into();
            let pre = common.precondition.then_some(0);
            let b = match v {
                VariantArg::P => cauchy_bounds(p, kind, common.precondition)?,
                VariantArg::Q => squared_bounds(p, kind, false, pre)?,
                VariantArg::Qr => squared_bounds(p, kind, true, pre)?,
            };
            if let Some(rep) = &oracle {
                check_cauchy(rep, &b, CHECK_TOL)?;
            }
            records.push(b);
        }
    }
    let mut t = Table::new(
        "bounds",
        "Cauchy bounds",
        &["variant", "norm", "upper", "lower", "monicized", "shifted", "preconditioner"],
    );
    for b in &records {
        t.push(vec![
            Cell::Text(b.variant.to_string()),
            Cell::Text(b.norm_kind.as_str().into()),
            opt_real(b.upper),
            opt_real(b.lower),
            Cell::Text(b.monicized.to_string()),
            Cell::Text(b.shifted.to_string()),
            Cell::Text(b.preconditioner.map_or("NA".into(), |j| j.to_string())),
        ]);
    }
    Ok(render(&t, common.format, json(&records)))
}

fn gap_cmd(p: &MatrixPolynomial, common: &Common, k: usize, variant: VariantArg, check: bool) -> Result<String, Failure> {
    let oracle = if check { Some(eigen_oracle(p)?) } else { None };
    let mut records: Vec<GapResult> = Vec::new();
    for &norm in &common.norm {
        let kind = norm.into();
        let g = match variant {
            VariantArg::P => pellet_gap(p, k, kind, common.precondition)?,
            VariantArg::Q => squared_gap(p, k, kind, common.precondition)?,
            VariantArg::Qr => return Err(input_error("gap supports --variant p or q")),
        };
        if let Some(rep) = &oracle {
            check_gap(rep, &g, CHECK_TOL)?;
        }
        records.push(g);
    }
    let mut t = Table::new(
        "gap",
        "Pellet gaps",
        &["variant", "norm", "k", "status", "x1", "x2", "count", "marginal"],
    );
    for g in &records {
        let (status, x1, x2) = match g.status {
            GapStatus::NoGap => ("no-gap", f64::NAN, f64::NAN),
            GapStatus::Gap { x1, x2 } => ("gap", x1, x2),
            GapStatus::UpperOnly { x } => ("upper-only", 0.0, x),
        };
        t.push(vec![
            Cell::Text(g.variant.to_string()),
            Cell::Text(g.norm_kind.as_str().into()),
            Cell::Int(g.k as u64),
            Cell::Text(status.into()),
            Cell::Real(x1),
            Cell::Real(x2),
            Cell::Int(g.eig_count_inside as u64),
            Cell::Text(g.marginal.to_string()),
        ]);
    }
    Ok(render(&t, common.format, json(&records)))
}

/// The polynomial `squared_bounds` works with: monic (or reciprocal), even degree.
fn square_cmd(p: &MatrixPolynomial, reciprocal: bool) -> Result<String, Failure> {
    let mut base = if reciprocal {
        p.reciprocal()?
    } else if p.is_monic() {
        p.clone()
    } else {
        p.monicize()?
    };
    if base.degree() % 2 == 1 {
        base = base.shift_by_z();
    }
    let mut s = base.square_repartition()?.to_json();
    s.push('\n');
    Ok(s)
}

fn embed_cmd(n: Option<usize>, coeffs: &Option<String>, input: &Option<PathBuf>) -> Result<String, Failure> {
    let lp = match (input, n, coeffs) {
        (Some(path), ..) => {
            let lp: LacunaryPolynomial =
                serde_json::from_str(&read_source(path)?).map_err(|e| input_error(e.to_string()))?;
            LacunaryPolynomial::new(lp.n, [lp.a, lp.b, lp.c, lp.alpha, lp.beta, lp.gamma])?
        }
        (None, Some(n), Some(s)) => {
            let v = parse_reals(s)?;
            let arr: [f64; 6] = v
                .try_into()
                .map_err(|v: Vec<f64>| input_error(format!("--coeffs needs 6 values, got {}", v.len())))?;
            LacunaryPolynomial::from_real(n, arr)?
        }
        _ => return Err(input_error("embed needs --n and --coeffs, or --input")),
    };
    let mut s = embed(&lp)?.to_json();
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct OracleOut {
    count: usize,
    moduli: Vec<f64>,
    values: Vec<Complex64>,
}

fn oracle_cmd(p: &MatrixPolynomial, format: Format) -> Result<String, Failure> {
    let rep = eigen_oracle(p)?;
    let mut values = rep.values.clone();
    values.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let mut t = Table::new("oracle", "Eigenvalues by modulus", &["i", "modulus", "re", "im"]);
    for (i, z) in values.iter().enumerate() {
        t.push(vec![Cell::Int(i as u64), Cell::Real(z.norm()), Cell::Real(z.re), Cell::Real(z.im)]);
    }
    let out = OracleOut {
        count: rep.count,
        moduli: rep.moduli,
        values,
    };
    Ok(render(&t, format, json(&out)))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Bounds {
            input,
            common,
            variant,
            check,
        } => {
            let p = load_poly(&input)?;
            emit(&common.out, &bounds_cmd(&p, &common, &variant, check)?)
        }
        Command::Gap {
            input,
            common,
            k,
            variant,
            check,
        } => {
            let p = load_poly(&input)?;
            emit(&common.out, &gap_cmd(&p, &common, k, variant, check)?)
        }
        Command::Square { input, reciprocal, out } => emit(&out, &square_cmd(&load_poly(&input)?, reciprocal)?),
        Command::Embed { n, coeffs, input, out } => emit(&out, &embed_cmd(n, &coeffs, &input)?),
        Command::Oracle { input, format, out } => emit(&out, &oracle_cmd(&load_poly(&input)?, format)?),
        Command::Experiment {
            example,
            norm,
            trials,
            seed,
            m,
            eta,
            n,
            per_entry_scale,
            format,
            out,
        } => {
            let mut cfg = ExperimentConfig::new(example.parse::<ExampleId>()?);
            cfg.trials = trials;
            cfg.seed = seed;
            if !norm.is_empty() {
                cfg.norm_kinds = norm.into_iter().map(NormKind::from).collect();
            }
            if !m.is_empty() {
                cfg.ms = m;
            }
            if !eta.is_empty() {
                cfg.etas = eta;
            }
            if !n.is_empty() {
                cfg.ns = n;
            }
            if per_entry_scale {
                cfg.scale_mode = ScaleMode::PerEntry;
            }
            let rep = run_experiment(&cfg)?;
            let text = match format {
                Format::Csv => rep.to_csv(),
                Format::Md => rep.to_markdown(),
                Format::Json => {
                    let mut s = rep.to_json();
                    s.push('\n');
                    s
                }
            };
            emit(&out, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pellet: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
