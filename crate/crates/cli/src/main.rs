//! `matgauss`: recurrences, quadrature rules, interpolation and integration
//! for matrix weights from the command line.
//!
//! Exit status: 0 on success, 1 on numerical failure, 2 on usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use matgauss::{
    apply, build_rule, convergence_scan, degree_of_precision, interpolate_general,
    lagrange_cardinals, lagrange_orthonormal, lagrange_via_v, matcore, oracle, BaseWeight,
    InterpolationProblem, Matrix, MatrixFunction, MatrixPolynomial, WeightSpec, WeightTerm,
};
use serde::Serialize;

use matgauss_cli::doc::{
    rows, Agreement, ConvergeDoc, ConvergeRow, FunctionDoc, IntegrateDoc, InterpolateDoc, Num,
    PolyDoc, PrecisionDoc, RecurrenceDoc, RuleDoc, WeightDoc,
};

const DEFAULT_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "matgauss",
    version,
    about = "Gaussian quadrature and interpolation with matrix weights"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Block three-term recurrence coefficients E_0..E_{n-1}, D_1..D_n.
    Recurrence(JobArgs),
    /// Gaussian rule of degree n: nodes, weight matrices and rootvectors.
    Rule(JobArgs),
    /// Lagrange interpolant of --F on the zeros of P_n, by all constructions.
    Interpolate(JobArgs),
    /// Rule approximation of the integral of F W G^T; --check compares with the oracle.
    Integrate(JobArgs),
    /// Degree of precision of the n-point rule up to --lmax.
    Precision(JobArgs),
    /// Spectral-norm error of rules 1..=n for F W G^T.
    Converge(JobArgs),
}

#[derive(Args)]
struct JobArgs {
    /// Built-in weight name or path to a weight document.
    #[arg(long)]
    weight: String,
    /// Degree n (at least 1).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Function document for F.
    #[arg(long = "F")]
    f: Option<PathBuf>,
    /// Function document for G (identity when omitted).
    #[arg(long = "G")]
    g: Option<PathBuf>,
    /// Highest moment checked by `precision` (default 2n).
    #[arg(long)]
    lmax: Option<usize>,
    /// Tolerance for `precision` and `integrate --check`.
    #[arg(long)]
    tol: Option<f64>,
    /// Compare `integrate` against the oracle.
    #[arg(long)]
    check: bool,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<matgauss::Error> for Failure {
    fn from(e: matgauss::Error) -> Self {
        Failure::Numerical(e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

/// Built-in weights on [−1, 1].
fn builtin_weight(name: &str) -> Option<WeightSpec> {
    let diag = |a: f64, b: f64| Matrix::from_diagonal(&matgauss::Vector::from_vec(vec![a, b]));
    let scalar = |base| {
        WeightSpec::new(
            (-1.0, 1.0),
            vec![WeightTerm {
                c: Matrix::identity(1, 1),
                base,
            }],
        )
    };
    let w = match name {
        "paper-chebyshev-mixed" => WeightSpec::new(
            (-1.0, 1.0),
            vec![
                WeightTerm {
                    c: diag(1.0, 0.0),
                    base: BaseWeight::Chebyshev1,
                },
                WeightTerm {
                    c: diag(0.0, 1.0),
                    base: BaseWeight::Chebyshev2,
                },
            ],
        ),
        "chebyshev1" => scalar(BaseWeight::Chebyshev1),
        "chebyshev2" => scalar(BaseWeight::Chebyshev2),
        "legendre" => scalar(BaseWeight::Legendre),
        _ => return None,
    };
    Some(w.expect("built-in weights are valid"))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_weight(arg: &str) -> Outcome<WeightSpec> {
    if let Some(w) = builtin_weight(arg) {
        return Ok(w);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(Failure::Usage(format!(
            "unknown weight '{arg}' (built-ins: paper-chebyshev-mixed, chebyshev1, chebyshev2, legendre)"
        )));
    }
    let doc: WeightDoc = read_json(path)?;
    doc.to_spec().map_err(Failure::Usage)
}

fn load_function(path: Option<&PathBuf>, flag: &str, p: usize) -> Outcome<Box<dyn MatrixFunction>> {
    let path =
        path.ok_or_else(|| Failure::Usage(format!("--{flag} is required for this command")))?;
    let doc: FunctionDoc = read_json(path)?;
    if doc.size() != p {
        return Err(Failure::Usage(format!(
            "--{flag} has size {}, the weight has size {p}",
            doc.size()
        )));
    }
    doc.to_function().map_err(Failure::Usage)
}

fn load_g(args: &JobArgs, p: usize) -> Outcome<Box<dyn MatrixFunction>> {
    match &args.g {
        Some(_) => load_function(args.g.as_ref(), "G", p),
        None => Ok(Box::new(MatrixPolynomial::identity(p))),
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Outcome<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Numerical(e.to_string()))?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Numerical(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn tolerance(args: &JobArgs) -> Outcome<f64> {
    let tol = args.tol.unwrap_or(DEFAULT_TOL);
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(Failure::Usage(format!("--tol must be positive, got {tol}")))
    }
}

fn run(command: Command) -> Outcome<()> {
    match command {
        Command::Recurrence(args) => {
            let w = load_weight(&args.weight)?;
            let rec = matgauss::stieltjes_recurrence(&w, args.n as usize)?;
            emit(
                &RecurrenceDoc::from_recurrence(&args.weight, &rec),
                args.out.as_ref(),
            )
        }
        Command::Rule(args) => {
            let w = load_weight(&args.weight)?;
            let (_, spec, rule) = build_rule(&w, args.n as usize)?;
            let rule = rule.with_weight_id(args.weight.as_str());
            emit(
                &RuleDoc::from_rule(&rule, spec.rootvecs()),
                args.out.as_ref(),
            )
        }
        Command::Interpolate(args) => {
            let w = load_weight(&args.weight)?;
            let f = load_function(args.f.as_ref(), "F", w.size())?;
            let (rec, spec, _) = build_rule(&w, args.n as usize)?;
            let general = interpolate_general(&InterpolationProblem::lagrange(&spec, f.as_ref())?)?;
            let values = matgauss::interp::node_values(&spec, f.as_ref());
            let via_v = lagrange_via_v(spec.pair(), &values)?;
            let mut cardinal_sum = MatrixPolynomial::zero(w.size());
            for (wi, fi) in lagrange_cardinals(spec.pair())?.iter().zip(&values) {
                cardinal_sum = &cardinal_sum + &wi.left_mul(fi);
            }
            let ortho = lagrange_orthonormal(&spec, &rec, &values)?;
            let doc = InterpolateDoc {
                weight_id: args.weight.clone(),
                n: args.n as usize,
                interpolant: PolyDoc::from_poly(&general),
                k: ortho.k.iter().map(rows).collect(),
                agreement: Agreement {
                    via_v: Num(general.max_abs_diff(&via_v)),
                    cardinals: Num(general.max_abs_diff(&cardinal_sum)),
                    orthonormal: Num(general.max_abs_diff(&ortho.interpolant)),
                },
            };
            emit(&doc, args.out.as_ref())
        }
        Command::Integrate(args) => {
            let w = load_weight(&args.weight)?;
            let p = w.size();
            let f = load_function(args.f.as_ref(), "F", p)?;
            let g = load_g(&args, p)?;
            let tol = tolerance(&args)?;
            let (_, _, rule) = build_rule(&w, args.n as usize)?;
            let result = apply(&rule, f.as_ref(), g.as_ref())?;
            let mut doc = IntegrateDoc {
                weight_id: args.weight.clone(),
                n: args.n as usize,
                result: rows(&result),
                oracle: None,
                oracle_diff: None,
            };
            let mut failed = None;
            if args.check {
                let (a, b) = w.interval();
                let integrand = |x: f64| f.eval(x) * w.eval(x) * g.eval(x).transpose();
                let reference = oracle::integrate_matrix(
                    &oracle::IntegrandSpec {
                        a,
                        b,
                        tags: w.endpoint_tags(),
                        integrand: &integrand,
                        symmetric: false,
                    },
                    &oracle::OracleOptions::default(),
                )?;
                let diff = matcore::spectral_norm(&(&result - &reference));
                let bound = tol * matcore::spectral_norm(&reference).max(1.0);
                if diff > bound {
                    failed = Some(format!(
                        "rule and oracle differ by {diff:.3e} (bound {bound:.3e})"
                    ));
                }
                doc.oracle = Some(rows(&reference));
                doc.oracle_diff = Some(Num(diff));
            }
            emit(&doc, args.out.as_ref())?;
            failed.map_or(Ok(()), |m| Err(Failure::Numerical(m)))
        }
        Command::Precision(args) => {
            let w = load_weight(&args.weight)?;
            let n = args.n as usize;
            let tol = tolerance(&args)?;
            let lmax = args.lmax.unwrap_or(2 * n);
            if lmax < 2 * n {
                return Err(Failure::Usage(format!(
                    "--lmax must be at least 2n = {}",
                    2 * n
                )));
            }
            let (_, _, rule) = build_rule(&w, n)?;
            let report = degree_of_precision(&rule, &w, lmax, tol)?;
            let doc = PrecisionDoc {
                weight_id: args.weight.clone(),
                n,
                tol: Num(tol),
                degree: report.degree,
                residuals: report.residuals.iter().map(|&r| Num(r)).collect(),
                next_residual: report.next_residual().map(Num),
            };
            emit(&doc, args.out.as_ref())
        }
        Command::Converge(args) => {
            let w = load_weight(&args.weight)?;
            let p = w.size();
            let f = load_function(args.f.as_ref(), "F", p)?;
            let g = load_g(&args, p)?;
            let ns: Vec<usize> = (1..=args.n as usize).collect();
            let table = convergence_scan(&w, f.as_ref(), g.as_ref(), &ns)?;
            let doc = ConvergeDoc {
                weight_id: args.weight.clone(),
                rows: table
                    .into_iter()
                    .map(|(n, e)| ConvergeRow { n, error: Num(e) })
                    .collect(),
            };
            emit(&doc, args.out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(1)
        }
    }
}
