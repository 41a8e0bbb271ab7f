//! `schlicht-u`: membership verdicts, figure data, radius and bound values,
//! fuzz runs and report aggregation for the class U(lambda).

use std::f64::consts::TAU;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use schlicht::bounds::{self, TailMode};
use schlicht::catalog;
use schlicht::lab::{self, FuzzConfig, RecordDigest, RunSummary};
use schlicht::limacon::{target_curve_point, Limacon};
use schlicht::membership::{verdict, VerdictStatus};
use schlicht::series::DEFAULT_ORDER;
use schlicht::spec_file::FunctionSpecFile;
use schlicht::{ClassParameter, Error};

const EXIT_ERROR: u8 = 1;
const EXIT_NOT_MEMBER: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_THEOREM_FAILURE: u8 = 4;

/// Default limacon parameters `(lambda, l)`.
const LIMACON_PAIRS: [(f64, f64); 6] = [(0.25, 0.75), (0.25, 1.25), (0.5, 0.5), (0.5, 1.0), (0.75, 0.25), (0.75, 1.75)];
const TARGET_LAMBDAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
const DEFAULT_ROWS: usize = 2048;

#[derive(Parser)]
#[command(name = "schlicht-u", version, about = "Numerics for the univalent class U(lambda)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership of a function in U(lambda).
    Verify {
        /// Function spec JSON file, or `-` for stdin.
        spec: Option<PathBuf>,
        /// Use a catalog function instead of a spec file.
        #[arg(long, conflicts_with = "spec")]
        builtin: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        /// List catalog names and exit.
        #[arg(long)]
        list: bool,
    },
    /// Write limacon curve data as CSV.
    Figures {
        #[arg(value_enum)]
        kind: FigureKind,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Emit a single curve; `limacon` also needs `--l`.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        l: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_ROWS)]
        rows: usize,
    },
    /// Solve for the radius r0.
    Radius {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        bracket: Option<Vec<f64>>,
    },
    /// Print the scalar bounds with their residuals.
    Bounds {
        /// Also list `sum_{k<n} lambda^k` for n = 2..=8.
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Sample members, run the theorem suite and write JSONL.
    Fuzz {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Repeatable.
        #[arg(long = "lambda", default_values_t = [1.0])]
        lambdas: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long, default_value_t = 8)]
        coefficients: usize,
        #[arg(long)]
        no_extremals: bool,
        #[arg(long, default_value = "fuzz.jsonl")]
        out: PathBuf,
        /// Summary JSON; defaults to the JSONL path with `.summary.json`.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Aggregate one or more fuzz JSONL files.
    Report {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureKind {
    /// `l e^{ia} + lambda e^{2ia}`.
    Limacon,
    /// `1 + (1+lambda) e^{ia} + lambda e^{2ia}`.
    Limacon2,
}

#[derive(Serialize)]
struct Quantity {
    name: String,
    value: f64,
    residual: f64,
    tolerance: f64,
}

impl Quantity {
    fn new(name: impl Into<String>, value: f64, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, residual, tolerance }
    }
}

#[derive(Serialize)]
struct FuzzOutput<'a> {
    records: &'a Path,
    summary: RunSummary,
    /// Per lambda, the largest `|a_n| / sum_{k<n} lambda^k` for n = 2..=K.
    conjecture_max_ratio: std::collections::BTreeMap<String, Vec<f64>>,
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn read_spec(path: &Path) -> Result<String, Error> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        File::open(path)?.read_to_string(&mut text)?;
    }
    Ok(text)
}

fn verify(spec: Option<PathBuf>, builtin: Option<String>, lambda: f64, order: usize, list: bool) -> Result<u8, Error> {
    if list {
        print_json(&catalog::names())?;
        return Ok(0);
    }
    let lambda = ClassParameter::new(lambda)?;
    let spec = match (spec, builtin) {
        (_, Some(name)) => FunctionSpecFile::builtin(&name),
        (Some(path), None) => FunctionSpecFile::from_json(&read_spec(&path)?)?,
        (None, None) => return Err(Error::InvalidMap("give a spec file or --builtin".into())),
    };
    let f = match spec.build(order) {
        Ok(f) => f,
        Err(Error::NonvanishingViolated { zero_count, radius }) => {
            print_json(&VerdictStatus::NonvanishingViolated { zero_count, radius })?;
            return Ok(EXIT_NOT_MEMBER);
        }
        Err(e) => return Err(e),
    };
    let v = verdict(&f, lambda);
    print_json(&v)?;
    Ok(match v.status {
        VerdictStatus::CertifiedMember | VerdictStatus::SampledMember { .. } => 0,
        VerdictStatus::Refuted { .. } | VerdictStatus::NonvanishingViolated { .. } => EXIT_NOT_MEMBER,
        VerdictStatus::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn write_curve(path: &Path, rows: usize, point: impl Fn(f64) -> (f64, f64)) -> Result<(), Error> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "alpha,x,y")?;
    for k in 0..rows {
        let alpha = TAU * k as f64 / rows as f64;
        let (x, y) = point(alpha);
        writeln!(out, "{alpha:.16e},{x:.16e},{y:.16e}")?;
    }
    out.flush()?;
    Ok(())
}

fn figures(kind: FigureKind, out: &Path, lambda: Option<f64>, l: Option<f64>, rows: usize) -> Result<u8, Error> {
    if rows == 0 {
        return Err(Error::ParameterOutOfRange("rows must be at least 1".into()));
    }
    std::fs::create_dir_all(out)?;
    let mut written = Vec::new();
    match kind {
        FigureKind::Limacon => {
            let pairs = match (lambda, l) {
                (Some(lambda), Some(l)) => vec![(lambda, l)],
                (None, None) => LIMACON_PAIRS.to_vec(),
                _ => return Err(Error::ParameterOutOfRange("--lambda and --l go together".into())),
            };
            for (lambda, l) in pairs {
                let curve = Limacon::new(lambda, l, 0.0)?;
                let path = out.join(format!("limacon_lambda{lambda}_l{l}.csv"));
                write_curve(&path, rows, |a| curve.parametric_point(a))?;
                written.push(path);
            }
        }
        FigureKind::Limacon2 => {
            let lambdas = match lambda {
                Some(lambda) => vec![ClassParameter::new(lambda)?.value()],
                None => TARGET_LAMBDAS.to_vec(),
            };
            for lambda in lambdas {
                let path = out.join(format!("limacon2_lambda{lambda}.csv"));
                write_curve(&path, rows, |a| target_curve_point(lambda, a))?;
                written.push(path);
            }
        }
    }
    print_json(&written)?;
    Ok(0)
}

fn radius(tol: f64, bracket: Option<Vec<f64>>) -> Result<u8, Error> {
    let (lo, hi) = match bracket.as_deref() {
        Some(&[lo, hi]) => (lo, hi),
        _ => bounds::RADIUS_BRACKET,
    };
    let r0 = match bounds::solve_radius_in(lo, hi, tol) {
        Ok(r0) => r0,
        Err(e @ Error::BracketFailure { .. }) => {
            eprintln!("error: {e}");
            return Ok(EXIT_NOT_MEMBER);
        }
        Err(e) => return Err(e),
    };
    print_json(&Quantity::new("r0", r0, bounds::radius_lhs(r0), tol))?;
    Ok(0)
}

fn bound_values(lambda: Option<f64>) -> Result<Vec<Quantity>, Error> {
    let r0 = bounds::solve_radius(1e-12)?;
    let tail = bounds::tail_sum(0.5, TailMode::ClosedForm)?;
    let tail_partial = bounds::tail_sum(0.5, TailMode::Partial(2000))?;
    let abc = bounds::abc_check(1e-4)?;
    let g1 = catalog::g1_limit_at_i();
    let mut q = vec![
        Quantity::new("r0", r0, bounds::radius_lhs(r0), 1e-9),
        Quantity::new("tail_sum_r0.5", tail, tail - tail_partial, 1e-10),
        Quantity::new("marx_alpha_0", bounds::marx_alpha(0.0)?, bounds::marx_alpha(0.0)? - 2.0 / 3.0, 1e-12),
        Quantity::new("marx_alpha_2", bounds::marx_alpha(2.0)?, bounds::marx_alpha(2.0)? - 0.5, 1e-12),
        Quantity::new("abc_min_a", abc.min_a, abc.min_a.min(0.0), 1e-12),
        Quantity::new("abc_min_b", abc.min_b, abc.min_b.min(0.0), 1e-12),
        Quantity::new("abc_min_c", abc.min_c, abc.min_c.min(0.0), 1e-12),
        Quantity::new("sqrt_counterexample_limit_at_i", g1, g1 - (5.0 * 6f64.sqrt() - 3.0) / 3.0, 1e-6),
    ];
    if let Some(lambda) = lambda {
        let lambda = ClassParameter::new(lambda)?.value();
        let theta = bounds::extremal_theta_bound(1.0 + lambda, lambda)?;
        q.push(Quantity::new("extremal_theta_bound", theta.value, theta.value + 1.0, 1e-12));
        for n in 2..=8 {
            q.push(Quantity::new(format!("coefficient_bound_{n}"), bounds::conjecture_bound(n, lambda), 0.0, 0.0));
        }
    }
    Ok(q)
}

#[allow(clippy::too_many_arguments)]
fn fuzz(
    seed: u64,
    count: usize,
    lambdas: Vec<f64>,
    order: usize,
    coefficients: usize,
    no_extremals: bool,
    out: &Path,
    summary: Option<PathBuf>,
) -> Result<u8, Error> {
    let config = FuzzConfig {
        seed,
        count,
        lambda_set: lambdas,
        order,
        coefficients,
        include_extremals: !no_extremals,
        ..FuzzConfig::default()
    };
    config.validate()?;
    let records = lab::run(&config)?;
    let summary_path = summary.unwrap_or_else(|| out.with_extension("summary.json"));
    let output = FuzzOutput {
        records: out,
        summary: lab::persist_run(&records, out, Some(seed))?,
        conjecture_max_ratio: lab::conjecture_report(&records, coefficients).max_ratio,
    };
    write_json(&summary_path, &output)?;
    print_json(&output)?;
    Ok(if output.summary.theorem_failures > 0 { EXIT_THEOREM_FAILURE } else { 0 })
}

fn report(inputs: &[PathBuf], out: Option<PathBuf>) -> Result<u8, Error> {
    let mut digests = Vec::new();
    for path in inputs {
        let mut text = String::new();
        File::open(path)?.read_to_string(&mut text)?;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            digests.push(RecordDigest::from_json_line(line)?);
        }
    }
    let seeds: Vec<_> = digests.iter().map(|d| d.sample_seed ^ d.index as u64).collect();
    let seed = seeds.first().copied().filter(|s| seeds.iter().all(|t| t == s));
    let summary = lab::summarize_digests(&digests, seed);
    if let Some(path) = out {
        write_json(&path, &summary)?;
    }
    print_json(&summary)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { spec, builtin, lambda, order, list } => verify(spec, builtin, lambda, order, list),
        Command::Figures { kind, out, lambda, l, rows } => figures(kind, &out, lambda, l, rows),
        Command::Radius { tol, bracket } => radius(tol, bracket),
        Command::Bounds { lambda } => bound_values(lambda).and_then(|q| print_json(&q)).map(|_| 0),
        Command::Fuzz { seed, count, lambdas, order, coefficients, no_extremals, out, summary } => {
            fuzz(seed, count, lambdas, order, coefficients, no_extremals, &out, summary)
        }
        Command::Report { inputs, out } => report(&inputs, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
