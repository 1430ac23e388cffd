use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isofractal::incidence::{incidence_matrix, phi_matrix, triangle_row_order};
use isofractal::plucker::decompose;
use isofractal::variety::{expected_count, oracle_points, rational_points, Mode, DEFAULT_BUDGET};
use isofractal::{fractal_matrix, plucker_matrix, BinaryMatrix, Error, Format};
use serde::Serialize;

mod suites;

const BUDGET_VAR: &str = "ISOFRACTAL_BUDGET";

#[derive(Parser)]
#[command(name = "isofractal", version, about = "Fractal matrices and the isotropic Grassmannian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the fractal matrix A_k^l.
    Fractal {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        output: MatrixOutput,
    },
    /// Emit the incidence matrix of the pair-set configuration.
    Incidence {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Rows in triangle order (requires n = k, even, >= 8).
        #[arg(long)]
        triangle: bool,
        #[command(flatten)]
        output: MatrixOutput,
    },
    /// Emit the Plücker matrix B_f.
    Plucker {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Write the contraction signs (MatrixMarket only).
        #[arg(long)]
        signed: bool,
        #[command(flatten)]
        output: MatrixOutput,
    },
    /// Write the block decomposition of B_f as JSON.
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate rational points; the JSON summary goes to stdout.
    Points {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, conflicts_with = "unsigned")]
        signed: bool,
        /// Use the coefficient-free linear system.
        #[arg(long)]
        unsigned: bool,
        /// Enumerate subspaces directly instead of the kernel.
        #[arg(long, conflicts_with_all = ["signed", "unsigned"])]
        oracle: bool,
        #[arg(long, value_parser = positive_budget)]
        budget: Option<u128>,
        /// File for the points, one per line.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for the randomized contraction checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct MatrixOutput {
    #[arg(long, default_value = "matrixmarket", value_parser = parse_format)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Fractal,
    Incidence,
    Plucker,
    Points,
    All,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn positive_budget(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(b) => Ok(b),
        Err(e) => Err(e.to_string()),
    }
}

enum Failure {
    Usage(String),
    Verification(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Writes `data` to `path` through a temporary file in the same directory,
/// or to stdout when no path is given.
fn emit(path: Option<&Path>, data: &str) -> Result<(), Failure> {
    let Some(path) = path else {
        std::io::stdout().write_all(data.as_bytes())?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(data.as_bytes())?;
    tmp.persist(path).map_err(|e| Failure::Io(e.to_string()))?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn emit_matrix(m: &BinaryMatrix, output: &MatrixOutput) -> Result<(), Failure> {
    emit(output.out.as_deref(), &m.serialize(output.format))
}

fn budget_from_env() -> Result<u128, Failure> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => positive_budget(&v).map_err(|e| Failure::Usage(format!("{BUDGET_VAR}: {e}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

#[derive(Serialize)]
struct PointsSummary {
    n: usize,
    k: usize,
    q: u64,
    count: usize,
    expected: serde_json::Value,
    #[serde(rename = "match")]
    matches: bool,
    mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    kernel_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    examined: Option<u128>,
    elapsed: f64,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Fractal { k, ell, output } => emit_matrix(&*fractal_matrix(k, ell)?, &output),
        Command::Incidence { n, k, triangle, output } => {
            let m = if triangle {
                if n != k {
                    return Err(Failure::Usage("--triangle requires --n equal to --k".into()));
                }
                phi_matrix(n, &triangle_row_order(n)?)?
            } else {
                incidence_matrix(n, k)?
            };
            emit_matrix(&m, &output)
        }
        Command::Plucker { n, k, signed, output } => {
            let b = plucker_matrix(n, k, signed)?;
            if signed {
                if output.format != Format::MatrixMarket {
                    return Err(Failure::Usage(
                        "--signed needs --format matrixmarket; other formats hold only the support"
                            .into(),
                    ));
                }
                emit(output.out.as_deref(), &b.to_matrix_market())
            } else {
                emit_matrix(&b.support, &output)
            }
        }
        Command::Decompose { n, k, out } => {
            let d = decompose(n, k)?;
            emit(out.as_deref(), &to_json(&d))?;
            if d.passed() {
                Ok(())
            } else {
                Err(Failure::Verification("decomposition is inconsistent".into()))
            }
        }
        Command::Points { n, k, q, signed: _, unsigned, oracle, budget, out } => {
            let budget = match budget {
                Some(b) => b,
                None => budget_from_env()?,
            };
            let start = Instant::now();
            let expected = expected_count(n, k, q)?;
            let (set, mode) = if oracle {
                (oracle_points(n, k, q, budget)?, "oracle".to_string())
            } else {
                let mode = if unsigned { Mode::Unsigned } else { Mode::Signed };
                (rational_points(n, k, q, mode, budget)?, mode.to_string())
            };
            let elapsed = start.elapsed().as_secs_f64();
            if let Some(path) = out.as_deref() {
                emit(Some(path), &set.to_text())?;
            }
            let matches = expected == set.len().into();
            let summary = PointsSummary {
                n,
                k,
                q,
                count: set.len(),
                expected: match u64::try_from(&expected) {
                    Ok(v) => v.into(),
                    Err(_) => expected.to_string().into(),
                },
                matches,
                mode,
                kernel_dim: set.enumeration.as_ref().map(|e| e.kernel_dim),
                examined: set.enumeration.as_ref().map(|e| e.examined),
                elapsed,
            };
            emit(None, &serde_json::to_string(&summary).expect("serializable"))?;
            println!();
            if matches {
                Ok(())
            } else {
                Err(Failure::Verification(format!(
                    "found {} points, formula gives {expected}",
                    set.len()
                )))
            }
        }
        Command::Verify { suite, out, seed } => {
            let report = suites::run(suite, seed)?;
            emit(out.as_deref(), &to_json(&report))?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verification(format!("{} checks failed", report.failed)))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("isofractal: verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("isofractal: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("isofractal: {msg}");
            ExitCode::from(2)
        }
    }
}
