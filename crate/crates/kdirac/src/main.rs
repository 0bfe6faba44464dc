//! Command-line driver for the verification campaigns.

use clap::{Args, Parser, Subcommand, ValueEnum};
use kdirac::report::Report;
use kdirac::sequences::Edition;
use kdirac::verify::{
    run_casimir, run_klimyk, run_splitting, verify_complex, verify_symbol_exactness,
};
use kdirac::weights::Weight;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "kdirac",
    version,
    about = "Exact-arithmetic verifier for k-Dirac operator sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification campaigns over random sections or covectors
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Print the five Casimir eigenvalue offsets for a weight
    Casimir(CasimirArgs),
    /// Print a tensor-product branching multiplicity
    Klimyk(KlimykArgs),
    /// Check the factor-product derivation of the second k = 2 operator
    Splitting(SplittingArgs),
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Apply consecutive operator compositions to random sections
    Complex(ComplexArgs),
    /// Check symbol products and exact rank profiles at random covectors
    Symbol(SymbolArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Tables {
    /// The operator tables exactly as transcribed
    Given,
    /// The tables with the three single-index corrections
    Amended,
}

impl From<Tables> for Edition {
    fn from(t: Tables) -> Edition {
        match t {
            Tables::Given => Edition::Given,
            Tables::Amended => Edition::Amended,
        }
    }
}

#[derive(Args)]
struct ComplexArgs {
    /// Number of Dirac directions (2 or 3)
    #[arg(long, default_value_t = 2)]
    k: u16,
    /// Euclidean dimension (even, at least 2k); defaults to 2k
    #[arg(long)]
    n: Option<u16>,
    /// Degree of the random polynomial sections
    #[arg(long, default_value_t = 3)]
    degree: u32,
    /// Number of random sections per composition
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Which edition of the operator tables to verify
    #[arg(long, value_enum, default_value_t = Tables::Given)]
    tables: Tables,
    /// Write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SymbolArgs {
    /// Number of Dirac directions (2 or 3)
    #[arg(long, default_value_t = 2)]
    k: u16,
    /// Euclidean dimension (even, at least 2k); defaults to 2k
    #[arg(long)]
    n: Option<u16>,
    /// Number of random covectors
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Which edition of the operator tables to verify
    #[arg(long, value_enum, default_value_t = Tables::Given)]
    tables: Tables,
    /// Write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CasimirArgs {
    #[arg(long, default_value_t = 2)]
    k: u16,
    /// Euclidean dimension; defaults to 2k
    #[arg(long)]
    n: Option<u16>,
    /// Weight entries, comma separated rationals, e.g. "5/2,3/2"
    #[arg(long)]
    lambda: String,
    #[arg(long, default_value_t = 1)]
    i: usize,
    #[arg(long, default_value_t = 2)]
    j: usize,
    /// Write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct KlimykArgs {
    #[arg(long, default_value_t = 2)]
    k: u16,
    /// Weight entries, comma separated, e.g. "3,1"
    #[arg(long)]
    lambda: String,
    #[arg(long, default_value_t = 1)]
    i: usize,
    #[arg(long, default_value_t = 2)]
    j: usize,
    /// Write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SplittingArgs {
    /// Euclidean dimension (even, at least 4)
    #[arg(long, default_value_t = 4)]
    n: u16,
    /// Degree of the random bottom sections
    #[arg(long, default_value_t = 2)]
    degree: u32,
    /// Number of random sections
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

fn usage_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn emit(report: &Report, json: Option<&PathBuf>) -> ExitCode {
    print!("{}", report.human_table());
    if let Some(path) = json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            return usage_error(format!("cannot write {}: {e}", path.display()));
        }
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(VerifyCommand::Complex(a)) => {
            if a.trials == 0 {
                return usage_error("--trials must be at least 1");
            }
            let n = a.n.unwrap_or(2 * a.k);
            match verify_complex(a.k, n, a.degree, a.trials, a.seed, a.tables.into()) {
                Ok(report) => emit(&report, a.json.as_ref()),
                Err(e) => usage_error(e),
            }
        }
        Command::Verify(VerifyCommand::Symbol(a)) => {
            if a.samples == 0 {
                return usage_error("--samples must be at least 1");
            }
            let n = a.n.unwrap_or(2 * a.k);
            match verify_symbol_exactness(a.k, n, a.samples, a.seed, a.tables.into()) {
                Ok(report) => emit(&report, a.json.as_ref()),
                Err(e) => usage_error(e),
            }
        }
        Command::Casimir(a) => {
            let n = a.n.unwrap_or(2 * a.k);
            let lambda = match Weight::parse(&a.lambda) {
                Ok(w) => w,
                Err(e) => return usage_error(e),
            };
            match run_casimir(&lambda, n, a.k, a.i, a.j) {
                Ok(report) => emit(&report, a.json.as_ref()),
                Err(e) => usage_error(e),
            }
        }
        Command::Klimyk(a) => {
            let lambda = match Weight::parse(&a.lambda) {
                Ok(w) => w,
                Err(e) => return usage_error(e),
            };
            match run_klimyk(&lambda, a.k, a.i, a.j) {
                Ok(report) => emit(&report, a.json.as_ref()),
                Err(e) => usage_error(e),
            }
        }
        Command::Splitting(a) => {
            if a.trials == 0 {
                return usage_error("--trials must be at least 1");
            }
            match run_splitting(a.n, a.degree, a.trials, a.seed) {
                Ok(report) => emit(&report, a.json.as_ref()),
                Err(e) => usage_error(e),
            }
        }
    }
}
