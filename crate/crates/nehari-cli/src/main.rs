//! Command-line front end.
//!
//! Every subcommand prints one canonical JSON report to stdout (and to
//! `--output` when given). Exit code 0 means the run was internally
//! consistent; theorem-level audit failures live inside the report and do
//! not affect the exit code. Exit code 1 flags an internal inconsistency or
//! a failed construction, 2 an invalid input or usage error.

use std::env;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nehari_core::error::{Error, Result};
use nehari_core::report::{self, RunConfiguration, Tolerances};
use nehari_core::symalg::{io, LaurentMatrix, LaurentPoly, MatrixSymbol};
use nehari_core::{index, suite, superopt, tol};

#[derive(Parser)]
#[command(name = "nehari", version, about = "Meromorphic approximation and Toeplitz index audits on the unit circle")]
struct Cli {
    /// Circle grid size, a power of two at least 64. Falls back to the
    /// NEHARI_GRID environment variable, then to 4096.
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Also write the report to this path.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hankel spectrum of a symbol: singular values, multiplicities, rank.
    Analyze { phi: PathBuf },

    /// Scalar solve at level k, with the index report on the error symbol.
    Aak {
        phi: PathBuf,
        #[arg(long)]
        k: usize,
    },

    /// Verify a candidate approximant and emit its certificate.
    VerifySuperopt {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        k: usize,
    },

    /// Construct the superoptimal approximant of a 2x2 symbol.
    #[command(name = "superopt-2x2")]
    Superopt2x2 {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        k: usize,
    },

    /// Full index audit for a symbol/candidate pair.
    IndexAudit {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        k: usize,
    },

    /// Run a built-in example end to end and print its audit.
    Example { name: String },

    /// Randomized scalar suite over seeded Laurent polynomials.
    ScalarSuite {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

// Inconsistencies and failed constructions are the tool's fault (1); every
// other error describes the input or the requested problem (2).
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InternalInconsistency(_) | Error::ConstructionFailure(_) | Error::ResolutionFailure(_) => 1,
        _ => 2,
    }
}

fn resolve_grid(flag: Option<usize>) -> Result<usize> {
    if let Some(g) = flag {
        return Ok(g);
    }
    match env::var("NEHARI_GRID") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("NEHARI_GRID is not a grid size: {s:?}"))),
        Err(_) => Ok(tol::GRID_DEFAULT),
    }
}

fn read_symbol(path: &PathBuf) -> Result<LaurentMatrix> {
    io::read_symbol(path)
}

fn scalar_entry(sym: &LaurentMatrix) -> Result<LaurentPoly> {
    if sym.rows() != 1 || sym.cols() != 1 {
        return Err(Error::invalid(format!(
            "scalar solve needs a 1x1 symbol, got {}x{}",
            sym.rows(),
            sym.cols()
        )));
    }
    Ok(sym.entry(0, 0))
}

fn run(cli: &Cli) -> Result<()> {
    let grid = resolve_grid(cli.grid)?;
    let config = RunConfiguration {
        grid_size: grid,
        tolerances: Tolerances::default(),
        seed: cli.seed,
        output: cli.output.as_ref().map(|p| p.display().to_string()),
    };
    config.validate()?;

    let text = match &cli.command {
        Command::Analyze { phi } => {
            let sym = read_symbol(phi)?;
            report::render("analyze", &config, &report::analyze(&sym)?)
        }
        Command::Aak { phi, k } => {
            let sym = read_symbol(phi)?;
            let phi = scalar_entry(&sym)?;
            report::render("scalar-aak", &config, &report::scalar_aak(&phi, *k, grid)?)
        }
        Command::VerifySuperopt { phi, q, k } => {
            let phi = read_symbol(phi)?;
            let q = MatrixSymbol::from(read_symbol(q)?);
            let cert = superopt::verify_candidate(&phi, &q, *k, grid)?;
            report::render("superopt-certificate", &config, &cert)
        }
        Command::Superopt2x2 { phi, k } => {
            let phi = read_symbol(phi)?;
            let c = superopt::py_construct_2x2(&phi, *k, grid)?;
            report::render("construction", &config, &report::construction_report(&c, grid)?)
        }
        Command::IndexAudit { phi, q, k } => {
            let phi = read_symbol(phi)?;
            let q = MatrixSymbol::from(read_symbol(q)?);
            let audit = index::index_audit(&phi, &q, *k, grid)?;
            report::render("index-audit", &config, &audit)
        }
        Command::Example { name } => {
            if name != "nehari-takagi-2x2" {
                return Err(Error::invalid(format!(
                    "unknown example {name:?}; available: nehari-takagi-2x2"
                )));
            }
            report::render("example", &config, &report::example_report(grid)?)
        }
        Command::ScalarSuite { count, max_degree } => {
            let sweep = suite::scalar_suite(*count, cli.seed, *max_degree, grid)?;
            report::render("scalar-suite", &config, &sweep)
        }
    };

    print!("{text}");
    if let Some(path) = &cli.output {
        fs::write(path, &text)
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
