//! `primetree` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 domain error,
//! 3 out of range, 4 parse error, 5 I/O error.

mod commands;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "primetree",
    version,
    about = "Prime trees, Pratt certificates and the prime partial order"
)]
pub struct Cli {
    /// Sieve limit; also the listing bound for `poset`.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub limit: u64,

    /// Output format (subcommands accept a subset).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render the prime tree t(p).
    Tree { p: u64 },
    /// List the generators of every odd prime up to --limit.
    Poset,
    /// Emit a Pratt certificate for N, or verify one with --verify.
    Cert {
        n: Option<u64>,
        /// Certificate file to verify; `-` reads standard input.
        #[arg(long)]
        verify: Option<String>,
    },
    /// Sweep primes in [LO, HI] and write per-prime statistics as CSV.
    Stats {
        lo: u64,
        hi: u64,
        csv_path: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Shifted product x*y = (x-1)(y-1)+1 and its principal divisor.
    Star { x: String, y: String },
    /// Principal divisor of a positive rational.
    Div { r: String },
    /// Chebyshev psi(x), six decimals.
    Psi { x: u64 },
    /// pi(x), pi(x)ln(x)/x and psi(x)/x at each checkpoint.
    Pnt { checkpoints: Vec<u64> },
    /// Compare both bracketings of the fusion rule over prime triples.
    FusionReport {
        #[arg(long, default_value_t = 200)]
        bound: u64,
    },
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    let mut ctx = commands::Context::new(cli.limit);
    let outcome = commands::dispatch(&mut ctx, cli)?;
    match &cli.output {
        Some(path) => std::fs::write(path, &outcome.stdout)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.stdout.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
