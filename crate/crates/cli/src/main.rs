use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use orbitlab_cli::{run, table_phi0, RunConfig};

/// Exact verification suites for p-adic orbital integrals, root-system
/// truncation combinatorics, weight families, and scissors invariants.
#[derive(Parser)]
#[command(name = "orbitlab", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and emit a report.
    Verify {
        /// Suites to run: phi0, weighted, fourier, invariant, langlands,
        /// gammaprime, weights, descent, scissors, weyl, trace, or the
        /// selectors `all` and `orbital`.
        #[arg(required = true)]
        suites: Vec<String>,
        /// Odd prime to sweep; repeat for several (default: 3 and 5).
        #[arg(long = "p", value_name = "P")]
        primes: Vec<u64>,
        /// Truncation depth for the bounded suites.
        #[arg(long, default_value_t = 3)]
        level: i64,
        /// Largest GL(n) rank for the combinatorial sweeps (2..=4).
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Seed for the sampled grids.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; defaults to ORBITLAB_OUT_DIR/report.<ext> when the
        /// variable is set, and to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report format.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Emit reference tables.
    Table {
        #[command(subcommand)]
        table: TableCmd,
    },
}

#[derive(Subcommand)]
enum TableCmd {
    /// The basic orbital integral over eta representatives, closed form
    /// against brute force.
    Phi0 {
        /// Odd prime.
        #[arg(long)]
        p: u64,
        /// Smallest valuation of eta.
        #[arg(long)]
        val_min: i64,
        /// Largest valuation of eta.
        #[arg(long)]
        val_max: i64,
        /// Output file; defaults to ORBITLAB_OUT_DIR/phi0.csv when the
        /// variable is set, and to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Verify {
            suites,
            primes,
            level,
            n,
            seed,
            out,
            format,
        } => {
            let cfg = RunConfig {
                suites,
                primes: if primes.is_empty() { vec![3, 5] } else { primes },
                level,
                n,
                seed,
            };
            let report = match run(&cfg) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("config error — {e}");
                    return ExitCode::from(2);
                }
            };
            for line in report.suite_lines() {
                eprintln!("{line}");
            }
            let (body, name) = match format {
                Format::Json => (report.to_json(), "report.json"),
                Format::Csv => (report.to_csv(), "report.csv"),
            };
            if let Err(e) = emit(&body, out, name) {
                eprintln!("write error — {e}");
                return ExitCode::from(2);
            }
            if report.passed() {
                eprintln!("PASS");
                ExitCode::SUCCESS
            } else {
                eprintln!("FAIL");
                ExitCode::from(1)
            }
        }
        Cmd::Table {
            table: TableCmd::Phi0 { p, val_min, val_max, out },
        } => match table_phi0(p, val_min, val_max) {
            Ok(csv) => {
                if let Err(e) = emit(&csv, out, "phi0.csv") {
                    eprintln!("write error — {e}");
                    return ExitCode::from(2);
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("config error — {e}");
                ExitCode::from(2)
            }
        },
    }
}

/// Write to `out` when given; otherwise to `$ORBITLAB_OUT_DIR/<name>` when
/// the variable is set; otherwise to stdout. `-` forces stdout.
fn emit(body: &str, out: Option<PathBuf>, name: &str) -> std::io::Result<()> {
    let target = out.or_else(|| {
        std::env::var_os("ORBITLAB_OUT_DIR").map(|d| PathBuf::from(d).join(name))
    });
    match target {
        Some(path) if path != PathBuf::from("-") => {
            fs::write(&path, body)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        _ => std::io::stdout().write_all(body.as_bytes()),
    }
}
