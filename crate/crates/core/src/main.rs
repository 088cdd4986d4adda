use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use twobody_scf::cli::{self, CliError, RunFlags};

#[derive(Parser)]
#[command(
    name = "twobody-scf",
    version,
    about = "Self-consistent proton-electron eigenstates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the self-consistent solver on a TOML configuration.
    Solve {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Validate and print the resolved parameters; write nothing.
        #[arg(long)]
        dry_run: bool,
        /// Suppress per-iteration progress.
        #[arg(long)]
        quiet: bool,
    },
    /// Compare a stored run against the Coulomb spectrum.
    Compare {
        summary: PathBuf,
        #[arg(long, default_value_t = cli::DEFAULT_COMPARE_NMAX)]
        nmax: u32,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Analytic reference values.
    Oracle {
        #[command(subcommand)]
        which: Oracle,
    },
}

#[derive(Subcommand)]
enum Oracle {
    /// s-level n of hydrogen for proton mass `mass` (in electron masses).
    Coulomb {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        mass: f64,
    },
}

fn report(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> anyhow::Result<ExitCode> {
    let args = Cli::parse();
    match args.command {
        Command::Solve {
            config,
            out,
            dry_run,
            quiet,
        } => match cli::run(&config, &out, RunFlags { dry_run, quiet }) {
            Ok(outcome) => Ok(ExitCode::from(outcome.exit_code() as u8)),
            Err(e) => Ok(report(&e)),
        },
        Command::Compare { summary, nmax, csv } => match cli::compare_summary(&summary, nmax) {
            Ok(rep) => {
                if csv {
                    print!("{}", rep.to_csv());
                } else {
                    let json = serde_json::to_string_pretty(&rep).context("serializing report")?;
                    println!("{json}");
                }
                Ok(ExitCode::SUCCESS)
            }
            Err(e) => Ok(report(&e)),
        },
        Command::Oracle {
            which: Oracle::Coulomb { n, mass },
        } => match cli::coulomb_oracle(n, mass) {
            Ok(level) => {
                println!(
                    "{}",
                    serde_json::to_string(&level).context("serializing level")?
                );
                Ok(ExitCode::SUCCESS)
            }
            Err(e) => Ok(report(&e)),
        },
    }
}
