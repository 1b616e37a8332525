mod atlas;
mod cache;
mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Outcome;

pub const SCHEMA: &str = "lensform/1";

#[derive(Parser)]
#[command(
    name = "lensform",
    version,
    about = "Classify lens spaces L(p; a1,...,an) up to isometry, homotopy and tangential homotopy equivalence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classification and thickness report for the pair --a, --b.
    Classify(Opts),
    /// All spaces for (p, n): isometry classes, equivalence matrix, filtration.
    Atlas(Opts),
    /// Thickness report for a pair, or the θ-filtration for (p, n).
    Thickness(Opts),
    /// ρ-invariant of --a, and its difference with --b when given.
    Rho(Opts),
    /// Torsion detectors for p, and the K-group of L^{2n-1} when -n is given.
    Ktheory(Opts),
}

#[derive(Args, Clone, Debug)]
pub struct Opts {
    /// Odd prime order of the fundamental group.
    #[arg(short = 'p', long = "p")]
    pub p: u64,
    /// Number of weights (L has dimension 2n - 1).
    #[arg(short = 'n', long = "n")]
    pub n: Option<u64>,
    /// Weights of the first space, comma separated, any residues prime to p.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Option<Vec<i64>>,
    /// Weights of the second space.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Option<Vec<i64>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Recompute results with the brute-force verifiers; exit 3 on disagreement.
    #[arg(long)]
    pub oracle: bool,
    /// Lift the atlas size bounds (p <= 13, n <= 8).
    #[arg(long = "unsafe")]
    pub unbounded: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify(o) => commands::classify(o),
        Command::Atlas(o) => atlas::run(o),
        Command::Thickness(o) => commands::thickness(o),
        Command::Rho(o) => commands::rho(o),
        Command::Ktheory(o) => commands::ktheory(o),
    };
    match result {
        Ok(outcome) => {
            let format = match &cli.command {
                Command::Classify(o)
                | Command::Atlas(o)
                | Command::Thickness(o)
                | Command::Rho(o)
                | Command::Ktheory(o) => o.format,
            };
            if let Err(e) = outcome.emit(format) {
                eprintln!("lensform: cannot write output: {e}");
                return ExitCode::from(output::EXIT_USAGE);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("lensform: {e}");
            ExitCode::from(e.code())
        }
    }
}

pub type CliResult = Result<Outcome, output::Failure>;
