//! `rsalg`: command-line front end for the restricted semigroup toolkit.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "rsalg",
    version,
    about = "Restricted harmonic analysis on finite inverse semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the inverse semigroup axioms.
    Check(Common),
    /// Write the restricted semigroup, the associated groupoid or the
    /// regular representations to files.
    Construct {
        #[command(flatten)]
        common: Common,
        /// Comma-separated subset of sr, sa, lambda, rho.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        emit: Vec<Emit>,
    },
    /// Compute the restricted C*-norm of a function or the dual norm of a
    /// functional.
    Norm {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        function: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Run the full property suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = rsalg_core::analysis::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Builtin corpus member (`all` selects the whole corpus for `verify`).
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    builtin: Option<String>,
    /// Semigroup document.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Base tolerance for positivity and residual tests.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output file (a directory for `construct`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Structured,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Emit {
    Sr,
    Sa,
    Lambda,
    Rho,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Which {
    #[value(name = "sigma_r")]
    SigmaR,
    B,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(common) => commands::check(&common),
        Command::Construct { common, emit } => commands::construct(&common, &emit),
        Command::Norm {
            common,
            function,
            which,
        } => commands::norm(&common, &function, which),
        Command::Verify { common, seed } => commands::verify(&common, seed),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}
