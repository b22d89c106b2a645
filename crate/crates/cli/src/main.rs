//! `nilmult`: Lie-central invariants of Leibniz algebras from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod input;
mod output;

use output::Format;

#[derive(Parser)]
#[command(name = "nilmult", version)]
#[command(
    about = "Lie-central series, Schur Lie-multipliers, stem covers and capability of Leibniz algebras"
)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Global {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Skip the Leibniz identity check when loading algebra files
    #[arg(long, global = true)]
    pub no_check: bool,

    /// Largest free truncation dimension to materialize
    #[arg(long, default_value_t = nilmult_core::free::DEFAULT_DIM_CAP, global = true)]
    pub max_dim: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Minimal,
    Full,
}

impl From<ModeArg> for nilmult_core::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Minimal => nilmult_core::Mode::Minimal,
            ModeArg::Full => nilmult_core::Mode::Full,
        }
    }
}

#[derive(Subcommand)]
pub enum Command {
    /// Check the Leibniz identity and report basic invariants
    Check { alg: String },
    /// Lower Lie-central series, optionally relative to an ideal, or the upper series
    Series {
        alg: String,
        /// JSON list of vectors generating the ideal to start from
        #[arg(long)]
        relative: Option<PathBuf>,
        /// Upper Lie-central series instead
        #[arg(long, conflicts_with = "relative")]
        upper: bool,
    },
    /// Lie-center
    Center { alg: String },
    /// Span of all squares [x,x]
    Ann { alg: String },
    /// Quotient by the span of all squares
    Liezation { alg: String },
    /// Dimension of the c-nilpotent Schur Lie-multiplier
    Multiplier {
        alg: String,
        #[arg(short)]
        c: usize,
        /// Evaluate at a single truncation level
        #[arg(long, conflicts_with = "auto")]
        level: Option<usize>,
        /// Sweep levels until two consecutive ones agree (default)
        #[arg(long)]
        auto: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Minimal)]
        mode: ModeArg,
    },
    /// Dimension of the Baer invariant gamma*_{c+1}
    Gammastar {
        alg: String,
        #[arg(short)]
        c: usize,
    },
    /// The c-Lie-characteristic ideal Z*
    Zstar {
        alg: String,
        #[arg(short)]
        c: usize,
    },
    /// Decide c-Lie-capability by two independent routes
    Capable {
        alg: String,
        #[arg(short)]
        c: usize,
    },
    /// Classify the extension given by a surjection G -> Q
    Extcheck {
        total: String,
        base: String,
        /// JSON matrix whose columns are the images of the basis of G
        map: PathBuf,
        #[arg(short)]
        c: usize,
    },
    /// Construct a c-Lie-stem cover
    Stemcover {
        alg: String,
        #[arg(short)]
        c: usize,
        /// Write the cover as an algebra file
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Four-term exact sequence for the ideal generated by the given vectors
    Fourterm {
        alg: String,
        ideal: PathBuf,
        #[arg(short)]
        c: usize,
    },
    /// Built-in algebras
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
pub enum CatalogAction {
    List,
    Show { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.global, &cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            output::report_error(&cli.global, &e);
            ExitCode::from(if e.is_check_failure() { 2 } else { 3 })
        }
    }
}
