//! Experiment harness behind the `glocal` binary.
//!
//! Commands:
//!
//! * `run CONFIG`: one optimizer run described by an [`ExperimentConfig`],
//!   writing a trace CSV and a summary JSON.
//! * `bounds TAG --SYMBOL VALUE ...`: evaluate an iteration-complexity bound.
//! * `glocal`: glocal constants of a logistic-regression dataset over a list
//!   of `δ` values, or the bound-minimizing `δ`.
//! * `compare CONFIG`: several algorithms on one problem, merged into a single
//!   CSV plus a verdict JSON.
//! * `gen`: write a synthetic LIBSVM dataset.
//!
//! Exit status is 0 on success, 1 for configuration or input errors and 2
//! when a run ends on a runtime failure (search failure, unbounded direction,
//! numerical trouble).

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{cmd_bounds, cmd_compare, cmd_gen, cmd_glocal, cmd_run, run_experiment, GlocalArgs, GlocalSource};
pub use config::{
    AlgorithmSpec, CompareConfig, CompareOutput, ComparisonConstants, DataSpec, ExperimentConfig, InitSpec,
    NagStepSpec, NamedAlgorithm, OutputSpec, ProblemSpec, SelectionSpec, StepSpec,
};
pub use output::{fmt_num, write_combined_csv, write_trace_csv, TRACE_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "glocal", version, about = "Glocal-smoothness optimization experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// Linearly separable binary classification data.
    Separable,
    /// Least-squares data with an exact interpolating solution.
    Realizable,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment described by a JSON config.
    Run { config: PathBuf },
    /// Evaluate an iteration-complexity bound, e.g.
    /// `bounds glocal-gd-lo --L 100 --mu 1 --Lstar 10 --delta0 1 --delta 0.1 --eps 1e-3`.
    Bounds {
        tag: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, num_args = 0..)]
        inputs: Vec<String>,
    },
    /// Glocal constants of logistic regression over a δ sweep, or the optimal δ.
    Glocal {
        /// LIBSVM dataset.
        #[arg(long, conflicts_with = "separable")]
        data: Option<PathBuf>,
        /// Synthetic separable dataset instead of a file.
        #[arg(long, num_args = 4, value_names = ["N", "D", "MARGIN", "SEED"])]
        separable: Option<Vec<String>>,
        #[arg(long, default_value_t = 0.0)]
        ell_star: f64,
        /// Comma-separated δ values.
        #[arg(long, value_delimiter = ',')]
        delta: Vec<f64>,
        /// Report the bound-minimizing δ instead of a sweep (needs --delta0 and --eps).
        #[arg(long)]
        optimal: bool,
        #[arg(long)]
        delta0: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        /// Strong-convexity constant used for the iteration bound column.
        #[arg(long)]
        mu: Option<f64>,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Run several algorithms on one problem and compare them.
    Compare { config: PathBuf },
    /// Generate a synthetic LIBSVM dataset.
    Gen {
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Minimum margin (separable data only).
        #[arg(long)]
        margin: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `args` (including the program name) and executes the command,
/// returning the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    let result = match cli.command {
        Command::Run { config } => cmd_run(&config, out),
        Command::Bounds { tag, inputs } => cmd_bounds(&tag, &inputs, out),
        Command::Glocal { data, separable, ell_star, delta, optimal, delta0, eps, mu, json } => {
            let source = match (data, separable) {
                (Some(p), _) => Some(GlocalSource::File(p)),
                (None, Some(v)) => match parse_separable(&v) {
                    Ok(s) => Some(s),
                    Err(e) => {
                        let _ = writeln!(err, "error: {e}");
                        return EXIT_INPUT;
                    }
                },
                (None, None) => None,
            };
            let args = GlocalArgs { source, ell_star, deltas: delta, optimal, delta0, eps, mu, json };
            cmd_glocal(&args, out)
        }
        Command::Compare { config } => cmd_compare(&config, out),
        Command::Gen { kind, n, d, margin, seed, out: path } => cmd_gen(kind, n, d, margin, seed, &path),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn parse_separable(v: &[String]) -> crate::Result<GlocalSource> {
    let bad = |what: &str| crate::Error::input(format!("--separable: invalid {what}"));
    Ok(GlocalSource::Separable {
        n: v[0].parse().map_err(|_| bad("N"))?,
        d: v[1].parse().map_err(|_| bad("D"))?,
        margin: v[2].parse().map_err(|_| bad("MARGIN"))?,
        seed: v[3].parse().map_err(|_| bad("SEED"))?,
    })
}
