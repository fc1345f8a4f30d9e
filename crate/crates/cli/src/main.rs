//! `lpgroupoid`: command-line front end for the groupoid algebra toolkit.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lpgroupoid::gpd::DEFAULT_WORK_BOUND;
use lpgroupoid::Error;

#[derive(Parser, Debug)]
#[command(
    name = "lpgroupoid",
    version,
    about = "Partial isometries and reconstruction for finite groupoid Lp-operator algebras"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Exponent p >= 1.
    #[arg(long, global = true, default_value_t = 1.5)]
    pub p: f64,
    /// Norm carried by the algebra; `i` always means p = 1.
    #[arg(long, global = true, value_enum, default_value_t = Ctx::Fp)]
    pub ctx: Ctx,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Builtin groupoid: cyclic:<n>, klein, symmetric:<n>, pair:<n>,
    /// swap-action, union:<a>+<b>.
    #[arg(long, global = true)]
    pub builtin: Option<String>,
    /// Second builtin, for `compare`.
    #[arg(long, global = true)]
    pub builtin2: Option<String>,
    /// Largest number of arrow subsets bisection enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_WORK_BOUND)]
    pub work_bound: u64,
    /// Number of seeded random elements where a verb samples.
    #[arg(long, global = true, default_value_t = 16)]
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Ctx {
    Fp,
    Symfp,
    I,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Check the groupoid axioms.
    Validate { input: Option<PathBuf> },
    /// Enumerate all bisections.
    Bisections { input: Option<PathBuf> },
    /// Sup, reduced, symmetrized and I-norms of an element.
    Norms {
        input: Option<PathBuf>,
        /// Element as a map from arrow name to [re, im]; random if absent.
        #[arg(long)]
        element: Option<PathBuf>,
    },
    /// Decide membership in the MP-partial isometries.
    MpClassify {
        input: Option<PathBuf>,
        #[arg(long)]
        element: Option<PathBuf>,
    },
    /// Build the inverse semigroup of homotopy classes.
    Spi { input: Option<PathBuf> },
    /// Tight groupoid of an inverse semigroup (or of the bisections of a
    /// groupoid), emitted in the groupoid JSON format.
    Tight { input: Option<PathBuf> },
    /// Run the reconstruction pipeline.
    Reconstruct { input: Option<PathBuf> },
    /// Decide isomorphism directly and via reconstruction.
    Compare { inputs: Vec<PathBuf> },
    /// Run the continuity battery and the projection gap check.
    Rakocevic,
    /// Reconstruct every catalog groupoid in every supported context.
    Catalog,
}

/// A finished run: the exit code and an optional message for stderr.
pub struct Outcome {
    pub code: u8,
    pub message: Option<String>,
}

impl Outcome {
    pub fn ok() -> Self {
        Outcome {
            code: 0,
            message: None,
        }
    }

    pub fn check(passed: bool, what: &str) -> Self {
        if passed {
            Outcome::ok()
        } else {
            Outcome {
                code: 1,
                message: Some(format!("check failed: {what}")),
            }
        }
    }
}

/// Exit status for an error: 2 for bad input, 1 for failed mathematics.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Stage { source, .. } => exit_code(source),
        Error::Malformed(_)
        | Error::Json(_)
        | Error::InvalidExponent(_)
        | Error::PTwoRefused
        | Error::WorkBoundExceeded { .. }
        | Error::SearchBudgetExceeded { .. }
        | Error::DimensionMismatch { .. }
        | Error::InvalidGroupoid(_)
        | Error::NotInverseSemigroup(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.verb {
        Verb::Validate { input } => commands::validate(&cli.opts, input),
        Verb::Bisections { input } => commands::bisections(&cli.opts, input),
        Verb::Norms { input, element } => commands::norms(&cli.opts, input, element),
        Verb::MpClassify { input, element } => commands::mp_classify(&cli.opts, input, element),
        Verb::Spi { input } => commands::spi(&cli.opts, input),
        Verb::Tight { input } => commands::tight(&cli.opts, input),
        Verb::Reconstruct { input } => commands::reconstruct(&cli.opts, input),
        Verb::Compare { inputs } => commands::compare(&cli.opts, inputs),
        Verb::Rakocevic => commands::rakocevic(&cli.opts),
        Verb::Catalog => commands::catalog(&cli.opts),
    };
    match result {
        Ok(outcome) => {
            if let Some(msg) = outcome.message {
                eprintln!("lpgroupoid: {msg}");
            }
            ExitCode::from(outcome.code)
        }
        Err(err) => {
            eprintln!("lpgroupoid: error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
