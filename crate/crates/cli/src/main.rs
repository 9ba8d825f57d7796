//! `raney`: enumerate graded-alphabet words, apply and verify the bijections
//! on them, and certify the convolution identities and generating functions.
//!
//! Exit codes: 0 pass, 1 mismatch (a counterexample), 2 configuration or
//! precondition error, 3 internal error.

mod config;
mod run;
mod suite;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use raney_core::{Error, MultiIndex};

use config::RunConfig;
use run::{execute, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Pass,
    Config,
    Mismatch,
    Internal,
}

impl ExitStatus {
    pub fn from_error(e: &Error) -> Self {
        if e.is_config() {
            ExitStatus::Config
        } else {
            ExitStatus::Internal
        }
    }

    /// Worst status wins: internal, then mismatch, then configuration.
    pub fn combine(all: impl Iterator<Item = ExitStatus>) -> Self {
        all.max().unwrap_or(ExitStatus::Pass)
    }

    fn code(self) -> u8 {
        match self {
            ExitStatus::Pass => 0,
            ExitStatus::Mismatch => 1,
            ExitStatus::Config => 2,
            ExitStatus::Internal => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "raney", version, about = "Exact checks for words over a graded alphabet and Rothe-type identities")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, env = "RANEY_JOBS", default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form class size against enumeration.
    Count {
        #[arg(long, value_parser = index)]
        z: MultiIndex,
        #[arg(long, allow_negative_numbers = true)]
        p: i64,
        #[arg(long, value_parser = index)]
        k: MultiIndex,
    },
    /// List a word class in lexicographic order.
    Enumerate {
        #[arg(long, value_parser = index)]
        z: MultiIndex,
        #[arg(long, allow_negative_numbers = true)]
        p: i64,
        #[arg(long, value_parser = index)]
        k: MultiIndex,
        /// Keep only words with a prefix of this weight.
        #[arg(long, allow_negative_numbers = true)]
        r: Option<i64>,
    },
    /// Apply a bijection to one word, or verify it on a whole class.
    #[command(subcommand)]
    Bijection(BijectionCommand),
    /// Certify an identity on a grid, or evaluate it at one point.
    Verify {
        /// Identity id, e.g. rothe-1, gould-mohanty, kmpink.
        identity: String,
        #[arg(long, value_parser = index)]
        n: MultiIndex,
        #[arg(long, value_parser = index)]
        z: MultiIndex,
        /// Integer range scanned for grid values, `A..B` inclusive.
        #[arg(long, allow_hyphen_values = true)]
        grid_range: Option<String>,
        /// Single point, e.g. `x=1,y=2,eps=-1/2`.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Letter index for kmpink and absorption.
        #[arg(long)]
        i: Option<usize>,
        /// Overshoot for kmpink.
        #[arg(long)]
        j: Option<i64>,
    },
    /// Truncated power series of the functional equation.
    #[command(subcommand)]
    Series(SeriesCommand),
    /// Run one desk-scale sweep (counting, prefix-class, shift, shift-by,
    /// raney, identities, specialization, generating-functions).
    Sweep { name: String },
    /// Run a manifest of checks.
    Suite {
        /// JSON list of configs; omit with --default.
        manifest: Option<PathBuf>,
        /// Use the built-in manifest.
        #[arg(long, conflicts_with = "manifest")]
        default: bool,
    },
}

#[derive(Debug, Args)]
struct ClassArgs {
    #[arg(long, value_parser = index)]
    z: MultiIndex,
    #[arg(long, allow_negative_numbers = true)]
    p: i64,
    #[arg(long, allow_negative_numbers = true)]
    q: i64,
    #[arg(long, value_parser = index)]
    n: MultiIndex,
    /// A single word in the class, e.g. "a b1 a".
    #[arg(long)]
    word: Option<String>,
}

#[derive(Debug, Subcommand)]
enum BijectionCommand {
    /// The weight shift from prefix weight p to p + r.
    Shift {
        #[command(flatten)]
        class: ClassArgs,
        /// Number of unit shifts.
        #[arg(long, allow_negative_numbers = true)]
        r: Option<i64>,
        /// Map a word from prefix weight p + r back to p.
        #[arg(long)]
        inverse: bool,
    },
    /// Factorization at the first prefix of weight at least p.
    Raney {
        #[command(flatten)]
        class: ClassArgs,
    },
}

#[derive(Debug, Subcommand)]
enum SeriesCommand {
    Solve {
        #[arg(long, value_parser = index)]
        z: MultiIndex,
        #[arg(long)]
        order: u32,
    },
    /// First generating function, coefficientwise.
    Check1 {
        #[arg(long, allow_negative_numbers = true)]
        x: i64,
        #[arg(long, value_parser = index)]
        z: MultiIndex,
        #[arg(long)]
        order: u32,
    },
    /// Second generating function, coefficientwise.
    Check2 {
        #[arg(long, allow_negative_numbers = true)]
        x: i64,
        #[arg(long, value_parser = index)]
        z: MultiIndex,
        #[arg(long)]
        order: u32,
    },
}

fn index(s: &str) -> Result<MultiIndex, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Command {
    /// Every command except `suite` is a single config.
    fn into_config(self) -> Option<RunConfig> {
        Some(match self {
            Command::Count { z, p, k } => RunConfig::Count { z, p, k },
            Command::Enumerate { z, p, k, r } => RunConfig::Enumerate { z, p, k, r },
            Command::Bijection(BijectionCommand::Shift { class, r, inverse }) => {
                let ClassArgs { z, p, q, n, word } = class;
                RunConfig::BijectionShift { z, p, q, n, r, word, inverse }
            }
            Command::Bijection(BijectionCommand::Raney { class }) => {
                let ClassArgs { z, p, q, n, word } = class;
                RunConfig::BijectionRaney { z, p, q, n, word }
            }
            Command::Verify { identity, n, z, grid_range, point, i, j } => {
                RunConfig::Verify { identity, n, z, grid_range, point, i, j }
            }
            Command::Series(SeriesCommand::Solve { z, order }) => RunConfig::SeriesSolve { z, order },
            Command::Series(SeriesCommand::Check1 { x, z, order }) => RunConfig::SeriesCheck1 { x, z, order },
            Command::Series(SeriesCommand::Check2 { x, z, order }) => RunConfig::SeriesCheck2 { x, z, order },
            Command::Sweep { name } => RunConfig::Sweep { name },
            Command::Suite { .. } => return None,
        })
    }
}

fn render(json: &serde_json::Value, text: &str, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(json).expect("value serializes"),
        Format::Text => text.to_owned(),
    }
}

fn run(cli: Cli) -> (ExitStatus, Option<String>) {
    let format = cli.format;
    match cli.command {
        Command::Suite { manifest, default } => {
            let text = match (manifest, default) {
                (Some(path), _) => match fs::read_to_string(&path) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: cannot read {}: {e}", path.display());
                        return (ExitStatus::Config, None);
                    }
                },
                (None, true) => suite::DEFAULT_MANIFEST.to_owned(),
                (None, false) => {
                    eprintln!("error: suite needs a manifest path or --default");
                    return (ExitStatus::Config, None);
                }
            };
            let configs = match suite::parse_manifest(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return (ExitStatus::Config, None);
                }
            };
            if configs.is_empty() {
                eprintln!("warning: manifest has no checks");
            }
            let result = suite::run_suite(&configs);
            (result.status, Some(render(&result.json, &result.text, format)))
        }
        command => {
            let config = command.into_config().expect("non-suite command");
            match execute(&config) {
                Ok(o) => {
                    let status = match o.status {
                        Status::Pass => ExitStatus::Pass,
                        Status::Mismatch => ExitStatus::Mismatch,
                    };
                    (status, Some(render(&o.json, &o.text, format)))
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    (ExitStatus::from_error(&e), None)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return ExitCode::from(ExitStatus::Internal.code());
        }
    };
    let (status, rendered) = pool.install(|| run(cli));
    if let Some(body) = rendered {
        match output {
            Some(path) => {
                if let Err(e) = fs::write(&path, body + "\n") {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(ExitStatus::Config.code());
                }
            }
            None => println!("{body}"),
        }
    }
    ExitCode::from(status.code())
}
