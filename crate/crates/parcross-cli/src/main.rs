//! Command-line front end: partial dynamical systems of finite groups on
//! multi-matrix algebras, their crossed products, inductive limits,
//! globalizations, Rokhlin towers, and traces — each subcommand reads a JSON
//! system file, runs the corresponding verification, and prints a
//! deterministic report (plain-text table plus a JSON block).
//!
//! Exit codes: 0 = every check passed, 1 = some check failed, 2 = the input
//! could not be read, parsed, or converted.

mod commands;
mod fixture_files;
mod reportfile;
mod schema;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use reportfile::ReportFile;
use schema::CliError;

#[derive(Parser)]
#[command(
    name = "parcross",
    version,
    about = "Partial crossed products of finite groups on finite-dimensional C*-algebras: \
             build, verify, and search at desk scale"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check every structure declared in the file against its axioms
    Validate(InputArgs),
    /// Build the partial crossed product and report its block structure
    Crossed(InputArgs),
    /// Print multiplicity diagrams for an inductive sequence
    Bratteli(InputArgs),
    /// Verify that crossing the limit equals the limit of the crossed stages
    LimitVerify(StageArgs),
    /// Construct the minimal global system enveloping a partial one
    Globalize(InputArgs),
    /// Verify that globalization commutes with the inductive limit
    GlobalizeLimit(StageArgs),
    /// Rokhlin towers: evaluate, search, and push along sequences
    #[command(subcommand)]
    Rokhlin(RokhlinCmd),
    /// Tracial states: invariance, induction, sequences, and limits
    #[command(subcommand)]
    Trace(TraceCmd),
    /// Bundled example files
    #[command(subcommand)]
    Fixtures(FixturesCmd),
}

#[derive(Args)]
struct InputArgs {
    /// Input JSON file
    input: PathBuf,
    /// Numerical tolerance for pass/fail checks
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Also write the JSON report to this path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StageArgs {
    #[command(flatten)]
    base: InputArgs,
    /// Stage index to verify at (defaults to the last stage)
    #[arg(long)]
    stage: Option<usize>,
}

#[derive(Subcommand)]
enum RokhlinCmd {
    /// Evaluate the defects of the tower supplied in the file
    Check(RokhlinCheckArgs),
    /// Search for a tower of the given height by projected gradient descent
    Search(RokhlinSearchArgs),
    /// Push the file's tower along the sequence and re-evaluate its defects
    Pushforward(PushforwardArgs),
}

#[derive(Args)]
struct RokhlinCheckArgs {
    #[command(flatten)]
    base: InputArgs,
    /// Tower tolerance ε the defects are compared against
    #[arg(long, default_value_t = 1e-2)]
    eps: f64,
    /// Also require members of distinct towers to commute
    #[arg(long)]
    commuting: bool,
}

#[derive(Args)]
struct RokhlinSearchArgs {
    #[command(flatten)]
    base: InputArgs,
    /// Tower height (k+1 towers are sought)
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Tower tolerance ε the defects are compared against
    #[arg(long, default_value_t = 1e-2)]
    eps: f64,
    /// Seed for the deterministic random restarts
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random restarts
    #[arg(long, default_value_t = parcross::rokhlin::DEFAULT_RESTARTS)]
    restarts: usize,
    /// Gradient iterations per restart
    #[arg(long, default_value_t = parcross::rokhlin::DEFAULT_ITERS)]
    iters: usize,
    /// Also require members of distinct towers to commute
    #[arg(long)]
    commuting: bool,
}

#[derive(Args)]
struct PushforwardArgs {
    #[command(flatten)]
    base: InputArgs,
    /// Target stage (defaults to the last stage)
    #[arg(long)]
    stage: Option<usize>,
    /// Tower tolerance ε the defects are compared against
    #[arg(long, default_value_t = 1e-2)]
    eps: f64,
    /// Also require members of distinct towers to commute
    #[arg(long)]
    commuting: bool,
}

#[derive(Subcommand)]
enum TraceCmd {
    /// Check invariance of the file's trace under the partial action
    Check(InputArgs),
    /// Induce the trace on the crossed product and verify its properties
    Crossed(InputArgs),
    /// Check a per-stage trace sequence for compatibility along the maps
    Sequence(InputArgs),
    /// Verify the induced-trace identity between limit and stages
    Limit(StageArgs),
}

#[derive(Subcommand)]
enum FixturesCmd {
    /// List the bundled fixture names
    List,
    /// Print a bundled fixture as JSON
    Emit {
        /// Fixture name (see `fixtures list`)
        name: String,
        /// Write to this path instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Outcome {
    Report { report: ReportFile, out: Option<PathBuf> },
    Text { text: String, out: Option<PathBuf> },
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    let outcome = match cli.command {
        Cmd::Validate(a) => Outcome::Report {
            report: commands::validate(&a.input, a.tol)?,
            out: a.out,
        },
        Cmd::Crossed(a) => Outcome::Report {
            report: commands::crossed(&a.input, a.tol)?,
            out: a.out,
        },
        Cmd::Bratteli(a) => Outcome::Report {
            report: commands::bratteli(&a.input, a.tol)?,
            out: a.out,
        },
        Cmd::LimitVerify(a) => Outcome::Report {
            report: commands::limit_verify(&a.base.input, a.stage, a.base.tol)?,
            out: a.base.out,
        },
        Cmd::Globalize(a) => Outcome::Report {
            report: commands::globalize(&a.input, a.tol)?,
            out: a.out,
        },
        Cmd::GlobalizeLimit(a) => Outcome::Report {
            report: commands::globalize_limit(&a.base.input, a.stage, a.base.tol)?,
            out: a.base.out,
        },
        Cmd::Rokhlin(sub) => match sub {
            RokhlinCmd::Check(a) => Outcome::Report {
                report: commands::rokhlin_check(&a.base.input, a.eps, a.commuting, a.base.tol)?,
                out: a.base.out,
            },
            RokhlinCmd::Search(a) => Outcome::Report {
                report: commands::rokhlin_search(
                    &a.base.input,
                    a.k,
                    a.eps,
                    a.seed,
                    a.restarts,
                    a.iters,
                    a.commuting,
                    a.base.tol,
                )?,
                out: a.base.out,
            },
            RokhlinCmd::Pushforward(a) => Outcome::Report {
                report: commands::rokhlin_pushforward(
                    &a.base.input,
                    a.stage,
                    a.eps,
                    a.commuting,
                    a.base.tol,
                )?,
                out: a.base.out,
            },
        },
        Cmd::Trace(sub) => match sub {
            TraceCmd::Check(a) => Outcome::Report {
                report: commands::trace_check(&a.input, a.tol)?,
                out: a.out,
            },
            TraceCmd::Crossed(a) => Outcome::Report {
                report: commands::trace_crossed(&a.input, a.tol)?,
                out: a.out,
            },
            TraceCmd::Sequence(a) => Outcome::Report {
                report: commands::trace_sequence(&a.input, a.tol)?,
                out: a.out,
            },
            TraceCmd::Limit(a) => Outcome::Report {
                report: commands::trace_limit(&a.base.input, a.stage, a.base.tol)?,
                out: a.base.out,
            },
        },
        Cmd::Fixtures(sub) => match sub {
            FixturesCmd::List => Outcome::Text { text: commands::fixtures_list(), out: None },
            FixturesCmd::Emit { name, out } => {
                Outcome::Text { text: commands::fixtures_emit(&name)?, out }
            }
        },
    };
    Ok(outcome)
}

fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(Outcome::Report { report, out }) => {
            print!("{}", report.render_full());
            if let Some(path) = out {
                if let Err(e) = fs::write(&path, report.to_json()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            if report.passed() {
                0
            } else {
                1
            }
        }
        Ok(Outcome::Text { text, out }) => match out {
            None => {
                print!("{text}");
                0
            }
            Some(path) => {
                if let Err(e) = fs::write(&path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
                0
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn main() {
    std::process::exit(run());
}
