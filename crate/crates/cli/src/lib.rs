//! Command-line front end: tower documents, subcommands, and report formatting.

pub mod commands;
pub mod parse;
pub mod report;

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use threefold_core::Condition;

pub use parse::{parse_matrix, parse_tower, render_custom, ParseError, TowerDocument};
pub use report::{Format, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {error}")]
    Parse { path: String, error: ParseError },
    #[error(transparent)]
    Engine(#[from] threefold_core::Error),
    #[error("{0}")]
    Io(String),
    #[error("not a valid action: {}", .0.join("; "))]
    InvalidAction(Vec<String>),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(name = "threefold", version, about = "Intersection calculus on blowups of threefolds")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect the intersection ring of a tower's final model.
    Ring {
        #[command(subcommand)]
        action: RingAction,
    },
    /// Decide Condition A or B along a tower.
    Check {
        #[arg(long, value_parser = parse_condition)]
        condition: Condition,
        #[arg(long, value_enum, default_value_t = commands::Method::Propagate)]
        method: commands::Method,
        /// Tower file, or `-` for stdin.
        file: PathBuf,
    },
    /// P3 blown up at n general points and along the lines joining them.
    P3lines {
        #[arg(long)]
        n: usize,
        /// Also list zero multipliers.
        #[arg(long)]
        full_certificate: bool,
    },
    /// Towers over a Picard-rank-one base.
    Picard1 { file: PathBuf },
    /// Dynamical degrees of an integer matrix, optionally as an action on a model.
    Dynamics {
        #[arg(long)]
        matrix: PathBuf,
        /// Tower file whose final model the matrix acts on.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
    /// Worked examples.
    Case {
        #[command(subcommand)]
        case: CaseCommand,
    },
    /// Number of blowups and genus slack between two (chi, rho) pairs.
    Budget {
        #[arg(long, value_parser = parse_pair)]
        base: (i64, i64),
        #[arg(long, value_parser = parse_pair)]
        target: (i64, i64),
    },
}

#[derive(Debug, Subcommand)]
pub enum RingAction {
    /// Print the model as a re-parseable custom base.
    Show { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum CaseCommand {
    /// Torus quotient by the order-four rotation and its resolution.
    Ueno,
    /// Chern classes of a complete intersection threefold.
    Ci {
        #[arg(long)]
        n: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u32>,
    },
}

fn parse_condition(text: &str) -> Result<Condition, String> {
    Condition::parse(text).ok_or_else(|| format!("expected A or B, found `{text}`"))
}

fn parse_pair(text: &str) -> Result<(i64, i64), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("expected chi,rho, found `{text}`"))?;
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| format!("`{s}` is not an integer"));
    Ok((parse(a)?, parse(b)?))
}

/// Reads a file argument; `-` reads `stdin` (passed in so tests can supply it).
fn read_input(path: &Path, stdin: &mut dyn Read) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn load_tower(path: &Path, stdin: &mut dyn Read) -> Result<TowerDocument, CliError> {
    let text = read_input(path, stdin)?;
    parse_tower(&text).map_err(|error| CliError::Parse {
        path: path.display().to_string(),
        error,
    })
}

/// Runs a parsed command line and renders its report.
pub fn run(cli: &Cli, stdin: &mut dyn Read) -> Result<String, CliError> {
    let report = match &cli.command {
        Command::Ring { action: RingAction::Show { file } } => commands::ring_show(&load_tower(file, stdin)?),
        Command::Check { condition, method, file } => {
            commands::check(&load_tower(file, stdin)?, *condition, *method)?
        }
        Command::P3lines { n, full_certificate } => commands::p3lines(*n, *full_certificate)?,
        Command::Picard1 { file } => commands::picard1(&load_tower(file, stdin)?)?,
        Command::Dynamics { matrix, model, tolerance } => {
            if !(tolerance.is_finite() && *tolerance > 0.0) {
                return Err(CliError::Usage("tolerance must be positive".into()));
            }
            let text = read_input(matrix, stdin)?;
            let m = parse_matrix(&text).map_err(|error| CliError::Parse {
                path: matrix.display().to_string(),
                error,
            })?;
            let model = match model {
                Some(path) => Some(load_tower(path, stdin)?.final_model().clone()),
                None => None,
            };
            commands::dynamics(&m, model.as_ref(), *tolerance)?
        }
        Command::Case { case: CaseCommand::Ueno } => commands::case_ueno()?,
        Command::Case { case: CaseCommand::Ci { n, degrees } } => commands::case_ci(*n, degrees)?,
        Command::Budget { base, target } => commands::budget(*base, *target)?,
    };
    Ok(report.render(cli.format))
}
