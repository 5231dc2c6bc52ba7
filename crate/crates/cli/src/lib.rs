//! Batch verifier for the (−1)-curve and precycle toolkit.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns the
//! rendered report together with the process exit status: 0 when every claim
//! holds, 1 when a claim fails, 2 for invalid input.

mod commands;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use delpezzo::incidence::IncidenceError;
use delpezzo::lattice::LatticeError;
use delpezzo::DelPezzoContext;
use thiserror::Error;

pub use report::{Claim, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Failed(String),
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<IncidenceError> for CliError {
    fn from(e: IncidenceError) -> Self {
        CliError::Failed(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "delpezzo",
    version,
    about = "Exact verifier for (-1)-curves on del Pezzo surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Restrict to one degree (1-9); default is every degree.
    #[arg(long, global = true, allow_hyphen_values = true)]
    degree: Option<i64>,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the (−1)-curves of each degree.
    Enumerate {
        /// CSV with the textual class form instead of a report.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Number of curves of each type.
    Census,
    /// Intersection statistics of the incidence graph.
    Incidence,
    /// Pairs of meeting curves, with a cocycle check of the cycle built on each.
    Pairs,
    /// The 28 pairs over the bitangents of a degree 2 surface.
    Bitangents,
    /// Double-sixes among the 27 lines of a cubic surface.
    DoubleSixes,
    /// Intersection with the branch curve for every non-exceptional curve.
    VerifyLemma,
    /// Tame symbol of two products of linear forms.
    Tame {
        /// Factor of f, written "a,b,c" or "a,b,c^e" for (aX+bY+cZ)^e.
        #[arg(long = "f", allow_hyphen_values = true)]
        f: Vec<String>,
        /// Factor of g, in the same notation.
        #[arg(long = "g", allow_hyphen_values = true)]
        g: Vec<String>,
    },
    /// Solve for the boundary of the cycle under degeneration.
    BoundaryReplay {
        /// JSON file overriding entries of the standard model.
        #[arg(long)]
        itable: Option<PathBuf>,
    },
    /// Counts of rational plane curves through 3d-1 points.
    CountRational {
        #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
        max_degree: i64,
    },
    /// Every claim of every command, across the selected degrees.
    Report,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Census => "census",
            Command::Incidence => "incidence",
            Command::Pairs => "pairs",
            Command::Bitangents => "bitangents",
            Command::DoubleSixes => "double-sixes",
            Command::VerifyLemma => "verify-lemma",
            Command::Tame { .. } => "tame",
            Command::BoundaryReplay { .. } => "boundary-replay",
            Command::CountRational { .. } => "count-rational",
            Command::Report => "report",
        }
    }
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub report: Option<Report>,
    pub exit: i32,
    /// What belongs on standard output (empty when `--out` was given).
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: String) -> Self {
        Self {
            report: None,
            exit: 2,
            stdout: String::new(),
            stderr: message,
        }
    }
}

fn contexts(degree: Option<i64>) -> Result<Vec<DelPezzoContext>, CliError> {
    match degree {
        None => Ok((1..=9)
            .map(|d| DelPezzoContext::new(d).expect("1..=9"))
            .collect()),
        Some(d) => DelPezzoContext::new(d)
            .map(|c| vec![c])
            .map_err(|_| CliError::Usage(format!("--degree must be between 1 and 9, got {d}"))),
    }
}

/// Commands tied to one degree accept `--degree` only when it names that degree.
fn fixed_degree(degree: Option<i64>, wanted: i64, command: &str) -> Result<Vec<u32>, CliError> {
    match degree {
        Some(d) if d != wanted => Err(CliError::Usage(format!(
            "{command} only applies to degree {wanted}, got --degree {d}"
        ))),
        _ => Ok(vec![wanted as u32]),
    }
}

fn no_degree(degree: Option<i64>, command: &str) -> Result<Vec<u32>, CliError> {
    match degree {
        Some(_) => Err(CliError::Usage(format!("{command} does not take --degree"))),
        None => Ok(Vec::new()),
    }
}

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let exit = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if exit == 0 {
                Outcome {
                    report: None,
                    exit,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::usage(text)
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => outcome,
        Err(CliError::Failed(message)) => Outcome {
            report: None,
            exit: 1,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        },
        Err(e) => Outcome::usage(format!("error: {e}\n")),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let name = cli.command.name();
    let all = || contexts(cli.degree);
    let degrees_of = |ctxs: &[DelPezzoContext]| ctxs.iter().map(|c| c.degree()).collect::<Vec<_>>();

    if let Command::Enumerate { csv: true } = cli.command {
        let text = commands::enumerate_csv(&all()?)?;
        return emit(cli, None, text);
    }

    let (degrees, (claims, payload)) = match &cli.command {
        Command::Enumerate { .. } => {
            let ctxs = all()?;
            (degrees_of(&ctxs), commands::enumerate(&ctxs))
        }
        Command::Census => {
            let ctxs = all()?;
            (degrees_of(&ctxs), commands::census(&ctxs))
        }
        Command::Incidence => {
            let ctxs = all()?;
            (degrees_of(&ctxs), commands::incidence(&ctxs)?)
        }
        Command::Pairs => {
            let ctxs = all()?;
            (degrees_of(&ctxs), commands::pairs(&ctxs)?)
        }
        Command::VerifyLemma => {
            let ctxs = all()?;
            (degrees_of(&ctxs), commands::verify_lemma(&ctxs)?)
        }
        Command::Report => {
            let ctxs = all()?;
            (degrees_of(&ctxs), commands::report(&ctxs)?)
        }
        Command::Bitangents => (fixed_degree(cli.degree, 2, name)?, commands::bitangents()?),
        Command::DoubleSixes => (
            fixed_degree(cli.degree, 3, name)?,
            commands::double_sixes_section()?,
        ),
        Command::Tame { f, g } => (no_degree(cli.degree, name)?, commands::tame(f, g)?),
        Command::BoundaryReplay { itable } => (
            no_degree(cli.degree, name)?,
            commands::boundary_replay(itable.as_deref())?,
        ),
        Command::CountRational { max_degree } => (
            no_degree(cli.degree, name)?,
            commands::count_rational(*max_degree)?,
        ),
    };
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: name.to_string(),
        degrees,
        claims,
        payload,
    };
    let text = if cli.json {
        report.to_json()
    } else {
        report.to_text()
    };
    emit(cli, Some(report), text)
}

fn emit(cli: &Cli, report: Option<Report>, text: String) -> Result<Outcome, CliError> {
    let exit = match &report {
        Some(r) if !r.passed() => 1,
        _ => 0,
    };
    let stdout = match &cli.out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            String::new()
        }
        None => text,
    };
    Ok(Outcome {
        report,
        exit,
        stdout,
        stderr: String::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_claim_gives_exit_one() {
        let cli = Cli::try_parse_from(["delpezzo", "census"]).unwrap();
        let report = Report {
            tool_version: "0".into(),
            command: "census".into(),
            degrees: vec![],
            claims: vec![Claim::new("x", 1, 2)],
            payload: serde_json::Value::Null,
        };
        let text = report.to_text();
        let outcome = emit(&cli, Some(report), text).unwrap();
        assert_eq!(outcome.exit, 1);
    }
}
