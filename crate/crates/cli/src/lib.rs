//! Command-line front end for `robust-orbits`.
//!
//! Every subcommand reads one JSON document and writes one JSON document to
//! standard output. Numbers travel as exact strings (`"3"`, `"-2/5"`), so output
//! is byte-for-byte reproducible. Failures are reported as
//! `{"error": {"kind": ..., "message": ...}}` with exit code 2, or 3 when the
//! enumeration guard refuses a lattice that is too large.

mod commands;
mod input;
pub mod verify;

use serde::Serialize;
use thiserror::Error;

pub use commands::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("missing field {0:?}")]
    MissingField(String),
    #[error("field {key:?}: {source}")]
    Field { key: String, source: serde_json::Error },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] robust_orbits::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(robust_orbits::Error::DimensionGuard { .. }) => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Json(_) | CliError::MissingField(_) | CliError::Field { .. } => "malformed_input",
            CliError::Io { .. } => "io",
            CliError::Core(robust_orbits::Error::DimensionGuard { .. }) => "dimension_guard",
            CliError::Core(_) => "contract_violation",
        }
    }
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: DiagnosticBody<'a>,
}

#[derive(Serialize)]
struct DiagnosticBody<'a> {
    kind: &'a str,
    message: String,
}

/// Exit code and the text destined for standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn failure(e: &CliError) -> Self {
        let d = Diagnostic {
            error: DiagnosticBody {
                kind: e.kind(),
                message: e.to_string(),
            },
        };
        Self {
            code: e.exit_code(),
            stdout: serde_json::to_string(&d).expect("diagnostic serializes") + "\n",
        }
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string() };
            }
            return Outcome::failure(&CliError::Usage(e.to_string().trim_end().to_string()));
        }
    };
    match commands::execute(&cli) {
        Ok((code, value)) => Outcome {
            code,
            stdout: serde_json::to_string(&value).expect("JSON values serialize") + "\n",
        },
        Err(e) => Outcome::failure(&e),
    }
}
