//! Runners behind the `subdivide` subcommands. Each runner returns the JSON
//! report together with its verdict; the binary only handles flags, output
//! and exit codes.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

pub mod census;
pub mod degrees;
pub mod homotopy;
pub mod relations;
pub mod shell;

/// Value of the `"v"` field in every report and config.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters out of range.
    Usage(String),
    /// Unreadable or invalid census config.
    Config(String),
    Core(subdivide::error::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<subdivide::error::Error> for CliError {
    fn from(e: subdivide::error::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A finished run: the serialized report and whether every check passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub passed: bool,
    pub json: String,
}

impl Outcome {
    pub fn new<T: Serialize>(report: &T, passed: bool) -> CliResult<Self> {
        let mut json = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.into()))?;
        json.push('\n');
        Ok(Outcome { passed, json })
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    /// Writes the report to `out`, or to stdout when `None`.
    pub fn write_to(&self, out: Option<&Path>) -> CliResult<()> {
        match out {
            Some(path) => std::fs::write(path, &self.json)?,
            None => std::io::stdout().lock().write_all(self.json.as_bytes())?,
        }
        Ok(())
    }
}
