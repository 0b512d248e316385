use serde::Serialize;
use subdivide::shell::{shell_report, ShellReport};

use crate::{CliError, CliResult, Outcome, SCHEMA_VERSION};

pub const MAX_N: usize = 8;

#[derive(Serialize)]
struct ShellOutput {
    v: u32,
    command: &'static str,
    #[serde(flatten)]
    report: ShellReport,
    passed: bool,
}

/// Homology of the shell complex over `[n]` and of the constant target.
pub fn run_shell(n: usize) -> CliResult<Outcome> {
    if n > MAX_N {
        return Err(CliError::Usage(format!("--n is capped at {MAX_N}")));
    }
    let report = shell_report(n);
    let passed = report.passed();
    Outcome::new(
        &ShellOutput {
            v: SCHEMA_VERSION,
            command: "shell",
            report,
            passed,
        },
        passed,
    )
}
