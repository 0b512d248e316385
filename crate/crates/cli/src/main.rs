use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use subdivide_cli::census::run_census;
use subdivide_cli::degrees::{run_degrees, DegreesOptions};
use subdivide_cli::homotopy::{run_homotopy, ConventionChoice, HomotopyOptions};
use subdivide_cli::relations::{run_relations, RelationsOptions};
use subdivide_cli::shell::run_shell;
use subdivide_cli::{CliResult, Outcome};

/// Exact checks of simplex subdivision maps and finite-field censuses.
///
/// Exit status: 0 when every check passes, 1 on a verification failure,
/// 2 on a usage or config error.
#[derive(Parser)]
#[command(name = "subdivide", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit JSON (the only format).
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Subdivision and homotopy relations with symbolic centers.
    Relations {
        #[arg(long, default_value_t = 2)]
        max_n: usize,
        /// Negative control: make c^1 non-barycentric.
        #[arg(long)]
        corrupt_center: bool,
        /// Negative control: add 1 to entry ROW,COL of sd_{max_n}^id.
        #[arg(long, value_name = "ROW,COL", value_parser = parse_entry)]
        perturb_entry: Option<(usize, usize)>,
        #[command(flatten)]
        common: Common,
    },
    /// Telescoping of the homotopy boundary and the sign-convention search.
    Homotopy {
        #[arg(long, default_value_t = 3)]
        max_s: usize,
        /// "auto" or an explicit EPS,LAMBDA such as "-1,1".
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        convention: ConventionChoice,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Field size for the specialization check.
        #[arg(long, default_value_t = 11)]
        q: u32,
        /// X-degree of the specialized centers.
        #[arg(long, default_value_t = 3)]
        degree_bound: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Homology of the shell complex via Smith normal form.
    Shell {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run a census config.
    Census {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's sampling seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Degree and shape table of every chart.
    Degrees {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// X-degree bound N of the random centers.
        #[arg(long = "degree-bound", default_value_t = 3)]
        degree_bound: u32,
        /// Number of base variables.
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Negative control: plant a T-dependent entry in sd_n^id.
        #[arg(long)]
        inject_t_degree: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_entry(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s.split_once(',').ok_or("expected ROW,COL")?;
    Ok((
        r.trim().parse().map_err(|e| format!("{e}"))?,
        c.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn run(command: Command) -> CliResult<(Outcome, Common)> {
    Ok(match command {
        Command::Relations {
            max_n,
            corrupt_center,
            perturb_entry,
            common,
        } => (
            run_relations(&RelationsOptions {
                max_n,
                corrupt_center,
                perturb_entry,
            })?,
            common,
        ),
        Command::Homotopy {
            max_s,
            convention,
            seed,
            q,
            degree_bound,
            common,
        } => (
            run_homotopy(&HomotopyOptions {
                max_s,
                convention,
                seed,
                q,
                degree_bound,
            })?,
            common,
        ),
        Command::Shell { n, common } => (run_shell(n)?, common),
        Command::Census {
            config,
            seed,
            common,
        } => (run_census(&config, seed)?, common),
        Command::Degrees {
            n,
            degree_bound,
            m,
            seed,
            inject_t_degree,
            common,
        } => (
            run_degrees(&DegreesOptions {
                n,
                degree_bound,
                m,
                seed,
                inject_t_degree,
            })?,
            common,
        ),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|(outcome, common)| {
        outcome.write_to(common.out.as_deref())?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            if !outcome.passed {
                eprintln!("verification failed");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
