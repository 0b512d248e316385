use std::str::FromStr;

use serde::Serialize;
use subdivide::shell::{
    homotopy_boundary, search_conventions, specialization_check, Convention, ConventionSearch,
    SpecializationReport, TelescopeReport,
};
use subdivide::simplexmaps::CenterFamily;

use crate::{CliError, CliResult, Outcome, SCHEMA_VERSION};

pub const MAX_S: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConventionChoice {
    /// Try all four and require exactly one to work at every level.
    Auto,
    Fixed(Convention),
}

impl FromStr for ConventionChoice {
    type Err = String;

    /// `auto`, or `EPS,LAMBDA` with each sign written `1`, `+1` or `-1`.
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(ConventionChoice::Auto);
        }
        let sign = |t: &str| match t.trim() {
            "1" | "+1" => Ok(1),
            "-1" => Ok(-1),
            other => Err(format!("expected a sign, got {other:?}")),
        };
        match s.split_once(',') {
            Some((e, l)) => Ok(ConventionChoice::Fixed(Convention {
                epsilon: sign(e)?,
                lambda: sign(l)?,
            })),
            None => Err(format!("expected \"auto\" or \"EPS,LAMBDA\", got {s:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HomotopyOptions {
    pub max_s: usize,
    pub convention: ConventionChoice,
    /// Base seed of the specialization; level `s` uses `seed + s`.
    pub seed: u64,
    pub q: u32,
    pub degree_bound: u32,
}

impl Default for HomotopyOptions {
    fn default() -> Self {
        HomotopyOptions {
            max_s: 3,
            convention: ConventionChoice::Auto,
            seed: 2024,
            q: 11,
            degree_bound: 3,
        }
    }
}

#[derive(Serialize)]
struct HomotopyReport {
    v: u32,
    command: &'static str,
    max_s: usize,
    requested: String,
    search: Option<ConventionSearch>,
    convention: Option<Convention>,
    levels: Vec<TelescopeReport>,
    specialization: Vec<SpecializationReport>,
    passed: bool,
}

pub fn run_homotopy(opts: &HomotopyOptions) -> CliResult<Outcome> {
    if opts.max_s > MAX_S {
        return Err(CliError::Usage(format!("--max-s is capped at {MAX_S}")));
    }
    let family = CenterFamily::symbolic(opts.max_s);
    let (search, convention, requested) = match opts.convention {
        ConventionChoice::Auto => {
            let search = search_conventions(opts.max_s, &family)?;
            let unique = search.unique;
            (Some(search), unique, "auto".to_string())
        }
        ConventionChoice::Fixed(c) => (None, Some(c), format!("{},{}", c.epsilon, c.lambda)),
    };
    let mut levels = Vec::new();
    let mut specialization = Vec::new();
    if let Some(c) = convention {
        for s in 0..=opts.max_s {
            levels.push(homotopy_boundary(s, &family, c)?);
            specialization.push(specialization_check(
                s,
                c,
                opts.q,
                opts.degree_bound,
                opts.seed + s as u64,
            )?);
        }
    }
    let passed = convention.is_some()
        && levels.iter().all(TelescopeReport::passed)
        && specialization.iter().all(|r| r.residual_zero && r.commutes);
    let report = HomotopyReport {
        v: SCHEMA_VERSION,
        command: "homotopy",
        max_s: opts.max_s,
        requested,
        search,
        convention,
        levels,
        specialization,
        passed,
    };
    Outcome::new(&report, passed)
}
