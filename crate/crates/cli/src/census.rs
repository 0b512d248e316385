//! Census experiments driven by a JSON config.
//!
//! ```json
//! {
//!   "v": 1,
//!   "kind": "bad_center_census",
//!   "field": {"p": 5, "e_max": 3},
//!   "variety": {"m": 1, "n": 1, "t": 0, "equations": ["T0 - T1"]},
//!   "centers": {"N": 1, "mode": "exhaustive"},
//!   "sigma_set": "all",
//!   "caps": {"max_enumeration": 50000000},
//!   "expect": {"sigma_bad": [{"sigma": [0, 1], "bad_fraction": "4/25"}]}
//! }
//! ```
//!
//! `kind` is one of `bad_center_census`, `vanishing_census`, `homotopy_face`
//! and `dimension_oracle`. Vanishing configs describe `W` with `m` base
//! coordinates and `z` fiber coordinates; the oracle lists `instances` with
//! their known dimensions. The optional `expect` block holds the hard
//! assertions that decide the exit code.

use std::path::Path;

use serde::{Deserialize, Serialize};
use subdivide::equidimlab::{
    bad_center_census, estimate_dimension, homotopy_face_condition_check, vanishing_census,
    CensusConfig, CensusReport, DimensionEstimate, HomotopyFaceReport, SamplePlan, VanishingReport,
    VanishingSpec, VarietySpec, VarietyText, DEFAULT_CAP,
};
use subdivide::polycore::Degree;
use subdivide::simplexmaps::Permutation;

use crate::{CliError, CliResult, Outcome, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    BadCenterCensus,
    VanishingCensus,
    HomotopyFace,
    DimensionOracle,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub p: u32,
    #[serde(default = "default_e_max")]
    pub e_max: u32,
}

fn default_e_max() -> u32 {
    3
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietyConfig {
    pub m: u32,
    #[serde(default)]
    pub n: u32,
    #[serde(default)]
    pub t: u32,
    /// Fiber coordinates of `W`; vanishing censuses only.
    pub z: Option<u32>,
    pub equations: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterPlan {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CentersConfig {
    #[serde(rename = "N")]
    pub degree_bound: u32,
    pub mode: CenterPlan,
    pub sample_size: Option<usize>,
    pub seed: Option<u64>,
    /// Free center coordinates `(i, j)` that vary; the rest are constants.
    pub lambda: Option<Vec<(u32, u32)>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum SigmaSet {
    Named(String),
    List(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub max_enumeration: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleInstance {
    pub name: String,
    /// Defaults to the config's field.
    pub p: Option<u32>,
    pub m: u32,
    #[serde(default)]
    pub n: u32,
    pub equations: Vec<String>,
    /// Known dimension; `null` for an empty variety.
    pub dimension: Option<u32>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaExpect {
    pub sigma: Vec<usize>,
    pub bad_fraction: String,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    pub sigma_bad: Option<Vec<SigmaExpect>>,
    pub joint_bad_fraction: Option<String>,
    /// Upper bound on every per-σ bad fraction, as `"a/b"`.
    pub bad_fraction_at_most: Option<String>,
    pub max_unstable: Option<usize>,
    pub count: Option<u128>,
    pub within_bound: Option<bool>,
    pub outcome: Option<String>,
    pub min_all_pass: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusFile {
    pub v: u32,
    pub kind: Kind,
    pub field: FieldConfig,
    pub variety: Option<VarietyConfig>,
    pub centers: Option<CentersConfig>,
    pub sigma_set: Option<SigmaSet>,
    pub caps: Option<Caps>,
    pub instances: Option<Vec<OracleInstance>>,
    pub expect: Option<Expect>,
}

impl CensusFile {
    /// Parses a config; errors carry the line and column.
    pub fn parse(text: &str) -> CliResult<Self> {
        let file: CensusFile =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if file.v != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema version {}",
                file.v
            )));
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn cap(&self) -> u128 {
        self.caps
            .as_ref()
            .map_or(DEFAULT_CAP, |c| c.max_enumeration as u128)
    }

    fn variety(&self) -> CliResult<&VarietyConfig> {
        self.variety
            .as_ref()
            .ok_or_else(|| CliError::Config("missing \"variety\"".into()))
    }

    fn centers(&self) -> CliResult<&CentersConfig> {
        self.centers
            .as_ref()
            .ok_or_else(|| CliError::Config("missing \"centers\"".into()))
    }

    fn variety_spec(&self) -> CliResult<VarietySpec> {
        let v = self.variety()?;
        if v.z.is_some() {
            return Err(CliError::Config(
                "\"z\" only applies to vanishing censuses".into(),
            ));
        }
        let eqs: Vec<&str> = v.equations.iter().map(String::as_str).collect();
        Ok(VarietySpec::parse(v.m, v.n, v.t, &eqs, self.field.p)?)
    }

    fn census_config(&self, seed_override: Option<u64>) -> CliResult<CensusConfig> {
        let c = self.centers()?;
        let plan = match c.mode {
            CenterPlan::Exhaustive => SamplePlan::Exhaustive,
            CenterPlan::Sampled => SamplePlan::Sampled {
                size: c.sample_size.ok_or_else(|| {
                    CliError::Config("sampled centers need \"sample_size\"".into())
                })?,
                seed: seed_override
                    .or(c.seed)
                    .ok_or_else(|| CliError::Config("sampled centers need \"seed\"".into()))?,
            },
        };
        Ok(CensusConfig {
            degree_bound: c.degree_bound,
            plan,
            lambda: c.lambda.clone(),
            e_max: self.field.e_max,
            cap: self.cap(),
        })
    }

    fn sigmas(&self, n: u32) -> CliResult<Vec<Permutation>> {
        match &self.sigma_set {
            None => Ok(Permutation::all(n as usize)),
            Some(SigmaSet::Named(s)) if s == "all" => Ok(Permutation::all(n as usize)),
            Some(SigmaSet::Named(s)) => Err(CliError::Config(format!("unknown sigma_set {s:?}"))),
            Some(SigmaSet::List(list)) => list
                .iter()
                .map(|images| {
                    let p = Permutation::new(images.clone())?;
                    if p.n() != n as usize {
                        return Err(CliError::Config(format!(
                            "{images:?} does not act on [{n}]"
                        )));
                    }
                    Ok(p)
                })
                .collect(),
        }
    }
}

/// One hard assertion from the `expect` block, or one oracle instance.
#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

impl Assertion {
    fn new(name: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Assertion {
            name: name.into(),
            passed: expected == actual,
            expected,
            actual,
        }
    }
}

fn parse_fraction(s: &str) -> CliResult<(u128, u128)> {
    let bad = || CliError::Config(format!("expected a fraction \"a/b\", got {s:?}"));
    let (a, b) = s.split_once('/').ok_or_else(bad)?;
    let (a, b) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if b == 0 {
        return Err(bad());
    }
    Ok((a, b))
}

fn fraction_at_most(name: String, actual: &str, bound: &str) -> CliResult<Assertion> {
    let (a, b) = parse_fraction(actual)?;
    let (c, d) = parse_fraction(bound)?;
    Ok(Assertion {
        name,
        expected: format!("<= {bound}"),
        actual: actual.to_string(),
        passed: a * d <= c * b,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleEntry {
    pub name: String,
    pub variety: VarietyText,
    pub expected: Degree,
    pub estimate: DimensionEstimate,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum CensusResult {
    BadCenter(CensusReport),
    Vanishing(VanishingReport),
    HomotopyFace(HomotopyFaceReport),
    Oracle(Vec<OracleEntry>),
}

#[derive(Clone, Debug, Serialize)]
struct CensusOutput {
    v: u32,
    command: &'static str,
    kind: Kind,
    e_max: u32,
    variety: Option<VarietyText>,
    result: CensusResult,
    assertions: Vec<Assertion>,
    passed: bool,
}

fn check_bad_center(r: &CensusReport, expect: &Expect) -> CliResult<Vec<Assertion>> {
    let mut out = Vec::new();
    for e in expect.sigma_bad.iter().flatten() {
        let actual = r
            .per_sigma
            .iter()
            .find(|s| s.sigma == e.sigma)
            .map_or("absent", |s| s.bad_fraction.as_str());
        out.push(Assertion::new(
            format!("bad_fraction{:?}", e.sigma),
            &e.bad_fraction,
            actual,
        ));
    }
    if let Some(f) = &expect.joint_bad_fraction {
        out.push(Assertion::new(
            "joint_bad_fraction",
            f,
            &r.joint_bad_fraction,
        ));
    }
    if let Some(bound) = &expect.bad_fraction_at_most {
        for s in &r.per_sigma {
            out.push(fraction_at_most(
                format!("bad_fraction_bound{:?}", s.sigma),
                &s.bad_fraction,
                bound,
            )?);
        }
    }
    if let Some(max) = expect.max_unstable {
        let unstable = r.joint_unstable;
        out.push(Assertion {
            name: "unstable".into(),
            expected: format!("<= {max}"),
            actual: unstable.to_string(),
            passed: unstable <= max,
        });
    }
    Ok(out)
}

fn check_vanishing(r: &VanishingReport, expect: &Expect) -> Vec<Assertion> {
    let mut out = Vec::new();
    if let Some(c) = expect.count {
        out.push(Assertion::new("count", c, r.count));
    }
    if let Some(w) = expect.within_bound {
        out.push(Assertion::new("within_bound", w, r.within_bound));
    }
    if let Some(o) = &expect.outcome {
        out.push(Assertion::new("outcome", o, r.outcome));
    }
    out
}

fn run_oracle(file: &CensusFile) -> CliResult<(Vec<OracleEntry>, Vec<Assertion>)> {
    let instances = file
        .instances
        .as_ref()
        .ok_or_else(|| CliError::Config("missing \"instances\"".into()))?;
    let mut entries = Vec::new();
    for inst in instances {
        let eqs: Vec<&str> = inst.equations.iter().map(String::as_str).collect();
        let v = VarietySpec::parse(inst.m, inst.n, 0, &eqs, inst.p.unwrap_or(file.field.p))?;
        let estimate = estimate_dimension(&v, file.field.e_max, file.cap())?;
        let expected = inst.dimension.map_or(Degree::NegInfinity, Degree::Finite);
        let passed = estimate.stable && estimate.estimate == expected;
        entries.push(OracleEntry {
            name: inst.name.clone(),
            variety: (&v).into(),
            expected,
            estimate,
            passed,
        });
    }
    let assertions = entries
        .iter()
        .map(|e| Assertion {
            name: e.name.clone(),
            expected: format!("{} (stable)", e.expected),
            actual: format!(
                "{}{}",
                e.estimate.estimate,
                if e.estimate.stable {
                    " (stable)"
                } else {
                    " (unstable)"
                }
            ),
            passed: e.passed,
        })
        .collect();
    Ok((entries, assertions))
}

/// Runs a parsed config. `seed` overrides the config's sampling seed.
pub fn run_census_file(file: &CensusFile, seed: Option<u64>) -> CliResult<Outcome> {
    let expect = file.expect.clone().unwrap_or_default();
    let (variety, result, assertions) = match file.kind {
        Kind::BadCenterCensus => {
            let v = file.variety_spec()?;
            let report = bad_center_census(&v, &file.census_config(seed)?, &file.sigmas(v.n)?)?;
            let assertions = check_bad_center(&report, &expect)?;
            (
                Some((&v).into()),
                CensusResult::BadCenter(report),
                assertions,
            )
        }
        Kind::HomotopyFace => {
            let v = file.variety_spec()?;
            let report = homotopy_face_condition_check(&v, &file.census_config(seed)?)?;
            let assertions = match expect.min_all_pass {
                Some(min) => vec![Assertion {
                    name: "all_pass".into(),
                    expected: format!(">= {min}"),
                    actual: report.all_pass.to_string(),
                    passed: report.all_pass >= min,
                }],
                None => Vec::new(),
            };
            (
                Some((&v).into()),
                CensusResult::HomotopyFace(report),
                assertions,
            )
        }
        Kind::VanishingCensus => {
            let vc = file.variety()?;
            let z =
                vc.z.ok_or_else(|| CliError::Config("vanishing censuses need \"z\"".into()))?;
            let eqs: Vec<&str> = vc.equations.iter().map(String::as_str).collect();
            let w = VanishingSpec::parse(vc.m, z, &eqs, file.field.p)?;
            let report = vanishing_census(
                &w,
                file.centers()?.degree_bound,
                file.field.e_max,
                file.cap(),
            )?;
            let mut assertions = check_vanishing(&report, &expect);
            assertions.push(Assertion::new(
                "count_within_bound",
                true,
                report.within_bound,
            ));
            let text = VarietyText {
                m: vc.m,
                n: 0,
                t: 0,
                p: file.field.p,
                equations: vc.equations.clone(),
            };
            (Some(text), CensusResult::Vanishing(report), assertions)
        }
        Kind::DimensionOracle => {
            let (entries, assertions) = run_oracle(file)?;
            (None, CensusResult::Oracle(entries), assertions)
        }
    };
    let passed = assertions.iter().all(|a| a.passed);
    let output = CensusOutput {
        v: SCHEMA_VERSION,
        command: "census",
        kind: file.kind,
        e_max: file.field.e_max,
        variety,
        result,
        assertions,
        passed,
    };
    Outcome::new(&output, passed)
}

pub fn run_census(config: &Path, seed: Option<u64>) -> CliResult<Outcome> {
    run_census_file(&CensusFile::load(config)?, seed)
}
