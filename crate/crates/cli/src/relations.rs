use serde::Serialize;
use subdivide::polycore::{BlockPolynomial, Ring, Var};
use subdivide::relcheck::{
    check_barycentric, check_patience_relations, check_projection_consistency,
    check_subdivision_relations, MapSource, Perturbation, PerturbedMaps, RelationRecord,
    StandardMaps,
};
use subdivide::simplexmaps::{all_homotopy_maps, all_subdivision_maps, CenterFamily, Permutation};

use crate::{CliError, CliResult, Outcome, SCHEMA_VERSION};

/// Largest level accepted without tripping the size guard.
pub const MAX_N: usize = 4;

#[derive(Clone, Debug, Default)]
pub struct RelationsOptions {
    pub max_n: usize,
    /// Replace `c^1` by the non-barycentric point `(C1_0, C1_0)`.
    pub corrupt_center: bool,
    /// Add 1 to entry `(row, col)` of `sd_{max_n}^id`.
    pub perturb_entry: Option<(usize, usize)>,
}

#[derive(Serialize)]
struct MapCounts {
    n: usize,
    subdivision_maps: usize,
    homotopy_maps: usize,
}

#[derive(Serialize)]
struct Summary {
    checked: usize,
    failures: usize,
}

#[derive(Serialize)]
struct RelationsReport {
    v: u32,
    command: &'static str,
    max_n: usize,
    centers: &'static str,
    perturbation: Option<Perturbation>,
    counts: Vec<MapCounts>,
    barycentric: Vec<RelationRecord>,
    subdivision: Vec<RelationRecord>,
    patience: Vec<RelationRecord>,
    projection: Vec<RelationRecord>,
    summary: Summary,
    passed: bool,
}

pub fn run_relations(opts: &RelationsOptions) -> CliResult<Outcome> {
    let max_n = opts.max_n;
    if max_n > MAX_N {
        return Err(CliError::Usage(format!("--max-n is capped at {MAX_N}")));
    }
    let mut family = CenterFamily::symbolic(max_n);
    if opts.corrupt_center {
        if max_n == 0 {
            return Err(CliError::Usage(
                "--corrupt-center needs --max-n >= 1".into(),
            ));
        }
        let c = BlockPolynomial::var(&Ring::Rational, Var::C(1, 0));
        family = family.with_center_unchecked(1, vec![c.clone(), c]);
    }
    let perturbation = match opts.perturb_entry {
        None => None,
        Some((row, col)) if max_n >= 1 && row <= max_n && col <= max_n => {
            Some(Perturbation::Subdivision {
                n: max_n,
                sigma: Permutation::identity(max_n),
                row,
                col,
            })
        }
        Some((row, col)) => {
            return Err(CliError::Usage(format!(
                "entry ({row}, {col}) is not in sd_{max_n}"
            )));
        }
    };
    let source: Box<dyn MapSource> = match &perturbation {
        Some(p) => Box::new(PerturbedMaps {
            family: &family,
            perturbation: p.clone(),
        }),
        None => Box::new(StandardMaps { family: &family }),
    };

    let reference = CenterFamily::symbolic(max_n);
    let mut counts = Vec::new();
    let (mut barycentric, mut subdivision, mut patience, mut projection) =
        (vec![], vec![], vec![], vec![]);
    for n in 0..=max_n {
        counts.push(MapCounts {
            n,
            subdivision_maps: all_subdivision_maps(n, &reference)?.len(),
            homotopy_maps: all_homotopy_maps(n, &reference)?.len(),
        });
        barycentric.extend(check_barycentric(n, source.as_ref()));
        subdivision.extend(check_subdivision_relations(n, source.as_ref()));
        patience.extend(check_patience_relations(n, source.as_ref()));
        projection.extend(check_projection_consistency(n, source.as_ref()));
    }
    let all = || {
        barycentric
            .iter()
            .chain(&subdivision)
            .chain(&patience)
            .chain(&projection)
    };
    let summary = Summary {
        checked: all().count(),
        failures: all().filter(|r| !r.passed()).count(),
    };
    let passed = summary.failures == 0;
    let report = RelationsReport {
        v: SCHEMA_VERSION,
        command: "relations",
        max_n,
        centers: if opts.corrupt_center {
            "corrupted"
        } else {
            "symbolic"
        },
        perturbation,
        counts,
        barycentric,
        subdivision,
        patience,
        projection,
        summary,
        passed,
    };
    Outcome::new(&report, passed)
}
