//! Exact verification of the relations between face maps, subdivision maps
//! and homotopy maps, and of the degree and shape facts of their charts.
//!
//! With symbolic centers every check is an identity of polynomials in the
//! center coordinates, so a pass holds for every field and every choice of
//! centers.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::polycore::{Block, BlockPolynomial, Degree, Ring};
use crate::simplexmaps::{
    chart_matrix, compose, face_map, first_projection, homotopy_map, homotopy_shape,
    subdivision_map, AffineSimplexMap, CenterFamily, ChartSpec, Permutation, ProductTargetMap,
};

/// The unique `τ ∈ 𝔖_{[n-1]}` with `∂_{σ(n)} ∘ τ = σ|_{[n-1]}`, where `∂_v`
/// is the increasing injection `[n-1] → [n]` omitting `v`.
pub fn induced_permutation(sigma: &Permutation) -> Permutation {
    let n = sigma.n();
    assert!(n >= 1, "induced permutation needs n >= 1");
    let top = sigma.apply(n);
    let images = (0..n)
        .map(|j| {
            let v = sigma.apply(j);
            if v < top {
                v
            } else {
                v - 1
            }
        })
        .collect();
    Permutation::new(images).expect("removing the top value keeps a bijection")
}

/// Supplies the maps under test; lets negative controls swap in broken ones.
pub trait MapSource: Sync {
    fn ring(&self) -> &Ring;
    fn subdivision(&self, n: usize, sigma: &Permutation) -> Result<AffineSimplexMap>;
    fn homotopy(&self, n: usize, k: usize, sigma: &Permutation) -> Result<ProductTargetMap>;
}

/// Maps built from a center family.
pub struct StandardMaps<'a> {
    pub family: &'a CenterFamily,
}

impl MapSource for StandardMaps<'_> {
    fn ring(&self) -> &Ring {
        self.family.ring()
    }

    fn subdivision(&self, n: usize, sigma: &Permutation) -> Result<AffineSimplexMap> {
        subdivision_map(n, sigma, self.family)
    }

    fn homotopy(&self, n: usize, k: usize, sigma: &Permutation) -> Result<ProductTargetMap> {
        homotopy_map(n, k, sigma, self.family)
    }
}

/// Which single matrix entry to bump by `+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum Perturbation {
    Subdivision {
        n: usize,
        sigma: Permutation,
        row: usize,
        col: usize,
    },
    Homotopy {
        n: usize,
        k: usize,
        sigma: Permutation,
        row: usize,
        col: usize,
    },
}

/// Standard maps except for one perturbed entry.
pub struct PerturbedMaps<'a> {
    pub family: &'a CenterFamily,
    pub perturbation: Perturbation,
}

impl MapSource for PerturbedMaps<'_> {
    fn ring(&self) -> &Ring {
        self.family.ring()
    }

    fn subdivision(&self, n: usize, sigma: &Permutation) -> Result<AffineSimplexMap> {
        let map = subdivision_map(n, sigma, self.family)?;
        match &self.perturbation {
            Perturbation::Subdivision {
                n: pn,
                sigma: ps,
                row,
                col,
            } if *pn == n && ps == sigma => {
                Ok(map.perturbed(*row, *col, &BlockPolynomial::one(self.ring())))
            }
            _ => Ok(map),
        }
    }

    fn homotopy(&self, n: usize, k: usize, sigma: &Permutation) -> Result<ProductTargetMap> {
        let map = homotopy_map(n, k, sigma, self.family)?;
        match &self.perturbation {
            Perturbation::Homotopy {
                n: pn,
                k: pk,
                sigma: ps,
                row,
                col,
            } if *pn == n && *pk == k && ps == sigma => {
                Ok(map.perturbed(*row, *col, &BlockPolynomial::one(self.ring())))
            }
            _ => Ok(map),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One checked relation instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationRecord {
    pub relation_id: &'static str,
    pub n: usize,
    pub k: Option<usize>,
    pub sigma: Vec<usize>,
    pub face: usize,
    pub status: Status,
    /// First nonzero entry of `lhs - rhs`, or `"0"`.
    pub lhs_minus_rhs: String,
}

impl RelationRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn record(
    relation_id: &'static str,
    n: usize,
    k: Option<usize>,
    sigma: &Permutation,
    face: usize,
    diff: Result<Option<BlockPolynomial>>,
) -> RelationRecord {
    let (status, lhs_minus_rhs) = match diff {
        Ok(None) => (Status::Pass, "0".to_string()),
        Ok(Some(d)) => (Status::Fail, d.to_string()),
        Err(e) => (Status::Error, e.to_string()),
    };
    RelationRecord {
        relation_id,
        n,
        k,
        sigma: sigma.images().to_vec(),
        face,
        status,
        lhs_minus_rhs,
    }
}

fn map_diff(lhs: &AffineSimplexMap, rhs: &AffineSimplexMap) -> Option<BlockPolynomial> {
    lhs.matrix()
        .first_difference(rhs.matrix())
        .map(|(_, _, d)| d)
}

/// `sd_n^σ ∘ ∂_i = sd_n^{σ∘(i,i+1)} ∘ ∂_i` for `i < n`, and
/// `sd_n^σ ∘ ∂_n = ∂_{σ(n)} ∘ sd_{n-1}^τ`.
pub fn check_subdivision_relations(n: usize, source: &dyn MapSource) -> Vec<RelationRecord> {
    if n == 0 {
        return Vec::new();
    }
    let ring = source.ring().clone();
    Permutation::all(n)
        .into_par_iter()
        .flat_map_iter(|sigma| {
            let mut out = Vec::with_capacity(n + 1);
            for i in 0..n {
                let diff = (|| {
                    let face = face_map(i, n, &ring)?;
                    let lhs = compose(&face, &source.subdivision(n, &sigma)?)?;
                    let rhs = compose(&face, &source.subdivision(n, &sigma.swap_adjacent(i)?)?)?;
                    Ok(map_diff(&lhs, &rhs))
                })();
                out.push(record("subdivision_swap", n, None, &sigma, i, diff));
            }
            let diff = (|| {
                let tau = induced_permutation(&sigma);
                let lhs = compose(&face_map(n, n, &ring)?, &source.subdivision(n, &sigma)?)?;
                let rhs = compose(
                    &source.subdivision(n - 1, &tau)?,
                    &face_map(sigma.apply(n), n, &ring)?,
                )?;
                Ok(map_diff(&lhs, &rhs))
            })();
            out.push(record("subdivision_last_face", n, None, &sigma, n, diff));
            out
        })
        .collect()
}

fn product_diff(lhs: &ProductTargetMap, rhs: &ProductTargetMap) -> Option<BlockPolynomial> {
    lhs.first_difference(rhs)
}

/// The six relations between `sd_{n,k}^σ`, faces and `sd_{n-1,*}`.
///
/// Relation 4 is checked for `k+1 < i ≤ n+1`; the face `i = n+1` is needed
/// by the homotopy telescoping and satisfies the same identity. Relation 6
/// only holds for `σ(k) < k`: for `σ(k) = k` the vertex `v_{k-1}` of the
/// smaller map lands on `v_{k-1}` instead of `v_k`. Those faces are covered
/// by relation 5.
pub fn check_patience_relations(n: usize, source: &dyn MapSource) -> Vec<RelationRecord> {
    let ring = source.ring().clone();
    let mut out = Vec::new();

    // (1) sd_{n,0}^{id} ∘ ∂_0 = (id, const_{v_1})
    let id0 = Permutation::identity(0);
    let diff = (|| {
        let lhs = source
            .homotopy(n, 0, &id0)?
            .precompose(&face_map(0, n + 1, &ring)?)?;
        let rhs = ProductTargetMap::with_constant(AffineSimplexMap::identity(&ring, n), 1)?;
        Ok(product_diff(&lhs, &rhs))
    })();
    out.push(record("patience_1", n, Some(0), &id0, 0, diff));

    // (2) sd_{n,n}^σ ∘ ∂_{n+1} = (sd_n^σ, const_{v_0})
    let top: Vec<RelationRecord> = Permutation::all(n)
        .into_par_iter()
        .map(|sigma| {
            let diff = (|| {
                let lhs =
                    source
                        .homotopy(n, n, &sigma)?
                        .precompose(&face_map(n + 1, n + 1, &ring)?)?;
                let rhs = ProductTargetMap::with_constant(source.subdivision(n, &sigma)?, 0)?;
                Ok(product_diff(&lhs, &rhs))
            })();
            record("patience_2", n, Some(n), &sigma, n + 1, diff)
        })
        .collect();
    out.extend(top);

    let instances: Vec<(usize, Permutation)> = (0..=n)
        .flat_map(|k| Permutation::all(k).into_iter().map(move |s| (k, s)))
        .collect();
    let rest: Vec<RelationRecord> = instances
        .into_par_iter()
        .flat_map_iter(|(k, sigma)| {
            let ring = ring.clone();
            let mut recs = Vec::new();
            let h = source.homotopy(n, k, &sigma);
            let lhs_at = |i: usize| -> Result<ProductTargetMap> {
                h.clone()?.precompose(&face_map(i, n + 1, &ring)?)
            };
            // (3) i < k
            for i in 0..k {
                let diff = (|| {
                    let rhs = source
                        .homotopy(n, k, &sigma.swap_adjacent(i)?)?
                        .precompose(&face_map(i, n + 1, &ring)?)?;
                    Ok(product_diff(&lhs_at(i)?, &rhs))
                })();
                recs.push(record("patience_3", n, Some(k), &sigma, i, diff));
            }
            // (4) k+1 < i ≤ n+1
            for i in k + 2..=n + 1 {
                let diff = (|| {
                    let rhs = source
                        .homotopy(n - 1, k, &sigma)?
                        .postcompose_first(&face_map(i - 1, n, &ring)?)?;
                    Ok(product_diff(&lhs_at(i)?, &rhs))
                })();
                recs.push(record("patience_4", n, Some(k), &sigma, i, diff));
            }
            // (5) k < n
            if k < n {
                let diff = (|| {
                    let ext = sigma.extend_fixing_top();
                    let rhs = source.homotopy(n, k + 1, &ext)?.precompose(&face_map(
                        k + 1,
                        n + 1,
                        &ring,
                    )?)?;
                    Ok(product_diff(&lhs_at(k + 1)?, &rhs))
                })();
                recs.push(record("patience_5", n, Some(k), &sigma, k + 1, diff));
            }
            // (6) k ≥ 1 and σ(k) < k; when σ(k) = k the face ∂_k is the one
            // identified by (5) at level k - 1.
            if k >= 1 && sigma.apply(k) < k {
                let diff = (|| {
                    let tau = induced_permutation(&sigma);
                    let rhs = source
                        .homotopy(n - 1, k - 1, &tau)?
                        .postcompose_first(&face_map(sigma.apply(k), n, &ring)?)?;
                    Ok(product_diff(&lhs_at(k)?, &rhs))
                })();
                recs.push(record("patience_6", n, Some(k), &sigma, k, diff));
            }
            recs
        })
        .collect();
    out.extend(rest);
    out
}

/// Cross-check: the subdivision maps recovered as `pr_1(sd_{n,n}^σ ∘ ∂_{n+1})`
/// coincide with the directly built ones and satisfy the subdivision relations.
pub fn check_projection_consistency(n: usize, source: &dyn MapSource) -> Vec<RelationRecord> {
    struct Projected<'a> {
        inner: &'a dyn MapSource,
    }
    impl MapSource for Projected<'_> {
        fn ring(&self) -> &Ring {
            self.inner.ring()
        }
        fn subdivision(&self, n: usize, sigma: &Permutation) -> Result<AffineSimplexMap> {
            let last = face_map(n + 1, n + 1, self.inner.ring())?;
            Ok(first_projection(
                &self.inner.homotopy(n, n, sigma)?.precompose(&last)?,
            ))
        }
        fn homotopy(&self, n: usize, k: usize, sigma: &Permutation) -> Result<ProductTargetMap> {
            self.inner.homotopy(n, k, sigma)
        }
    }
    let projected = Projected { inner: source };
    let mut out: Vec<RelationRecord> = Permutation::all(n)
        .into_iter()
        .map(|sigma| {
            let diff = (|| {
                Ok(map_diff(
                    &projected.subdivision(n, &sigma)?,
                    &source.subdivision(n, &sigma)?,
                ))
            })();
            record(
                "projection_matches_subdivision",
                n,
                Some(n),
                &sigma,
                n + 1,
                diff,
            )
        })
        .collect();
    out.extend(
        check_subdivision_relations(n, &projected)
            .into_iter()
            .map(|mut r| {
                r.relation_id = match r.relation_id {
                    "subdivision_swap" => "projected_subdivision_swap",
                    _ => "projected_subdivision_last_face",
                };
                r
            }),
    );
    out
}

/// Every `sd_n^σ` and every `sd_{n,k}^σ` sends vertices to barycentric points.
pub fn check_barycentric(n: usize, source: &dyn MapSource) -> Vec<RelationRecord> {
    let column_defect = |m: &AffineSimplexMap| {
        let matrix = m.matrix();
        matrix
            .first_bad_column_sum()
            .map(|c| &matrix.column_sum(c) - &BlockPolynomial::one(m.ring()))
    };
    let mut out: Vec<RelationRecord> = Permutation::all(n)
        .into_par_iter()
        .map(|sigma| {
            let diff = source.subdivision(n, &sigma).map(|m| column_defect(&m));
            record("barycentric_subdivision", n, None, &sigma, 0, diff)
        })
        .collect();
    let instances: Vec<(usize, Permutation)> = (0..=n)
        .flat_map(|k| Permutation::all(k).into_iter().map(move |s| (k, s)))
        .collect();
    out.extend(
        instances
            .into_par_iter()
            .map(|(k, sigma)| {
                let diff = source
                    .homotopy(n, k, &sigma)
                    .map(|h| column_defect(h.first()).or_else(|| column_defect(h.second())));
                record("barycentric_homotopy", n, Some(k), &sigma, 0, diff)
            })
            .collect::<Vec<_>>(),
    );
    out
}

/// Every relation family at level `n`, plus the barycentric check of the maps.
pub fn check_all_relations(n: usize, source: &dyn MapSource) -> Vec<RelationRecord> {
    let mut out = check_barycentric(n, source);
    out.extend(check_subdivision_relations(n, source));
    out.extend(check_patience_relations(n, source));
    out
}

/// Result of perturbing one entry and re-running the checks at the same level.
#[derive(Clone, Debug, Serialize)]
pub struct NegativeControl {
    pub perturbation: Perturbation,
    pub failures: usize,
}

/// Perturbs every entry of every `sd_n^σ` and every `pr_1 sd_{n,k}^σ` in turn.
pub fn perturbation_controls(n: usize, family: &CenterFamily) -> Vec<NegativeControl> {
    let mut perturbations = Vec::new();
    for sigma in Permutation::all(n) {
        for row in 0..=n {
            for col in 0..=n {
                perturbations.push(Perturbation::Subdivision {
                    n,
                    sigma: sigma.clone(),
                    row,
                    col,
                });
            }
        }
    }
    for k in 0..=n {
        for sigma in Permutation::all(k) {
            for row in 0..=n {
                for col in 0..=n + 1 {
                    perturbations.push(Perturbation::Homotopy {
                        n,
                        k,
                        sigma: sigma.clone(),
                        row,
                        col,
                    });
                }
            }
        }
    }
    perturbations
        .into_par_iter()
        .map(|perturbation| {
            let source = PerturbedMaps {
                family,
                perturbation: perturbation.clone(),
            };
            let failures = check_all_relations(n, &source)
                .iter()
                .filter(|r| !r.passed())
                .count();
            NegativeControl {
                perturbation,
                failures,
            }
        })
        .collect()
}

/// Degree and shape facts for one chart.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeEntry {
    pub kind: &'static str,
    pub n: usize,
    pub k: Option<usize>,
    pub sigma: Vec<usize>,
    /// T-degree of the barycentric output forms before charting.
    pub barycentric_t_degree: Degree,
    /// T-degree of the chart's affine forms (`Y_i` realized as `T_i`).
    pub chart_t_degree: Degree,
    /// Largest X-degree of a chart entry.
    pub chart_x_degree: Degree,
    pub offset_zero: bool,
    pub upper_triangular: Option<bool>,
    pub unit_column_ok: Option<bool>,
    pub identity_block_ok: Option<bool>,
    pub differs_from_display: Option<bool>,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub n: usize,
    pub degree_bound: Option<u32>,
    pub entries: Vec<DegreeEntry>,
    pub violations: usize,
    pub display_discrepancies: usize,
}

impl DegreeReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn max_degree(polys: &[BlockPolynomial], block: Block) -> Degree {
    polys
        .iter()
        .map(|p| p.block_degree(block))
        .max()
        .unwrap_or(Degree::NegInfinity)
}

/// Degree entry for a subdivision-type chart of an arbitrary map; shape
/// flags are computed against the chart's source/target orders.
pub fn subdivision_degree_entry(
    n: usize,
    sigma: &Permutation,
    map: &AffineSimplexMap,
    degree_bound: Option<u32>,
) -> Result<DegreeEntry> {
    let chart = chart_matrix(map, &ChartSpec::subdivision(sigma))?;
    let forms = chart.affine_forms();
    let mut entry = DegreeEntry {
        kind: "subdivision",
        n,
        k: None,
        sigma: sigma.images().to_vec(),
        barycentric_t_degree: max_degree(&map.output_forms(), Block::T),
        chart_t_degree: max_degree(&forms, Block::T),
        chart_x_degree: chart
            .linear
            .max_block_degree(Block::X)
            .max(max_degree(&chart.offset, Block::X)),
        offset_zero: chart.has_zero_offset(),
        upper_triangular: Some(chart.is_upper_triangular()),
        unit_column_ok: None,
        identity_block_ok: None,
        differs_from_display: None,
        violations: Vec::new(),
    };
    collect_violations(&mut entry, degree_bound);
    Ok(entry)
}

pub fn homotopy_degree_entry(
    n: usize,
    sigma: &Permutation,
    map: &AffineSimplexMap,
    degree_bound: Option<u32>,
) -> Result<DegreeEntry> {
    let chart = chart_matrix(map, &ChartSpec::homotopy(n, sigma))?;
    let shape = homotopy_shape(sigma, &chart);
    let mut entry = DegreeEntry {
        kind: "homotopy",
        n,
        k: Some(sigma.n()),
        sigma: sigma.images().to_vec(),
        barycentric_t_degree: max_degree(&map.output_forms(), Block::T),
        chart_t_degree: max_degree(&chart.affine_forms(), Block::T),
        chart_x_degree: chart
            .linear
            .max_block_degree(Block::X)
            .max(max_degree(&chart.offset, Block::X)),
        offset_zero: shape.offset_zero,
        upper_triangular: Some(shape.triangular_block_ok),
        unit_column_ok: Some(shape.unit_column_ok),
        identity_block_ok: Some(shape.identity_block_ok),
        differs_from_display: Some(shape.differs_from_display()),
        violations: Vec::new(),
    };
    collect_violations(&mut entry, degree_bound);
    Ok(entry)
}

fn collect_violations(entry: &mut DegreeEntry, degree_bound: Option<u32>) {
    let mut v = Vec::new();
    if !entry.barycentric_t_degree.is_at_most(1) {
        v.push(format!(
            "barycentric T-degree {} > 1",
            entry.barycentric_t_degree
        ));
    }
    if !entry.chart_t_degree.is_at_most(1) {
        v.push(format!("chart T-degree {} > 1", entry.chart_t_degree));
    }
    if let Some(bound) = degree_bound {
        if !entry.chart_x_degree.is_at_most(bound) {
            v.push(format!("chart X-degree {} > {bound}", entry.chart_x_degree));
        }
    }
    if !entry.offset_zero {
        v.push("nonzero chart offset".into());
    }
    for (flag, name) in [
        (entry.upper_triangular, "not upper triangular"),
        (entry.unit_column_ok, "unit column misplaced"),
        (
            entry.identity_block_ok,
            "trailing block is not the identity",
        ),
    ] {
        if flag == Some(false) {
            v.push(name.into());
        }
    }
    entry.violations = v;
}

/// Degree/shape facts for every `sd_n^σ` and every `pr_1 ∘ sd_{n,k}^σ`.
pub fn degree_report(n: usize, family: &CenterFamily) -> Result<DegreeReport> {
    degree_report_with(n, &StandardMaps { family }, family.degree_bound())
}

pub fn degree_report_with(
    n: usize,
    source: &dyn MapSource,
    degree_bound: Option<u32>,
) -> Result<DegreeReport> {
    let mut entries = Vec::new();
    for sigma in Permutation::all(n) {
        entries.push(subdivision_degree_entry(
            n,
            &sigma,
            &source.subdivision(n, &sigma)?,
            degree_bound,
        )?);
    }
    for k in 0..=n {
        for sigma in Permutation::all(k) {
            let map = first_projection(&source.homotopy(n, k, &sigma)?);
            entries.push(homotopy_degree_entry(n, &sigma, &map, degree_bound)?);
        }
    }
    let violations = entries.iter().map(|e| e.violations.len()).sum();
    let display_discrepancies = entries
        .iter()
        .filter(|e| e.differs_from_display == Some(true))
        .count();
    Ok(DegreeReport {
        n,
        degree_bound,
        entries,
        violations,
        display_discrepancies,
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::polycore::Var;

    /// Solves `∂_{σ(n)} ∘ τ = σ|_{[n-1]}` by trying every `τ`.
    fn induced_by_search(sigma: &Permutation) -> Vec<Permutation> {
        let n = sigma.n();
        let omit = sigma.apply(n);
        let inject = |j: usize| if j < omit { j } else { j + 1 };
        Permutation::all(n - 1)
            .into_iter()
            .filter(|tau| (0..n).all(|j| inject(tau.apply(j)) == sigma.apply(j)))
            .collect()
    }

    #[test]
    fn induced_permutation_examples() {
        assert_eq!(
            induced_permutation(&Permutation::identity(3)),
            Permutation::identity(2)
        );
        let sigma = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(induced_permutation(&sigma).images(), &[1, 0]);
        for n in 1..=4 {
            for sigma in Permutation::all(n) {
                let found = induced_by_search(&sigma);
                assert_eq!(found.len(), 1, "σ={sigma}");
                assert_eq!(found[0], induced_permutation(&sigma));
            }
        }
    }

    #[test]
    fn subdivision_relations_small() {
        let fam = CenterFamily::symbolic(2);
        let src = StandardMaps { family: &fam };
        let r1 = check_subdivision_relations(1, &src);
        assert_eq!(r1.len(), 4);
        assert!(r1.iter().all(RelationRecord::passed));
        let r2 = check_subdivision_relations(2, &src);
        assert_eq!(r2.len(), 18);
        assert!(r2.iter().all(RelationRecord::passed));
    }

    #[test]
    fn corrupted_center_is_caught() {
        let r = Ring::Rational;
        let c = BlockPolynomial::var(&r, Var::C(1, 0));
        let fam = CenterFamily::symbolic(2).with_center_unchecked(1, vec![c.clone(), c]);
        let src = StandardMaps { family: &fam };
        let recs = check_all_relations(2, &src);
        assert!(recs.iter().any(|r| !r.passed()));
    }

    #[test]
    fn patience_relations_small() {
        let fam = CenterFamily::symbolic(2);
        let src = StandardMaps { family: &fam };
        let r0 = check_patience_relations(0, &src);
        let ids: Vec<_> = r0.iter().map(|r| r.relation_id).collect();
        assert_eq!(ids, vec!["patience_1", "patience_2"]);
        assert!(r0.iter().all(RelationRecord::passed));
        let r2 = check_patience_relations(2, &src);
        assert!(
            r2.iter().all(RelationRecord::passed),
            "{:?}",
            r2.iter().find(|r| !r.passed())
        );
    }

    #[test]
    fn relation_six_fails_exactly_when_top_is_fixed() {
        let fam = CenterFamily::symbolic(3);
        let ring = Ring::Rational;
        for n in 1..=3 {
            for k in 1..=n {
                for sigma in Permutation::all(k) {
                    let lhs = homotopy_map(n, k, &sigma, &fam)
                        .unwrap()
                        .precompose(&face_map(k, n + 1, &ring).unwrap())
                        .unwrap();
                    let rhs = homotopy_map(n - 1, k - 1, &induced_permutation(&sigma), &fam)
                        .unwrap()
                        .postcompose_first(&face_map(sigma.apply(k), n, &ring).unwrap())
                        .unwrap();
                    assert_eq!(lhs == rhs, sigma.apply(k) < k, "n={n} k={k} σ={sigma}");
                }
            }
        }
    }

    #[test]
    fn projections_agree() {
        let fam = CenterFamily::symbolic(3);
        let src = StandardMaps { family: &fam };
        for n in 1..=3 {
            assert!(check_projection_consistency(n, &src)
                .iter()
                .all(RelationRecord::passed));
        }
    }

    #[test]
    fn every_single_perturbation_breaks_a_relation() {
        let fam = CenterFamily::symbolic(2);
        for n in 1..=2 {
            for ctl in perturbation_controls(n, &fam) {
                assert!(ctl.failures > 0, "{:?}", ctl.perturbation);
            }
        }
    }

    #[test]
    fn degree_report_with_polynomial_centers() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fam = CenterFamily::random_polynomial(2, 2, 3, &Ring::Rational, &mut rng);
        let report = degree_report(2, &fam).unwrap();
        assert!(
            report.passed(),
            "{:?}",
            report.entries.iter().find(|e| !e.violations.is_empty())
        );
        assert!(report
            .entries
            .iter()
            .all(|e| e.chart_t_degree == Degree::Finite(1)));
        assert!(report
            .entries
            .iter()
            .all(|e| e.chart_x_degree.is_at_most(3)));
        assert_eq!(report.entries.len(), 6 + 9);
    }

    #[test]
    fn injected_t_entry_is_flagged() {
        let fam = CenterFamily::symbolic(2);
        let sigma = Permutation::identity(2);
        let t1 = BlockPolynomial::var(&Ring::Rational, Var::T(1));
        let bad = subdivision_map(2, &sigma, &fam)
            .unwrap()
            .perturbed(1, 1, &t1);
        let entry = subdivision_degree_entry(2, &sigma, &bad, None).unwrap();
        assert_eq!(entry.chart_t_degree, Degree::Finite(2));
        assert!(!entry.violations.is_empty());
    }
}
