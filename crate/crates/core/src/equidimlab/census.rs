use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::checks::{equidim_check_with, estimate_dimension, face_condition_check, Verdict};
use super::count::{CompiledPoly, CompiledSystem, FieldTower};
use super::variety::{pullback_variety, VarietySpec};
use crate::error::{Error, Result};
use crate::polycore::{parse_poly, BlockPolynomial, Degree, Monomial, Ring, Scalar, Var, VarDecl};
use crate::simplexmaps::{
    first_projection, homotopy_map, monomials_up_to, subdivision_map, CenterFamily, CenterMode,
    Permutation,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SamplePlan {
    Exhaustive,
    Sampled { size: usize, seed: u64 },
}

/// Which center coordinates vary and how.
#[derive(Clone, Debug, Serialize)]
pub struct CensusConfig {
    /// X-degree bound `N` of the varying coordinates.
    pub degree_bound: u32,
    pub plan: SamplePlan,
    /// Varying coordinates `(i, j)`: coordinate `j < i` of center `c^i`.
    /// The others are constants. `None` means all vary.
    pub lambda: Option<Vec<(u32, u32)>>,
    pub e_max: u32,
    pub cap: u128,
}

impl CensusConfig {
    fn varies(&self, i: u32, j: u32) -> bool {
        self.lambda.as_ref().is_none_or(|l| l.contains(&(i, j)))
    }

    fn validate(&self, n: u32) -> Result<()> {
        if let Some(l) = &self.lambda {
            if let Some(&(i, j)) = l.iter().find(|&&(i, j)| i == 0 || i > n || j >= i) {
                return Err(Error::Config(format!(
                    "({i}, {j}) is not a free center coordinate for n = {n}"
                )));
            }
        }
        if self.e_max < 2 {
            return Err(Error::Config("dimension estimates need e_max >= 2".into()));
        }
        Ok(())
    }
}

/// Parameter layout of a center family: one monomial list per free coordinate.
struct CenterSpace {
    m: u32,
    n: u32,
    coords: Vec<(u32, u32, Vec<Monomial>)>,
}

impl CenterSpace {
    fn new(m: u32, n: u32, cfg: &CensusConfig) -> Self {
        let mut coords = Vec::new();
        for i in 1..=n {
            for j in 0..i {
                let monomials = if cfg.varies(i, j) {
                    monomials_up_to(m, cfg.degree_bound)
                } else {
                    vec![Monomial::one()]
                };
                coords.push((i, j, monomials));
            }
        }
        CenterSpace { m, n, coords }
    }

    fn parameters(&self) -> usize {
        self.coords.iter().map(|(_, _, mons)| mons.len()).sum()
    }

    fn size(&self, q: u32) -> u128 {
        (q as u128)
            .checked_pow(self.parameters() as u32)
            .unwrap_or(u128::MAX)
    }

    fn decode(&self, mut index: u128, q: u32) -> Vec<u32> {
        (0..self.parameters())
            .map(|_| {
                let d = (index % q as u128) as u32;
                index /= q as u128;
                d
            })
            .collect()
    }

    fn family(&self, ring: &Ring, degree_bound: u32, params: &[u32]) -> Result<CenterFamily> {
        let mut free: Vec<Vec<BlockPolynomial>> = vec![Vec::new(); self.n as usize + 1];
        let mut it = params.iter();
        for (i, _, mons) in &self.coords {
            let poly = BlockPolynomial::from_terms(
                ring,
                mons.iter().map(|mon| {
                    (
                        mon.clone(),
                        Scalar::Finite(*it.next().expect("enough parameters")),
                    )
                }),
            );
            free[*i as usize].push(poly);
        }
        CenterFamily::from_free_coordinates(
            ring,
            CenterMode::Polynomial {
                m: self.m,
                degree_bound,
            },
            free,
        )
    }
}

fn parameter_list(space: &CenterSpace, q: u32, cfg: &CensusConfig) -> Result<Vec<Vec<u32>>> {
    match &cfg.plan {
        SamplePlan::Exhaustive => {
            let size = space.size(q);
            if size > cfg.cap {
                return Err(Error::CapExceeded { size, cap: cfg.cap });
            }
            Ok((0..size).map(|i| space.decode(i, q)).collect())
        }
        SamplePlan::Sampled { size, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok((0..*size)
                .map(|_| {
                    (0..space.parameters())
                        .map(|_| rng.gen_range(0..q))
                        .collect()
                })
                .collect())
        }
    }
}

fn fraction(num: usize, den: usize) -> String {
    format!("{num}/{den}")
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaCensus {
    pub sigma: Vec<usize>,
    pub bad: usize,
    pub unstable: usize,
    pub bad_fraction: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub q: u32,
    pub m: u32,
    pub n: u32,
    pub t: u32,
    pub degree_bound: u32,
    pub plan: SamplePlan,
    pub centers_checked: usize,
    pub per_sigma: Vec<SigmaCensus>,
    /// Bad for at least one σ.
    pub joint_bad: usize,
    pub joint_unstable: usize,
    pub joint_bad_fraction: String,
    /// `N ≥ n + 1`; results outside it are heuristic.
    pub hypothesis_met: bool,
    pub note: &'static str,
}

const CENSUS_NOTE: &str =
    "bad centers lie in a locus of positive codimension, so the bad fraction is expected to shrink as q grows";

/// For each center family in the plan and each σ, checks whether the
/// `sd_n^σ`-pullback of `V` has a fiber of estimated dimension above `t`.
pub fn bad_center_census(
    v: &VarietySpec,
    cfg: &CensusConfig,
    sigmas: &[Permutation],
) -> Result<CensusReport> {
    cfg.validate(v.n)?;
    if let Some(s) = sigmas.iter().find(|s| s.n() != v.n as usize) {
        return Err(Error::InvalidPermutation(format!(
            "{s} does not act on [{}]",
            v.n
        )));
    }
    let q = v.p();
    let ring = v.ring().clone();
    let tower = FieldTower::new(q, cfg.e_max)?;
    let space = CenterSpace::new(v.m, v.n, cfg);
    let params = parameter_list(&space, q, cfg)?;
    let verdicts: Vec<Vec<Verdict>> = params
        .par_iter()
        .map(|p| {
            let family = space.family(&ring, cfg.degree_bound, p)?;
            sigmas
                .iter()
                .map(|sigma| {
                    let pulled =
                        pullback_variety(v, &subdivision_map(v.n as usize, sigma, &family)?)?;
                    Ok(equidim_check_with(&pulled, &tower, cfg.cap, true)?.verdict)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let total = params.len();
    let per_sigma = sigmas
        .iter()
        .enumerate()
        .map(|(k, sigma)| {
            let bad = verdicts.iter().filter(|v| v[k] == Verdict::Fail).count();
            let unstable = verdicts
                .iter()
                .filter(|v| v[k] == Verdict::Unstable)
                .count();
            SigmaCensus {
                sigma: sigma.images().to_vec(),
                bad,
                unstable,
                bad_fraction: fraction(bad, total),
            }
        })
        .collect();
    let joint_bad = verdicts
        .iter()
        .filter(|v| v.contains(&Verdict::Fail))
        .count();
    let joint_unstable = verdicts
        .iter()
        .filter(|v| !v.contains(&Verdict::Fail) && v.contains(&Verdict::Unstable))
        .count();
    Ok(CensusReport {
        q,
        m: v.m,
        n: v.n,
        t: v.t,
        degree_bound: cfg.degree_bound,
        plan: cfg.plan.clone(),
        centers_checked: total,
        per_sigma,
        joint_bad,
        joint_unstable,
        joint_bad_fraction: fraction(joint_bad, total),
        hypothesis_met: cfg.degree_bound > v.n,
        note: CENSUS_NOTE,
    })
}

/// `W ⊂ 𝔸^m × 𝔸^z` over `F_p`: equations in `X1..Xm` (base) and
/// `X{m+1}..X{m+z}` (the coordinates `Z_1..Z_z`).
#[derive(Clone, Debug)]
pub struct VanishingSpec {
    pub m: u32,
    pub z: u32,
    pub equations: Vec<BlockPolynomial>,
    ring: Ring,
}

impl VanishingSpec {
    pub fn parse(m: u32, z: u32, equations: &[&str], p: u32) -> Result<Self> {
        if z == 0 {
            return Err(Error::Config("W needs at least one Z coordinate".into()));
        }
        let ring = Ring::prime_field(p)?;
        let decl = VarDecl::new(m + z, 0, 0);
        let equations = equations
            .iter()
            .map(|e| {
                let poly = parse_poly(e, &decl, &ring)?;
                if poly.variables().iter().any(|v| matches!(v, Var::T(_))) {
                    return Err(Error::UndeclaredVariable("T".into()));
                }
                Ok(poly)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VanishingSpec {
            m,
            z,
            equations,
            ring,
        })
    }

    pub fn p(&self) -> u32 {
        self.ring.field().expect("prime field").characteristic()
    }

    fn compile(&self) -> Result<CompiledSystem> {
        let slots = (self.m + self.z) as usize;
        let slot_of = |v: Var| match v {
            Var::X(i) if i >= 1 && i as usize <= slots => Some(i as usize - 1),
            _ => None,
        };
        let equations = self
            .equations
            .iter()
            .filter(|e| !e.is_zero())
            .map(|e| CompiledPoly::compile(e, slot_of))
            .collect::<Result<Vec<_>>>()?;
        Ok(CompiledSystem { slots, equations })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub q: u32,
    pub degree_bound: u32,
    pub e_max: u32,
    /// `|F_q[X]_{≤N}|`.
    pub candidates: u128,
    /// Polynomials `C` with `Z_1 - C(X)` zero at every point of `W` over `F_{q^e}`, `e ≤ e_max`.
    pub count: u128,
    /// `|F_q[X]_{≤N}| · q^{-(N+1)}`.
    pub bound: u128,
    pub within_bound: bool,
    pub points_checked: usize,
    /// Every point of `W` has the same `F_q`-rational base coordinates.
    pub image_is_point: bool,
    pub outcome: &'static str,
}

pub fn vanishing_census(
    w: &VanishingSpec,
    degree_bound: u32,
    e_max: u32,
    cap: u128,
) -> Result<VanishingReport> {
    let q = w.p();
    let tower = FieldTower::new(q, e_max)?;
    let system = w.compile()?;
    let mut points: Vec<(u32, Vec<u32>)> = Vec::new();
    for e in 1..=e_max {
        let field = tower.field(e);
        let found = system.points(field, &vec![None; system.slots], cap)?;
        points.extend(found.into_iter().map(|p| (e, p)));
    }
    if points.is_empty() {
        return Err(Error::Config(
            "W has no points over the fields checked".into(),
        ));
    }
    let m = w.m as usize;
    let base = &points[0].1[..m];
    let image_is_point = base.iter().all(|&x| x < q) && points.iter().all(|(_, p)| &p[..m] == base);
    let monomials = monomials_up_to(w.m, degree_bound);
    let compiled: Vec<CompiledPoly> = monomials
        .iter()
        .map(|mon| {
            let poly = BlockPolynomial::term(&w.ring, Scalar::Finite(1), mon.clone());
            CompiledPoly::compile(&poly, |v| match v {
                Var::X(i) if i >= 1 && i <= w.m => Some(i as usize - 1),
                _ => None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let candidates = (q as u128)
        .checked_pow(monomials.len() as u32)
        .unwrap_or(u128::MAX);
    if candidates > cap {
        return Err(Error::CapExceeded {
            size: candidates,
            cap,
        });
    }
    // Monomial values at each point, so a candidate is a dot product.
    let table: Vec<(u32, Vec<u32>, u32)> = points
        .iter()
        .map(|(e, p)| {
            let field = tower.field(*e);
            (
                *e,
                compiled.iter().map(|c| c.eval(field, p)).collect(),
                p[m],
            )
        })
        .collect();
    let count = (0..candidates)
        .into_par_iter()
        .filter(|&idx| {
            let mut rest = idx;
            let coeffs: Vec<u32> = (0..monomials.len())
                .map(|_| {
                    let d = (rest % q as u128) as u32;
                    rest /= q as u128;
                    d
                })
                .collect();
            table.iter().all(|(e, mons, z1)| {
                let field = tower.field(*e);
                let c = coeffs
                    .iter()
                    .zip(mons)
                    .fold(0, |acc, (&a, &x)| field.add(acc, field.mul(a, x)));
                c == *z1
            })
        })
        .count() as u128;
    let exponent = monomials.len() as u32;
    let bound = if exponent > degree_bound {
        (q as u128).pow(exponent - degree_bound - 1)
    } else {
        0
    };
    Ok(VanishingReport {
        q,
        degree_bound,
        e_max,
        candidates,
        count,
        bound,
        within_bound: count <= bound,
        points_checked: points.len(),
        image_is_point,
        outcome: if image_is_point {
            "empty inverse image"
        } else {
            "counted"
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyPullbackEntry {
    pub k: usize,
    pub sigma: Vec<usize>,
    pub total_dimension: Degree,
    pub dimension_ok: bool,
    pub face_failures: usize,
    pub face_unstable: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyFaceReport {
    pub centers_checked: usize,
    pub all_pass: usize,
    pub pass_fraction: String,
    /// Entries for the first center family, as a sample.
    pub first_family: Vec<HomotopyPullbackEntry>,
}

/// For each center family in the plan, checks that every
/// `(pr_1 ∘ sd_{n,k}^σ)`-pullback of `V` has estimated dimension `n + t + 1`
/// and satisfies the face condition. Empty `V` passes vacuously.
pub fn homotopy_face_condition_check(
    v: &VarietySpec,
    cfg: &CensusConfig,
) -> Result<HomotopyFaceReport> {
    cfg.validate(v.n)?;
    let q = v.p();
    let ring = v.ring().clone();
    let space = CenterSpace::new(v.m, v.n, cfg);
    let params = parameter_list(&space, q, cfg)?;
    let v_empty = estimate_dimension(v, cfg.e_max, cfg.cap)?.is_empty();
    let expected = Degree::Finite(v.n + v.t + 1);
    let n = v.n as usize;
    let results: Vec<Vec<HomotopyPullbackEntry>> = params
        .par_iter()
        .map(|p| {
            let family = space.family(&ring, cfg.degree_bound, p)?;
            let mut entries = Vec::new();
            for k in 0..=n {
                for sigma in Permutation::all(k) {
                    let map = first_projection(&homotopy_map(n, k, &sigma, &family)?);
                    let pulled = pullback_variety(v, &map)?;
                    let faces = face_condition_check(&pulled, cfg.e_max, cfg.cap)?;
                    let total_dimension = faces.total.estimate;
                    entries.push(HomotopyPullbackEntry {
                        k,
                        sigma: sigma.images().to_vec(),
                        total_dimension,
                        dimension_ok: if v_empty {
                            total_dimension == Degree::NegInfinity
                        } else {
                            total_dimension == expected
                        },
                        face_failures: faces.failures,
                        face_unstable: faces.unstable,
                    });
                }
            }
            Ok(entries)
        })
        .collect::<Result<Vec<_>>>()?;
    let ok =
        |e: &HomotopyPullbackEntry| e.dimension_ok && e.face_failures == 0 && e.face_unstable == 0;
    let all_pass = results
        .iter()
        .filter(|entries| entries.iter().all(ok))
        .count();
    Ok(HomotopyFaceReport {
        centers_checked: results.len(),
        all_pass,
        pass_fraction: fraction(all_pass, results.len()),
        first_family: results.into_iter().next().unwrap_or_default(),
    })
}
