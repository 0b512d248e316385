use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polycore::{Ring, Scalar, Var};
use crate::simplexmaps::{
    compose, face_map, first_projection, homotopy_map, subdivision_map, AffineSimplexMap,
    CenterFamily, MapJson, Permutation,
};

/// A formal `ℤ`-linear combination of simplex maps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalMapSum {
    pub terms: Vec<(i64, AffineSimplexMap)>,
}

impl FormalMapSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, coeff: i64, map: AffineSimplexMap) {
        self.terms.push((coeff, map));
    }

    pub fn extend_scaled(&mut self, scale: i64, other: &FormalMapSum) {
        self.terms
            .extend(other.terms.iter().map(|(c, m)| (scale * c, m.clone())));
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Combines equal maps and drops zero coefficients; the result is sorted by map.
pub fn formal_sum_reduce(x: &FormalMapSum) -> FormalMapSum {
    let mut acc: BTreeMap<&AffineSimplexMap, i64> = BTreeMap::new();
    for (c, m) in &x.terms {
        *acc.entry(m).or_insert(0) += c;
    }
    FormalMapSum {
        terms: acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| (c, m.clone()))
            .collect(),
    }
}

/// `(ε, λ)`: sign of the `H∘d` side and the global unit of the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Convention {
    pub epsilon: i64,
    pub lambda: i64,
}

impl Convention {
    pub fn all() -> [Convention; 4] {
        [(1, 1), (1, -1), (-1, 1), (-1, -1)].map(|(epsilon, lambda)| Convention { epsilon, lambda })
    }
}

fn sign(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn homotopy_instances(s: usize) -> Vec<(usize, Permutation)> {
    (0..=s)
        .flat_map(|k| Permutation::all(k).into_iter().map(move |p| (k, p)))
        .collect()
}

/// `Σ (-1)^σ (-1)^k (-1)^i [(pr_1 ∘ sd_{s,k}^σ) ∘ ∂_i]` over `k ≤ s`, `σ ∈ 𝔖_{[k]}`, `i ≤ s+1`.
pub fn d_h_side(s: usize, family: &CenterFamily) -> Result<FormalMapSum> {
    let ring = family.ring().clone();
    let faces = (0..=s + 1)
        .map(|i| face_map(i, s + 1, &ring))
        .collect::<Result<Vec<_>>>()?;
    let chunks = homotopy_instances(s)
        .into_par_iter()
        .map(|(k, sigma)| {
            let h = first_projection(&homotopy_map(s, k, &sigma, family)?);
            faces
                .iter()
                .enumerate()
                .map(|(i, face)| Ok((sigma.sign() * sign(k) * sign(i), compose(face, &h)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FormalMapSum {
        terms: chunks.into_iter().flatten().collect(),
    })
}

/// `Σ (-1)^j (-1)^σ (-1)^k [∂_j ∘ (pr_1 ∘ sd_{s-1,k}^σ)]` over `j ≤ s`, `k ≤ s-1`, `σ ∈ 𝔖_{[k]}`.
pub fn h_d_side(s: usize, family: &CenterFamily) -> Result<FormalMapSum> {
    if s == 0 {
        return Ok(FormalMapSum::new());
    }
    let ring = family.ring().clone();
    let faces = (0..=s)
        .map(|j| face_map(j, s, &ring))
        .collect::<Result<Vec<_>>>()?;
    let chunks = homotopy_instances(s - 1)
        .into_par_iter()
        .map(|(k, sigma)| {
            let h = first_projection(&homotopy_map(s - 1, k, &sigma, family)?);
            faces
                .iter()
                .enumerate()
                .map(|(j, face)| Ok((sign(j) * sigma.sign() * sign(k), compose(&h, face)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FormalMapSum {
        terms: chunks.into_iter().flatten().collect(),
    })
}

/// `[id] - Σ_{σ ∈ 𝔖_{[s]}} (-1)^σ [sd_s^σ]`.
pub fn canonical_minus_subdivision(s: usize, family: &CenterFamily) -> Result<FormalMapSum> {
    let mut out = FormalMapSum::new();
    out.push(1, AffineSimplexMap::identity(family.ring(), s));
    for sigma in Permutation::all(s) {
        out.push(-sigma.sign(), subdivision_map(s, &sigma, family)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualTerm {
    pub coeff: i64,
    pub map: MapJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct TelescopeReport {
    pub s: usize,
    pub convention: Convention,
    pub d_h_terms: usize,
    pub h_d_terms: usize,
    pub pre_reduction_terms: usize,
    /// `(a) + ε (b) - λ ([id] - Σ (-1)^σ [sd_s^σ])` after reduction.
    pub residual_terms: Vec<ResidualTerm>,
    pub status: &'static str,
}

impl TelescopeReport {
    pub fn passed(&self) -> bool {
        self.residual_terms.is_empty()
    }
}

/// The pieces of one telescoping check, kept for reuse across conventions.
pub struct TelescopeSides {
    pub s: usize,
    pub d_h: FormalMapSum,
    pub h_d: FormalMapSum,
    pub target: FormalMapSum,
}

impl TelescopeSides {
    pub fn build(s: usize, family: &CenterFamily) -> Result<Self> {
        Ok(TelescopeSides {
            s,
            d_h: d_h_side(s, family)?,
            h_d: h_d_side(s, family)?,
            target: canonical_minus_subdivision(s, family)?,
        })
    }

    pub fn combined(&self, convention: Convention) -> FormalMapSum {
        let mut sum = self.d_h.clone();
        sum.extend_scaled(convention.epsilon, &self.h_d);
        sum
    }

    pub fn residual(&self, convention: Convention) -> FormalMapSum {
        let mut sum = self.combined(convention);
        sum.extend_scaled(-convention.lambda, &self.target);
        formal_sum_reduce(&sum)
    }

    pub fn report(&self, convention: Convention) -> TelescopeReport {
        let residual = self.residual(convention);
        TelescopeReport {
            s: self.s,
            convention,
            d_h_terms: self.d_h.len(),
            h_d_terms: self.h_d.len(),
            pre_reduction_terms: self.d_h.len() + self.h_d.len(),
            status: if residual.is_empty() { "pass" } else { "fail" },
            residual_terms: residual
                .terms
                .into_iter()
                .map(|(coeff, m)| ResidualTerm {
                    coeff,
                    map: m.to_json(),
                })
                .collect(),
        }
    }
}

pub fn homotopy_boundary(
    s: usize,
    family: &CenterFamily,
    convention: Convention,
) -> Result<TelescopeReport> {
    Ok(TelescopeSides::build(s, family)?.report(convention))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConventionSearch {
    /// Conventions with zero residual, per `s`.
    pub working: Vec<(usize, Vec<Convention>)>,
    /// Conventions working for every `s` checked.
    pub common: Vec<Convention>,
    /// The common convention when it is unique.
    pub unique: Option<Convention>,
}

/// Runs all four conventions for `s = 0..=s_max`. At `s = 0` the `H∘d` side
/// is empty and the target vanishes, so every convention works there;
/// uniqueness comes from `s ≥ 1`.
pub fn search_conventions(s_max: usize, family: &CenterFamily) -> Result<ConventionSearch> {
    let mut working = Vec::new();
    for s in 0..=s_max {
        let sides = TelescopeSides::build(s, family)?;
        let ok: Vec<Convention> = Convention::all()
            .into_iter()
            .filter(|&c| sides.residual(c).is_empty())
            .collect();
        working.push((s, ok));
    }
    let common: Vec<Convention> = Convention::all()
        .into_iter()
        .filter(|c| working.iter().all(|(_, ok)| ok.contains(c)))
        .collect();
    let unique = if common.len() == 1 {
        Some(common[0])
    } else {
        None
    };
    Ok(ConventionSearch {
        working,
        common,
        unique,
    })
}

/// Maps a rational scalar into a prime field; fails on a denominator divisible by `p`.
fn rational_into(ring: &Ring, c: &Scalar) -> Result<Scalar> {
    match c {
        Scalar::Rational(q) => ring.from_fraction(q.numer(), q.denom()),
        Scalar::Finite(_) => Err(Error::IncompatibleModes),
    }
}

/// Substitutes `C<i>_<j> ↦ c^i_j` of a concrete family into a symbolic
/// rational map, reducing coefficients into the family's field.
pub fn specialize_map(map: &AffineSimplexMap, family: &CenterFamily) -> Result<AffineSimplexMap> {
    let ring = family.ring();
    let mut assignment = HashMap::new();
    for i in 0..=family.n_max() {
        for (j, c) in family.center(i)?.coords().iter().take(i).enumerate() {
            assignment.insert(Var::C(i as u32, j as u32), c.clone());
        }
    }
    let matrix = map.matrix().map_entries(ring, |e| {
        e.map_coefficients(ring, |c| rational_into(ring, c))?
            .substitute(&assignment)
    })?;
    AffineSimplexMap::from_matrix_unchecked(matrix)
}

pub fn specialize_sum(sum: &FormalMapSum, family: &CenterFamily) -> Result<FormalMapSum> {
    let terms = sum
        .terms
        .par_iter()
        .map(|(c, m)| Ok((*c, specialize_map(m, family)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FormalMapSum { terms })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecializationReport {
    pub s: usize,
    pub q: u32,
    pub degree_bound: u32,
    pub seed: u64,
    /// The telescoping residual over the concrete family is zero.
    pub residual_zero: bool,
    /// Reducing the specialized symbolic terms equals reducing the terms
    /// built directly from the concrete centers.
    pub commutes: bool,
}

/// Compares the symbolic telescoping with the one for seeded random
/// centers of X-degree `degree_bound` in one variable over `F_q`.
pub fn specialization_check(
    s: usize,
    convention: Convention,
    q: u32,
    degree_bound: u32,
    seed: u64,
) -> Result<SpecializationReport> {
    let symbolic = CenterFamily::symbolic(s);
    let concrete = CenterFamily::sampled(s, 1, degree_bound, q, seed)?;
    let sym_sides = TelescopeSides::build(s, &symbolic)?;
    let con_sides = TelescopeSides::build(s, &concrete)?;
    let mut sym_all = sym_sides.combined(convention);
    sym_all.extend_scaled(-convention.lambda, &sym_sides.target);
    let mut con_all = con_sides.combined(convention);
    con_all.extend_scaled(-convention.lambda, &con_sides.target);
    let specialized = formal_sum_reduce(&specialize_sum(&sym_all, &concrete)?);
    let direct = formal_sum_reduce(&con_all);
    Ok(SpecializationReport {
        s,
        q,
        degree_bound,
        seed,
        residual_zero: direct.is_empty(),
        commutes: specialized == direct,
    })
}
