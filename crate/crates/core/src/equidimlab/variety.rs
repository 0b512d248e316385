use std::collections::HashMap;

use serde::Serialize;

use super::count::{CompiledPoly, CompiledSystem};
use crate::error::{Error, Result};
use crate::polycore::{parse_poly, Block, BlockPolynomial, Degree, Ring, Var, VarDecl};
use crate::simplexmaps::AffineSimplexMap;

/// A closed subset of `𝔸^m × Δ^n` over `F_p`, cut out by polynomials in
/// `X1..Xm`, `T0..Tn` together with the implicit `Σ T_i = 1`. `t` is the
/// expected fiber dimension over `Δ^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietySpec {
    pub m: u32,
    pub n: u32,
    pub t: u32,
    pub equations: Vec<BlockPolynomial>,
    ring: Ring,
}

impl VarietySpec {
    pub fn new(
        m: u32,
        n: u32,
        t: u32,
        equations: Vec<BlockPolynomial>,
        ring: &Ring,
    ) -> Result<Self> {
        let field = ring.field().ok_or(Error::IncompatibleModes)?;
        if field.degree() != 1 {
            return Err(Error::InvalidField(
                "varieties are declared over a prime field".into(),
            ));
        }
        let decl = VarDecl::new(m, n, 0);
        for eq in &equations {
            if !eq.ring().is_same(ring) {
                return Err(Error::IncompatibleModes);
            }
            eq.check_declared(&decl)?;
        }
        Ok(VarietySpec {
            m,
            n,
            t,
            equations,
            ring: ring.clone(),
        })
    }

    pub fn parse(m: u32, n: u32, t: u32, equations: &[&str], p: u32) -> Result<Self> {
        let ring = Ring::prime_field(p)?;
        let decl = VarDecl::new(m, n, 0);
        let eqs = equations
            .iter()
            .map(|e| parse_poly(e, &decl, &ring))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, n, t, eqs, &ring)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn p(&self) -> u32 {
        self.ring.field().expect("prime field").characteristic()
    }

    pub fn max_t_degree(&self) -> Degree {
        self.equations
            .iter()
            .map(|e| e.block_degree(Block::T))
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    /// Equations with `T0 = 1 - Σ_{i≥1} T_i` substituted.
    pub fn chart_equations(&self) -> Vec<BlockPolynomial> {
        let r = &self.ring;
        let t0 = (1..=self.n).fold(BlockPolynomial::one(r), |acc, i| {
            &acc - &BlockPolynomial::var(r, Var::T(i))
        });
        let assignment = HashMap::from([(Var::T(0), t0)]);
        self.equations
            .iter()
            .map(|e| e.substitute(&assignment).expect("same ring"))
            .collect()
    }

    /// Slots: `X1..Xm` then `T1..Tn`.
    pub fn slot_of(&self, v: Var) -> Option<usize> {
        match v {
            Var::X(i) if i >= 1 && i <= self.m => Some(i as usize - 1),
            Var::T(i) if i >= 1 && i <= self.n => Some((self.m + i - 1) as usize),
            _ => None,
        }
    }

    pub fn slots(&self) -> usize {
        (self.m + self.n) as usize
    }

    pub fn compile(&self) -> Result<CompiledSystem> {
        let equations = self
            .chart_equations()
            .iter()
            .filter(|e| !e.is_zero())
            .map(|e| CompiledPoly::compile(e, |v| self.slot_of(v)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CompiledSystem {
            slots: self.slots(),
            equations,
        })
    }

    /// Restriction to the face spanned by the vertices in `face` (strictly
    /// increasing): new `T_a` is old `T_{face[a]}`, omitted coordinates are 0.
    pub fn restrict_to_face(&self, face: &[usize]) -> Result<VarietySpec> {
        if face.is_empty()
            || face.windows(2).any(|w| w[0] >= w[1])
            || *face.last().unwrap() > self.n as usize
        {
            return Err(Error::DimensionMismatch(format!(
                "{face:?} is not a face of Δ^{}",
                self.n
            )));
        }
        let r = &self.ring;
        let assignment: HashMap<Var, BlockPolynomial> = (0..=self.n as usize)
            .map(|i| {
                let value = match face.iter().position(|&v| v == i) {
                    Some(a) => BlockPolynomial::var(r, Var::T(a as u32)),
                    None => BlockPolynomial::zero(r),
                };
                (Var::T(i as u32), value)
            })
            .collect();
        let equations = self
            .equations
            .iter()
            .map(|e| e.substitute(&assignment))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.m, face.len() as u32 - 1, self.t, equations, r)
    }
}

/// Pulls `V ⊂ 𝔸^m × Δ^n` back along an `𝔸^m`-map `Δ^s → Δ^n` by substituting
/// `T_r ↦ Σ_c M[r][c] T_c`.
pub fn pullback_variety(v: &VarietySpec, map: &AffineSimplexMap) -> Result<VarietySpec> {
    if map.target_dim() != v.n as usize {
        return Err(Error::DimensionMismatch(format!(
            "map lands in Δ^{}, variety lives over Δ^{}",
            map.target_dim(),
            v.n
        )));
    }
    if !map.ring().is_same(v.ring()) {
        return Err(Error::IncompatibleModes);
    }
    if let Some(bad) = map
        .matrix()
        .entries()
        .iter()
        .find(|e| !e.block_degree(Block::T).is_at_most(0))
    {
        return Err(Error::DegenerateChart(format!(
            "map entry {bad} depends on T"
        )));
    }
    let assignment: HashMap<Var, BlockPolynomial> = map
        .output_forms()
        .into_iter()
        .enumerate()
        .map(|(r, f)| (Var::T(r as u32), f))
        .collect();
    let equations = v
        .equations
        .iter()
        .map(|e| e.substitute(&assignment))
        .collect::<Result<Vec<_>>>()?;
    VarietySpec::new(v.m, map.source_dim() as u32, v.t, equations, v.ring())
}

/// Text form of a variety, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct VarietyText {
    pub m: u32,
    pub n: u32,
    pub t: u32,
    pub p: u32,
    pub equations: Vec<String>,
}

impl From<&VarietySpec> for VarietyText {
    fn from(v: &VarietySpec) -> Self {
        VarietyText {
            m: v.m,
            n: v.n,
            t: v.t,
            p: v.p(),
            equations: v.equations.iter().map(|e| e.to_string()).collect(),
        }
    }
}
