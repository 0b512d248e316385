use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polycore::{BlockPolynomial, Degree, FieldDescriptor, Scalar, Var};

/// `F_p, F_{p^2}, .., F_{p^{e_max}}` with their canonical moduli.
#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u32,
    fields: Vec<Arc<FieldDescriptor>>,
}

impl FieldTower {
    pub fn new(p: u32, e_max: u32) -> Result<Self> {
        if e_max == 0 {
            return Err(Error::InvalidField("e_max must be >= 1".into()));
        }
        let fields = (1..=e_max)
            .map(|e| FieldDescriptor::build(p, e).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        Ok(FieldTower { p, fields })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e_max(&self) -> u32 {
        self.fields.len() as u32
    }

    /// `F_{p^e}`, `1 ≤ e ≤ e_max`.
    pub fn field(&self, e: u32) -> &FieldDescriptor {
        &self.fields[e as usize - 1]
    }
}

/// A polynomial over `F_p` lowered to slot-indexed terms for fast evaluation
/// in any `F_{p^e}`; prime-field elements keep their encoding in extensions.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(u32, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    /// `slot_of` maps each variable to its slot; unmapped variables are an error.
    pub fn compile(poly: &BlockPolynomial, slot_of: impl Fn(Var) -> Option<usize>) -> Result<Self> {
        let mut terms = Vec::with_capacity(poly.num_terms());
        for (mon, c) in poly.terms() {
            let Scalar::Finite(coeff) = c else {
                return Err(Error::IncompatibleModes);
            };
            let powers = mon
                .powers()
                .iter()
                .map(|&(v, e)| {
                    slot_of(v)
                        .map(|s| (s, e))
                        .ok_or_else(|| Error::UndeclaredVariable(v.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            terms.push((*coeff, powers));
        }
        Ok(CompiledPoly { terms })
    }

    pub fn eval(&self, field: &FieldDescriptor, values: &[u32]) -> u32 {
        let mut acc = 0;
        for (coeff, powers) in &self.terms {
            let mut t = *coeff;
            for &(slot, e) in powers {
                if t == 0 {
                    break;
                }
                t = field.mul(t, field.pow(values[slot], e as u64));
            }
            acc = field.add(acc, t);
        }
        acc
    }
}

/// Equations over `slots` unknowns; a point is a common zero.
#[derive(Clone, Debug)]
pub struct CompiledSystem {
    pub slots: usize,
    pub equations: Vec<CompiledPoly>,
}

impl CompiledSystem {
    pub fn is_zero_at(&self, field: &FieldDescriptor, values: &[u32]) -> bool {
        self.equations.iter().all(|eq| eq.eval(field, values) == 0)
    }

    /// Number of points over `field` with the `Some` slots of `fixed` held.
    /// Fails when the enumeration would exceed `cap` assignments.
    pub fn count(&self, field: &FieldDescriptor, fixed: &[Option<u32>], cap: u128) -> Result<u64> {
        assert_eq!(
            fixed.len(),
            self.slots,
            "fixed values must cover every slot"
        );
        let free: Vec<usize> = (0..self.slots).filter(|&s| fixed[s].is_none()).collect();
        let q = field.order();
        let size = (q as u128)
            .checked_pow(free.len() as u32)
            .unwrap_or(u128::MAX);
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        let base: Vec<u32> = fixed.iter().map(|v| v.unwrap_or(0)).collect();
        let Some((&first, rest)) = free.split_first() else {
            return Ok(self.is_zero_at(field, &base) as u64);
        };
        let count_with = |lead: u32| -> u64 {
            let mut values = base.clone();
            values[first] = lead;
            let mut total = 0u64;
            loop {
                total += self.is_zero_at(field, &values) as u64;
                let mut i = 0;
                loop {
                    if i == rest.len() {
                        return total;
                    }
                    let s = rest[i];
                    values[s] += 1;
                    if values[s] < q {
                        break;
                    }
                    values[s] = 0;
                    i += 1;
                }
            }
        };
        if size < 4096 {
            Ok((0..q).map(count_with).sum())
        } else {
            Ok((0..q).into_par_iter().map(count_with).sum())
        }
    }

    /// All points over `field` with the `Some` slots of `fixed` held, in
    /// lexicographic slot order.
    pub fn points(
        &self,
        field: &FieldDescriptor,
        fixed: &[Option<u32>],
        cap: u128,
    ) -> Result<Vec<Vec<u32>>> {
        let free: Vec<usize> = (0..self.slots).filter(|&s| fixed[s].is_none()).collect();
        let q = field.order();
        let size = (q as u128)
            .checked_pow(free.len() as u32)
            .unwrap_or(u128::MAX);
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        let mut values: Vec<u32> = fixed.iter().map(|v| v.unwrap_or(0)).collect();
        let mut out = Vec::new();
        loop {
            if self.is_zero_at(field, &values) {
                out.push(values.clone());
            }
            let mut i = free.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                let s = free[i];
                values[s] += 1;
                if values[s] < q {
                    break;
                }
                values[s] = 0;
            }
        }
    }
}

/// Dimension read off from point counts over `F_{q^e}`, `e = 1..E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionEstimate {
    pub q: u32,
    pub counts: Vec<u64>,
    /// `round(log N_e / (e log q))`, or `-inf` when `N_e = 0`.
    pub per_e: Vec<Degree>,
    pub estimate: Degree,
    /// The estimates at the two largest `e` agree.
    pub stable: bool,
}

fn per_e_estimate(count: u64, e: u32, q: u32) -> Degree {
    if count == 0 {
        Degree::NegInfinity
    } else {
        let d = (count as f64).ln() / (e as f64 * (q as f64).ln());
        Degree::Finite(d.round() as u32)
    }
}

impl DimensionEstimate {
    pub fn from_counts(q: u32, counts: Vec<u64>) -> Self {
        assert!(!counts.is_empty(), "at least one count");
        let per_e: Vec<Degree> = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| per_e_estimate(c, i as u32 + 1, q))
            .collect();
        let estimate = counts
            .iter()
            .rposition(|&c| c > 0)
            .map_or(Degree::NegInfinity, |i| per_e[i]);
        let stable = match per_e.len() {
            1 => true,
            k => per_e[k - 1] == per_e[k - 2],
        };
        DimensionEstimate {
            q,
            counts,
            per_e,
            estimate,
            stable,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.estimate == Degree::NegInfinity
    }
}

/// Counts over `F_{p^e}` for every `e` of the tower and estimates the dimension.
pub fn estimate_system(
    system: &CompiledSystem,
    fixed: &[Option<u32>],
    tower: &FieldTower,
    cap: u128,
) -> Result<DimensionEstimate> {
    let counts = (1..=tower.e_max())
        .map(|e| system.count(tower.field(e), fixed, cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(DimensionEstimate::from_counts(tower.p(), counts))
}
