use serde::Serialize;

use super::count::{estimate_system, DimensionEstimate, FieldTower};
use super::variety::VarietySpec;
use crate::error::{Error, Result};
use crate::polycore::Degree;

/// Default bound on the number of assignments a single count may enumerate.
pub const DEFAULT_CAP: u128 = 50_000_000;

/// Number of points of `V` over `F_{p^e}` (all of `𝔸^m × Δ^n`, through the
/// chart `T0 = 1 - Σ T_i`).
pub fn count_points(v: &VarietySpec, e: u32, cap: u128) -> Result<u64> {
    let field = crate::polycore::FieldDescriptor::build(v.p(), e)?;
    v.compile()?.count(&field, &vec![None; v.slots()], cap)
}

pub fn estimate_dimension(v: &VarietySpec, e_max: u32, cap: u128) -> Result<DimensionEstimate> {
    if e_max < 2 {
        return Err(Error::Config("dimension estimates need e_max >= 2".into()));
    }
    let tower = FieldTower::new(v.p(), e_max)?;
    estimate_system(&v.compile()?, &vec![None; v.slots()], &tower, cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// Passes because the restriction is empty.
    Empty,
    Fail,
    /// Some estimate involved is unstable; not classified.
    Unstable,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceEntry {
    pub face: Vec<usize>,
    pub estimate: DimensionEstimate,
    /// `d̂(V) - (n - n')`.
    pub bound: Option<i64>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceReport {
    pub total: DimensionEstimate,
    pub faces: Vec<FaceEntry>,
    pub failures: usize,
    pub unstable: usize,
}

impl FaceReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.unstable == 0
    }
}

/// Nonempty proper subsets of `{0..n}`, by size then lexicographically.
pub fn proper_faces(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..(1 << (n + 1)) - 1)
        .map(|mask| (0..=n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn degree_value(d: Degree) -> Option<i64> {
    d.finite().map(i64::from)
}

/// For every ordered inclusion `[n'] ↪ [n]`, compares `d̂(V ∩ face)` with
/// `d̂(V) - (n - n')`. Empty restrictions pass.
pub fn face_condition_check(v: &VarietySpec, e_max: u32, cap: u128) -> Result<FaceReport> {
    let total = estimate_dimension(v, e_max, cap)?;
    let mut faces = Vec::new();
    for face in proper_faces(v.n as usize) {
        let restricted = v.restrict_to_face(&face)?;
        let estimate = estimate_dimension(&restricted, e_max, cap)?;
        let codim = v.n as i64 - (face.len() as i64 - 1);
        let bound = degree_value(total.estimate).map(|d| d - codim);
        let verdict = if estimate.is_empty() && estimate.stable {
            Verdict::Empty
        } else if !estimate.stable || !total.stable {
            Verdict::Unstable
        } else {
            match (degree_value(estimate.estimate), bound) {
                (Some(d), Some(b)) if d <= b => Verdict::Pass,
                _ => Verdict::Fail,
            }
        };
        faces.push(FaceEntry {
            face,
            estimate,
            bound,
            verdict,
        });
    }
    let failures = faces.iter().filter(|f| f.verdict == Verdict::Fail).count();
    let unstable = faces
        .iter()
        .filter(|f| f.verdict == Verdict::Unstable)
        .count();
    Ok(FaceReport {
        total,
        faces,
        failures,
        unstable,
    })
}

/// Points `y = (t_1..t_n) ∈ F_p^n` of `Δ^n(F_p)` in the chart `t_0 = 1 - Σ t_i`.
pub fn rational_points(n: u32, p: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|pt| (0..p).map(move |x| [pt.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberEntry {
    pub point: Vec<u32>,
    pub estimate: DimensionEstimate,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquidimReport {
    pub t: u32,
    pub points: usize,
    pub max_fiber: Degree,
    /// Fibers with a stable estimate above `t`.
    pub bad: Vec<FiberEntry>,
    pub unstable: Vec<FiberEntry>,
    pub verdict: Verdict,
}

impl EquidimReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Pass | Verdict::Empty)
    }
}

/// Estimates the fiber over every `y ∈ Δ^n(F_p)`; stops at the first bad
/// fiber when `stop_early`.
pub fn equidim_check_with(
    v: &VarietySpec,
    tower: &FieldTower,
    cap: u128,
    stop_early: bool,
) -> Result<EquidimReport> {
    let system = v.compile()?;
    let points = rational_points(v.n, v.p());
    let mut max_fiber = Degree::NegInfinity;
    let mut bad = Vec::new();
    let mut unstable = Vec::new();
    let mut checked = 0;
    for y in points {
        checked += 1;
        let mut fixed = vec![None; v.slots()];
        for (i, &c) in y.iter().enumerate() {
            fixed[v.m as usize + i] = Some(c);
        }
        let estimate = estimate_system(&system, &fixed, tower, cap)?;
        max_fiber = max_fiber.max(estimate.estimate);
        let entry = FiberEntry { point: y, estimate };
        if !entry.estimate.stable {
            unstable.push(entry);
        } else if !entry.estimate.estimate.is_at_most(v.t) {
            bad.push(entry);
            if stop_early {
                break;
            }
        }
    }
    let verdict = if !bad.is_empty() {
        Verdict::Fail
    } else if !unstable.is_empty() {
        Verdict::Unstable
    } else if max_fiber == Degree::NegInfinity {
        Verdict::Empty
    } else {
        Verdict::Pass
    };
    Ok(EquidimReport {
        t: v.t,
        points: checked,
        max_fiber,
        bad,
        unstable,
        verdict,
    })
}

/// Every fiber over `Δ^n(F_p)` has estimated dimension at most `t`.
pub fn equidim_check(v: &VarietySpec, e_max: u32, cap: u128) -> Result<EquidimReport> {
    let tower = FieldTower::new(v.p(), e_max)?;
    equidim_check_with(v, &tower, cap, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_of_interval_and_triangle() {
        assert_eq!(proper_faces(1), vec![vec![0], vec![1]]);
        assert_eq!(proper_faces(2).len(), 6);
        assert_eq!(rational_points(2, 3).len(), 9);
        assert_eq!(rational_points(0, 3), vec![Vec::<u32>::new()]);
    }
}
