//! Affine charts on simplices and the coordinate form of simplex maps.
//!
//! A chart on `Δ^p` picks an origin vertex `o` and axis vertices `a_1..a_p`;
//! the affine coordinate `Y_i` of a point is its barycentric coordinate at
//! `a_i`. In such charts an affine simplex map becomes `Z = offset + C · Y`.

use serde::Serialize;

use super::maps::AffineSimplexMap;
use super::matrix::PolyMatrix;
use super::permutation::Permutation;
use crate::error::{Error, Result};
use crate::polycore::{BlockPolynomial, Var};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplexChart {
    pub origin: usize,
    pub axes: Vec<usize>,
}

impl SimplexChart {
    pub fn new(origin: usize, axes: Vec<usize>) -> Result<Self> {
        let chart = SimplexChart { origin, axes };
        chart.validate()?;
        Ok(chart)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.axes.len();
        let mut seen = vec![false; n + 1];
        for &v in std::iter::once(&self.origin).chain(&self.axes) {
            if v > n {
                return Err(Error::DegenerateChart(format!(
                    "vertex {v} is not a vertex of Δ^{n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::DegenerateChart(format!("vertex {v} is repeated")));
            }
        }
        Ok(())
    }
}

/// Source and target charts for extracting a coordinate matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartSpec {
    pub source: SimplexChart,
    pub target: SimplexChart,
}

impl ChartSpec {
    /// Source origin `v_0` with axes `v_i`; target origin `v_{σ(0)}` with
    /// axes `v_{σ(i)}`.
    pub fn subdivision(sigma: &Permutation) -> Self {
        let n = sigma.n();
        ChartSpec {
            source: SimplexChart {
                origin: 0,
                axes: (1..=n).collect(),
            },
            target: SimplexChart {
                origin: sigma.apply(0),
                axes: (1..=n).map(|i| sigma.apply(i)).collect(),
            },
        }
    }

    /// Chart for `pr_1 ∘ sd_{n,k}^σ`: source `Δ^{n+1}` with origin `v_0`;
    /// target origin `v_{σ(0)}`, axes `v_{σ(i)}` for `i ≤ k` then `v_i` for `i > k`.
    pub fn homotopy(n: usize, sigma: &Permutation) -> Self {
        let k = sigma.n();
        let axes = (1..=k).map(|i| sigma.apply(i)).chain(k + 1..=n).collect();
        ChartSpec {
            source: SimplexChart {
                origin: 0,
                axes: (1..=n + 1).collect(),
            },
            target: SimplexChart {
                origin: sigma.apply(0),
                axes,
            },
        }
    }
}

/// `Z_j = offset_j + Σ_i linear[j][i] Y_i`, rows and columns 0-based for
/// `Z_1..Z_q`, `Y_1..Y_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartMatrix {
    pub linear: PolyMatrix,
    pub offset: Vec<BlockPolynomial>,
}

impl ChartMatrix {
    pub fn has_zero_offset(&self) -> bool {
        self.offset.iter().all(BlockPolynomial::is_zero)
    }

    /// `linear[j][i] = 0` whenever `j > i`.
    pub fn is_upper_triangular(&self) -> bool {
        (0..self.linear.rows())
            .all(|j| (0..self.linear.cols().min(j)).all(|i| self.linear.get(j, i).is_zero()))
    }

    /// The affine forms with `Y_i` realized as the simplex variable `T_i`.
    pub fn affine_forms(&self) -> Vec<BlockPolynomial> {
        let ring = self.linear.ring();
        (0..self.linear.rows())
            .map(|j| {
                (0..self.linear.cols()).fold(self.offset[j].clone(), |acc, i| {
                    let y = BlockPolynomial::var(ring, Var::T(i as u32 + 1));
                    &acc + &(self.linear.get(j, i) * &y)
                })
            })
            .collect()
    }
}

pub fn chart_matrix(map: &AffineSimplexMap, spec: &ChartSpec) -> Result<ChartMatrix> {
    spec.source.validate()?;
    spec.target.validate()?;
    if spec.source.dim() != map.source_dim() || spec.target.dim() != map.target_dim() {
        return Err(Error::DimensionMismatch(format!(
            "chart dimensions ({}, {}) do not match the map Δ^{} → Δ^{}",
            spec.source.dim(),
            spec.target.dim(),
            map.source_dim(),
            map.target_dim()
        )));
    }
    let m = map.matrix();
    let ring = map.ring();
    let o = spec.source.origin;
    let mut linear = PolyMatrix::zeros(ring, spec.target.dim(), spec.source.dim());
    let mut offset = Vec::with_capacity(spec.target.dim());
    for (j, &b) in spec.target.axes.iter().enumerate() {
        offset.push(m.get(b, o).clone());
        for (i, &a) in spec.source.axes.iter().enumerate() {
            linear.set(j, i, m.get(b, a) - m.get(b, o));
        }
    }
    Ok(ChartMatrix { linear, offset })
}

/// Shape of the homotopy chart of `pr_1 ∘ sd_{n,k}^σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyShape {
    /// Row (1-based, as `Z_row`) predicted for the unit of column `k+1`:
    /// `σ^{-1}(k)`.
    pub stated_unit_row: usize,
    /// Row actually holding the unit, or `None` when column `k+1` vanishes.
    pub observed_unit_row: Option<usize>,
    /// Column `k+1` is `v_k - v_{σ(0)}` in target coordinates: the unit vector
    /// at `σ^{-1}(k)`, or zero when `σ(0) = k` (then `v_k` is the origin).
    pub unit_column_ok: bool,
    pub identity_block_ok: bool,
    /// The leading `k × k` block is upper triangular and all other entries
    /// outside the stated pattern vanish.
    pub triangular_block_ok: bool,
    pub offset_zero: bool,
}

impl HomotopyShape {
    /// The predicted unit row is not where the unit sits (only when `σ(0) = k`,
    /// so the predicted row is the origin row 0 and column `k+1` vanishes).
    pub fn differs_from_display(&self) -> bool {
        self.observed_unit_row != Some(self.stated_unit_row)
    }
}

pub fn homotopy_shape(sigma: &Permutation, chart: &ChartMatrix) -> HomotopyShape {
    let k = sigma.n();
    let stated_unit_row = sigma.inverse().apply(k);
    let lin = &chart.linear;
    let unit_col = k; // 0-based index of Y_{k+1}
    let nonzero: Vec<usize> = (0..lin.rows())
        .filter(|&j| !lin.get(j, unit_col).is_zero())
        .collect();
    let observed_unit_row = match nonzero.as_slice() {
        [j] if lin.get(*j, unit_col).is_one() => Some(j + 1),
        _ => None,
    };
    let unit_column_ok = if stated_unit_row == 0 {
        nonzero.is_empty()
    } else {
        observed_unit_row == Some(stated_unit_row)
    };
    // Columns Y_{k+2}..Y_{n+1} against rows Z_{k+1}..Z_n.
    let mut identity_block_ok = true;
    for col in k + 1..lin.cols() {
        for j in 0..lin.rows() {
            let expected_one = j == col - 1;
            let entry = lin.get(j, col);
            if (expected_one && !entry.is_one()) || (!expected_one && !entry.is_zero()) {
                identity_block_ok = false;
            }
        }
    }
    let mut triangular_block_ok = true;
    for col in 0..k {
        for j in 0..lin.rows() {
            if j > col && !lin.get(j, col).is_zero() {
                triangular_block_ok = false;
            }
        }
    }
    HomotopyShape {
        stated_unit_row,
        observed_unit_row,
        unit_column_ok,
        identity_block_ok,
        triangular_block_ok,
        offset_zero: chart.has_zero_offset(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplexmaps::centers::CenterFamily;
    use crate::simplexmaps::maps::{first_projection, homotopy_map, subdivision_map};

    #[test]
    fn interval_chart() {
        let fam = CenterFamily::symbolic(1);
        let sigma = Permutation::identity(1);
        let map = subdivision_map(1, &sigma, &fam).unwrap();
        let chart = chart_matrix(&map, &ChartSpec::subdivision(&sigma)).unwrap();
        assert!(chart.has_zero_offset());
        assert_eq!(chart.linear.get(0, 0).to_string(), "-C1_0 + 1");
    }

    #[test]
    fn subdivision_charts_are_upper_triangular() {
        let fam = CenterFamily::symbolic(4);
        for n in 1..=4 {
            for sigma in Permutation::all(n) {
                let map = subdivision_map(n, &sigma, &fam).unwrap();
                let chart = chart_matrix(&map, &ChartSpec::subdivision(&sigma)).unwrap();
                assert!(chart.has_zero_offset(), "n={n} σ={sigma}");
                assert!(chart.is_upper_triangular(), "n={n} σ={sigma}");
            }
        }
    }

    #[test]
    fn homotopy_chart_shape() {
        let fam = CenterFamily::symbolic(3);
        for n in 0..=3 {
            for k in 0..=n {
                for sigma in Permutation::all(k) {
                    let h = first_projection(&homotopy_map(n, k, &sigma, &fam).unwrap());
                    let chart = chart_matrix(&h, &ChartSpec::homotopy(n, &sigma)).unwrap();
                    let shape = homotopy_shape(&sigma, &chart);
                    assert!(
                        shape.unit_column_ok && shape.identity_block_ok,
                        "n={n} k={k} σ={sigma}"
                    );
                    assert!(shape.triangular_block_ok && shape.offset_zero);
                    assert_eq!(shape.differs_from_display(), sigma.apply(0) == k);
                }
            }
        }
    }

    #[test]
    fn degenerate_charts_are_rejected() {
        let fam = CenterFamily::symbolic(1);
        let map = subdivision_map(1, &Permutation::identity(1), &fam).unwrap();
        let bad = ChartSpec {
            source: SimplexChart {
                origin: 0,
                axes: vec![0],
            },
            target: SimplexChart {
                origin: 0,
                axes: vec![1],
            },
        };
        assert!(matches!(
            chart_matrix(&map, &bad),
            Err(Error::DegenerateChart(_))
        ));
    }
}
