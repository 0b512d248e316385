use serde::{Deserialize, Serialize};

use super::centers::{BarycentricPoint, CenterFamily};
use super::matrix::PolyMatrix;
use super::permutation::Permutation;
use crate::error::{Error, Result};
use crate::polycore::{parse_poly, Block, BlockPolynomial, Ring, VarDecl};

/// An affine map `Δ^p → Δ^q` over the base, stored as the `(q+1) × (p+1)`
/// matrix whose column `j` is the image of vertex `v_j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineSimplexMap {
    source_dim: usize,
    target_dim: usize,
    matrix: PolyMatrix,
}

/// JSON form of an [`AffineSimplexMap`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub source_dim: usize,
    pub target_dim: usize,
    pub matrix: Vec<Vec<String>>,
}

impl AffineSimplexMap {
    /// Builds a map and checks that columns sum to 1 and entries are free of
    /// T-variables.
    pub fn from_matrix(matrix: PolyMatrix) -> Result<Self> {
        let map = Self::from_matrix_unchecked(matrix)?;
        map.check()?;
        Ok(map)
    }

    /// Only checks the shape; used for negative controls.
    pub fn from_matrix_unchecked(matrix: PolyMatrix) -> Result<Self> {
        if matrix.rows() == 0 || matrix.cols() == 0 {
            return Err(Error::DimensionMismatch(
                "a simplex map has at least one row and column".into(),
            ));
        }
        Ok(AffineSimplexMap {
            source_dim: matrix.cols() - 1,
            target_dim: matrix.rows() - 1,
            matrix,
        })
    }

    pub fn check(&self) -> Result<()> {
        if let Some(c) = self.matrix.first_bad_column_sum() {
            return Err(Error::InvalidCenters(format!(
                "column {c} sums to {}, not 1",
                self.matrix.column_sum(c)
            )));
        }
        if self.matrix.max_block_degree(Block::T) > crate::polycore::Degree::Finite(0) {
            return Err(Error::InvalidCenters(
                "matrix entries involve simplex variables".into(),
            ));
        }
        Ok(())
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        AffineSimplexMap {
            source_dim: n,
            target_dim: n,
            matrix: PolyMatrix::identity(ring, n + 1),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn ring(&self) -> &Ring {
        self.matrix.ring()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AffineSimplexMap) -> Result<AffineSimplexMap> {
        compose(self, other)
    }

    /// Adds `delta` to one matrix entry, bypassing the invariants.
    pub fn perturbed(&self, row: usize, col: usize, delta: &BlockPolynomial) -> AffineSimplexMap {
        let mut matrix = self.matrix.clone();
        matrix.set(row, col, self.matrix.get(row, col) + delta);
        AffineSimplexMap {
            matrix,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> MapJson {
        MapJson {
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            matrix: self.matrix.to_text_rows(),
        }
    }

    pub fn from_json(json: &MapJson, decl: &VarDecl, ring: &Ring) -> Result<Self> {
        if json.matrix.len() != json.target_dim + 1
            || json.matrix.iter().any(|r| r.len() != json.source_dim + 1)
        {
            return Err(Error::DimensionMismatch(
                "matrix shape does not match declared dimensions".into(),
            ));
        }
        let mut m = PolyMatrix::zeros(ring, json.target_dim + 1, json.source_dim + 1);
        for (r, row) in json.matrix.iter().enumerate() {
            for (c, text) in row.iter().enumerate() {
                m.set(r, c, parse_poly(text, decl, ring)?);
            }
        }
        Self::from_matrix(m)
    }

    /// Barycentric output forms `u_r = Σ_c M[r][c] T_c`, affine-linear in T.
    pub fn output_forms(&self) -> Vec<BlockPolynomial> {
        let ring = self.ring();
        (0..=self.target_dim)
            .map(|r| {
                (0..=self.source_dim).fold(BlockPolynomial::zero(ring), |acc, c| {
                    let t = BlockPolynomial::var(ring, crate::polycore::Var::T(c as u32));
                    &acc + &(self.matrix.get(r, c) * &t)
                })
            })
            .collect()
    }
}

/// `g ∘ f` for `f: Δ^p → Δ^q` and `g: Δ^q → Δ^r`.
pub fn compose(f: &AffineSimplexMap, g: &AffineSimplexMap) -> Result<AffineSimplexMap> {
    if f.target_dim != g.source_dim {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose Δ^{} → Δ^{} with Δ^{} → Δ^{}",
            f.source_dim, f.target_dim, g.source_dim, g.target_dim
        )));
    }
    let matrix = g.matrix.mul(&f.matrix)?;
    Ok(AffineSimplexMap {
        source_dim: f.source_dim,
        target_dim: g.target_dim,
        matrix,
    })
}

/// A map `Δ^s → Δ^n × Δ^1` given by its two barycentric matrices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductTargetMap {
    first: AffineSimplexMap,
    second: AffineSimplexMap,
}

impl ProductTargetMap {
    pub fn new(first: AffineSimplexMap, second: AffineSimplexMap) -> Result<Self> {
        if first.source_dim != second.source_dim || second.target_dim != 1 {
            return Err(Error::DimensionMismatch(
                "components must share the source and map to Δ^1".into(),
            ));
        }
        Ok(ProductTargetMap { first, second })
    }

    /// `(f, const_{v_b})` with `const_{v_b}` the constant map to vertex `b` of `Δ^1`.
    pub fn with_constant(first: AffineSimplexMap, b: usize) -> Result<Self> {
        let ring = first.ring().clone();
        let column = vertex(b, 1, &ring)?.into_coords();
        let second = PolyMatrix::from_columns(&ring, 2, vec![column; first.source_dim + 1])?;
        Self::new(first, AffineSimplexMap::from_matrix(second)?)
    }

    pub fn source_dim(&self) -> usize {
        self.first.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.first.target_dim
    }

    pub fn first(&self) -> &AffineSimplexMap {
        &self.first
    }

    pub fn second(&self) -> &AffineSimplexMap {
        &self.second
    }

    /// `self ∘ f`.
    pub fn precompose(&self, f: &AffineSimplexMap) -> Result<ProductTargetMap> {
        Ok(ProductTargetMap {
            first: compose(f, &self.first)?,
            second: compose(f, &self.second)?,
        })
    }

    /// `(g × id_{Δ^1}) ∘ self`.
    pub fn postcompose_first(&self, g: &AffineSimplexMap) -> Result<ProductTargetMap> {
        Ok(ProductTargetMap {
            first: compose(&self.first, g)?,
            second: self.second.clone(),
        })
    }

    pub fn perturbed(&self, row: usize, col: usize, delta: &BlockPolynomial) -> ProductTargetMap {
        ProductTargetMap {
            first: self.first.perturbed(row, col, delta),
            second: self.second.clone(),
        }
    }

    /// First nonzero entry difference between the stacked matrices.
    pub fn first_difference(&self, other: &ProductTargetMap) -> Option<BlockPolynomial> {
        self.first
            .matrix
            .first_difference(&other.first.matrix)
            .or_else(|| self.second.matrix.first_difference(&other.second.matrix))
            .map(|(_, _, d)| d)
    }
}

/// `pr_1 ∘ h`.
pub fn first_projection(h: &ProductTargetMap) -> AffineSimplexMap {
    h.first.clone()
}

/// Vertex `v_i` of `Δ^n`.
pub fn vertex(i: usize, n: usize, ring: &Ring) -> Result<BarycentricPoint> {
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    let coords = (0..=n)
        .map(|j| {
            if j == i {
                BlockPolynomial::one(ring)
            } else {
                BlockPolynomial::zero(ring)
            }
        })
        .collect();
    Ok(BarycentricPoint::new_unchecked(coords))
}

/// The face inclusion `∂_i: Δ^{n-1} → Δ^n` omitting vertex `i`.
pub fn face_map(i: usize, n: usize, ring: &Ring) -> Result<AffineSimplexMap> {
    if n == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    let columns = (0..n)
        .map(|j| vertex(if j < i { j } else { j + 1 }, n, ring).map(BarycentricPoint::into_coords))
        .collect::<Result<Vec<_>>>()?;
    AffineSimplexMap::from_matrix(PolyMatrix::from_columns(ring, n + 1, columns)?)
}

/// The center `c^{|S|-1}` placed on the face spanned by `S ⊆ [n]`.
pub fn embed_center(subset: &[usize], n: usize, family: &CenterFamily) -> Result<BarycentricPoint> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != subset.len() {
        return Err(Error::DimensionMismatch(format!(
            "{subset:?} has repeated vertices"
        )));
    }
    if let Some(&bad) = s.iter().find(|&&v| v > n) {
        return Err(Error::IndexOutOfRange { index: bad, dim: n });
    }
    let ring = family.ring();
    if s.len() == 1 {
        return vertex(s[0], n, ring);
    }
    let center = family.center(s.len() - 1)?;
    let mut coords = vec![BlockPolynomial::zero(ring); n + 1];
    for (pos, &v) in s.iter().enumerate() {
        coords[v] = center.coords()[pos].clone();
    }
    Ok(BarycentricPoint::new_unchecked(coords))
}

/// `sd_n^σ`: the affine self-map of `Δ^n` sending `v_k` to the embedded
/// center of `σ({0..k})`.
pub fn subdivision_map(
    n: usize,
    sigma: &Permutation,
    family: &CenterFamily,
) -> Result<AffineSimplexMap> {
    if sigma.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "σ permutes [{}], expected [{n}]",
            sigma.n()
        )));
    }
    if family.n_max() < n {
        return Err(Error::InvalidCenters(format!(
            "family covers dimensions ≤ {}, need {n}",
            family.n_max()
        )));
    }
    let columns = (0..=n)
        .map(|k| {
            embed_center(&sigma.image_of_initial(k), n, family).map(BarycentricPoint::into_coords)
        })
        .collect::<Result<Vec<_>>>()?;
    AffineSimplexMap::from_matrix_unchecked(PolyMatrix::from_columns(
        family.ring(),
        n + 1,
        columns,
    )?)
}

/// `sd_{n,k}^σ: Δ^{n+1} → Δ^n × Δ^1` for `σ` a permutation of `[k]`.
pub fn homotopy_map(
    n: usize,
    k: usize,
    sigma: &Permutation,
    family: &CenterFamily,
) -> Result<ProductTargetMap> {
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, dim: n });
    }
    if sigma.n() != k {
        return Err(Error::DimensionMismatch(format!(
            "σ permutes [{}], expected [{k}]",
            sigma.n()
        )));
    }
    if family.n_max() < k {
        return Err(Error::InvalidCenters(format!(
            "family covers dimensions ≤ {}, need {k}",
            family.n_max()
        )));
    }
    let ring = family.ring();
    let mut first_cols = Vec::with_capacity(n + 2);
    let mut second_cols = Vec::with_capacity(n + 2);
    for j in 0..=k {
        first_cols.push(embed_center(&sigma.image_of_initial(j), n, family)?.into_coords());
        second_cols.push(vertex(0, 1, ring)?.into_coords());
    }
    for j in k + 1..=n + 1 {
        first_cols.push(vertex(j - 1, n, ring)?.into_coords());
        second_cols.push(vertex(1, 1, ring)?.into_coords());
    }
    let first = AffineSimplexMap::from_matrix_unchecked(PolyMatrix::from_columns(
        ring,
        n + 1,
        first_cols,
    )?)?;
    let second = AffineSimplexMap::from_matrix(PolyMatrix::from_columns(ring, 2, second_cols)?)?;
    ProductTargetMap::new(first, second)
}

/// All `sd_n^σ`, one per permutation of `[n]`.
pub fn all_subdivision_maps(
    n: usize,
    family: &CenterFamily,
) -> Result<Vec<(Permutation, AffineSimplexMap)>> {
    Permutation::all(n)
        .into_iter()
        .map(|s| subdivision_map(n, &s, family).map(|m| (s, m)))
        .collect()
}

/// All `sd_{n,k}^σ` for `0 ≤ k ≤ n`, `σ ∈ 𝔖_{[k]}`.
pub fn all_homotopy_maps(
    n: usize,
    family: &CenterFamily,
) -> Result<Vec<(usize, Permutation, ProductTargetMap)>> {
    let mut out = Vec::new();
    for k in 0..=n {
        for s in Permutation::all(k) {
            let h = homotopy_map(n, k, &s, family)?;
            out.push((k, s, h));
        }
    }
    Ok(out)
}
