use std::fmt;

use crate::error::{Error, Result};
use crate::polycore::{Block, BlockPolynomial, Ring};

/// Dense row-major matrix of polynomials over one ring.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<BlockPolynomial>,
}

impl PolyMatrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![BlockPolynomial::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, size: usize) -> Self {
        let mut m = Self::zeros(ring, size, size);
        for i in 0..size {
            m.set(i, i, BlockPolynomial::one(ring));
        }
        m
    }

    /// Builds a matrix from its columns; every column must have `rows` entries.
    pub fn from_columns(
        ring: &Ring,
        rows: usize,
        columns: Vec<Vec<BlockPolynomial>>,
    ) -> Result<Self> {
        let cols = columns.len();
        let mut m = Self::zeros(ring, rows, cols);
        for (c, column) in columns.into_iter().enumerate() {
            if column.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {c} has {} entries, expected {rows}",
                    column.len()
                )));
            }
            for (r, value) in column.into_iter().enumerate() {
                if !value.ring().is_same(ring) {
                    return Err(Error::IncompatibleModes);
                }
                m.set(r, c, value);
            }
        }
        Ok(m)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BlockPolynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BlockPolynomial) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn column(&self, c: usize) -> Vec<BlockPolynomial> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> &[BlockPolynomial] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BlockPolynomial] {
        &self.entries
    }

    pub fn column_sum(&self, c: usize) -> BlockPolynomial {
        (0..self.rows).fold(BlockPolynomial::zero(&self.ring), |acc, r| {
            &acc + self.get(r, c)
        })
    }

    /// Index of the first column whose entries do not sum to 1.
    pub fn first_bad_column_sum(&self) -> Option<usize> {
        (0..self.cols).find(|&c| !self.column_sum(c).is_one())
    }

    pub fn max_block_degree(&self, block: Block) -> crate::polycore::Degree {
        self.entries
            .iter()
            .map(|e| e.block_degree(block))
            .max()
            .unwrap_or(crate::polycore::Degree::NegInfinity)
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if !self.ring.is_same(&rhs.ring) {
            return Err(Error::IncompatibleModes);
        }
        let mut out = PolyMatrix::zeros(&self.ring, self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = BlockPolynomial::zero(&self.ring);
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    let b = rhs.get(k, c);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch("matrix shapes differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.try_sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// First nonzero entry of `self - rhs` with its position, or `None` when equal.
    pub fn first_difference(&self, rhs: &PolyMatrix) -> Option<(usize, usize, BlockPolynomial)> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Some((0, 0, BlockPolynomial::one(&self.ring)));
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                let d = self.get(r, c) - rhs.get(r, c);
                if !d.is_zero() {
                    return Some((r, c, d));
                }
            }
        }
        None
    }

    /// Applies a coefficient-wise map to every entry (e.g. specialization).
    pub fn map_entries(
        &self,
        ring: &Ring,
        f: impl Fn(&BlockPolynomial) -> Result<BlockPolynomial>,
    ) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Rows of entries rendered with the polynomial printer.
    pub fn to_text_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|e| e.to_string()).collect())
            .collect()
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_text_rows()).finish()
    }
}
