use std::fmt;

use num_integer::Integer;
use serde::Serialize;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics when the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<i128>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        self.data
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(<[i128]>::to_vec)
            .collect()
    }

    /// Panics on a shape mismatch.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.get(k, c);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] += q * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, q: i128) {
        for c in 0..self.cols {
            let v = self.get(src, c);
            self.data[dst * self.cols + c] += q * v;
        }
    }

    /// `col[dst] += q * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, q: i128) {
        for r in 0..self.rows {
            let v = self.get(r, src);
            self.data[r * self.cols + dst] += q * v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            self.data[r * self.cols + c] *= -1;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// `u · a · v = d` with `d` diagonal, nonnegative, each entry dividing the next.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| d.get(i, j) != 0)
                .min_by_key(|&(i, j)| d.get(i, j).abs());
            let Some((pi, pj)) = pivot else {
                return SnfResult { d, u, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = d.get(t, t);
            let mut clean = true;
            for i in t + 1..m {
                let q = Integer::div_floor(&d.get(i, t), &p);
                if q != 0 {
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                }
                clean &= d.get(i, t) == 0;
            }
            for j in t + 1..n {
                let q = Integer::div_floor(&d.get(t, j), &p);
                if q != 0 {
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                }
                clean &= d.get(t, j) == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| d.get(i, j) % p != 0));
            match offender {
                Some(i) => {
                    d.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { d, u, v }
}

/// `ℤ^rank ⊕ ⨁ ℤ/t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<i128>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_integers(&self) -> bool {
        self.rank == 1 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Free chain complex with `differentials[s]: C_s → C_{s-1}`, a
/// `dim C_{s-1} × dim C_s` matrix (`differentials[0]` has zero rows).
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub differentials: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn top_degree(&self) -> usize {
        self.differentials.len() - 1
    }

    pub fn dim(&self, s: usize) -> usize {
        self.differentials[s].cols
    }

    /// First degree `s` with `d_{s-1} ∘ d_s ≠ 0`.
    pub fn first_d_squared_failure(&self) -> Option<usize> {
        (2..self.differentials.len()).find(|&s| {
            !self.differentials[s - 1]
                .mul(&self.differentials[s])
                .is_zero()
        })
    }
}

/// `H_s` for every degree of the complex.
pub fn homology(complex: &ChainComplex) -> Vec<AbelianGroup> {
    let snfs: Vec<SnfResult> = complex
        .differentials
        .iter()
        .map(smith_normal_form)
        .collect();
    (0..complex.differentials.len())
        .map(|s| {
            let kernel = complex.dim(s) - snfs[s].rank();
            let (image, torsion) = match snfs.get(s + 1) {
                Some(next) => {
                    let diag = next.diagonal();
                    (next.rank(), diag.into_iter().filter(|&x| x > 1).collect())
                }
                None => (0, Vec::new()),
            };
            AbelianGroup {
                rank: kernel - image,
                torsion,
            }
        })
        .collect()
}
