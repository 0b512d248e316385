use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `[n] = {0, .., n}`, stored by its images.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidPermutation(
                "a permutation of [n] has n+1 >= 1 images".into(),
            ));
        }
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..=n).collect(),
        }
    }

    /// All permutations of `[n]` in lexicographic order of their image lists.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..=n).collect();
        loop {
            out.push(Permutation {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..current.len().saturating_sub(1))
                .rev()
                .find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..current.len())
                .rev()
                .find(|&j| current[j] > current[i])
                .expect("successor exists");
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }

    /// The `n` with `self` a permutation of `[n]`.
    pub fn n(&self) -> usize {
        self.images.len() - 1
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, j: usize) -> usize {
        self.images[j]
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i64 {
        let mut visited = vec![false; self.images.len()];
        let mut transpositions = 0;
        for start in 0..self.images.len() {
            let mut len = 0;
            let mut j = start;
            while !visited[j] {
                visited[j] = true;
                j = self.images[j];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (j, &i) in self.images.iter().enumerate() {
            inv[i] = j;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose permutations of [{}] and [{}]",
                self.n(),
                other.n()
            )));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        })
    }

    /// `self ∘ (i, i+1)`.
    pub fn swap_adjacent(&self, i: usize) -> Result<Permutation> {
        if i + 1 > self.n() {
            return Err(Error::IndexOutOfRange {
                index: i + 1,
                dim: self.n(),
            });
        }
        let mut images = self.images.clone();
        images.swap(i, i + 1);
        Ok(Permutation { images })
    }

    /// The permutation of `[n+1]` acting as `self` on `[n]` and fixing `n+1`.
    pub fn extend_fixing_top(&self) -> Permutation {
        let mut images = self.images.clone();
        images.push(images.len());
        Permutation { images }
    }

    /// Image of the initial segment `{0, .., k}`, sorted increasingly.
    pub fn image_of_initial(&self, k: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self.images[..=k].to_vec();
        s.sort_unstable();
        s
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}
