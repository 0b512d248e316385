use serde::Serialize;

use super::snf::{homology, AbelianGroup, ChainComplex, IntMatrix};

/// How the shell differential signs the deleted vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignRule {
    /// `(-1)^k` for the `k`-th smallest element.
    Alternating,
    /// All signs `+1`; only used as a negative control.
    Unsigned,
}

/// The faces-of-`[n]` complex in the constant-coefficient model: one
/// generator per subset `S ⊆ [n]` with `|S| = s + 1` in degree `s`.
#[derive(Clone, Debug)]
pub struct ShellComplex {
    pub n: usize,
    /// Generators per degree, each a sorted subset, in lexicographic order.
    pub generators: Vec<Vec<Vec<usize>>>,
    pub complex: ChainComplex,
}

fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

pub fn build_shell(n: usize) -> ShellComplex {
    build_shell_with(n, SignRule::Alternating)
}

pub fn build_shell_with(n: usize, rule: SignRule) -> ShellComplex {
    let generators: Vec<Vec<Vec<usize>>> = (0..=n).map(|s| subsets_of_size(n, s + 1)).collect();
    let mut differentials = vec![IntMatrix::zeros(0, generators[0].len())];
    for s in 1..=n {
        let mut d = IntMatrix::zeros(generators[s - 1].len(), generators[s].len());
        for (col, subset) in generators[s].iter().enumerate() {
            for k in 0..subset.len() {
                let mut face = subset.clone();
                face.remove(k);
                let row = generators[s - 1]
                    .binary_search(&face)
                    .expect("faces are generators");
                let sign = match rule {
                    SignRule::Alternating if k % 2 == 1 => -1,
                    _ => 1,
                };
                d.set(row, col, d.get(row, col) + sign);
            }
        }
        differentials.push(d);
    }
    ShellComplex {
        n,
        generators,
        complex: ChainComplex { differentials },
    }
}

impl ShellComplex {
    /// Image of one generator under the differential, as `(coefficient, face)`.
    pub fn boundary(&self, s: usize, subset: &[usize]) -> Vec<(i128, Vec<usize>)> {
        let col = self.generators[s]
            .binary_search(&subset.to_vec())
            .expect("not a generator");
        let d = &self.complex.differentials[s];
        (0..d.rows())
            .filter(|&r| d.get(r, col) != 0)
            .map(|r| (d.get(r, col), self.generators[s - 1][r].clone()))
            .collect()
    }
}

pub fn verify_d_squared(n: usize) -> bool {
    build_shell(n).complex.first_d_squared_failure().is_none()
}

/// The ambient constant model: `ℤ` in every degree `0..=top + 1` with
/// `d_s = Σ_{i=0}^s (-1)^i`. The extra degree makes `H_top` correct.
pub fn constant_target(top: usize) -> ChainComplex {
    let differentials = (0..=top + 1)
        .map(|s| {
            if s == 0 {
                IntMatrix::zeros(0, 1)
            } else {
                IntMatrix::from_rows(vec![vec![if s % 2 == 0 { 1 } else { 0 }]])
            }
        })
        .collect();
    ChainComplex { differentials }
}

/// Degreewise summation from the shell to the constant target.
#[derive(Clone, Debug)]
pub struct CanonicalMap {
    pub components: Vec<IntMatrix>,
}

pub fn canonical_map(shell: &ShellComplex) -> CanonicalMap {
    CanonicalMap {
        components: shell
            .generators
            .iter()
            .map(|g| IntMatrix::from_rows(vec![vec![1; g.len()]]))
            .collect(),
    }
}

/// Degrees `s ≥ 1` where `d^target_s ∘ can_s ≠ can_{s-1} ∘ d^shell_s`.
pub fn chain_map_failures(
    shell: &ShellComplex,
    target: &ChainComplex,
    can: &CanonicalMap,
) -> Vec<usize> {
    (1..=shell.n)
        .filter(|&s| {
            let left = target.differentials[s].mul(&can.components[s]);
            let right = can.components[s - 1].mul(&shell.complex.differentials[s]);
            left != right
        })
        .collect()
}

/// Homology of the shell and the target, and the chain-map check.
#[derive(Clone, Debug, Serialize)]
pub struct ShellReport {
    pub n: usize,
    pub ranks: Vec<usize>,
    pub d_squared_zero: bool,
    pub shell_homology: Vec<AbelianGroup>,
    pub target_homology: Vec<AbelianGroup>,
    pub chain_map: bool,
}

impl ShellReport {
    /// `H_0 ≅ ℤ` and `H_s = 0` for `1 ≤ s ≤ n-1`, in both complexes, and
    /// `can` commutes with the differentials.
    pub fn passed(&self) -> bool {
        let range_ok = |h: &[AbelianGroup]| {
            h[0].is_integers() && h.iter().take(self.n).skip(1).all(AbelianGroup::is_trivial)
        };
        self.d_squared_zero
            && self.chain_map
            && range_ok(&self.shell_homology)
            && range_ok(&self.target_homology)
    }
}

pub fn shell_report(n: usize) -> ShellReport {
    let shell = build_shell(n);
    let target = constant_target(n);
    let can = canonical_map(&shell);
    let mut target_homology = homology(&target);
    target_homology.truncate(n + 1);
    ShellReport {
        n,
        ranks: shell.generators.iter().map(Vec::len).collect(),
        d_squared_zero: shell.complex.first_d_squared_failure().is_none(),
        shell_homology: homology(&shell.complex),
        target_homology,
        chain_map: chain_map_failures(&shell, &target, &can).is_empty(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_are_binomial() {
        let s = build_shell(2);
        let ranks: Vec<usize> = s.generators.iter().map(Vec::len).collect();
        assert_eq!(ranks, vec![3, 3, 1]);
    }

    #[test]
    fn edge_boundary() {
        let s = build_shell(2);
        assert_eq!(s.boundary(1, &[0, 1]), vec![(-1, vec![0]), (1, vec![1])]);
    }

    #[test]
    fn unsigned_rule_breaks_d_squared() {
        assert!(build_shell_with(1, SignRule::Unsigned)
            .complex
            .first_d_squared_failure()
            .is_none());
        for n in 2..=5 {
            assert!(build_shell_with(n, SignRule::Unsigned)
                .complex
                .first_d_squared_failure()
                .is_some());
        }
    }

    #[test]
    fn target_homology() {
        for top in 0..=6 {
            let mut h = homology(&constant_target(top));
            h.truncate(top + 1);
            assert!(h[0].is_integers());
            assert!(
                h[1..].iter().all(AbelianGroup::is_trivial),
                "top={top}: {h:?}"
            );
        }
    }

    #[test]
    fn top_component_is_identity() {
        let shell = build_shell(3);
        let can = canonical_map(&shell);
        assert_eq!(can.components[3], IntMatrix::identity(1));
    }
}
