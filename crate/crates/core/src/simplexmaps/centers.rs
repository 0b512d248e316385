use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polycore::{Block, BlockPolynomial, Monomial, Ring, Scalar, Var};

/// A point of `Δ^n` over the base ring: `n + 1` coordinates summing to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BarycentricPoint {
    coords: Vec<BlockPolynomial>,
}

impl BarycentricPoint {
    pub fn new(coords: Vec<BlockPolynomial>) -> Result<Self> {
        let point = Self::new_unchecked(coords);
        point.check()?;
        Ok(point)
    }

    /// Skips the sum-to-one check; used for negative controls.
    pub fn new_unchecked(coords: Vec<BlockPolynomial>) -> Self {
        assert!(
            !coords.is_empty(),
            "a barycentric point has at least one coordinate"
        );
        BarycentricPoint { coords }
    }

    pub fn check(&self) -> Result<()> {
        let ring = self.coords[0].ring();
        let sum = self
            .coords
            .iter()
            .fold(BlockPolynomial::zero(ring), |acc, c| &acc + c);
        if sum.is_one() {
            Ok(())
        } else {
            Err(Error::InvalidCenters(format!(
                "coordinates sum to {sum}, not 1"
            )))
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[BlockPolynomial] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BlockPolynomial> {
        self.coords
    }
}

/// How the centers of a family were produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CenterMode {
    /// Free indeterminates `C<i>_<j>` (`j < i`), last coordinate eliminated.
    Symbolic,
    /// Polynomials in `X1..Xm` of degree at most `degree_bound`.
    Polynomial { m: u32, degree_bound: u32 },
    /// Seeded random polynomials over `F_q`.
    Sampled {
        m: u32,
        degree_bound: u32,
        q: u32,
        seed: u64,
    },
}

/// The chosen centers `c^0, .., c^{n_max}`; `c^i` is a point of `Δ^i`.
#[derive(Clone, Debug)]
pub struct CenterFamily {
    ring: Ring,
    mode: CenterMode,
    centers: Vec<BarycentricPoint>,
}

/// Monomials in `X1..Xm` of total degree at most `bound`, in increasing
/// graded order. There are `binom(m + bound, bound)` of them.
pub fn monomials_up_to(m: u32, bound: u32) -> Vec<Monomial> {
    fn rec(
        var: u32,
        m: u32,
        remaining: u32,
        current: &mut Vec<(Var, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if var > m {
            out.push(Monomial::from_powers(current.iter().copied()));
            return;
        }
        for e in 0..=remaining {
            if e > 0 {
                current.push((Var::X(var), e));
            }
            rec(var + 1, m, remaining - e, current, out);
            if e > 0 {
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(1, m, bound, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn eliminated_last(ring: &Ring, free: &[BlockPolynomial]) -> BlockPolynomial {
    free.iter()
        .fold(BlockPolynomial::one(ring), |acc, c| &acc - c)
}

impl CenterFamily {
    /// Generic centers: `c^i_j = C<i>_<j>` for `j < i` and `c^i_i = 1 - Σ_{j<i} c^i_j`.
    pub fn symbolic(n_max: usize) -> Self {
        let ring = Ring::Rational;
        let centers = (0..=n_max)
            .map(|i| {
                let free: Vec<BlockPolynomial> = (0..i)
                    .map(|j| BlockPolynomial::var(&ring, Var::C(i as u32, j as u32)))
                    .collect();
                let mut coords = free.clone();
                coords.push(eliminated_last(&ring, &free));
                BarycentricPoint::new_unchecked(coords)
            })
            .collect();
        CenterFamily {
            ring,
            mode: CenterMode::Symbolic,
            centers,
        }
    }

    /// Centers from explicit free coordinates: `free[i]` holds `c^i_0 .. c^i_{i-1}`
    /// and the last coordinate is eliminated. `free[0]` must be empty.
    pub fn from_free_coordinates(
        ring: &Ring,
        mode: CenterMode,
        free: Vec<Vec<BlockPolynomial>>,
    ) -> Result<Self> {
        let mut centers = Vec::with_capacity(free.len());
        for (i, coords) in free.into_iter().enumerate() {
            if coords.len() != i {
                return Err(Error::InvalidCenters(format!(
                    "center {i} needs {i} free coordinates, got {}",
                    coords.len()
                )));
            }
            if coords.iter().any(|c| !c.ring().is_same(ring)) {
                return Err(Error::IncompatibleModes);
            }
            let mut all = coords.clone();
            all.push(eliminated_last(ring, &coords));
            centers.push(BarycentricPoint::new_unchecked(all));
        }
        if centers.is_empty() {
            return Err(Error::InvalidCenters(
                "a family contains at least c^0".into(),
            ));
        }
        let family = CenterFamily {
            ring: ring.clone(),
            mode,
            centers,
        };
        family.check()?;
        Ok(family)
    }

    /// Random polynomial centers of X-degree at most `degree_bound` in `X1..Xm`.
    /// Rational coefficients are drawn from `-3..=3`; finite-field ones uniformly.
    pub fn random_polynomial<R: Rng>(
        n_max: usize,
        m: u32,
        degree_bound: u32,
        ring: &Ring,
        rng: &mut R,
    ) -> Self {
        let monomials = monomials_up_to(m, degree_bound);
        let random_poly = |rng: &mut R| -> BlockPolynomial {
            BlockPolynomial::from_terms(
                ring,
                monomials.iter().map(|mon| {
                    let c = match ring {
                        Ring::Rational => ring.from_int(rng.gen_range(-3..=3)),
                        Ring::Finite(f) => Scalar::Finite(rng.gen_range(0..f.order())),
                    };
                    (mon.clone(), c)
                }),
            )
        };
        let free = (0..=n_max)
            .map(|i| (0..i).map(|_| random_poly(rng)).collect())
            .collect();
        Self::from_free_coordinates(ring, CenterMode::Polynomial { m, degree_bound }, free)
            .expect("random centers are barycentric by construction")
    }

    /// Seeded random polynomial centers over the prime field `F_q`.
    pub fn sampled(n_max: usize, m: u32, degree_bound: u32, q: u32, seed: u64) -> Result<Self> {
        let ring = Ring::prime_field(q)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut family = Self::random_polynomial(n_max, m, degree_bound, &ring, &mut rng);
        family.mode = CenterMode::Sampled {
            m,
            degree_bound,
            q,
            seed,
        };
        Ok(family)
    }

    /// Replaces `c^i` without checking the barycentric identity (negative control).
    pub fn with_center_unchecked(mut self, i: usize, coords: Vec<BlockPolynomial>) -> Self {
        self.centers[i] = BarycentricPoint::new_unchecked(coords);
        self
    }

    /// Checks every center is barycentric and, in polynomial modes, respects
    /// the X-degree bound.
    pub fn check(&self) -> Result<()> {
        for (i, c) in self.centers.iter().enumerate() {
            if c.dim() != i {
                return Err(Error::InvalidCenters(format!(
                    "center {i} lies in Δ^{}",
                    c.dim()
                )));
            }
            c.check()
                .map_err(|e| Error::InvalidCenters(format!("center {i}: {e}")))?;
            if let Some(bound) = self.degree_bound() {
                if c.coords()
                    .iter()
                    .any(|x| !x.block_degree(Block::X).is_at_most(bound))
                {
                    return Err(Error::InvalidCenters(format!(
                        "center {i} exceeds X-degree {bound}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn mode(&self) -> &CenterMode {
        &self.mode
    }

    pub fn n_max(&self) -> usize {
        self.centers.len() - 1
    }

    pub fn degree_bound(&self) -> Option<u32> {
        match self.mode {
            CenterMode::Symbolic => None,
            CenterMode::Polynomial { degree_bound, .. }
            | CenterMode::Sampled { degree_bound, .. } => Some(degree_bound),
        }
    }

    pub fn center(&self, i: usize) -> Result<&BarycentricPoint> {
        self.centers.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            dim: self.n_max(),
        })
    }
}
