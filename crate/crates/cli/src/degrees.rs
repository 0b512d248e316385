use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use subdivide::error::Result;
use subdivide::polycore::{BlockPolynomial, Ring, Var};
use subdivide::relcheck::{degree_report_with, DegreeReport, MapSource, StandardMaps};
use subdivide::simplexmaps::{AffineSimplexMap, CenterFamily, Permutation, ProductTargetMap};

use crate::{CliError, CliResult, Outcome, SCHEMA_VERSION};

pub const MAX_N: usize = 4;

#[derive(Clone, Debug)]
pub struct DegreesOptions {
    pub n: usize,
    /// X-degree bound `N` of the random centers.
    pub degree_bound: u32,
    /// Number of base variables `X1..Xm`.
    pub m: u32,
    pub seed: u64,
    /// Add `T1` to entry `(1, 1)` of `sd_n^id`.
    pub inject_t_degree: bool,
}

/// Standard maps with a `T`-dependent entry planted in `sd_n^id`.
struct InjectedT<'a> {
    inner: StandardMaps<'a>,
    n: usize,
}

impl MapSource for InjectedT<'_> {
    fn ring(&self) -> &Ring {
        self.inner.ring()
    }

    fn subdivision(&self, n: usize, sigma: &Permutation) -> Result<AffineSimplexMap> {
        let map = self.inner.subdivision(n, sigma)?;
        if n == self.n && *sigma == Permutation::identity(n) {
            Ok(map.perturbed(1, 1, &BlockPolynomial::var(self.ring(), Var::T(1))))
        } else {
            Ok(map)
        }
    }

    fn homotopy(&self, n: usize, k: usize, sigma: &Permutation) -> Result<ProductTargetMap> {
        self.inner.homotopy(n, k, sigma)
    }
}

#[derive(Serialize)]
struct DegreesOutput {
    v: u32,
    command: &'static str,
    m: u32,
    seed: u64,
    injected_t_degree: bool,
    report: DegreeReport,
    passed: bool,
}

pub fn run_degrees(opts: &DegreesOptions) -> CliResult<Outcome> {
    if opts.n > MAX_N {
        return Err(CliError::Usage(format!("--n is capped at {MAX_N}")));
    }
    if opts.inject_t_degree && opts.n == 0 {
        return Err(CliError::Usage("--inject-t-degree needs --n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let family = CenterFamily::random_polynomial(
        opts.n,
        opts.m,
        opts.degree_bound,
        &Ring::Rational,
        &mut rng,
    );
    let standard = StandardMaps { family: &family };
    let report = if opts.inject_t_degree {
        degree_report_with(
            opts.n,
            &InjectedT {
                inner: standard,
                n: opts.n,
            },
            Some(opts.degree_bound),
        )?
    } else {
        degree_report_with(opts.n, &standard, Some(opts.degree_bound))?
    };
    let passed = report.passed();
    let output = DegreesOutput {
        v: SCHEMA_VERSION,
        command: "degrees",
        m: opts.m,
        seed: opts.seed,
        injected_t_degree: opts.inject_t_degree,
        report,
        passed,
    };
    Outcome::new(&output, passed)
}
