use std::collections::HashMap;
use std::time::Instant;

use subdivide::equidimlab::{
    bad_center_census, count_points, equidim_check, estimate_dimension, face_condition_check,
    homotopy_face_condition_check, pullback_variety, vanishing_census, CensusConfig, SamplePlan,
    VanishingSpec, VarietySpec, Verdict, DEFAULT_CAP,
};
use subdivide::polycore::{BlockPolynomial, Degree, FieldDescriptor, Ring, Scalar, Var};
use subdivide::simplexmaps::{
    compose, face_map, subdivision_map, CenterFamily, CenterMode, Permutation,
};

/// Counts points by evaluating the original equations (with every `T_i`,
/// `t_0` recovered from `Σ t = 1`) through the generic evaluator.
fn naive_count(v: &VarietySpec, e: u32) -> u64 {
    let ext = Ring::finite(FieldDescriptor::build(v.p(), e).unwrap());
    let field = ext.field().unwrap().clone();
    let q = field.order();
    let free = (v.m + v.n) as usize;
    let mut total = 0;
    let mut values = vec![0u32; free];
    loop {
        let mut point = HashMap::new();
        for i in 0..v.m {
            point.insert(Var::X(i + 1), Scalar::Finite(values[i as usize]));
        }
        let mut t0 = field.one();
        for i in 1..=v.n {
            let ti = values[(v.m + i - 1) as usize];
            point.insert(Var::T(i), Scalar::Finite(ti));
            t0 = field.sub(t0, ti);
        }
        point.insert(Var::T(0), Scalar::Finite(t0));
        if v.equations
            .iter()
            .all(|eq| ext.is_zero(&eq.evaluate(&point, &ext).unwrap()))
        {
            total += 1;
        }
        let mut i = 0;
        loop {
            if i == free {
                return total;
            }
            values[i] += 1;
            if values[i] < q {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn point_counts_of_small_varieties() {
    let line = VarietySpec::parse(2, 0, 0, &["X1"], 5).unwrap();
    assert_eq!(count_points(&line, 1, DEFAULT_CAP).unwrap(), 5);
    let empty = VarietySpec::parse(2, 0, 0, &["1"], 5).unwrap();
    assert_eq!(count_points(&empty, 1, DEFAULT_CAP).unwrap(), 0);
    let hyperbola = VarietySpec::parse(2, 0, 0, &["X1*X2 - 1"], 5).unwrap();
    assert_eq!(count_points(&hyperbola, 1, DEFAULT_CAP).unwrap(), 4);
    let est = estimate_dimension(&line, 3, DEFAULT_CAP).unwrap();
    assert_eq!(est.counts, vec![5, 25, 125]);
    assert_eq!(est.estimate, Degree::Finite(1));
    assert!(est.stable);
}

#[test]
fn cap_is_enforced() {
    let plane = VarietySpec::parse(3, 0, 0, &[], 5).unwrap();
    assert!(count_points(&plane, 2, 1000).is_err());
}

/// (m, n, equations, q, true dimension; None for empty).
type OracleInstance = (u32, u32, Vec<&'static str>, u32, Option<u32>);

fn oracle_instances() -> Vec<OracleInstance> {
    vec![
        (1, 0, vec![], 5, Some(1)),
        (2, 0, vec![], 5, Some(2)),
        (2, 0, vec!["X1"], 5, Some(1)),
        (2, 0, vec!["X1", "X2"], 7, Some(0)),
        (2, 0, vec!["X2 - X1^2"], 5, Some(1)),
        (2, 0, vec!["X2 - X1^3"], 7, Some(1)),
        (3, 0, vec!["X3 - X1*X2"], 5, Some(2)),
        (2, 0, vec!["X1*X2 - 1"], 5, Some(1)),
        (2, 0, vec!["X1^2 + X2^2 - 1"], 7, Some(1)),
        (2, 0, vec!["X1*X2"], 5, Some(1)),
        (2, 0, vec!["X1^2 - 1"], 7, Some(1)),
        (2, 0, vec!["X1 - 1", "X2 - 2"], 5, Some(0)),
        (2, 0, vec!["1"], 5, None),
        (0, 1, vec![], 5, Some(1)),
        (1, 1, vec![], 5, Some(2)),
        (1, 1, vec!["T0 - T1"], 7, Some(1)),
        (1, 2, vec!["T0 - X1"], 5, Some(2)),
        (0, 2, vec!["T1*T2"], 7, Some(1)),
        (2, 0, vec!["X2 - X1^2 - X1 - 1"], 7, Some(1)),
        (2, 0, vec!["X1^2 - X2^3"], 5, Some(1)),
        (3, 0, vec!["X1*X2*X3"], 5, Some(2)),
        (3, 0, vec!["X1^2 - X1", "X2 - X3^2"], 5, Some(1)),
        (3, 0, vec!["X1 - X2", "X2 - X3"], 7, Some(1)),
    ]
}

#[test]
fn dimension_estimator_oracle() {
    let instances = oracle_instances();
    assert!(instances.len() >= 20);
    for (m, n, eqs, q, dim) in instances {
        let v = VarietySpec::parse(m, n, 0, &eqs, q).unwrap();
        let est = estimate_dimension(&v, 3, DEFAULT_CAP).unwrap();
        assert_eq!(est.counts[0], naive_count(&v, 1), "{eqs:?}");
        assert_eq!(est.counts[1], naive_count(&v, 2), "{eqs:?}");
        let expected = dim.map_or(Degree::NegInfinity, Degree::Finite);
        assert_eq!(est.estimate, expected, "{eqs:?} over F_{q}: {est:?}");
        assert!(est.stable, "{eqs:?}");
    }
}

#[test]
fn face_condition_examples() {
    let diagonal = VarietySpec::parse(1, 1, 0, &["T0 - T1"], 7).unwrap();
    let r = face_condition_check(&diagonal, 3, DEFAULT_CAP).unwrap();
    assert!(r.passed());
    assert!(r.faces.iter().all(|f| f.verdict == Verdict::Empty));

    let vertical = VarietySpec::parse(1, 1, 0, &["T0"], 7).unwrap();
    let r = face_condition_check(&vertical, 3, DEFAULT_CAP).unwrap();
    assert!(!r.passed());
    let at_v1 = r.faces.iter().find(|f| f.face == vec![1]).unwrap();
    assert_eq!(at_v1.verdict, Verdict::Fail);
    assert_eq!(at_v1.estimate.estimate, Degree::Finite(1));

    let full = VarietySpec::parse(1, 2, 0, &[], 5).unwrap();
    let r = face_condition_check(&full, 3, DEFAULT_CAP).unwrap();
    assert!(r.passed());
    assert!(r.faces.iter().all(|f| f.verdict == Verdict::Pass));
}

fn interval_family(ring: &Ring, c: BlockPolynomial) -> CenterFamily {
    CenterFamily::from_free_coordinates(
        ring,
        CenterMode::Polynomial {
            m: 1,
            degree_bound: 1,
        },
        vec![vec![], vec![c]],
    )
    .unwrap()
}

#[test]
fn pullback_examples() {
    let ring = Ring::prime_field(5).unwrap();
    let v = VarietySpec::parse(1, 1, 0, &["T0 - T1"], 5).unwrap();
    let x = BlockPolynomial::var(&ring, Var::X(1));
    let fam = interval_family(&ring, x.clone());
    let id = Permutation::identity(1);
    let map = subdivision_map(1, &id, &fam).unwrap();
    let pulled = pullback_variety(&v, &map).unwrap();
    let t0 = BlockPolynomial::var(&ring, Var::T(0));
    let t1 = BlockPolynomial::var(&ring, Var::T(1));
    let one = BlockPolynomial::one(&ring);
    let expected = &(&t0 + &(&t1 * &x)) - &(&t1 * &(&one - &x));
    assert_eq!(pulled.equations, vec![expected]);
    assert_eq!(pulled.max_t_degree(), v.max_t_degree());

    let identity = subdivision_map(0, &Permutation::identity(0), &fam).unwrap();
    let point = VarietySpec::parse(1, 0, 0, &["X1 - T0"], 5).unwrap();
    assert_eq!(
        pullback_variety(&point, &identity).unwrap().equations,
        point.equations
    );
}

#[test]
fn pullback_respects_composition() {
    let ring = Ring::prime_field(7).unwrap();
    let fam = CenterFamily::sampled(2, 1, 2, 7, 11).unwrap();
    let v = VarietySpec::parse(1, 2, 0, &["T0*X1 - T2", "T1^2 - X1"], 7).unwrap();
    for sigma in Permutation::all(2) {
        let g = subdivision_map(2, &sigma, &fam).unwrap();
        let f = face_map(1, 2, &ring).unwrap();
        let stepwise = pullback_variety(&pullback_variety(&v, &g).unwrap(), &f).unwrap();
        let direct = pullback_variety(&v, &compose(&f, &g).unwrap()).unwrap();
        assert_eq!(stepwise.equations, direct.equations);
    }
}

#[test]
fn equidim_examples() {
    let ring = Ring::prime_field(5).unwrap();
    let v = VarietySpec::parse(1, 1, 0, &["T0 - T1"], 5).unwrap();
    let id = Permutation::identity(1);
    let good = interval_family(&ring, BlockPolynomial::var(&ring, Var::X(1)));
    let r = equidim_check(
        &pullback_variety(&v, &subdivision_map(1, &id, &good).unwrap()).unwrap(),
        3,
        DEFAULT_CAP,
    )
    .unwrap();
    assert!(r.passed());
    assert!(r.max_fiber.is_at_most(0));

    let bad = interval_family(&ring, BlockPolynomial::zero(&ring));
    let r = equidim_check(
        &pullback_variety(&v, &subdivision_map(1, &id, &bad).unwrap()).unwrap(),
        3,
        DEFAULT_CAP,
    )
    .unwrap();
    assert!(!r.passed());
    // The fiber over t_1 = 1/2 = 3 in F_5 is the whole line.
    assert_eq!(r.bad.len(), 1);
    assert_eq!(r.bad[0].point, vec![3]);

    let empty = VarietySpec::parse(1, 1, 0, &["1"], 5).unwrap();
    assert!(equidim_check(&empty, 3, DEFAULT_CAP).unwrap().passed());
}

/// Independent census for `V = {t_0 = t_1}`, `c(X) = c0 + c1 X`: a center is
/// bad for σ when some fiber of the hand-derived pulled-back equation
/// vanishes on the whole line (id: `1 - 2 t_1 + 2 t_1 c`, (01): `2 t_1 c - 1`).
fn brute_force_census(q: u64) -> (usize, usize, usize) {
    let (mut bad_id, mut bad_swap, mut joint) = (0, 0, 0);
    for c0 in 0..q {
        for c1 in 0..q {
            let c = |x: u64| (c0 + c1 * x) % q;
            let whole_line =
                |f: &dyn Fn(u64, u64) -> u64| (0..q).any(|t1| (0..q).all(|x| f(t1, x) == 0));
            let id = whole_line(&|t1, x| (1 + 2 * (q - 1) * t1 + 2 * t1 * c(x)) % q);
            let swap = whole_line(&|t1, x| (2 * t1 * c(x) + q - 1) % q);
            bad_id += id as usize;
            bad_swap += swap as usize;
            joint += (id || swap) as usize;
        }
    }
    (bad_id, bad_swap, joint)
}

#[test]
fn bad_center_census_matches_brute_force() {
    let cfg = |e_max| CensusConfig {
        degree_bound: 1,
        plan: SamplePlan::Exhaustive,
        lambda: None,
        e_max,
        cap: DEFAULT_CAP,
    };
    let mut previous = f64::INFINITY;
    for q in [5u32, 7, 11] {
        let start = Instant::now();
        let v = VarietySpec::parse(1, 1, 0, &["T0 - T1"], q).unwrap();
        let r = bad_center_census(&v, &cfg(3), &Permutation::all(1)).unwrap();
        let (bad_id, bad_swap, joint) = brute_force_census(q as u64);
        assert_eq!(r.centers_checked, (q * q) as usize);
        assert_eq!(r.per_sigma[0].bad, bad_id);
        assert_eq!(r.per_sigma[1].bad, bad_swap);
        assert_eq!(r.joint_bad, joint);
        assert_eq!(r.per_sigma[0].bad, q as usize - 1);
        assert_eq!(r.joint_bad, q as usize);
        assert_eq!(r.joint_unstable, 0);
        assert!(!r.hypothesis_met);
        let fraction = r.per_sigma[0].bad as f64 / r.centers_checked as f64;
        assert!(fraction <= previous && fraction <= 1.0 / q as f64);
        previous = fraction;
        assert!(start.elapsed().as_secs() < 60);
    }
}

#[test]
fn sampled_census_is_reproducible() {
    let v = VarietySpec::parse(1, 1, 0, &["T0 - T1"], 7).unwrap();
    let cfg = CensusConfig {
        degree_bound: 2,
        plan: SamplePlan::Sampled { size: 30, seed: 9 },
        lambda: None,
        e_max: 2,
        cap: DEFAULT_CAP,
    };
    let a =
        serde_json::to_string(&bad_center_census(&v, &cfg, &Permutation::all(1)).unwrap()).unwrap();
    let b =
        serde_json::to_string(&bad_center_census(&v, &cfg, &Permutation::all(1)).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn constant_lambda_makes_every_center_constant() {
    let v = VarietySpec::parse(1, 1, 0, &["T0 - T1"], 5).unwrap();
    let cfg = CensusConfig {
        degree_bound: 1,
        plan: SamplePlan::Exhaustive,
        lambda: Some(vec![]),
        e_max: 2,
        cap: DEFAULT_CAP,
    };
    let r = bad_center_census(&v, &cfg, &Permutation::all(1)).unwrap();
    assert_eq!(r.centers_checked, 5);
    assert_eq!(r.joint_bad, 5);
    let bad_lambda = CensusConfig {
        lambda: Some(vec![(2, 0)]),
        ..cfg
    };
    assert!(bad_center_census(&v, &bad_lambda, &Permutation::all(1)).is_err());
}

#[test]
fn vanishing_examples() {
    let parabola = VanishingSpec::parse(1, 1, &["X2 - X1^2"], 3).unwrap();
    let r = vanishing_census(&parabola, 1, 2, DEFAULT_CAP).unwrap();
    assert_eq!((r.count, r.candidates, r.bound), (0, 9, 1));
    assert!(r.within_bound && !r.image_is_point);

    let diagonal = VanishingSpec::parse(1, 1, &["X2 - X1"], 3).unwrap();
    let r = vanishing_census(&diagonal, 1, 2, DEFAULT_CAP).unwrap();
    assert_eq!((r.count, r.bound), (1, 1));
    assert!(r.within_bound);

    let fiber = VanishingSpec::parse(1, 1, &["X1"], 3).unwrap();
    let r = vanishing_census(&fiber, 1, 2, DEFAULT_CAP).unwrap();
    assert!(r.image_is_point);
    assert_eq!(r.outcome, "empty inverse image");
    assert_eq!(r.count, 0);
}

#[test]
fn homotopy_pullbacks_of_diagonal() {
    let v = VarietySpec::parse(1, 1, 0, &["T0 - T1"], 5).unwrap();
    let cfg = CensusConfig {
        degree_bound: 2,
        plan: SamplePlan::Sampled { size: 4, seed: 3 },
        lambda: None,
        e_max: 2,
        cap: DEFAULT_CAP,
    };
    let r = homotopy_face_condition_check(&v, &cfg).unwrap();
    assert_eq!(r.centers_checked, 4);
    assert!(r.all_pass >= 1, "{r:?}");
    for e in &r.first_family {
        assert!(!e.dimension_ok || e.total_dimension == Degree::Finite(2));
    }

    let empty = VarietySpec::parse(1, 1, 0, &["1"], 5).unwrap();
    let r = homotopy_face_condition_check(&empty, &cfg).unwrap();
    assert_eq!(r.all_pass, r.centers_checked);
}
