use std::time::Instant;

use subdivide::polycore::{BlockPolynomial, Ring, Scalar, Var};
use subdivide::relcheck::{check_all_relations, check_projection_consistency, StandardMaps};
use subdivide::simplexmaps::{
    all_homotopy_maps, all_subdivision_maps, compose, face_map, subdivision_map, CenterFamily,
    CenterMode, Permutation,
};

/// `c^k` of the symbolic family written out by hand.
fn symbolic_center(k: usize) -> Vec<BlockPolynomial> {
    let r = Ring::Rational;
    let free: Vec<BlockPolynomial> = (0..k)
        .map(|j| BlockPolynomial::var(&r, Var::C(k as u32, j as u32)))
        .collect();
    let last = free
        .iter()
        .fold(BlockPolynomial::one(&r), |acc, c| &acc - c);
    free.into_iter().chain([last]).collect()
}

#[test]
fn columns_are_embedded_centers() {
    let fam = CenterFamily::symbolic(4);
    for n in 0..=4 {
        for sigma in Permutation::all(n) {
            let m = subdivision_map(n, &sigma, &fam).unwrap();
            for k in 0..=n {
                let mut image: Vec<usize> = (0..=k).map(|j| sigma.apply(j)).collect();
                image.sort_unstable();
                let center = symbolic_center(k);
                for r in 0..=n {
                    let expected = match image.iter().position(|&v| v == r) {
                        Some(pos) => center[pos].clone(),
                        None => BlockPolynomial::zero(&Ring::Rational),
                    };
                    assert_eq!(
                        m.matrix().get(r, k),
                        &expected,
                        "n={n} σ={sigma} column {k} row {r}"
                    );
                }
            }
        }
    }
}

fn to_f64(ring: &Ring, s: &Scalar) -> f64 {
    let text = ring.scalar_text(s);
    match text.split_once('/') {
        Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
        None => text.parse().unwrap(),
    }
}

fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

/// With barycenters as centers the maps are the simplices of the barycentric
/// subdivision, so each has volume `1/(n+1)!` of `Δ^n` and they tile it.
#[test]
fn barycentric_centers_tile_the_simplex() {
    let ring = Ring::Rational;
    let free = (0..=4usize)
        .map(|i| {
            let share = ring.inv(&ring.from_int(i as i64 + 1)).unwrap();
            vec![BlockPolynomial::constant(&ring, share); i]
        })
        .collect();
    let fam = CenterFamily::from_free_coordinates(
        &ring,
        CenterMode::Polynomial {
            m: 0,
            degree_bound: 0,
        },
        free,
    )
    .unwrap();
    for n in 1..=4usize {
        let factorial: f64 = (1..=n + 1).map(|i| i as f64).product();
        let mut total = 0.0;
        for (sigma, m) in all_subdivision_maps(n, &fam).unwrap() {
            let rows: Vec<Vec<f64>> = (0..=n)
                .map(|r| {
                    (0..=n)
                        .map(|c| to_f64(&ring, &m.matrix().get(r, c).as_constant().unwrap()))
                        .collect()
                })
                .collect();
            let det = determinant(rows).abs();
            assert!(
                (det - 1.0 / factorial).abs() < 1e-12,
                "n={n} σ={sigma}: {det}"
            );
            total += det;
        }
        assert!((total - 1.0).abs() < 1e-9);
    }
}

#[test]
fn face_maps_satisfy_cosimplicial_identities() {
    let r = Ring::Rational;
    for n in 2..=5 {
        for j in 1..=n {
            for i in 0..j {
                let lhs = compose(
                    &face_map(i, n - 1, &r).unwrap(),
                    &face_map(j, n, &r).unwrap(),
                )
                .unwrap();
                let rhs = compose(
                    &face_map(j - 1, n - 1, &r).unwrap(),
                    &face_map(i, n, &r).unwrap(),
                )
                .unwrap();
                assert_eq!(lhs, rhs, "n={n} i={i} j={j}");
            }
        }
    }
}

#[test]
fn composition_is_associative() {
    let fam = CenterFamily::symbolic(3);
    let maps: Vec<_> = all_subdivision_maps(3, &fam)
        .unwrap()
        .into_iter()
        .map(|(_, m)| m)
        .take(4)
        .collect();
    for a in &maps {
        for b in &maps {
            for c in &maps {
                let left = compose(&compose(a, b).unwrap(), c).unwrap();
                let right = compose(a, &compose(b, c).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn map_counts() {
    let fam = CenterFamily::symbolic(4);
    let factorial = |n: usize| -> usize { (1..=n).product() };
    for n in 0..=4 {
        assert_eq!(
            all_subdivision_maps(n, &fam).unwrap().len(),
            factorial(n + 1)
        );
        let expected: usize = (0..=n).map(|k| factorial(k + 1)).sum();
        assert_eq!(all_homotopy_maps(n, &fam).unwrap().len(), expected);
    }
}

#[test]
fn all_relations_hold_up_to_four() {
    let start = Instant::now();
    let fam = CenterFamily::symbolic(4);
    let src = StandardMaps { family: &fam };
    for n in 0..=4 {
        let records = check_all_relations(n, &src);
        let failed: Vec<_> = records.iter().filter(|r| !r.passed()).collect();
        assert!(failed.is_empty(), "n={n}: {:?}", failed.first());
        assert!(check_projection_consistency(n, &src)
            .iter()
            .all(|r| r.passed()));
    }
    assert!(start.elapsed().as_secs() < 120);
}
