use itertools::Itertools;
use proptest::prelude::*;
use proxflat::generate::{bimodular_matrix, rng};
use proxflat::hilbert::{
    complete_radius, graver_basis, hilbert_basis, kappa_tilde, spindle_lattice_points, SignedCone,
};
use proxflat::linalg::{det, primitive_ray, rank, IntMatrix};
use std::collections::BTreeSet;

fn matrix(rows: &[Vec<i64>], n: usize) -> IntMatrix {
    IntMatrix::from_rows_with_cols(rows, n).unwrap()
}

/// Primitive extreme rays of `{x : S A x >= 0}`, assuming the cone is pointed.
fn extreme_rays(cone: &SignedCone) -> BTreeSet<Vec<i64>> {
    let a = &cone.a;
    let n = a.ncols();
    let mut out = BTreeSet::new();
    for idx in (0..a.nrows()).combinations(n - 1) {
        if rank(&a.select_rows(&idx)) != n - 1 {
            continue;
        }
        let r = primitive_ray(a, &idx).unwrap();
        for s in [1, -1] {
            let v: Vec<i64> = r.iter().map(|x| s * x).collect();
            if cone.contains(&v) {
                out.insert(v);
            }
        }
    }
    out
}

/// All `n x n` minors in `{0, ±1}` and full column rank.
fn is_unimodular(a: &IntMatrix) -> bool {
    rank(a) == a.ncols()
        && (0..a.nrows())
            .combinations(a.ncols())
            .all(|k| det(&a.select_rows(&k)).is_ok_and(|d| d.magnitude() <= &1u32.into()))
}

fn unimodular(shears: &[(usize, usize, i64)], extra: &[Vec<i64>], n: usize) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for &(i, j, k) in shears {
        let (i, j) = (i % n, j % n);
        if i != j {
            let src = rows[j].clone();
            rows[i].iter_mut().zip(&src).for_each(|(x, y)| *x += k * y);
        }
    }
    for e in extra {
        let mut trial = rows.clone();
        trial.push(e[..n].to_vec());
        if is_unimodular(&matrix(&trial, n)) {
            rows = trial;
        }
    }
    matrix(&rows, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hilbert_elements_pass_spindle_criterion(seed in any::<u64>(), three in any::<bool>(), signs in prop::collection::vec(prop::bool::ANY, 6)) {
        let n = if three { 3 } else { 2 };
        let a = bimodular_matrix(&mut rng(seed), n, n + 1).unwrap();
        let signs: Vec<i8> = signs[..a.nrows()].iter().map(|&s| if s { 1 } else { -1 }).collect();
        let cone = SignedCone::new(a.clone(), signs).unwrap();
        let basis = hilbert_basis(&cone, complete_radius(&a).unwrap()).unwrap();
        prop_assert!(!basis.truncated());
        for e in &basis.elements {
            prop_assert!(cone.contains(&e.vector));
            let pts = spindle_lattice_points(&a, &e.vector).unwrap();
            prop_assert_eq!(pts, vec![vec![0; n], e.vector.clone()].into_iter().sorted().collect::<Vec<_>>());
        }
        // Every extreme ray is irreducible.
        let basis_set: BTreeSet<Vec<i64>> = basis.vectors().into_iter().collect();
        prop_assert!(extreme_rays(&cone).is_subset(&basis_set));
    }

    #[test]
    fn unimodular_hilbert_basis_is_the_rays(
        shears in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..4),
        extra in prop::collection::vec(prop::collection::vec(-1i64..=1, 3), 0..3),
        three in any::<bool>(),
        signs in prop::collection::vec(prop::bool::ANY, 6),
    ) {
        let n = if three { 3 } else { 2 };
        let a = unimodular(&shears, &extra, n);
        let signs: Vec<i8> = signs[..a.nrows()].iter().map(|&s| if s { 1 } else { -1 }).collect();
        let cone = SignedCone::new(a.clone(), signs).unwrap();
        let rays = extreme_rays(&cone);
        let radius = rays.iter().flatten().map(|v| v.abs()).max().unwrap_or(1).max(1);
        let basis: BTreeSet<Vec<i64>> = hilbert_basis(&cone, radius).unwrap().vectors().into_iter().collect();
        prop_assert_eq!(basis, rays);
    }

    #[test]
    fn graver_basis_is_symmetric(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 3)) {
        let a = matrix(&rows, 2);
        prop_assume!(rank(&a) == 2);
        let g = graver_basis(&a, 4).unwrap();
        let set: BTreeSet<Vec<i64>> = g.vectors().into_iter().collect();
        for v in &set {
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            prop_assert!(set.contains(&neg));
        }
    }

    #[test]
    fn kappa_tilde_grows_with_radius(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 3), alpha in prop::collection::vec(-3i64..=3, 2), r in 1i64..4) {
        let a = matrix(&rows, 2);
        prop_assume!(rank(&a) == 2);
        prop_assume!(alpha.iter().any(|&v| v != 0));
        let small = kappa_tilde(&a, &alpha, r);
        let large = kappa_tilde(&a, &alpha, r + 1);
        match (small, large) {
            (Ok(s), Ok(l)) => {
                prop_assert!(s.value <= l.value);
                prop_assert!(!l.truncated || s.truncated);
            }
            (Err(_), _) | (_, Err(_)) => {}
        }
    }
}
