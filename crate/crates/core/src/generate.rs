//! Seeded instance generators. Every generator validates its output and
//! retries a bounded number of times before giving up.

use crate::linalg::{det, rank, IntMatrix};
use crate::plane::{check_rot_subset_polar, det as det2, stell_component, Point2, Polygon2};
use crate::polyhedra::HPolyhedron;
use crate::proximity::{minors_in_two_levels, proximity_exact};
use crate::rational::{rat, ratio, Rational};
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no valid {kind} instance after {tries} attempts")]
pub struct GenerationFailed {
    pub kind: &'static str,
    pub tries: usize,
}

pub const MAX_TRIES: usize = 5_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpInstance {
    pub p: HPolyhedron,
    pub c: Vec<Rational>,
}

fn random_vec(rng: &mut GenRng, n: usize, max: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-max..=max)).collect()
}

fn random_matrix(rng: &mut GenRng, n: usize, m: usize, max: i64) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..m).map(|_| random_vec(rng, n, max)).collect();
    IntMatrix::from_rows_with_cols(&rows, n).expect("uniform rows")
}

fn nonzero_objective(rng: &mut GenRng, n: usize, max: i64) -> Vec<i64> {
    loop {
        let c = random_vec(rng, n, max);
        if c.iter().any(|&v| v != 0) {
            return c;
        }
    }
}

/// Bounded `P(A, b)` with entries of `A`, `b` and `c` in `[-max, max]` whose
/// LP has an optimum and whose IP has a feasible point.
pub fn random_ilp(rng: &mut GenRng, n: usize, m: usize, max: i64) -> Result<IlpInstance, GenerationFailed> {
    let fail = GenerationFailed {
        kind: "random-ilp",
        tries: MAX_TRIES,
    };
    if m <= n || max < 1 {
        return Err(fail);
    }
    for _ in 0..MAX_TRIES {
        let a = random_matrix(rng, n, m, max);
        if rank(&a) < n {
            continue;
        }
        let b = random_vec(rng, m, max);
        let Ok(p) = HPolyhedron::new(a, b) else { continue };
        if !matches!(p.is_bounded(), Ok(true)) {
            continue;
        }
        let c: Vec<Rational> = nonzero_objective(rng, n, max).into_iter().map(rat).collect();
        if proximity_exact(&p, &c, None).is_ok() {
            return Ok(IlpInstance { p, c });
        }
    }
    Err(fail)
}

/// All `n x n` minors in `{0, ±1, ±2}` and at least one equal to `±2`.
pub fn is_bimodular(a: &IntMatrix) -> bool {
    let n = a.ncols();
    let mut two = false;
    for rows in (0..a.nrows()).combinations(n) {
        let Ok(d) = det(&a.select_rows(&rows)) else {
            return false;
        };
        let d = d.abs();
        if d > BigInt::from(2) {
            return false;
        }
        two |= d == BigInt::from(2);
    }
    two
}

/// Bimodular matrix grown row by row from a basis of determinant 2; each
/// candidate row has entries in `[-2, 2]` and is kept when every new minor
/// stays in `{0, ±1, ±2}`.
pub fn bimodular_matrix(rng: &mut GenRng, n: usize, m: usize) -> Result<IntMatrix, GenerationFailed> {
    let fail = GenerationFailed {
        kind: "bimodular",
        tries: MAX_TRIES,
    };
    if m < n || n == 0 {
        return Err(fail);
    }
    for _ in 0..MAX_TRIES {
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut attempts = 0;
        while rows.len() < m && attempts < 200 {
            attempts += 1;
            let cand = random_vec(rng, n, 2);
            if cand.iter().all(|&v| v == 0) {
                continue;
            }
            let mut trial = rows.clone();
            trial.push(cand);
            let t = IntMatrix::from_rows_with_cols(&trial, n).expect("uniform rows");
            let ok = (0..trial.len() - 1).combinations(n.saturating_sub(1)).all(|mut k| {
                k.push(trial.len() - 1);
                det(&t.select_rows(&k)).is_ok_and(|d| d.abs() <= BigInt::from(2))
            });
            if ok {
                rows = trial;
            }
        }
        if rows.len() < m {
            continue;
        }
        rows.shuffle(rng);
        let a = IntMatrix::from_rows_with_cols(&rows, n).expect("uniform rows");
        if rank(&a) == n && is_bimodular(&a) {
            return Ok(a);
        }
    }
    Err(fail)
}

/// Flips row signs of `a`, which keeps every minor up to sign, until
/// `{x : Ax <= 0} = {0}`; tries at most 64 random patterns.
fn bounded_sign_flip(rng: &mut GenRng, a: &IntMatrix) -> Option<IntMatrix> {
    let (m, n) = (a.nrows(), a.ncols());
    let mut masks: Vec<u64> = (0..1u64 << m.min(16)).collect();
    masks.shuffle(rng);
    masks.into_iter().take(64).find_map(|mask| {
        let rows: Vec<Vec<i64>> = (0..m)
            .map(|i| {
                a.row(i)
                    .iter()
                    .map(|&v| if mask >> i & 1 == 1 { -v } else { v })
                    .collect()
            })
            .collect();
        let a = IntMatrix::from_rows_with_cols(&rows, n).expect("uniform rows");
        let cone = HPolyhedron::new(a.clone(), vec![0; m]).ok()?;
        matches!(cone.is_bounded(), Ok(true)).then_some(a)
    })
}

/// Bimodular `P(A, b)` with `P ∩ Z^n = {0}`, bounded, plus a random objective.
pub fn bimodular_origin_only(rng: &mut GenRng, n: usize, m: usize) -> Result<IlpInstance, GenerationFailed> {
    for _ in 0..MAX_TRIES {
        let a = bimodular_matrix(rng, n, m)?;
        let Some(a) = bounded_sign_flip(rng, &a) else { continue };
        let b: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=2)).collect();
        let Ok(p) = HPolyhedron::new(a, b) else { continue };
        if p.integer_points(None).map_or(true, |pts| pts != [vec![0; n]]) {
            continue;
        }
        let c = nonzero_objective(rng, n, 3).into_iter().map(rat).collect();
        return Ok(IlpInstance { p, c });
    }
    Err(GenerationFailed {
        kind: "bimodular",
        tries: MAX_TRIES,
    })
}

/// Drops rows that do not define facets, one at a time.
pub fn facet_rows_only(p: &HPolyhedron) -> Option<HPolyhedron> {
    let mut cur = p.clone();
    let mut i = 0;
    while i < cur.m() {
        if cur.is_facet_row(i).ok()? {
            i += 1;
            continue;
        }
        let keep: Vec<usize> = (0..cur.m()).filter(|&j| j != i).collect();
        let b: Vec<i64> = keep.iter().map(|&j| cur.b()[j]).collect();
        cur = HPolyhedron::new(cur.a().select_rows(&keep), b).ok()?;
    }
    Some(cur)
}

fn lattice_free_from(p: HPolyhedron) -> Option<HPolyhedron> {
    let n = p.n();
    if !p.is_bounded().ok()? || p.dimension().ok()? != Some(n) || !p.integer_points(None).ok()?.is_empty() {
        return None;
    }
    facet_rows_only(&p)
}

/// Bounded, full-dimensional, lattice-free `P(A, b)` with every row
/// facet-defining; entries of `A` in `[-max, max]`.
pub fn lattice_free(rng: &mut GenRng, n: usize, m: usize, max: i64) -> Result<HPolyhedron, GenerationFailed> {
    for _ in 0..MAX_TRIES {
        let a = random_matrix(rng, n, m, max);
        if rank(&a) < n {
            continue;
        }
        let b = random_vec(rng, m, max);
        if let Some(p) = HPolyhedron::new(a, b).ok().and_then(lattice_free_from) {
            return Ok(p);
        }
    }
    Err(GenerationFailed {
        kind: "lattice-free",
        tries: MAX_TRIES,
    })
}

/// Upper-triangular integer matrix with diagonal in `[1, 3]`, off-diagonal
/// entries in `[-2, 2]` and determinant at least 2.
fn scaling_matrix(rng: &mut GenRng, n: usize) -> IntMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match j.cmp(&i) {
                        std::cmp::Ordering::Less => 0,
                        std::cmp::Ordering::Equal => rng.gen_range(1..=3),
                        std::cmp::Ordering::Greater => rng.gen_range(-2..=2),
                    })
                    .collect()
            })
            .collect();
        if (0..n).map(|i| rows[i][i]).product::<i64>() >= 2 {
            return IntMatrix::from_rows_with_cols(&rows, n).expect("uniform rows");
        }
    }
}

/// Lattice-free instance with facet matrix `T B`, `T` bimodular and
/// `|det B| = k >= 2`, so every minor lies in `{0, ±k, ±2k}`. With `k = 1`
/// the width bound `Δ_n - 2 <= 0` leaves no full-dimensional lattice-free
/// polytope, hence the scaling.
pub fn lattice_free_bimodular(rng: &mut GenRng, n: usize, m: usize) -> Result<HPolyhedron, GenerationFailed> {
    for _ in 0..MAX_TRIES {
        let t = bimodular_matrix(rng, n, m)?;
        let Some(t) = bounded_sign_flip(rng, &t) else { continue };
        let Ok(a) = t.mul(&scaling_matrix(rng, n)) else {
            continue;
        };
        let bmax = (0..m).flat_map(|i| a.row(i).to_vec()).map(i64::abs).max().unwrap_or(1);
        let b = random_vec(rng, m, bmax);
        let Some(p) = HPolyhedron::new(a, b).ok().and_then(lattice_free_from) else {
            continue;
        };
        if minors_in_two_levels(p.a()).is_some() {
            return Ok(p);
        }
    }
    Err(GenerationFailed {
        kind: "lattice-free bimodular",
        tries: MAX_TRIES,
    })
}

/// Centrally symmetric polygon `s · conv(±x_1, …, ±x_k)` with integer `x_i`
/// in `[-max, max]^2`, scaled by `s = p/q` with `p^2 M <= q^2` where `M` is
/// the largest `|det|` over vertex pairs, so `rot Q ⊆ Q°`. The denominator
/// is drawn at random and `p` taken as large as allowed.
pub fn symmetric_polygon(rng: &mut GenRng, points: usize, max: i64) -> Result<Polygon2, GenerationFailed> {
    let fail = GenerationFailed {
        kind: "symmetric-polygon",
        tries: MAX_TRIES,
    };
    if points < 2 || max < 1 {
        return Err(fail);
    }
    for _ in 0..MAX_TRIES {
        let pts: Vec<Point2> = (0..points)
            .map(|_| Point2::int(rng.gen_range(-max..=max), rng.gen_range(-max..=max)))
            .collect();
        let Ok(hull) = Polygon2::symmetric_hull(&pts) else {
            continue;
        };
        if !hull.contains_origin_interior() {
            continue;
        }
        let v = hull.vertices();
        let mdet = (0..v.len())
            .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
            .map(|(i, j)| det2(&v[i], &v[j]).abs())
            .max()
            .expect("polygon has vertices");
        let Some(m) = mdet.to_integer().to_i64() else { continue };
        let root = m.sqrt();
        let q = rng.gen_range(root + 1..=3 * (root + 1));
        let p = (q * q / m).sqrt();
        if p < 1 {
            continue;
        }
        let poly = hull.scale(&ratio(p, q));
        if check_rot_subset_polar(&poly) {
            return Ok(poly);
        }
    }
    Err(fail)
}

/// Random point in the open component of `stell(P) \ P` beyond the edge on
/// `L_v` for a random vertex `v` of the self-polar `P`: a strict convex
/// combination of the component's corners.
pub fn random_stell_point(rng: &mut GenRng, p: &Polygon2) -> Option<(Point2, Point2)> {
    let vertex = p.vertices().choose(rng)?.clone();
    let tri = stell_component(p, &vertex).ok()?;
    let w: Vec<i64> = (0..3).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = w.iter().sum();
    let point = tri
        .vertices()
        .iter()
        .zip(&w)
        .fold(Point2::zero(), |acc, (x, &wi)| acc.add(&x.scale(&ratio(wi, total))));
    Some((vertex, point))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_ilp_is_deterministic() {
        let a = random_ilp(&mut rng(1), 2, 4, 5).unwrap();
        let b = random_ilp(&mut rng(1), 2, 4, 5).unwrap();
        assert_eq!(a, b);
        assert!(proximity_exact(&a.p, &a.c, None).is_ok());
    }

    #[test]
    fn bimodular_passes_validator() {
        let mut r = rng(7);
        for _ in 0..5 {
            let a = bimodular_matrix(&mut r, 3, 5).unwrap();
            assert!(is_bimodular(&a));
        }
    }

    #[test]
    fn origin_only_bimodular() {
        let inst = bimodular_origin_only(&mut rng(3), 2, 4).unwrap();
        assert_eq!(inst.p.integer_points(None).unwrap(), vec![vec![0, 0]]);
    }

    #[test]
    fn lattice_free_rows_are_facets() {
        let p = lattice_free(&mut rng(5), 2, 4, 5).unwrap();
        assert!(p.integer_points(None).unwrap().is_empty());
        assert!((0..p.m()).all(|i| p.is_facet_row(i).unwrap()));
    }

    #[test]
    fn polygons_pass_the_determinant_filter() {
        let mut r = rng(11);
        for _ in 0..20 {
            let q = symmetric_polygon(&mut r, 3, 4).unwrap();
            assert!(q.is_centrally_symmetric());
            assert!(check_rot_subset_polar(&q));
            assert!(q.len() <= 6);
        }
    }
}
