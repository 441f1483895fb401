#![allow(dead_code)]

use proptest::prelude::*;
use proxflat::linalg::IntMatrix;
use proxflat::polyhedra::HPolyhedron;

pub fn matrix(rows: usize, cols: usize, max: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-max..=max, cols), rows)
}

pub fn square(max_n: usize, max: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_n).prop_flat_map(move |n| matrix(n, n, max))
}

/// `(rows, b)` with `n` in `2..=3` and `m` in `n + 1..=5`.
pub fn system(max: i64) -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>)> {
    (2usize..=3)
        .prop_flat_map(move |n| (Just(n), n + 1..=5))
        .prop_flat_map(move |(n, m)| (matrix(m, n, max), prop::collection::vec(-max..=max, m)))
}

pub fn polyhedron(rows: &[Vec<i64>], b: &[i64]) -> Option<HPolyhedron> {
    HPolyhedron::from_rows(rows, b.to_vec()).ok()
}

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows_with_cols(rows, rows[0].len()).expect("uniform rows")
}
