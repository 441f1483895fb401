//! Exact integer and rational linear algebra: determinants, ranks, minor
//! statistics, Hermite normal form and primitive kernel rays.

mod bareiss;
mod hnf;
mod minors;

pub use bareiss::{det, det_rational, inverse, rank, solve, solve_rational, Solution};
pub use hnf::{hnf, HermiteForm};
pub use minors::{delta_alpha, delta_k, delta_k_witness, gcd_minors, primitive_ray, DeltaWitness};

use crate::rational::Rational;
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("row index {index} out of range for {rows} rows")]
    IndexOutOfRange { index: usize, rows: usize },
    #[error("minor order {k} outside 1..={max}")]
    InvalidOrder { k: usize, max: usize },
    #[error("rows {0:?} are not linearly independent")]
    DependentRows(Vec<usize>),
    #[error("index set has {found} rows, expected {expected}")]
    WrongIndexCount { found: usize, expected: usize },
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("integer overflow while building an i64 matrix")]
    Overflow,
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds from row slices; all rows must share one length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`IntMatrix::from_rows`] but keeps the column count when there are no rows.
    pub fn from_rows_with_cols<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::Ragged {
                    row: i,
                    found: r.len(),
                    expected: cols,
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[i64]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.rows_iter().map(|r| r.to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        IntMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j));
            }
        }
        IntMatrix {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    /// Checks that every index addresses a row.
    pub fn check_rows(&self, idx: &[usize]) -> Result<(), LinalgError> {
        match idx.iter().find(|&&i| i >= self.rows) {
            Some(&index) => Err(LinalgError::IndexOutOfRange { index, rows: self.rows }),
            None => Ok(()),
        }
    }

    /// `[top; self]`.
    pub fn prepend_row(&self, top: &[i64]) -> Result<IntMatrix, LinalgError> {
        if top.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "row of length {} above {} columns",
                top.len(),
                self.cols
            )));
        }
        let mut data = top.to_vec();
        data.extend_from_slice(&self.data);
        Ok(IntMatrix {
            rows: self.rows + 1,
            cols: self.cols,
            data,
        })
    }

    /// `[self; other]`.
    pub fn stack(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if other.cols != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "stacking {} columns on {}",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    /// Checked product `self * other`.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: i128 = (0..self.cols)
                    .map(|k| self.get(i, k) as i128 * other.get(k, j) as i128)
                    .sum();
                out.set(i, j, i64::try_from(s).map_err(|_| LinalgError::Overflow)?);
            }
        }
        Ok(out)
    }

    /// `a_i . x` for an integer vector, widened to avoid overflow.
    pub fn row_dot(&self, i: usize, x: &[i64]) -> i128 {
        self.row(i).iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum()
    }

    /// `a_i . x` for a rational vector.
    pub fn row_dot_rat(&self, i: usize, x: &[Rational]) -> Rational {
        dot_rat(self.row(i), x)
    }

    pub fn mul_vec_rat(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.rows).map(|i| self.row_dot_rat(i, x)).collect()
    }

    pub fn to_big(&self) -> Vec<Vec<BigInt>> {
        self.rows_iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    pub fn to_rational(&self) -> Vec<Vec<Rational>> {
        self.rows_iter()
            .map(|r| r.iter().map(|&v| crate::rational::rat(v)).collect())
            .collect()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> i64 {
        self.data.iter().map(|v| v.abs()).max().unwrap_or(0)
    }
}

pub fn dot_rat(a: &[i64], x: &[Rational]) -> Rational {
    let mut s = Rational::from_integer(BigInt::from(0));
    for (&ai, xi) in a.iter().zip(x) {
        if ai != 0 {
            s += xi * BigInt::from(ai);
        }
    }
    s
}

pub fn dot_i64(a: &[i64], x: &[i64]) -> i128 {
    a.iter().zip(x).map(|(&p, &q)| p as i128 * q as i128).sum()
}

/// Lexicographically first maximal linearly independent subset of `candidates`
/// (as rows of `a`), after the rows in `forced`, which are kept if independent.
pub fn independent_extension(a: &IntMatrix, forced: &[usize], candidates: &[usize]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for &i in forced.iter().chain(candidates) {
        if chosen.contains(&i) {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(i);
        if rank(&a.select_rows(&trial)) == trial.len() {
            chosen = trial;
            if chosen.len() == a.ncols() {
                break;
            }
        }
    }
    chosen
}
