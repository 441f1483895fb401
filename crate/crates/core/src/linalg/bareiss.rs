//! Fraction-free (Bareiss) elimination. Each routine first runs in checked
//! `i128` and replays in `BigInt` only when an intermediate overflows.

use super::{IntMatrix, LinalgError};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

trait Exact: Clone + PartialEq + Zero + One + Sized {
    fn mul_c(&self, o: &Self) -> Option<Self>;
    fn sub_c(&self, o: &Self) -> Option<Self>;
    fn div_c(&self, o: &Self) -> Self;
    fn neg_c(&self) -> Option<Self>;
    fn is_negative_c(&self) -> bool;
}

impl Exact for i128 {
    fn mul_c(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub_c(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn div_c(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_c(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn is_negative_c(&self) -> bool {
        *self < 0
    }
}

impl Exact for BigInt {
    fn mul_c(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub_c(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn div_c(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_c(&self) -> Option<Self> {
        Some(-self)
    }
    fn is_negative_c(&self) -> bool {
        self.is_negative()
    }
}

/// Forward elimination in place on an `r x c` matrix. Returns the rank and the
/// sign of the row permutation, or `None` on overflow. When the matrix is
/// square and nonsingular the last pivot is the determinant up to that sign.
fn eliminate<T: Exact>(m: &mut [Vec<T>], pivot_cols: usize) -> Option<(usize, bool, Vec<usize>)> {
    let rows = m.len();
    let mut prev = T::one();
    let mut r = 0;
    let mut flipped = false;
    let mut pivots = Vec::new();
    for col in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            flipped = !flipped;
        }
        for i in r + 1..rows {
            for j in col + 1..m[i].len() {
                let lhs = m[r][col].mul_c(&m[i][j])?;
                let rhs = m[i][col].mul_c(&m[r][j])?;
                m[i][j] = lhs.sub_c(&rhs)?.div_c(&prev);
            }
            m[i][col] = T::zero();
        }
        prev = m[r][col].clone();
        pivots.push(col);
        r += 1;
    }
    Some((r, flipped, pivots))
}

fn det_generic<T: Exact>(mut m: Vec<Vec<T>>) -> Option<T> {
    let n = m.len();
    if n == 0 {
        return Some(T::one());
    }
    let (r, flipped, _) = eliminate(&mut m, n)?;
    if r < n {
        return Some(T::zero());
    }
    let d = m[n - 1][n - 1].clone();
    if flipped {
        d.neg_c()
    } else {
        Some(d)
    }
}

/// Solution `x = numer / denom` of a square nonsingular system, `denom > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub numer: Vec<BigInt>,
    pub denom: BigInt,
}

impl Solution {
    pub fn to_rational(&self) -> Vec<Rational> {
        self.numer
            .iter()
            .map(|v| Rational::new(v.clone(), self.denom.clone()))
            .collect()
    }
}

/// `Some(None)` when singular, `None` on overflow.
fn solve_generic<T: Exact>(a: &[Vec<T>], b: &[T]) -> Option<Option<(Vec<T>, T)>> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, _, _) = eliminate(&mut m, n)?;
    if r < n {
        return Some(None);
    }
    // After elimination row i has pivot m[i][i]; the last pivot d is the
    // determinant of the row-permuted matrix and d * x is integral.
    let d = m[n - 1][n - 1].clone();
    let mut y: Vec<T> = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut acc = d.mul_c(&m[i][n])?;
        for j in i + 1..n {
            acc = acc.sub_c(&m[i][j].mul_c(&y[j])?)?;
        }
        y[i] = acc.div_c(&m[i][i]);
    }
    if d.is_negative_c() {
        let y = y.iter().map(|v| v.neg_c()).collect::<Option<Vec<T>>>()?;
        Some(Some((y, d.neg_c()?)))
    } else {
        Some(Some((y, d)))
    }
}

fn to_i128(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.rows_iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect()
}

fn square_check(m: &IntMatrix) -> Result<(), LinalgError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(LinalgError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// Determinant of a square integer matrix; the empty matrix has determinant 1.
pub fn det(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    square_check(m)?;
    if let Some(d) = det_generic(to_i128(m)) {
        return Ok(BigInt::from(d));
    }
    Ok(det_generic(m.to_big()).expect("BigInt elimination cannot overflow"))
}

/// Determinant of a square rational matrix, computed by clearing each row's
/// denominators.
pub fn det_rational(m: &[Vec<Rational>]) -> Result<Rational, LinalgError> {
    let n = m.len();
    if let Some(bad) = m.iter().position(|r| r.len() != n) {
        return Err(LinalgError::NotSquare {
            rows: n,
            cols: m[bad].len(),
        });
    }
    let mut scale = BigInt::one();
    let rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = crate::rational::common_denominator(row);
            scale *= &l;
            row.iter()
                .map(|v| (v * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let d = det_generic(rows).expect("BigInt elimination cannot overflow");
    Ok(Rational::new(d, scale))
}

pub fn rank(m: &IntMatrix) -> usize {
    let cols = m.ncols();
    let mut a = to_i128(m);
    if let Some((r, _, _)) = eliminate(&mut a, cols) {
        return r;
    }
    let mut b = m.to_big();
    eliminate(&mut b, cols).expect("BigInt elimination cannot overflow").0
}

/// Solves `a x = rhs` for square `a`; `Ok(None)` when `a` is singular.
pub fn solve(a: &IntMatrix, rhs: &[BigInt]) -> Result<Option<Solution>, LinalgError> {
    square_check(a)?;
    if rhs.len() != a.nrows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "rhs of length {} for {} rows",
            rhs.len(),
            a.nrows()
        )));
    }
    let small: Option<Vec<i128>> = rhs.iter().map(i128::try_from).map(Result::ok).collect();
    if let Some(b) = small {
        if let Some(res) = solve_generic(&to_i128(a), &b) {
            return Ok(res.map(|(y, d)| Solution {
                numer: y.into_iter().map(BigInt::from).collect(),
                denom: BigInt::from(d),
            }));
        }
    }
    let res = solve_generic(&a.to_big(), rhs).expect("BigInt elimination cannot overflow");
    Ok(res.map(|(numer, denom)| Solution { numer, denom }))
}

/// Solves `a x = rhs` with a rational right-hand side.
pub fn solve_rational(a: &IntMatrix, rhs: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
    let l = crate::rational::common_denominator(rhs);
    let scaled: Vec<BigInt> = rhs
        .iter()
        .map(|v| (v * Rational::from_integer(l.clone())).to_integer())
        .collect();
    Ok(solve(a, &scaled)?.map(|s| s.numer.into_iter().map(|v| Rational::new(v, &s.denom * &l)).collect()))
}

/// Exact inverse of a square integer matrix, `None` when singular.
pub fn inverse(a: &IntMatrix) -> Result<Option<Vec<Vec<Rational>>>, LinalgError> {
    square_check(a)?;
    let n = a.nrows();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<BigInt> = (0..n).map(|i| BigInt::from((i == j) as i64)).collect();
        match solve(a, &e)? {
            Some(s) => cols.push(s.to_rational()),
            None => return Ok(None),
        }
    }
    Ok(Some(
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det(&m(&[&[2, 0], &[0, 3]])).unwrap(), BigInt::from(6));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])).unwrap(), BigInt::from(0));
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(det(&IntMatrix::zeros(0, 0)).unwrap(), BigInt::from(1));
        assert!(det(&m(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn det_overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2;
        let a = m(&[&[big, big - 1, 3], &[big - 7, big, 1], &[5, big, big]]);
        let exact = det_rational(&a.to_rational()).unwrap();
        assert_eq!(Rational::from_integer(det(&a).unwrap()), exact);
    }

    #[test]
    fn rational_determinant() {
        let a = vec![vec![ratio(1, 2), rat(1)], vec![rat(0), ratio(2, 3)]];
        assert_eq!(det_rational(&a).unwrap(), ratio(1, 3));
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve_rational(&a, &[rat(3), rat(4)]).unwrap().unwrap();
        assert_eq!(x, vec![rat(1), rat(1)]);
        let inv = inverse(&a).unwrap().unwrap();
        assert_eq!(inv[0], vec![ratio(3, 5), ratio(-1, 5)]);
        assert!(solve_rational(&m(&[&[1, 2], &[2, 4]]), &[rat(1), rat(1)])
            .unwrap()
            .is_none());
    }

    #[test]
    fn rank_of_wide_and_tall() {
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6]])), 1);
        assert_eq!(rank(&m(&[&[1, 0], &[0, 1], &[1, 1]])), 2);
        assert_eq!(rank(&IntMatrix::zeros(2, 3)), 0);
    }
}
