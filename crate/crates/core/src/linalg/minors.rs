use super::{det, rank, IntMatrix, LinalgError};
use crate::rational::Rational;
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A largest minor together with where it was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaWitness {
    pub value: BigInt,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Largest absolute `k x k` minor, `1 <= k <= min(m, n)`.
pub fn delta_k(a: &IntMatrix, k: usize) -> Result<BigInt, LinalgError> {
    Ok(delta_k_witness(a, k)?.value)
}

/// [`delta_k`] plus the lexicographically first row and column subsets that
/// attain it. The scan stops early once the Hadamard bound is met.
pub fn delta_k_witness(a: &IntMatrix, k: usize) -> Result<DeltaWitness, LinalgError> {
    let max = a.nrows().min(a.ncols());
    if k == 0 || k > max {
        return Err(LinalgError::InvalidOrder { k, max });
    }
    let mut norms: Vec<BigInt> = a
        .rows_iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v) * v).sum())
        .collect();
    norms.sort_by(|x, y| y.cmp(x));
    let hadamard_sq: BigInt = norms.iter().take(k).product();

    let mut best = DeltaWitness {
        value: BigInt::zero(),
        rows: (0..k).collect(),
        cols: (0..k).collect(),
    };
    for rows in (0..a.nrows()).combinations(k) {
        let sub = a.select_rows(&rows);
        for cols in (0..a.ncols()).combinations(k) {
            let d = det(&sub.select_cols(&cols))?.abs();
            if d > best.value {
                best = DeltaWitness {
                    value: d,
                    rows: rows.clone(),
                    cols,
                };
                if &best.value * &best.value == hadamard_sq {
                    return Ok(best);
                }
            }
        }
    }
    Ok(best)
}

/// Gcd of the `r x r` minors of the rows `index` of `a`, where `r` is their
/// rank. Equals 1 for the empty index set.
pub fn gcd_minors(a: &IntMatrix, index: &[usize]) -> Result<BigInt, LinalgError> {
    a.check_rows(index)?;
    if index.is_empty() {
        return Ok(BigInt::one());
    }
    let sub = a.select_rows(index);
    let r = rank(&sub);
    if r == 0 {
        return Ok(BigInt::one());
    }
    let mut g = BigInt::zero();
    for rows in (0..sub.nrows()).combinations(r) {
        let s = sub.select_rows(&rows);
        for cols in (0..sub.ncols()).combinations(r) {
            g = g.gcd(&det(&s.select_cols(&cols))?);
            if g.is_one() {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

fn check_independent(a: &IntMatrix, index: &[usize]) -> Result<(), LinalgError> {
    a.check_rows(index)?;
    if index.iter().duplicates().next().is_some() || rank(&a.select_rows(index)) != index.len() {
        return Err(LinalgError::DependentRows(index.to_vec()));
    }
    Ok(())
}

/// Direction-dependent minor statistic: the largest `|det([alpha; A_K])|` over
/// `K ⊇ index` with `|K| = n - 1`, divided by the gcd of the maximal minors of
/// `A_index`. `a` needs full column rank and `index` independent rows.
pub fn delta_alpha(a: &IntMatrix, alpha: &[i64], index: &[usize]) -> Result<Rational, LinalgError> {
    let n = a.ncols();
    if alpha.len() != n {
        return Err(LinalgError::DimensionMismatch(format!(
            "direction of length {} for {n} columns",
            alpha.len()
        )));
    }
    if alpha.iter().all(|&v| v == 0) {
        return Err(LinalgError::ZeroDirection);
    }
    check_independent(a, index)?;
    if index.len() + 1 > n {
        return Err(LinalgError::WrongIndexCount {
            found: index.len(),
            expected: n - 1,
        });
    }
    let g = gcd_minors(a, index)?;
    let rest: Vec<usize> = (0..a.nrows()).filter(|i| !index.contains(i)).collect();
    let mut best = BigInt::zero();
    for extra in rest.iter().copied().combinations(n - 1 - index.len()) {
        let mut k = index.to_vec();
        k.extend(extra);
        let d = det(&a.select_rows(&k).prepend_row(alpha)?)?.abs();
        if d > best {
            best = d;
        }
    }
    Ok(Rational::new(best, g))
}

/// Primitive integer generator of `ker A_index` for `n - 1` independent rows,
/// with its first nonzero entry positive.
pub fn primitive_ray(a: &IntMatrix, index: &[usize]) -> Result<Vec<i64>, LinalgError> {
    let n = a.ncols();
    if index.len() + 1 != n {
        return Err(LinalgError::WrongIndexCount {
            found: index.len(),
            expected: n.saturating_sub(1),
        });
    }
    check_independent(a, index)?;
    let sub = a.select_rows(index);
    let mut r: Vec<BigInt> = (0..n)
        .map(|i| {
            let cols: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let d = det(&sub.select_cols(&cols))?;
            Ok(if i % 2 == 0 { d } else { -d })
        })
        .collect::<Result<_, LinalgError>>()?;
    let g = r.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let flip = r.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
    for v in &mut r {
        *v = &*v / &g;
        if flip {
            *v = -&*v;
        }
    }
    r.into_iter()
        .map(|v| i64::try_from(v).map_err(|_| LinalgError::Overflow))
        .collect()
}
