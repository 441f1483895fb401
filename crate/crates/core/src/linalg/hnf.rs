use super::{IntMatrix, LinalgError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// `a * u = h` with `u` unimodular and `h` in column-style Hermite normal form:
/// lower echelon, positive pivots, entries left of a pivot reduced into
/// `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each pivot row, as `(row, col)`.
    pub pivots: Vec<(usize, usize)>,
}

fn col_combine(m: &mut [Vec<BigInt>], c1: usize, c2: usize, coeffs: [&BigInt; 4]) {
    // (c1, c2) <- (p*c1 + q*c2, r*c1 + s*c2)
    let [p, q, r, s] = coeffs;
    for row in m.iter_mut() {
        let a = row[c1].clone();
        let b = row[c2].clone();
        row[c1] = p * &a + q * &b;
        row[c2] = r * &a + s * &b;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    for row in m.iter_mut() {
        let v = &row[src] * k;
        row[dst] -= v;
    }
}

fn to_int(m: &[Vec<BigInt>], cols: usize) -> Result<IntMatrix, LinalgError> {
    let rows: Vec<Vec<i64>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| i64::try_from(v).map_err(|_| LinalgError::Overflow))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    IntMatrix::from_rows_with_cols(&rows, cols)
}

pub fn hnf(a: &IntMatrix) -> Result<HermiteForm, LinalgError> {
    let (m, n) = (a.nrows(), a.ncols());
    let mut h = a.to_big();
    let mut u = IntMatrix::identity(n).to_big();
    let mut pivots = Vec::new();
    let mut col = 0;
    for i in 0..m {
        if col == n {
            break;
        }
        for j in col + 1..n {
            if h[i][j].is_zero() {
                continue;
            }
            let (x, y) = (h[i][col].clone(), h[i][j].clone());
            let e = x.extended_gcd(&y);
            let (g, s, t) = if e.gcd.is_negative() {
                (-e.gcd, -e.x, -e.y)
            } else {
                (e.gcd, e.x, e.y)
            };
            let r = -(&y / &g);
            let q = &x / &g;
            col_combine(&mut h, col, j, [&s, &t, &r, &q]);
            col_combine(&mut u, col, j, [&s, &t, &r, &q]);
        }
        if h[i][col].is_zero() {
            continue;
        }
        if h[i][col].is_negative() {
            for row in h.iter_mut().chain(u.iter_mut()) {
                row[col] = -&row[col];
            }
        }
        let p = h[i][col].clone();
        for j in 0..col {
            let k = h[i][j].div_floor(&p);
            if !k.is_zero() {
                col_axpy(&mut h, j, col, &k);
                col_axpy(&mut u, j, col, &k);
            }
        }
        pivots.push((i, col));
        col += 1;
    }
    Ok(HermiteForm {
        h: to_int(&h, n)?,
        u: to_int(&u, n)?,
        pivots,
    })
}
