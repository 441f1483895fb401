use super::PolyhedronError;
use crate::linalg::{self, dot_rat, primitive_ray, rank, IntMatrix};
use crate::rational::{common_denominator, Rational};
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

/// Largest ambient dimension handled by the exhaustive routines.
pub const MAX_DIM: usize = 5;
/// Largest number of candidate bases a single enumeration may visit. Covers
/// `m <= 12` rows at `n <= 5` with room for doubled (spindle) systems.
pub const MAX_BASES: usize = 60_000;

/// `{x : a_i x <= rhs_i, and a_i x = rhs_i for rows flagged as equalities}`
/// with `a` of full column rank, so the set is pointed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    a: IntMatrix,
    rhs: Vec<Rational>,
    eq: Vec<bool>,
    /// `rhs` scaled by the lcm of its denominators.
    scaled: Vec<BigInt>,
    scale: BigInt,
    eq_basis: Vec<usize>,
}

/// A vertex and the lexicographically smallest basis (row indices) defining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSolution {
    pub point: Vec<Rational>,
    pub basis: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOptimum {
    pub value: Rational,
    pub vertex: VertexSolution,
}

impl LinearSystem {
    pub fn new(a: IntMatrix, rhs: Vec<Rational>, eq: Vec<bool>) -> Result<Self, PolyhedronError> {
        if rhs.len() != a.nrows() || eq.len() != a.nrows() {
            return Err(PolyhedronError::Shape(format!(
                "{} rows but {} right-hand sides and {} flags",
                a.nrows(),
                rhs.len(),
                eq.len()
            )));
        }
        if a.ncols() == 0 {
            return Err(PolyhedronError::Shape("zero columns".into()));
        }
        if rank(&a) != a.ncols() {
            return Err(PolyhedronError::NotFullColumnRank);
        }
        let scale = common_denominator(&rhs);
        let scaled = rhs
            .iter()
            .map(|r| (r * Rational::from_integer(scale.clone())).to_integer())
            .collect();
        let eq_rows: Vec<usize> = (0..a.nrows()).filter(|&i| eq[i]).collect();
        let eq_basis = linalg::independent_extension(&a, &[], &eq_rows);
        Ok(Self {
            a,
            rhs,
            eq,
            scaled,
            scale,
            eq_basis,
        })
    }

    /// All rows are inequalities with integral right-hand side.
    pub fn from_int(a: IntMatrix, b: &[i64]) -> Result<Self, PolyhedronError> {
        let n = a.nrows();
        let rhs = b.iter().map(|&v| crate::rational::rat(v)).collect();
        Self::new(a, rhs, vec![false; n])
    }

    /// Same set intersected with extra rows.
    pub fn with_rows(&self, extra: &IntMatrix, rhs: &[Rational], eq: bool) -> Result<Self, PolyhedronError> {
        let a = self.a.stack(extra)?;
        let mut r = self.rhs.clone();
        r.extend_from_slice(rhs);
        let mut e = self.eq.clone();
        e.extend(std::iter::repeat_n(eq, extra.nrows()));
        Self::new(a, r, e)
    }

    /// Same set intersected with `a_i x = 0` for the given existing rows.
    pub fn with_zero_rows(&self, rows: &[usize]) -> Result<Self, PolyhedronError> {
        self.a.check_rows(rows)?;
        let extra = self.a.select_rows(rows);
        let zeros = vec![Rational::zero(); rows.len()];
        self.with_rows(&extra, &zeros, true)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn is_equality(&self, i: usize) -> bool {
        self.eq[i]
    }

    pub fn dim(&self) -> usize {
        self.a.ncols()
    }

    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        (0..self.a.nrows()).all(|i| {
            let v = dot_rat(self.a.row(i), x);
            if self.eq[i] {
                v == self.rhs[i]
            } else {
                v <= self.rhs[i]
            }
        })
    }

    pub fn contains_int(&self, x: &[i64]) -> bool {
        let q: Vec<Rational> = x.iter().map(|&v| crate::rational::rat(v)).collect();
        self.contains(&q)
    }

    /// Rows tight at `x`.
    pub fn tight_rows(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.a.nrows())
            .filter(|&i| dot_rat(self.a.row(i), x) == self.rhs[i])
            .collect()
    }

    fn free_rows(&self) -> Vec<usize> {
        (0..self.a.nrows()).filter(|&i| !self.eq[i]).collect()
    }

    fn check_scale(&self, pick: usize, pool: usize) -> Result<(), PolyhedronError> {
        let n = self.dim();
        if n > MAX_DIM {
            return Err(PolyhedronError::ScaleLimit(format!("dimension {n} exceeds {MAX_DIM}")));
        }
        let count = binomial(pool as u128, pick as u128);
        if count > MAX_BASES as u128 {
            return Err(PolyhedronError::ScaleLimit(format!(
                "{count} candidate bases exceed {MAX_BASES}"
            )));
        }
        Ok(())
    }

    /// Calls `f(basis, x)` for every feasible basic solution, bases visited in
    /// lexicographic order of their free part. Stops when `f` returns false.
    fn for_each_feasible_basis(
        &self,
        mut f: impl FnMut(&[usize], Vec<Rational>) -> bool,
    ) -> Result<(), PolyhedronError> {
        let n = self.dim();
        let free = self.free_rows();
        if self.eq_basis.len() > n {
            return Ok(());
        }
        let pick = n - self.eq_basis.len();
        self.check_scale(pick, free.len())?;
        for chosen in free.iter().copied().combinations(pick) {
            let mut basis = self.eq_basis.clone();
            basis.extend(chosen);
            let sub = self.a.select_rows(&basis);
            let rhs: Vec<BigInt> = basis.iter().map(|&i| self.scaled[i].clone()).collect();
            let Some(sol) = linalg::solve(&sub, &rhs)? else {
                continue;
            };
            if !self.feasible_scaled(&sol.numer, &sol.denom) {
                continue;
            }
            basis.sort_unstable();
            let denom = &sol.denom * &self.scale;
            let x = sol.numer.into_iter().map(|v| Rational::new(v, denom.clone())).collect();
            if !f(&basis, x) {
                break;
            }
        }
        Ok(())
    }

    /// Feasibility of `x = y / (d * scale)` with `d > 0`.
    fn feasible_scaled(&self, y: &[BigInt], d: &BigInt) -> bool {
        (0..self.a.nrows()).all(|i| {
            let lhs: BigInt = self
                .a
                .row(i)
                .iter()
                .zip(y)
                .filter(|(&a, _)| a != 0)
                .map(|(&a, v)| v * a)
                .sum();
            let rhs = &self.scaled[i] * d;
            if self.eq[i] {
                lhs == rhs
            } else {
                lhs <= rhs
            }
        })
    }

    /// All vertices, deduplicated by point and sorted lexicographically. Each
    /// carries the lexicographically smallest basis that produces it. Empty
    /// exactly when the set is empty.
    pub fn vertices(&self) -> Result<Vec<VertexSolution>, PolyhedronError> {
        let mut found: BTreeMap<Vec<Rational>, Vec<usize>> = BTreeMap::new();
        self.for_each_feasible_basis(|basis, x| {
            found
                .entry(x)
                .and_modify(|b| {
                    if basis < b.as_slice() {
                        *b = basis.to_vec();
                    }
                })
                .or_insert_with(|| basis.to_vec());
            true
        })?;
        Ok(found
            .into_iter()
            .map(|(point, basis)| VertexSolution { point, basis })
            .collect())
    }

    pub fn is_empty(&self) -> Result<bool, PolyhedronError> {
        let mut any = false;
        self.for_each_feasible_basis(|_, _| {
            any = true;
            false
        })?;
        Ok(!any)
    }

    /// Primitive generators of the extreme rays of the recession cone, sorted.
    pub fn recession_rays(&self) -> Result<Vec<Vec<i64>>, PolyhedronError> {
        let n = self.dim();
        if self.eq_basis.len() >= n {
            return Ok(Vec::new());
        }
        let pick = n - 1 - self.eq_basis.len();
        let free = self.free_rows();
        self.check_scale(pick, free.len())?;
        let mut rays: Vec<Vec<i64>> = Vec::new();
        for chosen in free.iter().copied().combinations(pick) {
            let mut k = self.eq_basis.clone();
            k.extend(chosen);
            if rank(&self.a.select_rows(&k)) != n - 1 {
                continue;
            }
            let r = primitive_ray(&self.a, &k)?;
            for s in [1i64, -1] {
                let cand: Vec<i64> = r.iter().map(|v| v * s).collect();
                if self.in_recession_cone(&cand) && !rays.contains(&cand) {
                    rays.push(cand);
                }
            }
        }
        rays.sort();
        Ok(rays)
    }

    pub fn in_recession_cone(&self, r: &[i64]) -> bool {
        (0..self.a.nrows()).all(|i| {
            let v = self.a.row_dot(i, r);
            if self.eq[i] {
                v == 0
            } else {
                v <= 0
            }
        })
    }

    pub fn is_bounded(&self) -> Result<bool, PolyhedronError> {
        Ok(self.recession_rays()?.is_empty())
    }

    /// Maximises `c.x`. Among optimal vertices the one with the
    /// lexicographically smallest basis wins.
    pub fn lp_max(&self, c: &[Rational]) -> Result<LpOptimum, PolyhedronError> {
        if c.len() != self.dim() {
            return Err(PolyhedronError::Shape(format!(
                "objective of length {} in dimension {}",
                c.len(),
                self.dim()
            )));
        }
        let mut best: Option<(Rational, Vec<usize>, Vec<Rational>)> = None;
        self.for_each_feasible_basis(|basis, x| {
            let v: Rational = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
            let better = match &best {
                None => true,
                Some((bv, bb, _)) => v > *bv || (v == *bv && basis < bb.as_slice()),
            };
            if better {
                best = Some((v, basis.to_vec(), x));
            }
            true
        })?;
        let Some((value, basis, point)) = best else {
            return Err(PolyhedronError::Infeasible);
        };
        for r in self.recession_rays()? {
            let gain: Rational = c.iter().zip(&r).map(|(ci, &ri)| ci * BigInt::from(ri)).sum();
            if gain.is_positive() {
                return Err(PolyhedronError::Unbounded { ray: r });
            }
        }
        Ok(LpOptimum {
            value,
            vertex: VertexSolution { point, basis },
        })
    }

    /// Affine dimension, `None` for the empty set.
    pub fn dimension(&self) -> Result<Option<usize>, PolyhedronError> {
        let verts = self.vertices()?;
        let Some(first) = verts.first() else {
            return Ok(None);
        };
        let mut dirs: Vec<Vec<Rational>> = verts[1..]
            .iter()
            .map(|v| v.point.iter().zip(&first.point).map(|(p, q)| p - q).collect())
            .collect();
        for r in self.recession_rays()? {
            dirs.push(r.iter().map(|&v| crate::rational::rat(v)).collect());
        }
        Ok(Some(rational_rank(&dirs)))
    }
}

/// Rank of a list of rational vectors.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let n = first.len();
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = common_denominator(r);
            r.iter()
                .map(|v| (v * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut m = int_rows;
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let (pc, ic) = (m[r][col].clone(), m[i][col].clone());
            let pivot_row = m[r].clone();
            for (x, y) in m[i][col..n].iter_mut().zip(&pivot_row[col..n]) {
                *x = &*x * &pc - y * &ic;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}
