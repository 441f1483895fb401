use super::{LinearSystem, PolyhedronError};
use crate::linalg::{dot_rat, rank, IntMatrix};
use crate::rational::Rational;
use num_traits::{Signed, Zero};

fn signs_at(a: &IntMatrix, x: &[Rational]) -> Result<Vec<i8>, PolyhedronError> {
    if x.len() != a.ncols() {
        return Err(PolyhedronError::Shape(format!(
            "point of length {} for {} columns",
            x.len(),
            a.ncols()
        )));
    }
    if rank(a) != a.ncols() {
        return Err(PolyhedronError::NotFullColumnRank);
    }
    Ok((0..a.nrows())
        .map(|i| {
            let v = dot_rat(a.row(i), x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .collect())
}

/// `C(A, x) = {y : sign(a_i x) a_i y >= 0}` with equality on rows where
/// `a_i x = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub a: IntMatrix,
    pub signs: Vec<i8>,
}

impl Cone {
    pub fn system(&self) -> LinearSystem {
        let n = self.a.ncols();
        let rows: Vec<Vec<i64>> = (0..self.a.nrows())
            .map(|i| {
                let s = if self.signs[i] == 0 { 1 } else { -self.signs[i] as i64 };
                self.a.row(i).iter().map(|v| v * s).collect()
            })
            .collect();
        let a = IntMatrix::from_rows_with_cols(&rows, n).expect("rows share a width");
        let eq = self.signs.iter().map(|&s| s == 0).collect();
        LinearSystem::new(a, vec![Rational::zero(); rows.len()], eq).expect("cone of a full-column-rank matrix")
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        (0..self.a.nrows()).all(|i| {
            let v = dot_rat(self.a.row(i), y);
            match self.signs[i] {
                0 => v.is_zero(),
                s => !(v * Rational::from_integer((s as i64).into())).is_negative(),
            }
        })
    }
}

pub fn cone_at(a: &IntMatrix, x: &[Rational]) -> Result<Cone, PolyhedronError> {
    Ok(Cone {
        a: a.clone(),
        signs: signs_at(a, x)?,
    })
}

/// `Sp(A, x) = C(A, x) ∩ (x - C(A, x))`: the polytope of points `y` with
/// `0 <= â_i y <= â_i x` for the rows where `a_i x != 0` (`â_i = sign · a_i`)
/// and `a_i y = 0` elsewhere. It is symmetric under `y -> x - y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spindle {
    pub a: IntMatrix,
    pub apex: Vec<Rational>,
    pub signs: Vec<i8>,
}

impl Spindle {
    /// Rows with `a_i x != 0`.
    pub fn active_rows(&self) -> Vec<usize> {
        (0..self.signs.len()).filter(|&i| self.signs[i] != 0).collect()
    }

    pub fn inactive_rows(&self) -> Vec<usize> {
        (0..self.signs.len()).filter(|&i| self.signs[i] == 0).collect()
    }

    /// `â_i` for an active row.
    pub fn signed_row(&self, i: usize) -> Vec<i64> {
        let s = self.signs[i] as i64;
        self.a.row(i).iter().map(|v| v * s).collect()
    }

    /// `â_i x` for an active row.
    pub fn apex_value(&self, i: usize) -> Rational {
        dot_rat(&self.signed_row(i), &self.apex)
    }

    /// Dimension of the spindle: `n - rank(A_inactive)`.
    pub fn dimension(&self) -> usize {
        let inactive = self.inactive_rows();
        self.a.ncols() - rank(&self.a.select_rows(&inactive))
    }

    /// Inequality form. Active row `I[t]` contributes row `2t` (`-â y <= 0`)
    /// and row `2t + 1` (`â y <= â x`); inactive rows follow as equalities.
    pub fn system(&self) -> LinearSystem {
        let n = self.a.ncols();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut eq = Vec::new();
        for i in self.active_rows() {
            let h = self.signed_row(i);
            rows.push(h.iter().map(|v| -v).collect::<Vec<i64>>());
            rhs.push(Rational::zero());
            eq.push(false);
            rhs.push(dot_rat(&h, &self.apex));
            rows.push(h);
            eq.push(false);
        }
        for i in self.inactive_rows() {
            rows.push(self.a.row(i).to_vec());
            rhs.push(Rational::zero());
            eq.push(true);
        }
        let a = IntMatrix::from_rows_with_cols(&rows, n).expect("rows share a width");
        LinearSystem::new(a, rhs, eq).expect("spindle rows have full column rank")
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        (0..self.a.nrows()).all(|i| {
            if self.signs[i] == 0 {
                dot_rat(self.a.row(i), y).is_zero()
            } else {
                let h = self.signed_row(i);
                let v = dot_rat(&h, y);
                !v.is_negative() && v <= dot_rat(&h, &self.apex)
            }
        })
    }
}

pub fn spindle_at(a: &IntMatrix, x: &[Rational]) -> Result<Spindle, PolyhedronError> {
    Ok(Spindle {
        a: a.clone(),
        apex: x.to_vec(),
        signs: signs_at(a, x)?,
    })
}
