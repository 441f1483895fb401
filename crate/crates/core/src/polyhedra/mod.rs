//! Polyhedra `P(A, b) = {x : Ax <= b}` with integral data: vertices, linear
//! programming, lattice points, widths, cones and spindles at a point, and
//! basis-exchange walks on spindles.

mod cone;
mod lattice;
mod system;
mod walk;

pub use cone::{cone_at, spindle_at, Cone, Spindle};
pub use lattice::{integer_points, IntBox};
pub use system::{rational_rank, LinearSystem, LpOptimum, VertexSolution, MAX_BASES, MAX_DIM};
pub use walk::{spindle_walk, ConstraintRef, FaceDescriptor, Side, WalkStep};

use crate::linalg::{IntMatrix, LinalgError};
use crate::rational::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyhedronError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("constraint matrix does not have full column rank")]
    NotFullColumnRank,
    #[error("polyhedron is empty")]
    Infeasible,
    #[error("objective is unbounded along ray {ray:?}")]
    Unbounded { ray: Vec<i64> },
    #[error("outside desk scale: {0}")]
    ScaleLimit(String),
    #[error("polyhedron is unbounded; a search box is required")]
    NeedsBox,
    #[error("no row has finite width")]
    NoFiniteFacetWidth,
    #[error("{0}")]
    Argument(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `P(A, b)` with integral `A` of full column rank and integral `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolyhedron {
    b: Vec<i64>,
    sys: LinearSystem,
}

impl HPolyhedron {
    pub fn new(a: IntMatrix, b: Vec<i64>) -> Result<Self, PolyhedronError> {
        if b.len() != a.nrows() {
            return Err(PolyhedronError::Shape(format!(
                "{} rows but {} right-hand sides",
                a.nrows(),
                b.len()
            )));
        }
        let sys = LinearSystem::from_int(a, &b)?;
        Ok(Self { b, sys })
    }

    pub fn from_rows(rows: &[Vec<i64>], b: Vec<i64>) -> Result<Self, PolyhedronError> {
        Self::new(IntMatrix::from_rows(rows)?, b)
    }

    pub fn a(&self) -> &IntMatrix {
        self.sys.matrix()
    }

    pub fn b(&self) -> &[i64] {
        &self.b
    }

    pub fn system(&self) -> &LinearSystem {
        &self.sys
    }

    pub fn n(&self) -> usize {
        self.sys.dim()
    }

    pub fn m(&self) -> usize {
        self.sys.nrows()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.sys.contains(x)
    }

    pub fn contains_int(&self, z: &[i64]) -> bool {
        (0..self.m()).all(|i| self.a().row_dot(i, z) <= self.b[i] as i128)
    }

    /// `P(A, b - A t)`, the translate `P - t`.
    pub fn translate(&self, t: &[i64]) -> Result<Self, PolyhedronError> {
        let b = (0..self.m())
            .map(|i| {
                i64::try_from(self.b[i] as i128 - self.a().row_dot(i, t))
                    .map_err(|_| PolyhedronError::Linalg(LinalgError::Overflow))
            })
            .collect::<Result<_, _>>()?;
        Self::new(self.a().clone(), b)
    }

    /// Appends rows `row . x <= rhs`.
    pub fn with_rows(&self, rows: &IntMatrix, rhs: &[i64]) -> Result<Self, PolyhedronError> {
        let a = self.a().stack(rows)?;
        let mut b = self.b.clone();
        b.extend_from_slice(rhs);
        Self::new(a, b)
    }

    pub fn vertices(&self) -> Result<Vec<VertexSolution>, PolyhedronError> {
        self.sys.vertices()
    }

    pub fn lp_max(&self, c: &[Rational]) -> Result<LpOptimum, PolyhedronError> {
        self.sys.lp_max(c)
    }

    pub fn is_bounded(&self) -> Result<bool, PolyhedronError> {
        self.sys.is_bounded()
    }

    pub fn dimension(&self) -> Result<Option<usize>, PolyhedronError> {
        self.sys.dimension()
    }

    pub fn integer_points(&self, search: Option<&IntBox>) -> Result<Vec<Vec<i64>>, PolyhedronError> {
        integer_points(&self.sys, search)
    }

    /// Whether row `i` defines a facet, i.e. `{x in P : a_i x = b_i}` has
    /// dimension `n - 1`.
    pub fn is_facet_row(&self, i: usize) -> Result<bool, PolyhedronError> {
        let face = self
            .sys
            .with_rows(&self.a().select_rows(&[i]), &[rat(self.b[i])], true)?;
        Ok(face.dimension()? == Some(self.n() - 1))
    }
}

/// Vertices of `P`, sorted, each with its lexicographically smallest basis.
pub fn enumerate_vertices(p: &HPolyhedron) -> Result<Vec<VertexSolution>, PolyhedronError> {
    p.vertices()
}

pub fn lp_max(p: &HPolyhedron, c: &[Rational]) -> Result<LpOptimum, PolyhedronError> {
    p.lp_max(c)
}

/// Width `max a.x - min a.x`, `None` when infinite.
pub fn width_along(p: &LinearSystem, dir: &[i64]) -> Result<Option<Rational>, PolyhedronError> {
    let c: Vec<Rational> = dir.iter().map(|&v| rat(v)).collect();
    let neg: Vec<Rational> = c.iter().map(|v| -v).collect();
    let hi = match p.lp_max(&c) {
        Ok(o) => o.value,
        Err(PolyhedronError::Unbounded { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let lo = match p.lp_max(&neg) {
        Ok(o) => -o.value,
        Err(PolyhedronError::Unbounded { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(hi - lo))
}

/// Smallest finite width along a row of `A`; ties go to the lowest row.
pub fn facet_width(p: &HPolyhedron) -> Result<(usize, Rational), PolyhedronError> {
    let mut best: Option<(usize, Rational)> = None;
    for i in 0..p.m() {
        if let Some(w) = width_along(p.system(), p.a().row(i))? {
            if best.as_ref().is_none_or(|(_, bw)| w < *bw) {
                best = Some((i, w));
            }
        }
    }
    best.ok_or(PolyhedronError::NoFiniteFacetWidth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn poly(rows: &[&[i64]], b: &[i64]) -> HPolyhedron {
        HPolyhedron::new(IntMatrix::from_rows(rows).unwrap(), b.to_vec()).unwrap()
    }

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn unit_square() {
        let p = poly(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[1, 1, 0, 0]);
        let v = p.vertices().unwrap();
        let pts: Vec<_> = v.iter().map(|s| s.point.clone()).collect();
        assert_eq!(pts, vec![q(&[0, 0]), q(&[0, 1]), q(&[1, 0]), q(&[1, 1])]);
        let opt = p.lp_max(&q(&[1, 1])).unwrap();
        assert_eq!(opt.value, rat(2));
        assert_eq!(opt.vertex.point, q(&[1, 1]));
        assert_eq!(opt.vertex.basis, vec![0, 1]);
        assert_eq!(p.integer_points(None).unwrap().len(), 4);
        assert_eq!(p.dimension().unwrap(), Some(2));
    }

    #[test]
    fn triangle_lp() {
        let p = poly(&[&[1, 2], &[-1, 0], &[0, -1]], &[1, 0, 0]);
        let opt = p.lp_max(&q(&[0, 1])).unwrap();
        assert_eq!(opt.vertex.point, vec![rat(0), ratio(1, 2)]);
        assert_eq!(opt.value, ratio(1, 2));
        assert_eq!(opt.vertex.basis, vec![0, 1]);
    }

    #[test]
    fn unbounded_and_infeasible() {
        let p = poly(&[&[-1, 0], &[0, -1]], &[0, 0]);
        assert!(matches!(p.lp_max(&q(&[1, 0])), Err(PolyhedronError::Unbounded { .. })));
        assert!(matches!(p.integer_points(None), Err(PolyhedronError::NeedsBox)));
        let e = poly(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[0, -1, 0, 0]);
        assert!(matches!(e.lp_max(&q(&[1, 0])), Err(PolyhedronError::Infeasible)));
        assert!(e.vertices().unwrap().is_empty());
    }

    #[test]
    fn facet_width_thin_strip() {
        let p = poly(&[&[3, 0], &[-3, 0], &[0, 3], &[0, -3]], &[2, -1, 2, -1]);
        assert_eq!(facet_width(&p).unwrap(), (0, rat(1)));
        assert!(p.integer_points(None).unwrap().is_empty());
    }

    #[test]
    fn rank_deficient_rejected() {
        let a = IntMatrix::from_rows(&[[1, 2], [2, 4]]).unwrap();
        assert!(matches!(
            HPolyhedron::new(a, vec![1, 1]),
            Err(PolyhedronError::NotFullColumnRank)
        ));
    }
}
