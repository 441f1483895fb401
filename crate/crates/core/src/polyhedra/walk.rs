use super::{rational_rank, spindle_at, PolyhedronError, Spindle, MAX_BASES};
use crate::linalg::{dot_rat, independent_extension, solve_rational, IntMatrix};
use crate::rational::Rational;
use itertools::Itertools;
use num_traits::Zero;
use std::collections::{HashMap, VecDeque};

/// Which copy of an active row: `â_i y >= 0` (tight at the origin) or
/// `â_i y <= â_i x` (tight at the apex).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Zero,
    Apex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintRef {
    pub side: Side,
    pub row: usize,
}

/// A face of a spindle given by constraints made tight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDescriptor {
    pub defining: Vec<ConstraintRef>,
    /// Every constraint of the defining side that is tight on the whole face.
    pub tight: Vec<ConstraintRef>,
    pub dim: usize,
    pub vertices: Vec<Vec<Rational>>,
}

/// Result of walking from the origin to the apex of `Sp(A, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkStep {
    pub spindle: Spindle,
    pub spindle_dim: usize,
    /// Bases `J_0, ..., J_r`, consecutive ones differing in one constraint.
    pub path: Vec<Vec<ConstraintRef>>,
    /// Index `l` of the chosen basis, the first with `k - d` apex constraints.
    pub position: usize,
    pub vertex: Vec<Rational>,
    /// `d`-face containing the apex and `vertex`.
    pub apex_face: FaceDescriptor,
    /// `(k - d)`-face containing the origin and `vertex`.
    pub origin_face: FaceDescriptor,
}

struct Walker<'a> {
    sp: &'a Spindle,
    eq_basis: Vec<usize>,
    k: usize,
    all: Vec<ConstraintRef>,
}

impl Walker<'_> {
    fn normal(&self, c: ConstraintRef) -> Vec<i64> {
        self.sp.signed_row(c.row)
    }

    fn level(&self, c: ConstraintRef) -> Rational {
        match c.side {
            Side::Zero => Rational::zero(),
            Side::Apex => self.sp.apex_value(c.row),
        }
    }

    fn evaluate(&self, basis: &[ConstraintRef]) -> Option<Vec<Rational>> {
        let n = self.sp.a.ncols();
        let mut rows: Vec<Vec<i64>> = self.eq_basis.iter().map(|&i| self.sp.a.row(i).to_vec()).collect();
        let mut rhs: Vec<Rational> = vec![Rational::zero(); rows.len()];
        for &c in basis {
            rows.push(self.normal(c));
            rhs.push(self.level(c));
        }
        let m = IntMatrix::from_rows_with_cols(&rows, n).ok()?;
        let x = solve_rational(&m, &rhs).ok()??;
        self.sp.contains(&x).then_some(x)
    }

    fn apex_count(basis: &[ConstraintRef]) -> usize {
        basis.iter().filter(|c| c.side == Side::Apex).count()
    }

    fn swap(basis: &[ConstraintRef], out: ConstraintRef, inc: ConstraintRef) -> Vec<ConstraintRef> {
        let mut b: Vec<ConstraintRef> = basis.iter().copied().filter(|&c| c != out).collect();
        b.push(inc);
        b.sort();
        b
    }

    /// Greedy monotone pivots: the smallest entering apex constraint that keeps
    /// the basis feasible, leaving the smallest possible origin constraint.
    fn greedy(&self, path: &mut Vec<Vec<ConstraintRef>>) {
        loop {
            let cur = path.last().expect("path starts non-empty").clone();
            if Self::apex_count(&cur) == self.k {
                return;
            }
            let mut moved = false;
            'search: for &inc in self.all.iter().filter(|c| c.side == Side::Apex && !cur.contains(c)) {
                for &out in cur.iter().filter(|c| c.side == Side::Zero) {
                    let next = Self::swap(&cur, out, inc);
                    if self.evaluate(&next).is_some() {
                        path.push(next);
                        moved = true;
                        break 'search;
                    }
                }
            }
            if !moved {
                return;
            }
        }
    }

    /// Shortest exchange path from `start` to a basis made only of apex
    /// constraints; used when the greedy rule stalls at a degenerate vertex.
    fn bfs(&self, start: &[ConstraintRef]) -> Result<Vec<Vec<ConstraintRef>>, PolyhedronError> {
        let mut parent: HashMap<Vec<ConstraintRef>, Option<Vec<ConstraintRef>>> = HashMap::new();
        let mut queue = VecDeque::new();
        parent.insert(start.to_vec(), None);
        queue.push_back(start.to_vec());
        while let Some(cur) = queue.pop_front() {
            if Self::apex_count(&cur) == self.k {
                let mut path = vec![cur.clone()];
                let mut at = cur;
                while let Some(Some(p)) = parent.get(&at) {
                    path.push(p.clone());
                    at = p.clone();
                }
                path.reverse();
                return Ok(path);
            }
            for &out in &cur {
                for &inc in self.all.iter().filter(|c| !cur.contains(c)) {
                    let next = Self::swap(&cur, out, inc);
                    if parent.contains_key(&next) || self.evaluate(&next).is_none() {
                        continue;
                    }
                    if parent.len() > MAX_BASES {
                        return Err(PolyhedronError::ScaleLimit("spindle basis graph too large".into()));
                    }
                    parent.insert(next.clone(), Some(cur.clone()));
                    queue.push_back(next);
                }
            }
        }
        Err(PolyhedronError::Argument("apex basis unreachable".into()))
    }
}

struct FaceLattice {
    vertices: Vec<Vec<Rational>>,
    tight: Vec<Vec<ConstraintRef>>,
}

impl FaceLattice {
    fn new(sp: &Spindle) -> Result<Self, PolyhedronError> {
        let vertices: Vec<Vec<Rational>> = sp.system().vertices()?.into_iter().map(|v| v.point).collect();
        let tight = vertices
            .iter()
            .map(|x| {
                let mut t = Vec::new();
                for i in sp.active_rows() {
                    let v = dot_rat(&sp.signed_row(i), x);
                    if v.is_zero() {
                        t.push(ConstraintRef {
                            side: Side::Zero,
                            row: i,
                        });
                    }
                    if v == sp.apex_value(i) {
                        t.push(ConstraintRef {
                            side: Side::Apex,
                            row: i,
                        });
                    }
                }
                t
            })
            .collect();
        Ok(Self { vertices, tight })
    }

    fn members(&self, set: &[ConstraintRef]) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| set.iter().all(|c| self.tight[v].contains(c)))
            .collect()
    }

    fn dim_of(&self, members: &[usize]) -> usize {
        let Some(&first) = members.first() else {
            return 0;
        };
        let diffs: Vec<Vec<Rational>> = members[1..]
            .iter()
            .map(|&v| {
                self.vertices[v]
                    .iter()
                    .zip(&self.vertices[first])
                    .map(|(p, q)| p - q)
                    .collect()
            })
            .collect();
        rational_rank(&diffs)
    }

    fn describe(&self, defining: Vec<ConstraintRef>, side: Side) -> FaceDescriptor {
        let members = self.members(&defining);
        let tight = self.common_tight(&members, side);
        FaceDescriptor {
            dim: self.dim_of(&members),
            vertices: members.iter().map(|&v| self.vertices[v].clone()).collect(),
            defining,
            tight,
        }
    }

    fn common_tight(&self, members: &[usize], side: Side) -> Vec<ConstraintRef> {
        let Some(&first) = members.first() else {
            return Vec::new();
        };
        self.tight[first]
            .iter()
            .copied()
            .filter(|c| c.side == side && members.iter().all(|&v| self.tight[v].contains(c)))
            .collect()
    }

    /// A face of dimension exactly `target` containing the face cut out by
    /// `start`. Faces form a graded lattice, so one exists whenever the
    /// starting face is no larger.
    fn widen(&self, start: Vec<ConstraintRef>, side: Side, target: usize) -> Option<FaceDescriptor> {
        let base = self.describe(start, side);
        if base.dim == target {
            return Some(base);
        }
        if base.dim > target {
            return None;
        }
        let pool = base.tight.clone();
        for size in (0..pool.len()).rev() {
            for subset in pool.iter().copied().combinations(size) {
                let members = self.members(&subset);
                if self.dim_of(&members) == target {
                    return Some(self.describe(subset, side));
                }
            }
        }
        None
    }
}

/// Walks feasible bases of `Sp(A, apex)` from the origin to the apex and stops
/// at the first basis with `k - d` apex constraints, `k` the spindle dimension.
/// Returns that basic vertex with a `d`-face through the apex and a
/// `(k - d)`-face through the origin that both contain it.
pub fn spindle_walk(a: &IntMatrix, apex: &[Rational], d: usize) -> Result<WalkStep, PolyhedronError> {
    let sp = spindle_at(a, apex)?;
    let k = sp.dimension();
    if d > k {
        return Err(PolyhedronError::Argument(format!(
            "face dimension {d} exceeds spindle dimension {k}"
        )));
    }
    let eq_basis = independent_extension(a, &[], &sp.inactive_rows());
    let active = sp.active_rows();
    let all: Vec<ConstraintRef> = [Side::Zero, Side::Apex]
        .into_iter()
        .flat_map(|side| active.iter().map(move |&row| ConstraintRef { side, row }))
        .collect();
    let walker = Walker {
        sp: &sp,
        eq_basis: eq_basis.clone(),
        k,
        all,
    };

    let signed: Vec<Vec<i64>> = active.iter().map(|&i| sp.signed_row(i)).collect();
    let stacked: Vec<Vec<i64>> = eq_basis
        .iter()
        .map(|&i| a.row(i).to_vec())
        .chain(signed.iter().cloned())
        .collect();
    let stacked = IntMatrix::from_rows_with_cols(&stacked, a.ncols())?;
    let forced: Vec<usize> = (0..eq_basis.len()).collect();
    let cand: Vec<usize> = (eq_basis.len()..stacked.nrows()).collect();
    let chosen = independent_extension(&stacked, &forced, &cand);
    let j0: Vec<ConstraintRef> = chosen[eq_basis.len()..]
        .iter()
        .map(|&t| ConstraintRef {
            side: Side::Zero,
            row: active[t - eq_basis.len()],
        })
        .collect();

    let mut path = vec![j0];
    walker.greedy(&mut path);
    let last = path.last().expect("non-empty").clone();
    if Walker::apex_count(&last) < k {
        let tail = walker.bfs(&last)?;
        path.extend(tail.into_iter().skip(1));
    }

    let position = path
        .iter()
        .position(|b| Walker::apex_count(b) == k - d)
        .expect("apex counts change by at most one per step");
    let basis = path[position].clone();
    let vertex = walker.evaluate(&basis).expect("path bases are feasible");

    let lattice = FaceLattice::new(&sp)?;
    let apex_side: Vec<ConstraintRef> = basis.iter().copied().filter(|c| c.side == Side::Apex).collect();
    let origin_side: Vec<ConstraintRef> = basis.iter().copied().filter(|c| c.side == Side::Zero).collect();
    let apex_face = lattice
        .widen(apex_side, Side::Apex, d)
        .ok_or_else(|| PolyhedronError::Argument("no face of the requested dimension".into()))?;
    let origin_face = lattice
        .widen(origin_side, Side::Zero, k - d)
        .ok_or_else(|| PolyhedronError::Argument("no face of the requested dimension".into()))?;

    Ok(WalkStep {
        spindle: sp,
        spindle_dim: k,
        path,
        position,
        vertex,
        apex_face,
        origin_face,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn square_walk_hits_a_corner() {
        let a = IntMatrix::from_rows(&[[1, 0], [0, 1], [-1, 0], [0, -1]]).unwrap();
        let w = spindle_walk(&a, &[rat(1), rat(1)], 1).unwrap();
        assert_eq!(w.spindle_dim, 2);
        assert_eq!(w.path.len(), 3);
        assert_eq!(w.position, 1);
        assert!(w.vertex == vec![rat(1), rat(0)] || w.vertex == vec![rat(0), rat(1)]);
        assert_eq!(w.apex_face.dim, 1);
        assert_eq!(w.origin_face.dim, 1);
    }

    #[test]
    fn extreme_dimensions() {
        let a = IntMatrix::from_rows(&[[1, 0], [0, 1]]).unwrap();
        let apex = [rat(2), rat(3)];
        let w = spindle_walk(&a, &apex, 2).unwrap();
        assert_eq!(w.vertex, vec![rat(0), rat(0)]);
        let w = spindle_walk(&a, &apex, 0).unwrap();
        assert_eq!(w.vertex, apex.to_vec());
        assert!(spindle_walk(&a, &apex, 3).is_err());
    }
}
