use super::ProximityError;
use crate::linalg::{delta_alpha, hnf, inverse, rank, IntMatrix};
use crate::polyhedra::{HPolyhedron, LinearSystem, PolyhedronError};
use crate::rational::{rat, Rational};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use std::cell::OnceCell;

/// A direction `alpha` and an independent row set `I` over a polyhedron that
/// contains the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProxQuery {
    pub p: HPolyhedron,
    pub alpha: Vec<i64>,
    pub index: Vec<usize>,
}

impl ProxQuery {
    pub fn new(p: HPolyhedron, alpha: Vec<i64>, index: Vec<usize>) -> Result<Self, ProximityError> {
        check_direction(&p, &alpha)?;
        check_slice(&p, &index)?;
        if p.b().iter().any(|&v| v < 0) {
            return Err(ProximityError::PreconditionFailed("the origin is not in P".into()));
        }
        Ok(Self { p, alpha, index })
    }
}

pub(crate) fn check_direction(p: &HPolyhedron, alpha: &[i64]) -> Result<(), ProximityError> {
    if alpha.len() != p.n() {
        return Err(ProximityError::Argument(format!(
            "direction of length {} in dimension {}",
            alpha.len(),
            p.n()
        )));
    }
    if alpha.iter().all(|&v| v == 0) {
        return Err(ProximityError::Argument("zero direction".into()));
    }
    Ok(())
}

fn check_slice(p: &HPolyhedron, index: &[usize]) -> Result<(), ProximityError> {
    p.a().check_rows(index).map_err(PolyhedronError::from)?;
    if index.len() >= p.n() || index.iter().duplicates().next().is_some() {
        return Err(ProximityError::Argument(format!(
            "index set {index:?} must hold at most n - 1 distinct rows"
        )));
    }
    if rank(&p.a().select_rows(index)) != index.len() {
        return Err(ProximityError::Argument(format!(
            "rows {index:?} are linearly dependent"
        )));
    }
    Ok(())
}

/// `max alpha.x` over `P_I` and the normaliser `Δ^α_I`, with their ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProxValue {
    pub index: Vec<usize>,
    pub slice_max: Rational,
    pub delta: Rational,
    pub value: Rational,
}

/// One slice `P_I = P ∩ ker A_I` with lazily computed LP data.
/// Vertices and recession rays of a slice.
type LpData = (Vec<Vec<Rational>>, Vec<Vec<i64>>);

#[derive(Debug)]
pub struct Slice {
    pub index: Vec<usize>,
    /// Dimension of the linear span of `P_I`.
    pub dim: usize,
    system: LinearSystem,
    data: OnceCell<LpData>,
}

impl Slice {
    fn lp_data(&self) -> Result<&LpData, ProximityError> {
        if let Some(d) = self.data.get() {
            return Ok(d);
        }
        let verts = self.system.vertices()?.into_iter().map(|v| v.point).collect();
        let rays = self.system.recession_rays()?;
        Ok(self.data.get_or_init(|| (verts, rays)))
    }

    /// `max alpha.x` over the slice.
    pub fn max_along(&self, alpha: &[i64]) -> Result<Rational, ProximityError> {
        let (verts, rays) = self.lp_data()?;
        if let Some(r) = rays.iter().find(|r| crate::linalg::dot_i64(alpha, r) > 0) {
            return Err(PolyhedronError::Unbounded { ray: r.clone() }.into());
        }
        Ok(verts
            .iter()
            .map(|v| crate::linalg::dot_rat(alpha, v))
            .max()
            .expect("slices contain the origin"))
    }
}

/// Dimension of the span of `P ∩ ker A_I`, read off the tangent cone at the
/// origin cut by a unit box.
fn slice_dim(p: &HPolyhedron, index: &[usize]) -> Result<usize, ProximityError> {
    let n = p.n();
    let tight: Vec<usize> = (0..p.m()).filter(|&i| p.b()[i] == 0).collect();
    let mut rows: Vec<Vec<i64>> = tight.iter().map(|&i| p.a().row(i).to_vec()).collect();
    let mut eq = vec![false; rows.len()];
    for &i in index {
        rows.push(p.a().row(i).to_vec());
        eq.push(true);
    }
    let mut rhs = vec![Rational::zero(); rows.len()];
    for j in 0..n {
        for s in [1, -1] {
            let mut e = vec![0; n];
            e[j] = s;
            rows.push(e);
            eq.push(false);
            rhs.push(rat(1));
        }
    }
    let sys = LinearSystem::new(IntMatrix::from_rows_with_cols(&rows, n)?, rhs, eq)?;
    Ok(sys.dimension()?.expect("the origin lies in the cone"))
}

/// Every independent row set `I` with `|I| <= n - 1` over a polyhedron that
/// contains the origin, grouped for repeated prox queries.
#[derive(Debug)]
pub struct SliceFamily {
    pub p: HPolyhedron,
    pub slices: Vec<Slice>,
}

impl SliceFamily {
    pub fn new(p: &HPolyhedron) -> Result<Self, ProximityError> {
        if p.b().iter().any(|&v| v < 0) {
            return Err(ProximityError::PreconditionFailed("the origin is not in P".into()));
        }
        let n = p.n();
        let mut slices = Vec::new();
        for size in 0..n {
            for index in (0..p.m()).combinations(size) {
                if rank(&p.a().select_rows(&index)) != size {
                    continue;
                }
                let dim = slice_dim(p, &index)?;
                let system = p.system().with_zero_rows(&index)?;
                slices.push(Slice {
                    index,
                    dim,
                    system,
                    data: OnceCell::new(),
                });
            }
        }
        Ok(Self { p: p.clone(), slices })
    }

    pub fn slice(&self, index: &[usize]) -> Option<&Slice> {
        self.slices.iter().find(|s| s.index == index)
    }

    pub fn prox(&self, slice: &Slice, alpha: &[i64]) -> Result<ProxValue, ProximityError> {
        let delta = delta_alpha(self.p.a(), alpha, &slice.index)?;
        if delta.is_zero() {
            return Err(ProximityError::DegenerateDirection);
        }
        let slice_max = slice.max_along(alpha)?;
        Ok(ProxValue {
            index: slice.index.clone(),
            value: &slice_max / &delta,
            slice_max,
            delta,
        })
    }

    /// Largest prox over slices of span dimension `d`. Slices on which
    /// `alpha` vanishes identically (`Δ^α_I = 0`) are skipped.
    pub fn prox_d(&self, alpha: &[i64], d: usize) -> Result<ProxValue, ProximityError> {
        check_direction(&self.p, alpha)?;
        let mut best: Option<ProxValue> = None;
        let mut seen = false;
        for s in self.slices.iter().filter(|s| s.dim == d) {
            seen = true;
            match self.prox(s, alpha) {
                Ok(v) => {
                    if best.as_ref().is_none_or(|b| v.value > b.value) {
                        best = Some(v);
                    }
                }
                Err(ProximityError::DegenerateDirection) => {}
                Err(e) => return Err(e),
            }
        }
        match best {
            Some(b) => Ok(b),
            None if seen => Err(ProximityError::DegenerateDirection),
            None => Err(ProximityError::NoSliceOfDimension(d)),
        }
    }
}

/// `(max over P_I of alpha.x) / Δ^α_I`.
pub fn prox_value(q: &ProxQuery) -> Result<ProxValue, ProximityError> {
    let delta = delta_alpha(q.p.a(), &q.alpha, &q.index)?;
    if delta.is_zero() {
        return Err(ProximityError::DegenerateDirection);
    }
    let slice_max =
        q.p.system()
            .with_zero_rows(&q.index)?
            .lp_max(&q.alpha.iter().map(|&v| rat(v)).collect::<Vec<_>>())?
            .value;
    Ok(ProxValue {
        index: q.index.clone(),
        value: &slice_max / &delta,
        slice_max,
        delta,
    })
}

pub fn prox_d_value(p: &HPolyhedron, alpha: &[i64], d: usize) -> Result<ProxValue, ProximityError> {
    SliceFamily::new(p)?.prox_d(alpha, d)
}

/// Lattice-preserving identification of `ker A_I` with `R^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceTransform {
    pub p_hat: HPolyhedron,
    pub alpha_hat: Vec<i64>,
    /// `d x n`; maps `ker A_I ∩ Z^n` onto `Z^d`.
    pub projection: IntMatrix,
    /// `n x d`; inverse of `projection` on `ker A_I`.
    pub lift: IntMatrix,
    /// Rows of `P` kept in `p_hat`, in order.
    pub kept_rows: Vec<usize>,
}

impl SliceTransform {
    pub fn dim(&self) -> usize {
        self.projection.nrows()
    }
}

/// Uses the column Hermite form `A_I U = [H 0]`: `Â = (AU)` restricted to the
/// rows outside `I` and the last `d` columns, `b̂` the matching part of `b`,
/// `α̂` the last `d` entries of `αᵀU`, and the projection the last `d` rows of
/// `U^{-1}`.
pub fn slice_transform(p: &HPolyhedron, alpha: &[i64], index: &[usize]) -> Result<SliceTransform, ProximityError> {
    check_direction(p, alpha)?;
    check_slice(p, index)?;
    let n = p.n();
    let s = index.len();
    let kept_rows: Vec<usize> = (0..p.m()).filter(|i| !index.contains(i)).collect();
    let u = if s == 0 {
        IntMatrix::identity(n)
    } else {
        hnf(&p.a().select_rows(index))?.u
    };
    let au = p.a().mul(&u)?;
    let tail: Vec<usize> = (s..n).collect();
    let a_hat = au.select_rows(&kept_rows).select_cols(&tail);
    let b_hat: Vec<i64> = kept_rows.iter().map(|&i| p.b()[i]).collect();
    let alpha_row = IntMatrix::from_rows(&[alpha.to_vec()])?;
    let alpha_u = alpha_row.mul(&u)?;
    let alpha_hat = tail.iter().map(|&j| alpha_u.get(0, j)).collect();
    let u_inv = inverse(&u)?.expect("unimodular matrices are invertible");
    let proj_rows: Vec<Vec<i64>> = tail
        .iter()
        .map(|&j| {
            u_inv[j]
                .iter()
                .map(|v| {
                    let z: BigInt = v.to_integer();
                    i64::try_from(z).map_err(|_| crate::linalg::LinalgError::Overflow)
                })
                .collect::<Result<Vec<i64>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let projection = IntMatrix::from_rows_with_cols(&proj_rows, n)?;
    let lift = u.select_cols(&tail);
    Ok(SliceTransform {
        p_hat: HPolyhedron::new(a_hat, b_hat)?,
        alpha_hat,
        projection,
        lift,
        kept_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn triangle() -> HPolyhedron {
        HPolyhedron::from_rows(&[vec![1, 2], vec![-1, 0], vec![0, -1]], vec![1, 0, 0]).unwrap()
    }

    #[test]
    fn triangle_prox() {
        let q = ProxQuery::new(triangle(), vec![0, 1], vec![]).unwrap();
        let v = prox_value(&q).unwrap();
        assert_eq!(v.slice_max, ratio(1, 2));
        assert_eq!(v.delta, rat(1));
        assert_eq!(v.value, ratio(1, 2));
    }

    #[test]
    fn direction_pointing_out_gives_zero() {
        let q = ProxQuery::new(triangle(), vec![-1, 0], vec![]).unwrap();
        assert_eq!(prox_value(&q).unwrap().value, rat(0));
    }

    #[test]
    fn slice_dims_of_triangle() {
        let fam = SliceFamily::new(&triangle()).unwrap();
        let dims: Vec<(Vec<usize>, usize)> = fam.slices.iter().map(|s| (s.index.clone(), s.dim)).collect();
        assert_eq!(dims, vec![(vec![], 2), (vec![0], 0), (vec![1], 1), (vec![2], 1)]);
    }

    #[test]
    fn identity_transform_for_empty_slice() {
        let t = slice_transform(&triangle(), &[0, 1], &[]).unwrap();
        assert_eq!(t.p_hat, triangle());
        assert_eq!(t.alpha_hat, vec![0, 1]);
        assert_eq!(t.projection, IntMatrix::identity(2));
    }
}
