use super::ProximityError;
use crate::linalg::{delta_k, inverse, IntMatrix};
use crate::polyhedra::{HPolyhedron, IntBox, LpOptimum, PolyhedronError, VertexSolution};
use crate::rational::{abs, ceil_i64, rat, Rational};
use num_traits::{ToPrimitive, Zero};

/// A-priori radius `n · Δ_{n-1}(A)` around any optimal vertex that is known to
/// contain an optimal integer point (with `Δ_0 = 1`).
pub fn search_radius(a: &IntMatrix) -> Result<i64, ProximityError> {
    let n = a.ncols();
    let d = if n <= 1 { 1.into() } else { delta_k(a, n - 1)? };
    (d * n)
        .to_i64()
        .ok_or_else(|| PolyhedronError::ScaleLimit("search radius overflows".into()).into())
}

fn linf(x: &[Rational], z: &[i64]) -> Rational {
    x.iter()
        .zip(z)
        .map(|(xi, &zi)| abs(&(xi - rat(zi))))
        .max()
        .unwrap_or_else(Rational::zero)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProximityResult {
    pub x_star: VertexSolution,
    pub lp_value: Rational,
    pub z_star: Vec<i64>,
    pub ip_value: Rational,
    /// `‖x* - z*‖∞`.
    pub dist: Rational,
    pub radius: i64,
}

/// Optimal LP vertex together with every optimal integer point found in the
/// box `x* ± n·Δ_{n-1}(A)`, optionally cut by `user_box`; a user box that
/// hides every optimum yields the best points inside it instead.
pub(crate) struct IpOptima {
    pub lp: LpOptimum,
    pub radius: i64,
    pub ip_value: Rational,
    /// Sorted lexicographically.
    pub optima: Vec<Vec<i64>>,
}

pub(crate) fn ip_optima(
    p: &HPolyhedron,
    c: &[Rational],
    user_box: Option<&IntBox>,
) -> Result<IpOptima, ProximityError> {
    let lp = p.lp_max(c)?;
    let radius = search_radius(p.a())?;
    let mut search = IntBox::around(&lp.vertex.point, &rat(radius))
        .ok_or_else(|| PolyhedronError::ScaleLimit("vertex out of range".into()))?;
    if let Some(b) = user_box {
        if b.dim() != p.n() {
            return Err(ProximityError::Argument("search box has the wrong dimension".into()));
        }
        search = search.intersect(b);
    }
    let pts = p.integer_points(Some(&search))?;
    let value = |z: &[i64]| -> Rational { c.iter().zip(z).map(|(ci, &zi)| ci * rat(zi)).sum() };
    let ip_value = pts
        .iter()
        .map(|z| value(z))
        .max()
        .ok_or(ProximityError::EmptyIntegerSet)?;
    let optima = pts.into_iter().filter(|z| value(z) == ip_value).collect();
    Ok(IpOptima {
        lp,
        radius,
        ip_value,
        optima,
    })
}

/// Optimal LP vertex and the nearest (in the infinity norm) optimal integer
/// point, ties broken lexicographically. The search region is the one of
/// [`ip_optima`].
pub fn proximity_exact(
    p: &HPolyhedron,
    c: &[Rational],
    user_box: Option<&IntBox>,
) -> Result<ProximityResult, ProximityError> {
    let IpOptima {
        lp,
        radius,
        ip_value,
        optima,
    } = ip_optima(p, c, user_box)?;
    // `min_by_key` keeps the first, lexicographically smallest, tie.
    let z_star = optima
        .iter()
        .min_by_key(|z| linf(&lp.vertex.point, z))
        .expect("an optimum exists")
        .clone();
    Ok(ProximityResult {
        dist: linf(&lp.vertex.point, &z_star),
        lp_value: lp.value,
        x_star: lp.vertex,
        z_star,
        ip_value,
        radius,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedIp {
    /// `P` with rows `-a_i x <= -a_i z*` appended for every row tight at `x*`.
    pub p_bar: HPolyhedron,
    pub x_star: VertexSolution,
    pub z_star: Vec<i64>,
    /// Rows of `P` tight at `x*`, in the order they were appended.
    pub tight_rows: Vec<usize>,
    pub passes: usize,
}

const REDUCTION_PASSES: usize = 64;

/// Shrinks `P` to `P̄ ⊆ P` with `x*` still a vertex and `z*` its only integer
/// point. Since `c` lies in the cone of the rows tight at `x*`, every integer
/// point left in `P̄` is IP-optimal; the point maximizing the sum of those rows
/// then pins all of them, and the tight rows have rank `n`.
pub fn reduce_unique_ip(
    p: &HPolyhedron,
    c: &[Rational],
    user_box: Option<&IntBox>,
) -> Result<ReducedIp, ProximityError> {
    let start = proximity_exact(p, c, user_box)?;
    let x_star = start.x_star;
    let tight_rows = p.system().tight_rows(&x_star.point);
    let neg = p.a().select_rows(&tight_rows).neg();
    let mut z = start.z_star;
    for pass in 1..=REDUCTION_PASSES {
        let rhs: Vec<i64> = (0..neg.nrows())
            .map(|i| neg.row_dot(i, &z).try_into())
            .collect::<Result<_, _>>()
            .map_err(|_| PolyhedronError::ScaleLimit("right-hand side overflows".into()))?;
        let p_bar = p.with_rows(&neg, &rhs)?;
        let pts = p_bar.integer_points(None)?;
        if pts == [z.clone()] {
            return Ok(ReducedIp {
                p_bar,
                x_star,
                z_star: z,
                tight_rows,
                passes: pass,
            });
        }
        let score = |w: &[i64]| -> i128 { (0..neg.nrows()).map(|i| -neg.row_dot(i, w)).sum() };
        let best = pts
            .iter()
            .max_by(|u, v| score(u).cmp(&score(v)).then_with(|| v.cmp(u)))
            .ok_or(ProximityError::ReductionIncomplete)?
            .clone();
        if best == z {
            return Err(ProximityError::ReductionIncomplete);
        }
        z = best;
    }
    Err(ProximityError::ReductionIncomplete)
}

/// Largest `min_z ‖A(x* - z)‖∞` found over right-hand sides in a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiEstimate {
    pub value: Rational,
    /// Right-hand side, vertex and nearest integer point attaining `value`.
    pub witness: Option<(Vec<i64>, Vec<Rational>, Vec<i64>)>,
    /// Right-hand sides whose polyhedron contains an integer point.
    pub feasible: usize,
}

const PI_BOX_LIMIT: u64 = 100_000;

fn residual(a: &IntMatrix, x: &[Rational], z: &[i64]) -> Rational {
    (0..a.nrows())
        .map(|i| abs(&(a.row_dot_rat(i, x) - rat(a.row_dot(i, z) as i64))))
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Lower estimate of `π(A)`: the maximum over `b` with `lo <= b <= hi` and over
/// vertices `x*` of `P(A, b)` of the least `‖A(x* - z)‖∞` over integer `z`.
pub fn pi_on_box(a: &IntMatrix, lo: &[i64], hi: &[i64]) -> Result<PiEstimate, ProximityError> {
    let m = a.nrows();
    if lo.len() != m || hi.len() != m {
        return Err(ProximityError::Argument(
            "box bounds must have one entry per row".into(),
        ));
    }
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Err(ProximityError::Argument("empty right-hand side box".into()));
    }
    let count = lo
        .iter()
        .zip(hi)
        .try_fold(1u64, |acc, (l, h)| acc.checked_mul((h - l + 1) as u64))
        .filter(|&c| c <= PI_BOX_LIMIT)
        .ok_or_else(|| PolyhedronError::ScaleLimit("right-hand side box too large".into()))?;
    let radius = search_radius(a)?;
    let row_l1: i64 = a
        .rows_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum())
        .max()
        .unwrap_or(0);

    let mut est = PiEstimate {
        value: Rational::zero(),
        witness: None,
        feasible: 0,
    };
    let mut b = lo.to_vec();
    for _ in 0..count {
        let p = HPolyhedron::new(a.clone(), b.clone())?;
        let mut feasible = false;
        for v in p.vertices()? {
            let near = IntBox::around(&v.point, &rat(radius))
                .ok_or_else(|| PolyhedronError::ScaleLimit("vertex out of range".into()))?;
            let pts = p.integer_points(Some(&near))?;
            let Some(coarse) = pts.iter().map(|z| residual(a, &v.point, z)).min() else {
                continue;
            };
            feasible = true;
            debug_assert!(coarse <= rat(row_l1 * radius));
            let basis = a.select_rows(&v.basis);
            let inv = inverse(&basis)?.expect("vertex bases are invertible");
            let inv_norm: Rational = inv
                .iter()
                .map(|r| r.iter().map(abs).sum::<Rational>())
                .max()
                .unwrap_or_else(Rational::zero);
            let reach = ceil_i64(&(&coarse * &inv_norm))
                .ok_or_else(|| PolyhedronError::ScaleLimit("refinement radius".into()))?;
            let wide = IntBox::around(&v.point, &rat(reach)).expect("finite radius");
            let (best, z) = p
                .integer_points(Some(&wide))?
                .into_iter()
                .map(|z| (residual(a, &v.point, &z), z))
                .min_by(|x, y| x.0.cmp(&y.0))
                .expect("the coarse minimiser lies in the wider box");
            if best > est.value || est.witness.is_none() {
                est.value = best;
                est.witness = Some((b.clone(), v.point.clone(), z));
            }
        }
        if feasible {
            est.feasible += 1;
        }
        for i in (0..m).rev() {
            if b[i] < hi[i] {
                b[i] += 1;
                break;
            }
            b[i] = lo[i];
        }
    }
    Ok(est)
}
