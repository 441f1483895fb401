//! Hilbert and Graver bases at desk scale, the direction statistics built on
//! them, and the transfer of vertex bounds from `A` to `AB`.

use crate::linalg::{
    delta_alpha, delta_k, det, dot_i64, dot_rat, inverse, primitive_ray, rank, IntMatrix, LinalgError,
};
use crate::polyhedra::{integer_points, spindle_at, HPolyhedron, PolyhedronError};
use crate::proximity::{check_theorem, minors_in_two_levels, reduce_unique_ip, CheckOptions, ProximityError};
use crate::rational::{abs, format_int_vector, format_rational, format_vector, rat, Rational};
use crate::report::{BoundReport, TheoremId};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HilbertError {
    #[error("cone is not pointed")]
    NotPointed,
    #[error("outside desk scale: {0}")]
    ScaleLimit(String),
    #[error("direction vanishes on every maximal minor")]
    DegenerateDirection,
    #[error("minors are not contained in {{0, ±k, ±2k}}: {0}")]
    NotDeltaModular(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("{0}")]
    Argument(String),
    #[error(transparent)]
    Polyhedron(#[from] PolyhedronError),
    #[error(transparent)]
    Proximity(#[from] ProximityError),
}

impl From<LinalgError> for HilbertError {
    fn from(e: LinalgError) -> Self {
        HilbertError::Polyhedron(e.into())
    }
}

/// `{x : S A x >= 0}` for a diagonal sign pattern `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedCone {
    pub a: IntMatrix,
    pub signs: Vec<i8>,
}

impl SignedCone {
    pub fn new(a: IntMatrix, signs: Vec<i8>) -> Result<Self, HilbertError> {
        if signs.len() != a.nrows() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(HilbertError::Argument(format!(
                "need {} signs from {{1, -1}}, got {signs:?}",
                a.nrows()
            )));
        }
        Ok(Self { a, signs })
    }

    pub fn positive(a: IntMatrix) -> Self {
        let signs = vec![1; a.nrows()];
        Self { a, signs }
    }

    /// `S A z`.
    pub fn values(&self, z: &[i64]) -> Vec<i128> {
        (0..self.a.nrows())
            .map(|i| self.signs[i] as i128 * self.a.row_dot(i, z))
            .collect()
    }

    pub fn contains(&self, z: &[i64]) -> bool {
        self.values(z).iter().all(|&v| v >= 0)
    }

    pub fn is_pointed(&self) -> bool {
        rank(&self.a) == self.a.ncols()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub vector: Vec<i64>,
    /// `|Sp(A, vector) ∩ Z^n|`; exactly 2 for an irreducible element.
    pub spindle_points: usize,
}

/// Basis elements with `‖·‖∞ <= radius`, lexicographically sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedBasis {
    pub elements: Vec<BasisElement>,
    pub radius: i64,
    /// Radius beyond which no element can lie: `n` times the largest
    /// infinity norm of a circuit of `A`.
    pub complete_radius: i64,
}

impl TruncatedBasis {
    pub fn truncated(&self) -> bool {
        self.radius < self.complete_radius
    }

    pub fn vectors(&self) -> Vec<Vec<i64>> {
        self.elements.iter().map(|e| e.vector.clone()).collect()
    }
}

const CUBE_LIMIT: u64 = 5_000_000;
const SIGN_ROWS_LIMIT: usize = 12;

/// `n · Δ_n(A)`.
pub fn default_radius(a: &IntMatrix) -> Result<i64, HilbertError> {
    let d = delta_k(a, a.ncols())?;
    (d * a.ncols())
        .to_i64()
        .ok_or_else(|| HilbertError::ScaleLimit("radius overflows".into()))
}

/// `n · max ‖r‖∞` over primitive generators `r` of one-dimensional kernels
/// `ker A_I`. Every Hilbert element of a pointed `cone(SA)` is a combination
/// of at most `n` extreme rays with coefficients below one, and those rays
/// are such generators.
pub fn complete_radius(a: &IntMatrix) -> Result<i64, HilbertError> {
    let n = a.ncols();
    if n == 1 {
        return Ok(1);
    }
    let mut best = 0i64;
    for rows in (0..a.nrows()).combinations(n - 1) {
        if rank(&a.select_rows(&rows)) < n - 1 {
            continue;
        }
        let r = primitive_ray(a, &rows)?;
        best = best.max(r.iter().map(|v| v.abs()).max().unwrap_or(0));
    }
    best.checked_mul(n as i64)
        .ok_or_else(|| HilbertError::ScaleLimit("radius overflows".into()))
}

fn cube(n: usize, radius: i64) -> Result<impl Iterator<Item = Vec<i64>>, HilbertError> {
    if radius < 1 {
        return Err(HilbertError::Argument("radius must be positive".into()));
    }
    let side = 2 * radius as u64 + 1;
    if side.checked_pow(n as u32).is_none_or(|s| s > CUBE_LIMIT) {
        return Err(HilbertError::ScaleLimit(format!("{side}^{n} enumeration points")));
    }
    Ok((0..n).map(|_| -radius..=radius).multi_cartesian_product())
}

/// `Sp(A, z) ∩ Z^n`, sorted.
pub fn spindle_lattice_points(a: &IntMatrix, z: &[i64]) -> Result<Vec<Vec<i64>>, HilbertError> {
    let zq: Vec<Rational> = z.iter().map(|&v| rat(v)).collect();
    Ok(integer_points(&spindle_at(a, &zq)?.system(), None)?)
}

fn confirm(a: &IntMatrix, z: Vec<i64>) -> Result<Option<BasisElement>, HilbertError> {
    let count = spindle_lattice_points(a, &z)?.len();
    Ok((count == 2).then_some(BasisElement {
        vector: z,
        spindle_points: count,
    }))
}

/// Irreducible lattice points of a pointed `cone(SA)` in the cube of the
/// given radius. Candidates are scanned by increasing `1ᵀSAz`; one is kept
/// when no kept element lies below it, and then confirmed by counting the
/// lattice points of its spindle.
pub fn hilbert_basis(cone: &SignedCone, radius: i64) -> Result<TruncatedBasis, HilbertError> {
    if !cone.is_pointed() {
        return Err(HilbertError::NotPointed);
    }
    let n = cone.a.ncols();
    let mut pts: Vec<(i128, Vec<i128>, Vec<i64>)> = cube(n, radius)?
        .filter(|z| z.iter().any(|&v| v != 0))
        .filter_map(|z| {
            let v = cone.values(&z);
            v.iter().all(|&x| x >= 0).then(|| (v.iter().sum(), v, z))
        })
        .collect();
    pts.sort();
    let mut kept: Vec<Vec<i128>> = Vec::new();
    let mut elements = Vec::new();
    for (_, v, z) in pts {
        if kept.iter().any(|h| h.iter().zip(&v).all(|(hi, vi)| hi <= vi)) {
            continue;
        }
        if let Some(e) = confirm(&cone.a, z)? {
            kept.push(v);
            elements.push(e);
        }
    }
    elements.sort_by(|x, y| x.vector.cmp(&y.vector));
    Ok(TruncatedBasis {
        elements,
        radius,
        complete_radius: complete_radius(&cone.a)?,
    })
}

/// `⋃_S H(SA)`: the conformally minimal nonzero lattice points, since `z`
/// lies in `H(SA)` exactly for the patterns `S` that agree with the signs of
/// `Az`. Candidates are scanned by increasing `‖Az‖₁`.
pub fn graver_basis(a: &IntMatrix, radius: i64) -> Result<TruncatedBasis, HilbertError> {
    if a.nrows() > SIGN_ROWS_LIMIT {
        return Err(HilbertError::ScaleLimit(format!(
            "{} rows exceed the sign-pattern limit {SIGN_ROWS_LIMIT}",
            a.nrows()
        )));
    }
    if rank(a) != a.ncols() {
        return Err(HilbertError::Argument("matrix needs full column rank".into()));
    }
    let n = a.ncols();
    let mut pts: Vec<(i128, Vec<i128>, Vec<i64>)> = cube(n, radius)?
        .filter(|z| z.iter().any(|&v| v != 0))
        .map(|z| {
            let v: Vec<i128> = (0..a.nrows()).map(|i| a.row_dot(i, &z)).collect();
            (v.iter().map(|x| x.abs()).sum(), v, z)
        })
        .collect();
    pts.sort();
    let below = |g: &[i128], v: &[i128]| g.iter().zip(v).all(|(gi, vi)| gi * vi >= 0 && gi.abs() <= vi.abs());
    let mut kept: Vec<Vec<i128>> = Vec::new();
    let mut elements = Vec::new();
    for (_, v, z) in pts {
        if kept.iter().any(|g| below(g, &v)) {
            continue;
        }
        if let Some(e) = confirm(a, z)? {
            kept.push(v);
            elements.push(e);
        }
    }
    elements.sort_by(|x, y| x.vector.cmp(&y.vector));
    Ok(TruncatedBasis {
        elements,
        radius,
        complete_radius: complete_radius(a)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaTilde {
    /// `max |α.g| / Δ^α(A)` over the enumerated Graver elements; a lower
    /// bound on the true value when `truncated`.
    pub value: Rational,
    pub element: Option<Vec<i64>>,
    pub delta: Rational,
    pub truncated: bool,
}

pub fn kappa_tilde(a: &IntMatrix, alpha: &[i64], radius: i64) -> Result<KappaTilde, HilbertError> {
    let delta = delta_alpha(a, alpha, &[])?;
    if delta.is_zero() {
        return Err(HilbertError::DegenerateDirection);
    }
    let g = graver_basis(a, radius)?;
    let best = g
        .elements
        .iter()
        .map(|e| (dot_i64(alpha, &e.vector).abs(), &e.vector))
        .max_by(|x, y| x.0.cmp(&y.0).then_with(|| y.1.cmp(x.1)));
    Ok(KappaTilde {
        value: best.map_or_else(Rational::zero, |(v, _)| {
            Rational::from_integer(BigInt::from(v)) / &delta
        }),
        element: best.map(|(_, e)| e.clone()),
        delta,
        truncated: g.truncated(),
    })
}

fn require_origin_only(p: &HPolyhedron) -> Result<(), HilbertError> {
    let n = p.n();
    if !p.is_bounded()? {
        return Err(HilbertError::PreconditionFailed(
            "P is unbounded, so it holds integer points besides the origin".into(),
        ));
    }
    let pts = p.integer_points(None)?;
    if let Some(z) = pts.iter().find(|z| z.iter().any(|&v| v != 0)) {
        return Err(HilbertError::PreconditionFailed(format!(
            "P contains the integer point {}",
            format_int_vector(z)
        )));
    }
    if pts.is_empty() {
        return Err(HilbertError::PreconditionFailed(format!(
            "P does not contain the origin {}",
            format_int_vector(&vec![0; n])
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaVertex {
    /// `max |α.x*| / Δ^α(A)` over vertices `x*`.
    pub value: Rational,
    pub vertex: Vec<Rational>,
    pub delta: Rational,
}

/// Largest vertex ratio `|α.x*| / Δ^α(A)` of a polyhedron whose only lattice
/// point is the origin. Negated rows do not change `Δ^α`.
pub fn kappa_vertex(p: &HPolyhedron, alpha: &[i64]) -> Result<KappaVertex, HilbertError> {
    require_origin_only(p)?;
    let delta = delta_alpha(p.a(), alpha, &[])?;
    if delta.is_zero() {
        return Err(HilbertError::DegenerateDirection);
    }
    let mut best = KappaVertex {
        value: Rational::zero(),
        vertex: vec![Rational::zero(); p.n()],
        delta: delta.clone(),
    };
    for v in p.vertices()? {
        let r = abs(&dot_rat(alpha, &v.point)) / &delta;
        if r > best.value {
            best.value = r;
            best.vertex = v.point;
        }
    }
    Ok(best)
}

/// One link `z_i -> z_{i+1}` of the descent through spindles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLink {
    pub from: Vec<i64>,
    pub to: Vec<i64>,
    /// `from - to`, irreducible in the cone of `A` signed by `from`.
    pub step: Vec<i64>,
}

/// From `z`, the lattice point of `Sp(A, z)` other than `z` maximising
/// `1ᵀSAy`; `z` minus it is then irreducible. Repeats until the origin.
pub fn graver_chain(a: &IntMatrix, z0: &[i64]) -> Result<Vec<ChainLink>, HilbertError> {
    let mut links = Vec::new();
    let mut z = z0.to_vec();
    while z.iter().any(|&v| v != 0) {
        let signs: Vec<i128> = (0..a.nrows()).map(|i| a.row_dot(i, &z).signum()).collect();
        let weight = |y: &[i64]| -> i128 { (0..a.nrows()).map(|i| signs[i] * a.row_dot(i, y)).sum() };
        let next = spindle_lattice_points(a, &z)?
            .into_iter()
            .filter(|y| *y != z)
            .max_by(|x, y| weight(x).cmp(&weight(y)).then_with(|| y.cmp(x)))
            .ok_or_else(|| HilbertError::PreconditionFailed("spindle lost the origin".into()))?;
        let step: Vec<i64> = z.iter().zip(&next).map(|(x, y)| x - y).collect();
        if spindle_lattice_points(a, &step)?.len() != 2 {
            return Err(HilbertError::PreconditionFailed(format!(
                "chain step {} is reducible",
                format_int_vector(&step)
            )));
        }
        links.push(ChainLink {
            from: z.clone(),
            to: next.clone(),
            step,
        });
        z = next;
    }
    Ok(links)
}

/// Checks, for every vertex `x*` of `P(AB, b)`,
/// `|α.x*| <= (κ + κ̃(|det B| - 1)) / |det B| · Δ^α(AB)`.
///
/// Both statistics are taken along `β = |det B| B^{-T} α`, the direction the
/// bound is assembled from. `κ` is the vertex ratio of the reduced polyhedron
/// around `z⁽⁰⁾`, translated to the origin; `κ̃` is the Graver ratio at
/// `radius`, raised to cover every step of the replayed chain
/// `z⁽⁰⁾ -> … -> 0`, whose length must stay below `|det B|`. The worst vertex
/// by slack is reported.
pub fn transfer_bound_check(
    a: &IntMatrix,
    b_mat: &IntMatrix,
    b: &[i64],
    alpha: &[i64],
    radius: Option<i64>,
) -> Result<BoundReport, HilbertError> {
    let n = a.ncols();
    if !b_mat.is_square() || b_mat.nrows() != n || alpha.len() != n {
        return Err(HilbertError::Argument("B must be n x n and alpha of length n".into()));
    }
    let det_b = det(b_mat)?;
    if det_b.is_zero() {
        return Err(HilbertError::Argument("B is singular".into()));
    }
    let det_abs = Rational::from_integer(det_b.abs());
    let ab = a.mul(b_mat)?;
    let p = HPolyhedron::new(ab.clone(), b.to_vec())?;
    require_origin_only(&p)?;
    let p_a = HPolyhedron::new(a.clone(), b.to_vec())?;

    // β = |det B| B^{-T} α is integral by Cramer's rule.
    let inv = inverse(b_mat)?.expect("nonsingular");
    let beta: Vec<i64> = (0..n)
        .map(|i| {
            let v: Rational = (0..n).map(|k| &inv[k][i] * rat(alpha[k])).sum::<Rational>() * &det_abs;
            v.to_integer().to_i64().filter(|_| v.is_integer())
        })
        .collect::<Option<_>>()
        .ok_or_else(|| HilbertError::ScaleLimit("β out of range".into()))?;
    let delta = delta_alpha(&ab, alpha, &[])?;
    if delta.is_zero() {
        return Err(HilbertError::DegenerateDirection);
    }
    let radius = match radius {
        Some(r) => r,
        None => default_radius(a)?,
    };
    let kt = kappa_tilde(a, &beta, radius)?;
    let delta_beta = kt.delta.clone();
    let max_steps = &det_abs - rat(1);

    let mut worst: Option<(Rational, BoundReport)> = None;
    for v in p.vertices()? {
        let x = v.point;
        let y: Vec<Rational> = (0..n)
            .map(|i| (0..n).map(|j| rat(b_mat.get(i, j)) * &x[j]).sum())
            .collect();
        // Objective making y* the unique LP optimum: the sum of rows tight there.
        let tight = p_a.system().tight_rows(&y);
        let c: Vec<Rational> = (0..n).map(|j| tight.iter().map(|&i| rat(a.get(i, j))).sum()).collect();
        let red = reduce_unique_ip(&p_a, &c, None)?;
        let z0 = red.z_star.clone();
        let centred = red.p_bar.translate(&z0)?;
        let kappa = {
            let d = delta_alpha(centred.a(), &beta, &[])?;
            let mut best = Rational::zero();
            for w in centred.vertices()? {
                best = best.max(abs(&dot_rat(&beta, &w.point)) / &d);
            }
            best
        };
        let chain = graver_chain(a, &z0)?;
        let mut kappa_t = kt.value.clone();
        for link in &chain {
            let r = Rational::from_integer(BigInt::from(dot_i64(&beta, &link.step).abs())) / &delta_beta;
            kappa_t = kappa_t.max(r);
        }
        if rat(chain.len() as i64) > max_steps {
            return Err(HilbertError::PreconditionFailed(format!(
                "chain of length {} exceeds |det B| - 1",
                chain.len()
            )));
        }
        let measured = abs(&dot_rat(alpha, &x));
        let bound = (&kappa + &kappa_t * &max_steps) / &det_abs * &delta;
        let slack = &bound - &measured;
        let report = BoundReport::new(
            TheoremId::Transfer,
            "|α.x*| <= (κ + κ̃(|det B| - 1)) / |det B| · Δ^α(AB)",
            measured,
            bound,
            false,
        )
        .with("vertex", format_vector(&x))
        .with("beta", format_int_vector(&beta))
        .with("z0", format_int_vector(&z0))
        .with("kappa", format_rational(&kappa))
        .with("kappa_tilde", format_rational(&kappa_t))
        .with("kappa_tilde_truncated", kt.truncated.to_string())
        .with("chain_length", chain.len().to_string())
        .with("det_b", format_rational(&det_abs))
        .with("delta_alpha", format_rational(&delta));
        if worst.as_ref().is_none_or(|(s, _)| slack < *s) {
            worst = Some((slack, report));
        }
    }
    worst
        .map(|(_, r)| r)
        .ok_or_else(|| HilbertError::PreconditionFailed("P has no vertex".into()))
}

/// Checks the two-level proximity and flatness bounds for `A = TB` after
/// validating the minor structure of `A` and `Δ_n(T) ∈ {1, 2}`. Proximity is
/// checked when `c` is given and `P` has lattice points; flatness when `P` is
/// lattice-free.
pub fn check_dim_free(
    t: &IntMatrix,
    b_mat: &IntMatrix,
    b: &[i64],
    c: Option<&[Rational]>,
) -> Result<Vec<BoundReport>, HilbertError> {
    let a = t.mul(b_mat)?;
    if minors_in_two_levels(&a).is_none() {
        return Err(HilbertError::NotDeltaModular("A = TB".into()));
    }
    let dt = delta_k(t, t.ncols())?;
    if dt != BigInt::from(1) && dt != BigInt::from(2) {
        return Err(HilbertError::NotDeltaModular(format!("Δ_n(T) = {dt}")));
    }
    let p = HPolyhedron::new(a, b.to_vec())?;
    let opts = CheckOptions::default();
    let lattice_free = p.is_bounded()? && p.integer_points(None)?.is_empty();
    let mut out = Vec::new();
    if let (Some(c), false) = (c, lattice_free) {
        out.extend(check_theorem(&p, Some(c), None, TheoremId::Thm7a, &opts)?);
    }
    if lattice_free {
        out.extend(check_theorem(&p, None, None, TheoremId::Thm7b, &opts)?);
    }
    Ok(out)
}
