use super::slice::{check_direction, SliceFamily};
use super::ProximityError;
use crate::linalg::{delta_alpha, dot_rat, independent_extension, rank};
use crate::polyhedra::{spindle_at, spindle_walk, HPolyhedron, Side};
use crate::rational::{format_vector, rat, ratio, Rational};
use num_traits::{Signed, Zero};
use std::fmt;

/// `d = 3a + 2b` with `b ∈ {0, 1, 2}`, for `d >= 2`.
pub fn split_dim(d: usize) -> Result<(usize, usize), ProximityError> {
    if d < 2 {
        return Err(ProximityError::Argument(format!("cannot split dimension {d}")));
    }
    let b = (3 - d % 3) % 3;
    Ok(((d - 2 * b) / 3, b))
}

/// Known strict upper bound on `prox_d` for polyhedra whose only lattice point
/// is the origin, in dimensions one to three.
pub fn lemma_factor(d: usize) -> Option<Rational> {
    match d {
        1 | 2 => Some(rat(1)),
        3 => Some(ratio(4, 3)),
        _ => None,
    }
}

/// Face dimensions used along the walk: threes first, then twos.
fn step_dims(d: usize) -> Vec<usize> {
    match d {
        0 => Vec::new(),
        1 => vec![1],
        _ => {
            let (a, b) = split_dim(d).expect("d >= 2");
            std::iter::repeat_n(3, a).chain(std::iter::repeat_n(2, b)).collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateStep {
    pub from: Vec<Rational>,
    pub to: Vec<Rational>,
    /// Dimension of the spindle at `from`.
    pub spindle_dim: usize,
    pub planned_dim: usize,
    /// Dimension of the face `F_i` through `from` and `to`.
    pub face_dim: usize,
    /// Independent rows whose kernel is the span of `from - F_i`.
    pub index: Vec<usize>,
    /// `alpha . (from - to)`.
    pub value: Rational,
    /// `max alpha.x` over `P ∩ ker A_index`.
    pub slice_max: Rational,
    /// `Δ^α` restricted to `index`.
    pub delta: Rational,
    /// Exact `prox_{face_dim}(alpha)` over all slices of `P`.
    pub prox_face: Rational,
}

impl CertificateStep {
    /// `prox_{face_dim} · Δ^α_I` with `I` the base index set.
    pub fn bound(&self, base_delta: &Rational) -> Rational {
        &self.prox_face * base_delta
    }
}

/// A replayable chain `x*_0, ..., x*_t = 0` from the maximiser of `alpha` to
/// the origin, each link certified by a slice of `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkCertificate {
    pub p: HPolyhedron,
    pub alpha: Vec<i64>,
    pub dim: usize,
    pub dims: Vec<usize>,
    /// Independent rows spanning the implicit equalities of `P`.
    pub base_index: Vec<usize>,
    pub base_delta: Rational,
    pub points: Vec<Vec<Rational>>,
    pub steps: Vec<CertificateStep>,
    /// `alpha . x*_0`.
    pub total: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayError {
    pub step: Option<usize>,
    pub reason: String,
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(i) => write!(f, "step {i}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

impl std::error::Error for ReplayError {}

fn fail<T>(step: Option<usize>, reason: impl Into<String>) -> Result<T, ReplayError> {
    Err(ReplayError {
        step,
        reason: reason.into(),
    })
}

impl WalkCertificate {
    /// `Σ prox_{d_i} · Δ^α_I` over the steps taken.
    pub fn chain_bound(&self) -> Rational {
        self.steps.iter().map(|s| s.bound(&self.base_delta)).sum()
    }

    /// `(4d + 2)/9 · Δ^α_I`.
    pub fn theorem_bound(&self) -> Rational {
        ratio(4 * self.dim as i64 + 2, 9) * &self.base_delta
    }

    /// Re-derives every recorded quantity from `P` and checks the chain.
    pub fn replay(&self) -> Result<(), ReplayError> {
        let n = self.p.n();
        let a = self.p.a();
        let zero = vec![Rational::zero(); n];
        if self.points.len() != self.steps.len() + 1 {
            return fail(None, "point and step counts disagree");
        }
        if self.points.last() != Some(&zero) && !self.steps.is_empty() {
            return fail(None, "chain does not end at the origin");
        }
        if self.dims.iter().sum::<usize>() != self.dim || self.steps.len() > self.dims.len() {
            return fail(None, "face dimensions do not split the dimension of P");
        }
        if let Some(x) = self.points.iter().find(|x| !self.p.contains(x)) {
            return fail(None, format!("{} lies outside P", format_vector(x)));
        }
        if dot_rat(&self.alpha, &self.points[0]) != self.total {
            return fail(None, "total does not match the starting point");
        }
        let recomputed = if self.base_index.len() == n {
            Rational::zero()
        } else {
            delta_alpha(a, &self.alpha, &self.base_index).map_err(|e| ReplayError {
                step: None,
                reason: e.to_string(),
            })?
        };
        if recomputed != self.base_delta || n - self.base_index.len() != self.dim {
            return fail(None, "base index set is inconsistent");
        }

        let mut sum = Rational::zero();
        for (i, s) in self.steps.iter().enumerate() {
            let at = Some(i);
            if s.from != self.points[i] || s.to != self.points[i + 1] {
                return fail(at, "endpoints do not match the chain");
            }
            if s.value != dot_rat(&self.alpha, &s.from) - dot_rat(&self.alpha, &s.to) {
                return fail(at, "value is not alpha . (from - to)");
            }
            let sp = spindle_at(a, &s.from).map_err(|e| ReplayError {
                step: at,
                reason: e.to_string(),
            })?;
            if !sp.contains(&s.to) {
                return fail(at, "next point leaves the spindle");
            }
            if s.face_dim == 0 || s.face_dim > s.planned_dim || s.planned_dim != self.dims[i] {
                return fail(at, "face dimension out of range");
            }
            if !self.base_index.iter().all(|r| s.index.contains(r))
                || rank(&a.select_rows(&s.index)) != s.index.len()
                || n - s.index.len() != s.face_dim
            {
                return fail(at, "slice index set is inconsistent");
            }
            let diff: Vec<Rational> = s.from.iter().zip(&s.to).map(|(x, y)| x - y).collect();
            if s.index.iter().any(|&r| !dot_rat(a.row(r), &diff).is_zero()) {
                return fail(at, "step direction leaves the slice");
            }
            let slice_max = self
                .p
                .system()
                .with_zero_rows(&s.index)
                .and_then(|sys| sys.lp_max(&self.alpha.iter().map(|&v| rat(v)).collect::<Vec<_>>()))
                .map_err(|e| ReplayError {
                    step: at,
                    reason: e.to_string(),
                })?
                .value;
            if slice_max != s.slice_max || s.value > s.slice_max {
                return fail(at, "value exceeds the slice maximum");
            }
            let delta = delta_alpha(a, &self.alpha, &s.index).map_err(|e| ReplayError {
                step: at,
                reason: e.to_string(),
            })?;
            if delta != s.delta || delta > self.base_delta {
                return fail(at, "slice normaliser is inconsistent");
            }
            if delta.is_zero() {
                if !s.slice_max.is_zero() {
                    return fail(at, "alpha vanishes on the slice but its maximum is positive");
                }
            } else {
                if &s.slice_max / &delta > s.prox_face {
                    return fail(at, "slice prox exceeds the recorded prox of its dimension");
                }
                let factor = lemma_factor(s.face_dim).expect("face dimensions are at most 3");
                if s.prox_face >= factor {
                    return fail(at, "prox of the face dimension reaches the known bound");
                }
            }
            if s.value > s.bound(&self.base_delta) {
                return fail(at, "value exceeds its per-step bound");
            }
            sum += &s.value;
        }
        if sum != self.total {
            return fail(None, "step values do not telescope to the total");
        }
        if self.total > self.chain_bound() {
            return fail(None, "total exceeds the chain bound");
        }
        if self.dim >= 2 {
            let factors: Rational = self.dims.iter().map(|&d| lemma_factor(d).expect("d <= 3")).sum();
            if factors > ratio(4 * self.dim as i64 + 2, 9) {
                return fail(None, "split factors exceed (4d+2)/9");
            }
            if self.base_delta.is_positive() && self.total >= self.theorem_bound() {
                return fail(None, "total reaches (4d+2)/9 times the normaliser");
            }
        }
        Ok(())
    }
}

/// Walks spindles from the maximiser of `alpha` over `P` down to the origin.
/// `P` must have the origin as its only integer point, which forces it to be
/// bounded.
pub fn spindle_certificate(p: &HPolyhedron, alpha: &[i64]) -> Result<WalkCertificate, ProximityError> {
    check_direction(p, alpha)?;
    let n = p.n();
    if !p.is_bounded()? {
        return Err(ProximityError::PreconditionFailed(
            "P is unbounded, so it holds integer points besides the origin".into(),
        ));
    }
    let pts = p.integer_points(None)?;
    if pts != [vec![0; n]] {
        return Err(ProximityError::PreconditionFailed(format!(
            "P must contain exactly the origin as integer point, found {}",
            pts.len()
        )));
    }
    let a = p.a();
    let verts = p.vertices()?;
    let implicit: Vec<usize> = (0..p.m())
        .filter(|&j| p.b()[j] == 0 && verts.iter().all(|v| dot_rat(a.row(j), &v.point).is_zero()))
        .collect();
    let base_index = independent_extension(a, &[], &implicit);
    let dim = n - base_index.len();
    let dims = step_dims(dim);
    let qalpha: Vec<Rational> = alpha.iter().map(|&v| rat(v)).collect();
    let zero = vec![Rational::zero(); n];
    // The origin is itself optimal when the maximum is 0.
    let x0 = Some(p.lp_max(&qalpha)?.vertex.point)
        .filter(|x| !dot_rat(alpha, x).is_zero())
        .unwrap_or_else(|| zero.clone());
    let total = dot_rat(alpha, &x0);
    let base_delta = if dim == 0 {
        Rational::zero()
    } else {
        delta_alpha(a, alpha, &base_index)?
    };

    let mut cert = WalkCertificate {
        p: p.clone(),
        alpha: alpha.to_vec(),
        dim,
        dims: dims.clone(),
        base_index: base_index.clone(),
        base_delta,
        points: vec![x0.clone()],
        steps: Vec::new(),
        total,
    };
    if x0 == zero {
        return Ok(cert);
    }
    let family = SliceFamily::new(p)?;

    let mut x = x0;
    for (i, &planned) in dims.iter().enumerate() {
        let sp = spindle_at(a, &x)?;
        let k = sp.dimension();
        let last = planned >= k || i + 1 == dims.len();
        let (to, face_dim, face_rows) = if planned >= k {
            (zero.clone(), k, Vec::new())
        } else if last {
            return Err(ProximityError::PreconditionFailed(
                "face dimensions exhausted before reaching the origin".into(),
            ));
        } else {
            let w = spindle_walk(a, &x, planned)?;
            let rows: Vec<usize> = w
                .apex_face
                .tight
                .iter()
                .filter(|c| c.side == Side::Apex)
                .map(|c| c.row)
                .collect();
            (w.vertex, planned, rows)
        };
        let mut cand = sp.inactive_rows();
        cand.extend(face_rows);
        cand.sort_unstable();
        cand.dedup();
        let index = independent_extension(a, &base_index, &cand);
        let mut sorted = index.clone();
        sorted.sort_unstable();
        let slice = family
            .slice(&sorted)
            .ok_or_else(|| ProximityError::PreconditionFailed("slice outside the family".into()))?;
        let slice_max = slice.max_along(alpha)?;
        let delta = delta_alpha(a, alpha, &sorted)?;
        let prox_face = match family.prox_d(alpha, face_dim) {
            Ok(v) => v.value,
            Err(ProximityError::DegenerateDirection) => Rational::zero(),
            Err(e) => return Err(e),
        };
        let value = dot_rat(alpha, &x) - dot_rat(alpha, &to);
        cert.steps.push(CertificateStep {
            from: x.clone(),
            to: to.clone(),
            spindle_dim: k,
            planned_dim: planned,
            face_dim,
            index: sorted,
            value,
            slice_max,
            delta,
            prox_face,
        });
        cert.points.push(to.clone());
        if planned >= k {
            break;
        }
        x = to;
    }
    Ok(cert)
}
