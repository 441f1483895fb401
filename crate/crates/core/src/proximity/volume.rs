use super::slice::check_direction;
use super::ProximityError;
use crate::linalg::{delta_alpha, det, inverse, IntMatrix};
use crate::plane::{area2, check_rot_subset_polar, polar2, verify_area_lower_bound, Point2, Polygon2};
use crate::polyhedra::HPolyhedron;
use crate::rational::{format_int_vector, format_rational, rat, Rational};
use crate::report::{BoundReport, TheoremId};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

fn require_origin_only(p: &HPolyhedron) -> Result<(), ProximityError> {
    let n = p.n();
    if p.dimension()? != Some(n) {
        return Err(ProximityError::PreconditionFailed("P is not full-dimensional".into()));
    }
    if !p.is_bounded()? {
        return Err(ProximityError::PreconditionFailed(
            "P is unbounded, so it holds integer points besides the origin".into(),
        ));
    }
    let pts = p.integer_points(None)?;
    if pts != [vec![0; n]] {
        let other = pts.iter().find(|z| z.iter().any(|&v| v != 0));
        return Err(ProximityError::PreconditionFailed(match other {
            Some(z) => format!("P contains the integer point {}", format_int_vector(z)),
            None => "P does not contain the origin".into(),
        }));
    }
    Ok(())
}

fn norm_sq(alpha: &[i64]) -> Rational {
    alpha.iter().map(|&v| rat(v) * rat(v)).sum()
}

/// `|det([alpha; rows])|` maximised over `n - 1` rows, first maximiser kept.
fn best_rows(a: &IntMatrix, alpha: &[i64]) -> Result<(Vec<usize>, BigInt), ProximityError> {
    let mut best = (Vec::new(), BigInt::zero());
    for rows in (0..a.nrows()).combinations(a.ncols() - 1) {
        let d = det(&a.select_rows(&rows).prepend_row(alpha)?)?.abs();
        if d > best.1 {
            best = (rows, d);
        }
    }
    Ok(best)
}

/// Checks `prox_n(α) < 2^{n-1}‖α‖ / (vol_{n-1}(P_α) · Δ^α)` where
/// `P_α = {x : |Ax| <= 1, α.x = 0}`, for `n = 2, 3` and `P ∩ Z^n = {0}`.
///
/// Norms cancel against the volume, so the bound is rational: it equals
/// `max_j |det(α, a_j)| / Δ^α` in the plane and `4 / area(Q°)` in space,
/// where `Q°` is the image of `P_α` under `x ↦ (B x)_{2,3}` with
/// `B = [α; A_K]` attaining `Δ^α`. The squared volume is reported as a witness.
pub fn volume_inequality_check(p: &HPolyhedron, alpha: &[i64]) -> Result<BoundReport, ProximityError> {
    check_direction(p, alpha)?;
    let n = p.n();
    if !(2..=3).contains(&n) {
        return Err(ProximityError::Unsupported(format!("volume check in dimension {n}")));
    }
    require_origin_only(p)?;
    let a = p.a();
    let delta = delta_alpha(a, alpha, &[])?;
    if delta.is_zero() {
        return Err(ProximityError::DegenerateDirection);
    }
    let alpha_q: Vec<Rational> = alpha.iter().map(|&v| rat(v)).collect();
    let slice_max = p.lp_max(&alpha_q)?.value;
    let prox = &slice_max / &delta;
    let label = format!("prox_{n}(α) < 2^{}‖α‖ / (vol(P_α) Δ^α)", n - 1);

    if n == 2 {
        // P_α is the segment ±t·rot(α) with 1/t = max_j |det(α, a_j)|.
        let inv_t = Rational::from_integer(best_rows(a, alpha)?.1);
        let vol_sq = rat(4) * norm_sq(alpha) / (&inv_t * &inv_t);
        let bound = &inv_t / &delta;
        return Ok(BoundReport::new(TheoremId::Volume, label, prox, bound, true)
            .with("alpha", format_int_vector(alpha))
            .with("slice_max", format_rational(&slice_max))
            .with("delta_alpha", format_rational(&delta))
            .with("vol_sq", format_rational(&vol_sq)));
    }

    let (rows, det_b) = best_rows(a, alpha)?;
    let b = a.select_rows(&rows).prepend_row(alpha)?;
    let b_inv = inverse(&b)?.ok_or(ProximityError::DegenerateDirection)?;
    let reduced: Vec<Point2> = (0..a.nrows())
        .map(|k| {
            let col = |c: usize| -> Rational { (0..3).map(|l| rat(a.get(k, l)) * &b_inv[l][c]).sum() };
            Point2::new(col(1), col(2))
        })
        .collect();
    let q = Polygon2::symmetric_hull(&reduced)?;
    if !check_rot_subset_polar(&q) {
        return Err(ProximityError::PreconditionFailed(
            "reduced rows have a determinant pair above 1".into(),
        ));
    }
    let polar_area = area2(&polar2(&q)?);
    let proof = verify_area_lower_bound(&q)?;
    let det_b = Rational::from_integer(det_b);
    let vol_sq = &polar_area * &polar_area * norm_sq(alpha) / (&det_b * &det_b);
    let bound = rat(4) / &polar_area;
    Ok(BoundReport::new(TheoremId::Volume, label, prox, bound, true)
        .with("alpha", format_int_vector(alpha))
        .with("slice_max", format_rational(&slice_max))
        .with("delta_alpha", format_rational(&delta))
        .with("rows", format!("{rows:?}"))
        .with("polar_area", format_rational(&polar_area))
        .with(
            "area_at_least_3",
            if proof.holds() { "certified" } else { "not certified" },
        )
        .with("vol_sq", format_rational(&vol_sq)))
}
