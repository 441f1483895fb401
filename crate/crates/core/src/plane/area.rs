use super::frame::{p_lambda, reconstruct_parent};
use super::modify::{grow_until_equality, GrowTrace};
use super::{area2, check_rot_subset_polar, is_self_polar, polar2, PlaneError, Point2, Polygon2};
use crate::rational::{rat, Rational};

/// One induction step: `Q = P_λ` for the parent `P`, replaced by whichever
/// of `P_0 = P` and `P_1` has the smaller area.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentStep {
    pub polygon: Polygon2,
    pub vertex: Point2,
    pub parent: Polygon2,
    pub lambda: Rational,
    pub p1: Polygon2,
    pub area: Rational,
    pub area_p0: Rational,
    pub area_p1: Rational,
    /// `0` for the parent, `1` for `P_1`.
    pub chosen: u8,
}

impl DescentStep {
    pub fn next(&self) -> &Polygon2 {
        if self.chosen == 0 {
            &self.parent
        } else {
            &self.p1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaProof {
    pub input: Polygon2,
    /// Exact area of `Q°`.
    pub polar_area: Rational,
    pub grow: GrowTrace,
    pub descent: Vec<DescentStep>,
    /// Six-vertex self-polar polygon closing the descent.
    pub base: Polygon2,
    pub failures: Vec<String>,
}

impl AreaProof {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.polar_area >= rat(3)
    }

    /// Recomputes every polygon of the trace from the input and repeats
    /// every comparison.
    pub fn replay(&self) -> Result<(), PlaneError> {
        let fail = |what: String| Err(PlaneError::InvariantFailed(what));
        if self.grow.start != self.input {
            return fail("trace starts elsewhere".into());
        }
        self.grow.replay()?;
        if area2(&polar2(&self.input)?) != self.polar_area {
            return fail("polar area differs".into());
        }
        let mut cur = self.grow.result.clone();
        for (k, s) in self.descent.iter().enumerate() {
            if s.polygon != cur {
                return fail(format!("descent {k}: chain broken"));
            }
            let parent = reconstruct_parent(&cur, &s.vertex)?;
            if parent.p != s.parent {
                return fail(format!("descent {k}: parent differs"));
            }
            if p_lambda(&s.parent, &s.vertex, &s.lambda)?.polygon != cur {
                return fail(format!("descent {k}: Q is not P_λ"));
            }
            if p_lambda(&s.parent, &s.vertex, &rat(1))?.polygon != s.p1 {
                return fail(format!("descent {k}: P_1 differs"));
            }
            let areas_ok = area2(&cur) == s.area
                && area2(&s.parent) == s.area_p0
                && area2(&s.p1) == s.area_p1
                && s.area >= s.area_p0.clone().min(s.area_p1.clone());
            if !areas_ok {
                return fail(format!("descent {k}: area comparison fails"));
            }
            let next = s.next();
            if next.len() >= cur.len() || !is_self_polar(next) {
                return fail(format!("descent {k}: vertex count did not drop"));
            }
            cur = next.clone();
        }
        if cur != self.base || cur.len() != 6 || area2(&cur) != rat(3) {
            return fail("descent does not end at a hexagon of area 3".into());
        }
        Ok(())
    }
}

/// Parameter `λ` with `v = (1 - λ)u + λ v_1`.
fn lambda_of(u: &Point2, v1: &Point2, v: &Point2) -> Option<Rational> {
    let d = v1.sub(u);
    let lambda = v.sub(u).dot(&d) / d.dot(&d);
    (u.lerp(v1, &lambda) == *v).then_some(lambda)
}

const DESCENT_CAP: usize = 1_000;

/// Certifies `area(Q°) >= 3` for symmetric `Q` with `rot Q ⊆ Q°`: grow to a
/// self-polar polygon, then descend through parents to a hexagon while the
/// area never increases.
pub fn verify_area_lower_bound(q: &Polygon2) -> Result<AreaProof, PlaneError> {
    if !q.is_centrally_symmetric() || !q.contains_origin_interior() || !check_rot_subset_polar(q) {
        return Err(PlaneError::HypothesisViolated);
    }
    let grow = grow_until_equality(q)?;
    let mut failures = Vec::new();
    let mut descent = Vec::new();
    let mut cur = grow.result.clone();
    for _ in 0..DESCENT_CAP {
        if cur.len() <= 6 {
            break;
        }
        let vertex = cur.vertices()[0].clone();
        let parent = reconstruct_parent(&cur, &vertex)?;
        let frame = super::boundary_frame(&parent.p, &vertex)?;
        let lambda = lambda_of(&frame.u, &frame.v1()?, &vertex)
            .ok_or_else(|| PlaneError::InvariantFailed("v is not on the segment [u, v_1]".into()))?;
        let p1 = p_lambda(&parent.p, &vertex, &rat(1))?.polygon;
        let area = area2(&cur);
        let area_p0 = area2(&parent.p);
        let area_p1 = area2(&p1);
        if area < area_p0.clone().min(area_p1.clone()) {
            failures.push(format!("area {area} below both interpolation ends"));
        }
        let chosen = if area_p1 < area_p0 { 1 } else { 0 };
        let step = DescentStep {
            polygon: cur.clone(),
            vertex,
            parent: parent.p,
            lambda,
            p1,
            area,
            area_p0,
            area_p1,
            chosen,
        };
        let next = step.next().clone();
        if next.len() >= cur.len() {
            failures.push(format!("vertex count {} did not drop below {}", next.len(), cur.len()));
            descent.push(step);
            break;
        }
        descent.push(step);
        cur = next;
    }
    if cur.len() != 6 {
        failures.push(format!("descent stopped at {} vertices", cur.len()));
    } else if area2(&cur) != rat(3) {
        failures.push("six-vertex self-polar polygon without area 3".into());
    }
    Ok(AreaProof {
        input: q.clone(),
        polar_area: area2(&polar2(q)?),
        grow,
        descent,
        base: cur,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::hexagon;

    #[test]
    fn hexagon_needs_no_descent() {
        let proof = verify_area_lower_bound(&hexagon()).unwrap();
        assert!(proof.holds());
        assert_eq!(proof.polar_area, rat(3));
        assert!(proof.descent.is_empty());
        proof.replay().unwrap();
    }

    #[test]
    fn cross_polytope_holds() {
        let cross = Polygon2::from_ints(&[(1, 0), (0, 1), (-1, 0), (0, -1)]).unwrap();
        let proof = verify_area_lower_bound(&cross).unwrap();
        assert!(proof.holds());
        assert_eq!(proof.polar_area, rat(4));
        proof.replay().unwrap();
    }

    #[test]
    fn square_fails_hypothesis() {
        let sq = Polygon2::from_ints(&[(1, 1), (-1, 1), (-1, -1), (1, -1)]).unwrap();
        assert_eq!(verify_area_lower_bound(&sq), Err(PlaneError::HypothesisViolated));
    }
}
