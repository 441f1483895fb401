use num_traits::Zero;

use super::{
    check_rot_subset_polar, det, is_self_polar, line_meet, polar2, rot90, rot_polygon, PlaneError, Point2, Polygon2,
};

/// `P_v = conv(P ∪ {±v}) ∩ S_v`.
pub fn p_v(p: &Polygon2, v: &Point2) -> Result<Polygon2, PlaneError> {
    if !p.is_centrally_symmetric() {
        return Err(PlaneError::NotSymmetric);
    }
    let mut pts = p.vertices().to_vec();
    pts.push(v.clone());
    pts.push(v.neg());
    Polygon2::hull(&pts)?.clip_strip(v)
}

/// Closure of the component of `stell(P) \ P` beyond the edge on `L_v`: the
/// triangle cut out by `L_u`, `L_v`, `L_w` with `u`, `w` the neighbours of `v`.
pub fn stell_component(p: &Polygon2, v: &Point2) -> Result<Polygon2, PlaneError> {
    if !is_self_polar(p) {
        return Err(PlaneError::NotSelfPolar);
    }
    let i = p
        .index_of(v)
        .ok_or_else(|| PlaneError::Argument(format!("{v} is not a vertex")))?;
    let u = p.vertex(i + p.len() - 1);
    let w = p.vertex(i + 1);
    let corners = [line_meet(u, v), line_meet(v, w), line_meet(u, w)]
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| PlaneError::InvariantFailed("parallel neighbouring lines".into()))?;
    Polygon2::hull(&corners)
}

fn contains_polygon(outer: &Polygon2, inner: &Polygon2) -> bool {
    inner.vertices().iter().all(|x| outer.contains(x))
}

/// `|verts(rot P) \ verts(P°)|`.
fn excess(p: &Polygon2, polar: &Polygon2) -> usize {
    rot_polygon(p)
        .vertices()
        .iter()
        .filter(|x| !polar.has_vertex(x))
        .count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowStep {
    /// Vertex `v` of `P°` used for `P <- P_{rot v}`.
    pub vertex: Point2,
    /// The first step only pushes `rot P` onto the boundary of `P°`.
    pub initial: bool,
    pub polygon: Polygon2,
    pub excess: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowTrace {
    pub start: Polygon2,
    pub steps: Vec<GrowStep>,
    pub result: Polygon2,
}

impl GrowTrace {
    pub fn chosen(&self) -> Vec<Point2> {
        self.steps.iter().map(|s| s.vertex.clone()).collect()
    }

    /// Recomputes every step and checks the nesting chain
    /// `rot P ⊆ rot P' ⊆ P'° ⊆ P°` and the final equality.
    pub fn replay(&self) -> Result<(), PlaneError> {
        let mut cur = self.start.clone();
        let mut last_excess: Option<usize> = None;
        for (k, s) in self.steps.iter().enumerate() {
            let polar = polar2(&cur)?;
            if !polar.has_vertex(&s.vertex) {
                return Err(PlaneError::InvariantFailed(format!(
                    "step {k}: not a vertex of the polar"
                )));
            }
            let next = p_v(&cur, &rot90(&s.vertex))?;
            if next != s.polygon {
                return Err(PlaneError::InvariantFailed(format!("step {k}: polygon differs")));
            }
            let next_polar = polar2(&next)?;
            let chain = contains_polygon(&rot_polygon(&next), &rot_polygon(&cur))
                && contains_polygon(&next_polar, &rot_polygon(&next))
                && contains_polygon(&polar, &next_polar);
            if !chain {
                return Err(PlaneError::InvariantFailed(format!("step {k}: nesting chain broken")));
            }
            let e = excess(&next, &next_polar);
            if e != s.excess {
                return Err(PlaneError::InvariantFailed(format!("step {k}: excess differs")));
            }
            if !s.initial && last_excess.is_some_and(|l| e >= l) {
                return Err(PlaneError::InvariantFailed(format!("step {k}: excess did not drop")));
            }
            last_excess = Some(e);
            cur = next;
        }
        if cur != self.result || !is_self_polar(&cur) {
            return Err(PlaneError::InvariantFailed("final polygon is not self-polar".into()));
        }
        Ok(())
    }
}

const GROW_CAP: usize = 10_000;

/// Grows a symmetric `Q` with `rot Q ⊆ Q°` into `P` with
/// `rot Q ⊆ rot P = P° ⊆ Q°` by repeated `P <- P_{rot v}`.
///
/// When `rot Q` misses the boundary of `Q°`, the first step uses the
/// lexicographically smallest vertex of `Q°`; this keeps every coordinate
/// rational where a rescaling would not. Afterwards `v` is the
/// lexicographically smallest vertex of `P°` outside `rot P` on an edge of
/// `P°` that meets `rot P`.
pub fn grow_until_equality(q: &Polygon2) -> Result<GrowTrace, PlaneError> {
    if !q.is_centrally_symmetric() {
        return Err(PlaneError::NotSymmetric);
    }
    if !q.contains_origin_interior() {
        return Err(PlaneError::PolarUnbounded);
    }
    if !check_rot_subset_polar(q) {
        return Err(PlaneError::HypothesisViolated);
    }
    let mut trace = GrowTrace {
        start: q.clone(),
        steps: Vec::new(),
        result: q.clone(),
    };
    let mut cur = q.clone();
    for round in 0..GROW_CAP {
        let polar = polar2(&cur)?;
        let rot = rot_polygon(&cur);
        if polar == rot {
            trace.result = cur;
            return Ok(trace);
        }
        let touching = rot.vertices().iter().any(|r| polar.on_boundary(r));
        let vertex = if !touching {
            polar.vertices()[0].clone()
        } else {
            let mut cands: Vec<Point2> = Vec::new();
            for (a, b) in polar.edges() {
                let dir = b.sub(a);
                if rot.vertices().iter().any(|r| det(&dir, &r.sub(a)).is_zero()) {
                    cands.extend([a, b].into_iter().filter(|x| !rot.contains(x)).cloned());
                }
            }
            cands
                .into_iter()
                .min()
                .ok_or_else(|| PlaneError::InvariantFailed("no vertex to grow towards".into()))?
        };
        let next = p_v(&cur, &rot90(&vertex))?;
        let e = excess(&next, &polar2(&next)?);
        let prev = trace.steps.last().map_or_else(|| excess(&cur, &polar), |s| s.excess);
        if touching && e >= prev {
            return Err(PlaneError::InvariantFailed(format!(
                "round {round}: vertex difference did not shrink"
            )));
        }
        trace.steps.push(GrowStep {
            vertex,
            initial: !touching,
            polygon: next.clone(),
            excess: e,
        });
        cur = next;
    }
    Err(PlaneError::InvariantFailed("growth did not terminate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{area2, hexagon};
    use crate::rational::{rat, ratio};

    #[test]
    fn self_polar_input_is_a_fixpoint() {
        let t = grow_until_equality(&hexagon()).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.result, hexagon());
    }

    #[test]
    fn cross_polytope_grows_to_self_polar() {
        let cross = Polygon2::from_ints(&[(1, 0), (0, 1), (-1, 0), (0, -1)]).unwrap();
        let t = grow_until_equality(&cross).unwrap();
        assert!(is_self_polar(&t.result));
        assert!(area2(&t.result) >= rat(3));
        t.replay().unwrap();
    }

    #[test]
    fn shrunken_hexagon_needs_the_initial_step() {
        let q = hexagon().scale(&ratio(1, 2));
        let t = grow_until_equality(&q).unwrap();
        assert!(t.steps[0].initial);
        assert!(is_self_polar(&t.result));
        t.replay().unwrap();
    }

    #[test]
    fn p_v_is_symmetric_in_v() {
        let h = hexagon();
        let v = Point2::new(ratio(6, 5), ratio(6, 5));
        assert_eq!(p_v(&h, &v).unwrap(), p_v(&h, &v.neg()).unwrap());
    }

    #[test]
    fn p_v_inside_shrinks_or_keeps() {
        let h = hexagon();
        let inside = Point2::new(ratio(1, 2), ratio(1, 2));
        let out = p_v(&h, &inside).unwrap();
        assert!(out.vertices().iter().all(|x| h.contains(x)));
    }

    #[test]
    fn hexagon_components() {
        let h = hexagon();
        for v in h.vertices() {
            let tri = stell_component(&h, v).unwrap();
            assert_eq!(tri.len(), 3);
            let outside: Vec<_> = tri.vertices().iter().filter(|x| !h.contains(x)).collect();
            assert_eq!(outside.len(), 1);
        }
    }
}
