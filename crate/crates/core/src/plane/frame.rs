use super::modify::p_v;
use super::{det, is_self_polar, line_meet, PlaneError, Point2, Polygon2};
use crate::rational::{rat, Rational};
use num_traits::{Signed, Zero};

/// Boundary points of `P` moved by `P -> P_v`, in counterclockwise order
/// `-w <= p <= û < v̂ < ŵ <= q <= u < w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryFrame {
    pub v: Point2,
    pub p: Point2,
    pub u_hat: Point2,
    pub v_hat: Point2,
    pub w_hat: Point2,
    pub q: Point2,
    pub u: Point2,
    pub w: Point2,
}

impl BoundaryFrame {
    /// `v_1 = L_û ∩ L_q`.
    pub fn v1(&self) -> Result<Point2, PlaneError> {
        line_meet(&self.u_hat, &self.q).ok_or_else(|| PlaneError::DegenerateFrame("L_û parallel to L_q".into()))
    }

    /// `a = det(v̂, v_1 - u)`.
    pub fn a(&self) -> Result<Rational, PlaneError> {
        Ok(det(&self.v_hat, &self.v1()?.sub(&self.u)))
    }

    /// `b = det(u, q - v̂)`.
    pub fn b(&self) -> Rational {
        det(&self.u, &self.q.sub(&self.v_hat))
    }

    pub fn v_lambda(&self, lambda: &Rational) -> Result<Point2, PlaneError> {
        Ok(self.u.lerp(&self.v1()?, lambda))
    }
}

/// Points on the boundary with their position `i + t` along edge `i`.
fn boundary_key(p: &Polygon2, x: &Point2) -> Option<Rational> {
    for (i, (a, b)) in p.edges().enumerate() {
        let d = b.sub(a);
        let r = x.sub(a);
        if det(&d, &r).is_zero() {
            let t = r.dot(&d) / d.dot(&d);
            if !t.is_negative() && t < rat(1) {
                return Some(rat(i as i64) + t);
            }
        }
    }
    None
}

fn vertices_on(p: &Polygon2, normal: &Point2) -> Vec<Point2> {
    p.vertices()
        .iter()
        .filter(|x| det(normal, x) == rat(1))
        .cloned()
        .collect()
}

/// Point where the line `det(v, x) = -1` crosses the segment `[a, b]`.
fn chord_point(v: &Point2, a: &Point2, b: &Point2) -> Option<Point2> {
    let fa = det(v, a) + rat(1);
    let fb = det(v, b) + rat(1);
    if fa == fb {
        return None;
    }
    let t = &fa / (&fa - &fb);
    (!t.is_negative() && t <= rat(1)).then(|| a.lerp(b, &t))
}

fn invariant(ok: bool, what: &str) -> Result<(), PlaneError> {
    if ok {
        Ok(())
    } else {
        Err(PlaneError::InvariantFailed(format!("frame: {what}")))
    }
}

/// Frame of `(P, v)` for `v` in the open component of `stell(P) \ P` beyond
/// the edge on `L_v̂`.
pub fn boundary_frame(p: &Polygon2, v: &Point2) -> Result<BoundaryFrame, PlaneError> {
    if !is_self_polar(p) {
        return Err(PlaneError::NotSelfPolar);
    }
    let one = rat(1);
    let violated: Vec<usize> = (0..p.len()).filter(|&i| det(p.vertex(i), v) > one).collect();
    if violated.len() != 1 || (0..p.len()).any(|i| det(p.vertex(i), v) == one) {
        return Err(PlaneError::OutsideStell);
    }
    let iv = violated[0];
    let n = p.len();
    let v_hat = p.vertex(iv).clone();
    let prev = p.vertex(iv + n - 1).clone();
    let next = p.vertex(iv + 1).clone();

    let on_vhat = vertices_on(p, &v_hat);
    invariant(on_vhat.len() == 2, "L_v̂ must meet P in an edge")?;
    let (i0, i1) = (p.index_of(&on_vhat[0]).unwrap(), p.index_of(&on_vhat[1]).unwrap());
    let (u, w) = if (i0 + 1) % n == i1 {
        (on_vhat[0].clone(), on_vhat[1].clone())
    } else {
        (on_vhat[1].clone(), on_vhat[0].clone())
    };

    let u_hat = chord_point(v, &prev, &v_hat).ok_or(PlaneError::OutsideStell)?;
    let w_hat = chord_point(v, &v_hat, &next).ok_or(PlaneError::OutsideStell)?;
    invariant(
        p.vertices().iter().all(|x| x == &v_hat || det(v, x) >= -&one),
        "L_{-v} must cut off v̂ alone",
    )?;

    let mut edge_u = vertices_on(p, &u.neg());
    edge_u.sort();
    let mut expect_u = vec![prev.clone(), v_hat.clone()];
    expect_u.sort();
    invariant(edge_u == expect_u, "P ∩ L_{-u} = [p, v̂]")?;
    let mut edge_w = vertices_on(p, &w.neg());
    edge_w.sort();
    let mut expect_w = vec![v_hat.clone(), next.clone()];
    expect_w.sort();
    invariant(edge_w == expect_w, "P ∩ L_{-w} = [v̂, q]")?;

    let frame = BoundaryFrame {
        v: v.clone(),
        p: prev,
        u_hat,
        v_hat,
        w_hat,
        q: next,
        u,
        w,
    };
    let chain = [
        &frame.w.neg(),
        &frame.p,
        &frame.u_hat,
        &frame.v_hat,
        &frame.w_hat,
        &frame.q,
        &frame.u,
        &frame.w,
    ];
    let keys: Vec<Rational> = chain
        .iter()
        .map(|x| boundary_key(p, x).ok_or_else(|| PlaneError::InvariantFailed("frame point off the boundary".into())))
        .collect::<Result<_, _>>()?;
    let len = rat(n as i64);
    let rel: Vec<Rational> = keys
        .iter()
        .map(|k| {
            let d = k - &keys[0];
            if d.is_negative() {
                d + &len
            } else {
                d
            }
        })
        .collect();
    // `<=` between -w, p, û and between ŵ, q, u; strict elsewhere.
    let strict = [false, false, true, true, false, false, true];
    for (i, s) in strict.iter().enumerate() {
        let ok = if *s { rel[i] < rel[i + 1] } else { rel[i] <= rel[i + 1] };
        invariant(ok, "boundary order")?;
    }
    Ok(frame)
}

/// `μ = λa / (λa + (1 - λ)b)`, requiring `b >= a > 0`.
pub fn mu_of_lambda(lambda: &Rational, a: &Rational, b: &Rational) -> Result<Rational, PlaneError> {
    if !a.is_positive() || b < a {
        return Err(PlaneError::DegenerateFrame(format!(
            "need b >= a > 0, got a = {a}, b = {b}"
        )));
    }
    let num = lambda * a;
    let den = &num + (rat(1) - lambda) * b;
    if den.is_zero() {
        return Err(PlaneError::DegenerateFrame("zero denominator".into()));
    }
    Ok(num / den)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLambda {
    pub polygon: Polygon2,
    pub v_lambda: Point2,
    /// `L_{-v_λ} ∩ L_{-w}`.
    pub w_hat_lambda: Point2,
    pub mu: Rational,
    /// `(1 - μ) v̂ + μ q`.
    pub w_hat_from_mu: Point2,
    pub frame: BoundaryFrame,
}

/// `P_λ = P_{v_λ}` with `v_λ = (1 - λ)u + λ v_1` on the segment from `u` to
/// `v_1 = L_û ∩ L_q`.
pub fn p_lambda(p: &Polygon2, v: &Point2, lambda: &Rational) -> Result<PLambda, PlaneError> {
    if lambda.is_negative() || lambda > &rat(1) {
        return Err(PlaneError::Argument(format!("λ = {lambda} outside [0, 1]")));
    }
    let frame = boundary_frame(p, v)?;
    let v_lambda = frame.v_lambda(lambda)?;
    let w_hat_lambda = line_meet(&v_lambda.neg(), &frame.w.neg())
        .ok_or_else(|| PlaneError::DegenerateFrame("L_{-v_λ} parallel to L_{-w}".into()))?;
    let mu = mu_of_lambda(lambda, &frame.a()?, &frame.b())?;
    let w_hat_from_mu = frame.v_hat.lerp(&frame.q, &mu);
    Ok(PLambda {
        polygon: p_v(p, &v_lambda)?,
        v_lambda,
        w_hat_lambda,
        mu,
        w_hat_from_mu,
        frame,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parent {
    pub p: Polygon2,
    /// `L_{-u} ∩ L_{-w}` for the neighbours `u`, `w` of `v` in `Q`.
    pub v_hat: Point2,
    pub u_hat: Point2,
    pub w_hat: Point2,
}

/// For self-polar `Q` with more than six vertices and a vertex `v`, the
/// self-polar `P = Q_{v̂}` with `Q = P_v`.
pub fn reconstruct_parent(q: &Polygon2, v: &Point2) -> Result<Parent, PlaneError> {
    if !is_self_polar(q) {
        return Err(PlaneError::NotSelfPolar);
    }
    if q.len() <= 6 {
        return Err(PlaneError::NoParent);
    }
    let i = q
        .index_of(v)
        .ok_or_else(|| PlaneError::Argument(format!("{v} is not a vertex")))?;
    let u = q.vertex(i + q.len() - 1);
    let w = q.vertex(i + 1);
    let meet = |a: &Point2, b: &Point2| {
        line_meet(&a.neg(), &b.neg()).ok_or_else(|| PlaneError::InvariantFailed("parallel lines".into()))
    };
    let v_hat = meet(u, w)?;
    let c1 = meet(u, v)?;
    let c2 = meet(v, w)?;
    let (i1, i2) = (
        q.index_of(&c1)
            .ok_or_else(|| PlaneError::InvariantFailed("corner is not a vertex".into()))?,
        q.index_of(&c2)
            .ok_or_else(|| PlaneError::InvariantFailed("corner is not a vertex".into()))?,
    );
    let (u_hat, w_hat) = if (i1 + 1) % q.len() == i2 { (c1, c2) } else { (c2, c1) };
    let p = p_v(q, &v_hat)?;
    if !is_self_polar(&p) {
        return Err(PlaneError::InvariantFailed("parent is not self-polar".into()));
    }
    boundary_frame(&p, v)?;
    if p_v(&p, v)? != *q {
        return Err(PlaneError::InvariantFailed("P_v does not give back Q".into()));
    }
    Ok(Parent { p, v_hat, u_hat, w_hat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{grow_until_equality, hexagon, stell_component};
    use crate::rational::ratio;

    fn hex_point() -> Point2 {
        // Centroid of the component of the hexagon beyond the edge on L_{(1,1)}.
        let h = hexagon();
        let tri = stell_component(&h, &Point2::int(1, 1)).unwrap();
        let s = tri.vertices().iter().fold(Point2::zero(), |acc, x| acc.add(x));
        s.scale(&ratio(1, 3))
    }

    #[test]
    fn hexagon_frame_degeneracies() {
        let f = boundary_frame(&hexagon(), &hex_point()).unwrap();
        assert_eq!(f.v_hat, Point2::int(1, 1));
        assert_eq!(f.q, f.u);
        assert_eq!(f.p, f.w.neg());
    }

    #[test]
    fn mu_endpoints() {
        let (a, b) = (ratio(1, 2), rat(2));
        assert_eq!(mu_of_lambda(&rat(0), &a, &b).unwrap(), rat(0));
        assert_eq!(mu_of_lambda(&rat(1), &a, &b).unwrap(), rat(1));
        assert_eq!(mu_of_lambda(&ratio(1, 3), &a, &a).unwrap(), ratio(1, 3));
        assert!(mu_of_lambda(&ratio(1, 3), &b, &a).is_err());
    }

    #[test]
    fn p_lambda_endpoints_and_mu() {
        let h = hexagon();
        let v = hex_point();
        let zero = p_lambda(&h, &v, &rat(0)).unwrap();
        assert_eq!(zero.polygon, h);
        let mid = p_lambda(&h, &v, &ratio(1, 3)).unwrap();
        assert_eq!(mid.w_hat_lambda, mid.w_hat_from_mu);
        assert!(is_self_polar(&mid.polygon));
        assert!(p_lambda(&h, &v, &rat(2)).is_err());
    }

    #[test]
    fn parent_round_trip() {
        let v = hex_point();
        let q = p_v(&hexagon(), &v).unwrap();
        assert_eq!(q.len(), 10);
        assert!(is_self_polar(&q));
        let parent = reconstruct_parent(&q, &v).unwrap();
        assert_eq!(p_v(&parent.p, &v).unwrap(), q);
        assert!(reconstruct_parent(&hexagon(), &Point2::int(1, 0)).is_err());
    }

    #[test]
    fn grown_octagon_has_parent_for_every_vertex() {
        let cross = Polygon2::from_ints(&[(1, 0), (0, 1), (-1, 0), (0, -1)]).unwrap();
        let g = grow_until_equality(&cross).unwrap().result;
        if g.len() > 6 {
            for v in g.vertices() {
                let parent = reconstruct_parent(&g, v).unwrap();
                assert_eq!(p_v(&parent.p, v).unwrap(), g);
            }
        }
    }
}
