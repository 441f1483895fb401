//! Exact planar polygons, polarity under the 90° rotation, and the
//! add-and-cut machinery behind the polar area lower bound.

mod area;
mod frame;
mod modify;

pub use area::{verify_area_lower_bound, AreaProof, DescentStep};
pub use frame::{boundary_frame, mu_of_lambda, p_lambda, reconstruct_parent, BoundaryFrame, PLambda, Parent};
pub use modify::{grow_until_equality, p_v, stell_component, GrowStep, GrowTrace};

use crate::rational::{format_rational, parse_rational, rat, Rational};
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlaneError {
    #[error("points are not in convex position")]
    NotConvex,
    #[error("polygon has zero area")]
    Degenerate,
    #[error("origin is not in the interior, so the polar is unbounded")]
    PolarUnbounded,
    #[error("polygon is not centrally symmetric")]
    NotSymmetric,
    #[error("polygon does not satisfy rot P = P°")]
    NotSelfPolar,
    #[error("point is not in the interior of a component of stell(P) \\ P")]
    OutsideStell,
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),
    #[error("a six-vertex polygon has no parent")]
    NoParent,
    #[error("hypothesis rot Q ⊆ Q° fails")]
    HypothesisViolated,
    #[error("{0}")]
    Argument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant failed: {0}")]
    InvariantFailed(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Self::new(rat(x), rat(y))
    }

    pub fn zero() -> Self {
        Self::int(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, s: &Rational) -> Point2 {
        Point2::new(&self.x * s, &self.y * s)
    }

    pub fn neg(&self) -> Point2 {
        Point2::new(-&self.x, -&self.y)
    }

    pub fn dot(&self, o: &Point2) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    /// `(1 - t) self + t other`.
    pub fn lerp(&self, other: &Point2, t: &Rational) -> Point2 {
        self.add(&other.sub(self).scale(t))
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

pub fn det(a: &Point2, b: &Point2) -> Rational {
    &a.x * &b.y - &a.y * &b.x
}

/// Counterclockwise quarter turn: `(x1, x2) -> (-x2, x1)`, so that
/// `rot(v) . x = det(v, x)`.
pub fn rot90(p: &Point2) -> Point2 {
    Point2::new(-&p.y, p.x.clone())
}

/// `L_a ∩ L_b`, `None` when the lines are parallel.
pub fn line_meet(a: &Point2, b: &Point2) -> Option<Point2> {
    let d = det(a, b);
    if d.is_zero() {
        return None;
    }
    Some(b.sub(a).scale(&d.recip()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineKind {
    /// `det(v, x) = 1`.
    Line,
    /// `det(v, x) <= 1`.
    HalfSpace,
    /// `|det(v, x)| <= 1`.
    Strip,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineHalfStrip {
    pub v: Point2,
    pub kind: LineKind,
}

impl LineHalfStrip {
    pub fn new(v: Point2, kind: LineKind) -> Self {
        Self { v, kind }
    }

    pub fn contains(&self, x: &Point2) -> bool {
        let d = det(&self.v, x);
        match self.kind {
            LineKind::Line => d == rat(1),
            LineKind::HalfSpace => d <= rat(1),
            LineKind::Strip => d.abs() <= rat(1),
        }
    }
}

/// Convex hull, counterclockwise, without collinear boundary points.
fn hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: &Point2, a: &Point2, b: &Point2| det(&a.sub(o), &b.sub(o));
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Convex polygon with exact vertices in strict counterclockwise order,
/// starting from the lexicographically smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon2 {
    vertices: Vec<Point2>,
}

impl Polygon2 {
    /// Points must be in convex position; repeated and collinear boundary
    /// points are merged, and the order of the input does not matter.
    pub fn new(points: &[Point2]) -> Result<Self, PlaneError> {
        let h = Self::hull(points)?;
        if points.iter().any(|p| h.contains_strictly(p)) {
            return Err(PlaneError::NotConvex);
        }
        Ok(h)
    }

    /// Convex hull of arbitrary points.
    pub fn hull(points: &[Point2]) -> Result<Self, PlaneError> {
        let h = hull(points);
        if h.len() < 3 {
            return Err(PlaneError::Degenerate);
        }
        Ok(Self { vertices: h })
    }

    pub fn from_ints(points: &[(i64, i64)]) -> Result<Self, PlaneError> {
        Self::new(&points.iter().map(|&(x, y)| Point2::int(x, y)).collect::<Vec<_>>())
    }

    /// `conv(±points)`.
    pub fn symmetric_hull(points: &[Point2]) -> Result<Self, PlaneError> {
        let all: Vec<Point2> = points.iter().flat_map(|p| [p.clone(), p.neg()]).collect();
        Self::hull(&all)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Point2 {
        &self.vertices[i % self.len()]
    }

    pub fn index_of(&self, p: &Point2) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    pub fn has_vertex(&self, p: &Point2) -> bool {
        self.index_of(p).is_some()
    }

    /// Edges `(v_i, v_{i+1})` in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (&Point2, &Point2)> {
        (0..self.len()).map(move |i| (self.vertex(i), self.vertex(i + 1)))
    }

    pub fn contains(&self, p: &Point2) -> bool {
        self.edges().all(|(a, b)| !det(&b.sub(a), &p.sub(a)).is_negative())
    }

    pub fn contains_strictly(&self, p: &Point2) -> bool {
        self.edges().all(|(a, b)| det(&b.sub(a), &p.sub(a)).is_positive())
    }

    pub fn on_boundary(&self, p: &Point2) -> bool {
        self.contains(p) && !self.contains_strictly(p)
    }

    pub fn is_centrally_symmetric(&self) -> bool {
        let n = self.len();
        n.is_multiple_of(2) && (0..n).all(|k| self.vertex(k + n / 2) == &self.vertex(k).neg())
    }

    pub fn contains_origin_interior(&self) -> bool {
        self.edges().all(|(a, b)| det(a, b).is_positive())
    }

    pub fn map(&self, f: impl Fn(&Point2) -> Point2) -> Polygon2 {
        Polygon2::hull(&self.vertices.iter().map(f).collect::<Vec<_>>())
            .expect("linear images of polygons under invertible maps are polygons")
    }

    pub fn scale(&self, s: &Rational) -> Polygon2 {
        self.map(|p| p.scale(s))
    }

    /// Image under the integer-free linear map with rows `m[0]`, `m[1]`.
    pub fn linear_image(&self, m: [[Rational; 2]; 2]) -> Result<Polygon2, PlaneError> {
        let d = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if d.is_zero() {
            return Err(PlaneError::Degenerate);
        }
        Ok(self.map(|p| Point2::new(&m[0][0] * &p.x + &m[0][1] * &p.y, &m[1][0] * &p.x + &m[1][1] * &p.y)))
    }

    /// Cuts with `det(v, x) <= 1`.
    fn clip_halfspace(points: &[Point2], v: &Point2) -> Vec<Point2> {
        let one = rat(1);
        let f = |p: &Point2| det(v, p) - &one;
        let mut out = Vec::new();
        for i in 0..points.len() {
            let a = &points[i];
            let b = &points[(i + 1) % points.len()];
            let (fa, fb) = (f(a), f(b));
            if !fa.is_positive() {
                out.push(a.clone());
            }
            if (fa.is_positive() && fb.is_negative()) || (fa.is_negative() && fb.is_positive()) {
                let t = &fa / (&fa - &fb);
                out.push(a.lerp(b, &t));
            }
        }
        out
    }

    /// Intersection with the strip `S_v`.
    pub fn clip_strip(&self, v: &Point2) -> Result<Polygon2, PlaneError> {
        if v.is_zero() {
            return Ok(self.clone());
        }
        let once = Self::clip_halfspace(&self.vertices, v);
        let twice = Self::clip_halfspace(&once, &v.neg());
        Polygon2::hull(&twice)
    }
}

impl fmt::Display for Polygon2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `rot Q`.
pub fn rot_polygon(q: &Polygon2) -> Polygon2 {
    q.map(rot90)
}

/// `Q° = {x : y.x <= 1 for all y in Q}`: one vertex per edge of `Q`.
pub fn polar2(q: &Polygon2) -> Result<Polygon2, PlaneError> {
    if !q.contains_origin_interior() {
        return Err(PlaneError::PolarUnbounded);
    }
    let verts: Vec<Point2> = q
        .edges()
        .map(|(a, b)| {
            let d = det(a, b).recip();
            Point2::new((&b.y - &a.y) * &d, (&a.x - &b.x) * &d)
        })
        .collect();
    Polygon2::hull(&verts)
}

/// `rot Q ⊆ Q°`, tested as `|det(u, v)| <= 1` over all vertex pairs.
pub fn check_rot_subset_polar(q: &Polygon2) -> bool {
    let one = rat(1);
    let v = q.vertices();
    (0..v.len()).all(|i| (i + 1..v.len()).all(|j| det(&v[i], &v[j]).abs() <= one))
}

/// `rot P = P°` as exact vertex sets.
pub fn is_self_polar(p: &Polygon2) -> bool {
    polar2(p).is_ok_and(|polar| polar == rot_polygon(p))
}

/// Exact area by the shoelace formula.
pub fn area2(p: &Polygon2) -> Rational {
    p.edges().map(|(a, b)| det(a, b)).sum::<Rational>() / rat(2)
}

/// The hexagon `±{(1,0), (1,1), (0,1)}`.
pub fn hexagon() -> Polygon2 {
    Polygon2::from_ints(&[(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]).expect("hexagon")
}

/// One vertex per line, written `x y` with rational coordinates such as `1/2 -3`.
pub fn parse_polygon(text: &str) -> Result<Polygon2, PlaneError> {
    let mut pts = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(PlaneError::Parse(format!("line {}: expected two coordinates", no + 1)));
        }
        let coord = |s: &str| parse_rational(s).map_err(|e| PlaneError::Parse(format!("line {}: {}", no + 1, e.0)));
        pts.push(Point2::new(coord(fields[0])?, coord(fields[1])?));
    }
    Polygon2::new(&pts)
}

pub fn format_polygon(p: &Polygon2) -> String {
    p.vertices()
        .iter()
        .map(|v| format!("{} {}\n", format_rational(&v.x), format_rational(&v.y)))
        .collect()
}
