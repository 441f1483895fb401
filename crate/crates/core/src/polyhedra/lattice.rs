use super::{LinearSystem, PolyhedronError};
use crate::rational::{ceil_i64, floor_i64};
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Axis-aligned integer box `lo <= z <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl IntBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self, PolyhedronError> {
        if lo.len() != hi.len() {
            return Err(PolyhedronError::Shape("box bounds differ in length".into()));
        }
        Ok(Self { lo, hi })
    }

    pub fn cube(n: usize, radius: i64) -> Self {
        Self {
            lo: vec![-radius; n],
            hi: vec![radius; n],
        }
    }

    /// `center +- radius` rounded outward.
    pub fn around(center: &[crate::Rational], radius: &crate::Rational) -> Option<Self> {
        let lo = center.iter().map(|c| floor_i64(&(c - radius))).collect::<Option<_>>()?;
        let hi = center.iter().map(|c| ceil_i64(&(c + radius))).collect::<Option<_>>()?;
        Some(Self { lo, hi })
    }

    pub fn intersect(&self, other: &IntBox) -> IntBox {
        IntBox {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| *a.max(b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| *a.min(b)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }
}

type Row = (Vec<i128>, i128);

const FM_ROW_CAP: usize = 4000;

fn normalize(mut row: Row) -> Row {
    let g = row.0.iter().fold(0i128, |acc, v| acc.gcd(v));
    if g > 1 {
        for v in &mut row.0 {
            *v /= g;
        }
        row.1 = Integer::div_floor(&row.1, &g);
    }
    row
}

/// Eliminates coordinate `k` (the last live one). Rows are valid for integer
/// points, which lets right-hand sides round down after dividing by the gcd.
fn eliminate(rows: &[Row], k: usize) -> Option<Vec<Row>> {
    let mut out: Vec<Row> = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for r in rows {
        match r.0[k].signum() {
            1 => pos.push(r),
            -1 => neg.push(r),
            _ => out.push(r.clone()),
        }
    }
    for p in &pos {
        for q in &neg {
            let (cp, cq) = (p.0[k], -q.0[k]);
            let mut coef = Vec::with_capacity(p.0.len());
            for (x, y) in p.0.iter().zip(&q.0) {
                coef.push(cq.checked_mul(*x)?.checked_add(cp.checked_mul(*y)?)?);
            }
            let rhs = cq.checked_mul(p.1)?.checked_add(cp.checked_mul(q.1)?)?;
            out.push(normalize((coef, rhs)));
            if out.len() > FM_ROW_CAP {
                return None;
            }
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

/// Lattice points of the system, lexicographically sorted. Without a box the
/// set must be bounded, and its vertex bounding box is used.
pub fn integer_points(sys: &LinearSystem, search: Option<&IntBox>) -> Result<Vec<Vec<i64>>, PolyhedronError> {
    let n = sys.dim();
    let a = sys.matrix();
    let mut rows: Vec<Row> = Vec::new();
    for i in 0..sys.nrows() {
        let coef: Vec<i128> = a.row(i).iter().map(|&v| v as i128).collect();
        let r = &sys.rhs()[i];
        let fl = r
            .floor()
            .to_integer()
            .to_i128()
            .ok_or(PolyhedronError::Shape("right-hand side out of range".into()))?;
        if sys.is_equality(i) {
            if !r.is_integer() {
                return Ok(Vec::new());
            }
            rows.push((coef.iter().map(|v| -v).collect(), -fl));
        }
        rows.push((coef, fl));
    }

    let bbox = match search {
        Some(b) => {
            if b.dim() != n {
                return Err(PolyhedronError::Shape(format!(
                    "box of dimension {} for {n} variables",
                    b.dim()
                )));
            }
            b.clone()
        }
        None => {
            if !sys.is_bounded()? {
                return Err(PolyhedronError::NeedsBox);
            }
            let verts = sys.vertices()?;
            if verts.is_empty() {
                return Ok(Vec::new());
            }
            let mut lo = vec![i64::MAX; n];
            let mut hi = vec![i64::MIN; n];
            for v in &verts {
                for j in 0..n {
                    let f = floor_i64(&v.point[j]).ok_or(PolyhedronError::NeedsBox)?;
                    let c = ceil_i64(&v.point[j]).ok_or(PolyhedronError::NeedsBox)?;
                    lo[j] = lo[j].min(f);
                    hi[j] = hi[j].max(c);
                }
            }
            IntBox { lo, hi }
        }
    };
    if bbox.is_empty() {
        return Ok(Vec::new());
    }

    // levels[k] constrains coordinates 0..=k.
    let mut levels: Vec<Option<Vec<Row>>> = vec![None; n];
    levels[n - 1] = Some(rows);
    for k in (0..n - 1).rev() {
        levels[k] = levels[k + 1].as_ref().and_then(|r| eliminate(r, k + 1));
    }

    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    descend(&levels, &bbox, &mut prefix, &mut out);
    Ok(out)
}

fn descend(levels: &[Option<Vec<Row>>], bbox: &IntBox, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    let k = prefix.len();
    if k == bbox.dim() {
        out.push(prefix.clone());
        return;
    }
    let (mut lo, mut hi) = (bbox.lo[k] as i128, bbox.hi[k] as i128);
    if let Some(rows) = &levels[k] {
        for (coef, rhs) in rows {
            let rest = rhs
                - coef[..k]
                    .iter()
                    .zip(prefix.iter())
                    .map(|(c, &x)| c * x as i128)
                    .sum::<i128>();
            let c = coef[k];
            if c > 0 {
                hi = hi.min(Integer::div_floor(&rest, &c));
            } else if c < 0 {
                lo = lo.max(Integer::div_ceil(&rest, &c));
            } else if rest < 0 {
                return;
            }
            if lo > hi {
                return;
            }
        }
    }
    for x in lo..=hi {
        prefix.push(x as i64);
        descend(levels, bbox, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    #[test]
    fn triangle_points() {
        let a = IntMatrix::from_rows(&[[1, 2], [-1, 0], [0, -1]]).unwrap();
        let s = LinearSystem::from_int(a, &[1, 0, 0]).unwrap();
        assert_eq!(integer_points(&s, None).unwrap(), vec![vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn boxed_unbounded_cone() {
        let a = IntMatrix::from_rows(&[[-1, 0], [0, -1]]).unwrap();
        let s = LinearSystem::from_int(a, &[0, 0]).unwrap();
        let b = IntBox::cube(2, 1);
        assert_eq!(integer_points(&s, Some(&b)).unwrap().len(), 4);
    }
}
