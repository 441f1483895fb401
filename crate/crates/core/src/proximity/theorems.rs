use super::integer::{ip_optima, proximity_exact, ProximityResult};
use super::slice::check_direction;
use super::volume::volume_inequality_check;
use super::ProximityError;
use crate::linalg::{delta_alpha, delta_k, det, IntMatrix};
use crate::polyhedra::{facet_width, HPolyhedron, IntBox};
use crate::rational::{abs, format_int_vector, format_rational, format_vector, rat, ratio, Rational};
use crate::report::{BoundReport, TheoremId};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Extra integer box intersected with every integer search; required for
    /// lattice-freeness of unbounded polyhedra.
    pub search_box: Option<IntBox>,
}

/// `k` when every `n x n` minor of `a` lies in `{0, ±k, ±2k}` and one is
/// nonzero.
pub fn minors_in_two_levels(a: &IntMatrix) -> Option<BigInt> {
    let n = a.ncols();
    let mut levels: Vec<BigInt> = Vec::new();
    for rows in (0..a.nrows()).combinations(n) {
        let d = det(&a.select_rows(&rows)).ok()?.abs();
        if !d.is_zero() && !levels.contains(&d) {
            levels.push(d);
            if levels.len() > 2 {
                return None;
            }
        }
    }
    levels.sort();
    match levels.as_slice() {
        [k] => Some(k.clone()),
        [k, two_k] if *two_k == k * 2 => Some(k.clone()),
        _ => None,
    }
}

fn four_n_plus_two_ninths(n: usize) -> Rational {
    ratio(4 * n as i64 + 2, 9)
}

fn delta(a: &IntMatrix, k: usize) -> Result<Rational, ProximityError> {
    Ok(if k == 0 {
        rat(1)
    } else {
        Rational::from_integer(delta_k(a, k)?)
    })
}

fn need<'a, T: ?Sized>(v: Option<&'a T>, what: &str) -> Result<&'a T, ProximityError> {
    v.ok_or_else(|| ProximityError::Argument(format!("this check needs {what}")))
}

fn need_dim_two(p: &HPolyhedron) -> Result<(), ProximityError> {
    if p.n() < 2 {
        return Err(ProximityError::PreconditionFailed("needs n >= 2".into()));
    }
    Ok(())
}

fn need_two_levels(a: &IntMatrix) -> Result<BigInt, ProximityError> {
    minors_in_two_levels(a)
        .ok_or_else(|| ProximityError::PreconditionFailed("n x n minors are not contained in {0, ±k, ±2k}".into()))
}

/// Full-dimensional, every row facet-defining and no integer point (searched
/// in `opts.search_box` when `P` is unbounded).
fn need_lattice_free(p: &HPolyhedron, opts: &CheckOptions) -> Result<(), ProximityError> {
    if p.dimension()? != Some(p.n()) {
        return Err(ProximityError::PreconditionFailed("P is not full-dimensional".into()));
    }
    if let Some(i) = (0..p.m()).find(|&i| !matches!(p.is_facet_row(i), Ok(true))) {
        return Err(ProximityError::PreconditionFailed(format!(
            "row {i} does not define a facet"
        )));
    }
    let pts = if p.is_bounded()? {
        p.integer_points(opts.search_box.as_ref())?
    } else {
        let b = opts.search_box.as_ref().ok_or_else(|| {
            ProximityError::PreconditionFailed("P is unbounded; lattice-freeness needs a search box".into())
        })?;
        p.integer_points(Some(b))?
    };
    if let Some(z) = pts.first() {
        return Err(ProximityError::PreconditionFailed(format!(
            "P contains the integer point {}",
            format_int_vector(z)
        )));
    }
    Ok(())
}

fn with_proximity(r: BoundReport, res: &ProximityResult) -> BoundReport {
    r.with("x_star", format_vector(&res.x_star.point))
        .with("z_star", format_int_vector(&res.z_star))
        .with("lp_value", format_rational(&res.lp_value))
        .with("ip_value", format_rational(&res.ip_value))
}

/// Runs one theorem check. The two-level proximity check yields two reports
/// (the `max(Δ_{n-1}, Δ_n) - 1` and the `Δ_{n-1}` form); every other check
/// yields one.
pub fn check_theorem(
    p: &HPolyhedron,
    c: Option<&[Rational]>,
    alpha: Option<&[i64]>,
    which: TheoremId,
    opts: &CheckOptions,
) -> Result<Vec<BoundReport>, ProximityError> {
    let n = p.n();
    let a = p.a();
    let sbox = opts.search_box.as_ref();
    match which {
        TheoremId::Thm2 => {
            need_dim_two(p)?;
            let c = need(c, "an objective")?;
            let res = proximity_exact(p, c, sbox)?;
            let d = delta(a, n - 1)?;
            let bound = four_n_plus_two_ninths(n) * &d;
            let r = BoundReport::new(which, "‖x* - z*‖∞ < (4n+2)/9 · Δ_{n-1}", res.dist.clone(), bound, true)
                .with("delta_n_minus_1", format_rational(&d));
            Ok(vec![with_proximity(r, &res)])
        }
        TheoremId::Thm5 => {
            need_dim_two(p)?;
            let c = need(c, "an objective")?;
            let alpha = need(alpha, "a direction")?;
            check_direction(p, alpha)?;
            let opt = ip_optima(p, c, sbox)?;
            let gap = |z: &[i64]| -> Rational {
                abs(&alpha
                    .iter()
                    .zip(&opt.lp.vertex.point)
                    .zip(z)
                    .map(|((&al, x), &zi)| rat(al) * (x - rat(zi)))
                    .sum::<Rational>())
            };
            let z_star = opt.optima.iter().min_by_key(|z| gap(z)).expect("nonempty").clone();
            let d = delta_alpha(a, alpha, &[])?;
            let bound = four_n_plus_two_ninths(n) * &d;
            let r = BoundReport::new(which, "|α.(x* - z*)| < (4n+2)/9 · Δ^α", gap(&z_star), bound, true)
                .with("alpha", format_int_vector(alpha))
                .with("delta_alpha", format_rational(&d))
                .with("x_star", format_vector(&opt.lp.vertex.point))
                .with("z_star", format_int_vector(&z_star));
            Ok(vec![r])
        }
        TheoremId::Thm4 => {
            need_dim_two(p)?;
            need_lattice_free(p, opts)?;
            let (row, w) = facet_width(p)?;
            let d = delta(a, n)?;
            let bound = four_n_plus_two_ninths(n) * &d - rat(1);
            let r = BoundReport::new(which, "facet width < (4n+2)/9 · Δ_n - 1", w, bound, true)
                .with("row", row.to_string())
                .with("direction", format_int_vector(a.row(row)))
                .with("delta_n", format_rational(&d));
            Ok(vec![r])
        }
        TheoremId::Thm7a => {
            let k = need_two_levels(a)?;
            let c = need(c, "an objective")?;
            let res = proximity_exact(p, c, sbox)?;
            let d1 = delta(a, n - 1)?;
            let dn = delta(a, n)?;
            let sharp = BoundReport::new(
                which,
                "‖x* - z*‖∞ <= max(Δ_{n-1}, Δ_n) - 1",
                res.dist.clone(),
                d1.clone().max(dn.clone()) - rat(1),
                false,
            )
            .with("k", k.to_string())
            .with("delta_n_minus_1", format_rational(&d1))
            .with("delta_n", format_rational(&dn));
            let strict = BoundReport::new(which, "‖x* - z*‖∞ < Δ_{n-1}", res.dist.clone(), d1.clone(), true)
                .with("k", k.to_string())
                .with("delta_n_minus_1", format_rational(&d1));
            Ok(vec![with_proximity(sharp, &res), with_proximity(strict, &res)])
        }
        TheoremId::Thm7b => {
            let k = need_two_levels(a)?;
            need_lattice_free(p, opts)?;
            let (row, w) = facet_width(p)?;
            let dn = delta(a, n)?;
            let r = BoundReport::new(which, "facet width <= Δ_n - 2", w, &dn - rat(2), false)
                .with("k", k.to_string())
                .with("row", row.to_string())
                .with("direction", format_int_vector(a.row(row)))
                .with("delta_n", format_rational(&dn));
            Ok(vec![r])
        }
        TheoremId::Volume => {
            let alpha = need(alpha, "a direction")?;
            Ok(vec![volume_inequality_check(p, alpha)?])
        }
        TheoremId::Transfer | TheoremId::PolarArea => Err(ProximityError::Unsupported(format!(
            "{which} is not a polyhedron check"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(rows: &[&[i64]], b: &[i64]) -> HPolyhedron {
        HPolyhedron::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), b.to_vec()).unwrap()
    }

    fn triangle() -> HPolyhedron {
        poly(&[&[1, 2], &[-1, 0], &[0, -1]], &[1, 0, 0])
    }

    #[test]
    fn thm2_on_triangle() {
        let c = [rat(0), rat(1)];
        let r = check_theorem(&triangle(), Some(&c), None, TheoremId::Thm2, &CheckOptions::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].measured, ratio(1, 2));
        assert_eq!(r[0].bound, ratio(20, 9));
        assert!(r[0].holds());
    }

    #[test]
    fn thm4_on_scaled_box() {
        let p = poly(&[&[3, 0], &[-3, 0], &[0, 3], &[0, -3]], &[2, -1, 2, -1]);
        let r = check_theorem(&p, None, None, TheoremId::Thm4, &CheckOptions::default()).unwrap();
        assert_eq!(r[0].measured, rat(1));
        assert_eq!(r[0].bound, rat(9));
        assert!(r[0].holds());
    }

    #[test]
    fn thm4_rejects_integer_points() {
        let p = poly(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[1, 0, 1, 0]);
        let r = check_theorem(&p, None, None, TheoremId::Thm4, &CheckOptions::default());
        assert!(matches!(r, Err(ProximityError::PreconditionFailed(_))));
    }

    #[test]
    fn thm5_on_triangle() {
        let c = [rat(0), rat(1)];
        let r = check_theorem(
            &triangle(),
            Some(&c),
            Some(&[1, 1]),
            TheoremId::Thm5,
            &CheckOptions::default(),
        )
        .unwrap();
        assert_eq!(r[0].measured, ratio(1, 2));
        assert!(r[0].holds());
    }

    #[test]
    fn thm7_on_bimodular_triangle() {
        let c = [rat(0), rat(1)];
        let r = check_theorem(&triangle(), Some(&c), None, TheoremId::Thm7a, &CheckOptions::default()).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.holds()));
        assert_eq!(r[0].bound, rat(1));
    }

    #[test]
    fn two_levels() {
        assert_eq!(minors_in_two_levels(&IntMatrix::identity(3)), Some(BigInt::from(1)));
        let a = IntMatrix::from_rows(&[[1, 2], [-1, 0], [0, -1]]).unwrap();
        assert_eq!(minors_in_two_levels(&a), Some(BigInt::from(1)));
        let a = IntMatrix::from_rows(&[[1, 0], [0, 3]]).unwrap();
        assert_eq!(minors_in_two_levels(&a), Some(BigInt::from(3)));
        let a = IntMatrix::from_rows(&[[1, 0], [0, 1], [1, 3]]).unwrap();
        assert_eq!(minors_in_two_levels(&a), None);
        let a = IntMatrix::from_rows(&[[1, 1], [1, 1]]).unwrap();
        assert_eq!(minors_in_two_levels(&a), None);
    }
}
