mod common;

use common::{polyhedron, system};
use proptest::prelude::*;
use proxflat::polyhedra::{spindle_at, spindle_walk, IntBox};
use proxflat::rational::{rat, ratio, Rational};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_matches_vertex_oracle((rows, b) in system(4), c in prop::collection::vec(-4i64..=4, 3)) {
        let Some(p) = polyhedron(&rows, &b) else { return Ok(()) };
        prop_assume!(matches!(p.is_bounded(), Ok(true)));
        let verts = p.vertices().unwrap();
        prop_assume!(!verts.is_empty());
        let c: Vec<Rational> = c[..p.n()].iter().map(|&v| rat(v)).collect();
        let best = verts
            .iter()
            .map(|v| c.iter().zip(&v.point).map(|(x, y)| x * y).sum::<Rational>())
            .max()
            .unwrap();
        prop_assert_eq!(p.lp_max(&c).unwrap().value, best);
    }

    #[test]
    fn integer_points_match_membership((rows, b) in system(4)) {
        let Some(p) = polyhedron(&rows, &b) else { return Ok(()) };
        let n = p.n();
        let bx = IntBox::cube(n, 3);
        let pts = p.integer_points(Some(&bx)).unwrap();
        let mut expected = Vec::new();
        let mut z = vec![-3i64; n];
        loop {
            if p.contains_int(&z) {
                expected.push(z.clone());
            }
            let Some(k) = (0..n).rev().find(|&k| z[k] < 3) else { break };
            z[k] += 1;
            z[k + 1..].iter_mut().for_each(|v| *v = -3);
        }
        let mut got = pts.clone();
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn spindles_are_symmetric_and_monotone(
        (rows, b) in system(4),
        pick in 0usize..16,
        samples in prop::collection::vec(prop::collection::vec(-8i64..=8, 3), 8),
    ) {
        let Some(p) = polyhedron(&rows, &b) else { return Ok(()) };
        prop_assume!(matches!(p.is_bounded(), Ok(true)));
        let verts = p.vertices().unwrap();
        prop_assume!(!verts.is_empty());
        let x = &verts[pick % verts.len()].point;
        let sp = spindle_at(p.a(), x).unwrap();
        prop_assert!(sp.contains(x));
        prop_assert!(sp.contains(&vec![rat(0); p.n()]));
        for s in &samples {
            let y: Vec<Rational> = x.iter().zip(s).map(|(xi, &si)| xi * ratio(si + 8, 16)).collect();
            let mirror: Vec<Rational> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            prop_assert_eq!(sp.contains(&y), sp.contains(&mirror));
        }
        for y in sp.system().vertices().unwrap() {
            let inner = spindle_at(p.a(), &y.point).unwrap();
            for w in inner.system().vertices().unwrap() {
                prop_assert!(sp.contains(&w.point));
            }
        }
    }

    #[test]
    fn walk_faces_have_requested_dimensions((rows, b) in system(4), pick in 0usize..16) {
        let Some(p) = polyhedron(&rows, &b) else { return Ok(()) };
        prop_assume!(matches!(p.is_bounded(), Ok(true)));
        let verts = p.vertices().unwrap();
        prop_assume!(!verts.is_empty());
        let x = &verts[pick % verts.len()].point;
        let k = spindle_at(p.a(), x).unwrap().dimension();
        for d in 0..=k {
            let w = spindle_walk(p.a(), x, d).unwrap();
            prop_assert_eq!(w.apex_face.dim, d);
            prop_assert_eq!(w.origin_face.dim, k - d);
        }
    }
}
