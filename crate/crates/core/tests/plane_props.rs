use proptest::prelude::*;
use proxflat::generate::{random_stell_point, rng, symmetric_polygon};
use proxflat::plane::{
    det, grow_until_equality, hexagon, is_self_polar, line_meet, mu_of_lambda, p_lambda, polar2, rot_polygon,
    verify_area_lower_bound, Polygon2,
};
use proxflat::rational::{rat, ratio, Rational};
use std::collections::HashSet;

fn symmetric(seed: u64) -> Polygon2 {
    let mut r = rng(seed);
    let points = 2 + (seed % 4) as usize;
    symmetric_polygon(&mut r, points, 5).expect("polygon")
}

/// Hexagon, grown polygons and their stellar modifications.
fn self_polar(seed: u64) -> Polygon2 {
    let base = match seed % 3 {
        0 => hexagon(),
        _ => grow_until_equality(&symmetric(seed)).expect("grow").result,
    };
    if seed.is_multiple_of(2) {
        return base;
    }
    let mut r = rng(seed ^ 0x5eed);
    match random_stell_point(&mut r, &base) {
        Some((_, v)) => p_lambda(&base, &v, &ratio(1, 2)).map(|pl| pl.polygon).unwrap_or(base),
        None => base,
    }
}

/// Product of elementary shears and a reflection: integer, `|det| = 1`.
fn unimodular(ops: &[(u8, i64)]) -> [[Rational; 2]; 2] {
    let mut m = [[1i64, 0], [0, 1]];
    for &(kind, k) in ops {
        let e = match kind % 3 {
            0 => [[1, k], [0, 1]],
            1 => [[1, 0], [k, 1]],
            _ => [[0, 1], [1, 0]],
        };
        m = [
            [
                m[0][0] * e[0][0] + m[0][1] * e[1][0],
                m[0][0] * e[0][1] + m[0][1] * e[1][1],
            ],
            [
                m[1][0] * e[0][0] + m[1][1] * e[1][0],
                m[1][0] * e[0][1] + m[1][1] * e[1][1],
            ],
        ];
    }
    [[rat(m[0][0]), rat(m[0][1])], [rat(m[1][0]), rat(m[1][1])]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polar_is_an_involution(seed in any::<u64>()) {
        let q = symmetric(seed);
        prop_assert_eq!(polar2(&polar2(&q).unwrap()).unwrap(), q);
    }

    #[test]
    fn self_polarity_survives_unimodular_maps(seed in any::<u64>(), ops in prop::collection::vec((any::<u8>(), -2i64..=2), 0..5)) {
        let g = unimodular(&ops);
        for p in [self_polar(seed), symmetric(seed)] {
            let image = p.linear_image(g.clone()).unwrap();
            prop_assert_eq!(is_self_polar(&image), is_self_polar(&p));
        }
    }

    #[test]
    fn self_polar_polygons_have_even_count_at_least_six(seed in any::<u64>()) {
        let p = self_polar(seed);
        prop_assert!(is_self_polar(&p));
        prop_assert!(p.len() >= 6 && p.len().is_multiple_of(2), "{} vertices", p.len());
    }

    #[test]
    fn edges_and_vertices_correspond(seed in any::<u64>()) {
        let p = self_polar(seed);
        let mut seen = HashSet::new();
        for (u, v) in p.edges() {
            let w = line_meet(u, v).expect("edge endpoints are independent");
            prop_assert!(p.has_vertex(&w));
            prop_assert!(seen.insert(w.clone()));
            // The inverse: P ∩ L_{-w} is exactly the edge [u, v].
            let on_line: Vec<_> = p.vertices().iter().filter(|x| det(&w.neg(), x) == rat(1)).cloned().collect();
            prop_assert_eq!(on_line.len(), 2);
            prop_assert!(on_line.contains(u) && on_line.contains(v));
        }
        prop_assert_eq!(seen.len(), p.len());
    }

    #[test]
    fn grow_keeps_nesting_chain(seed in any::<u64>()) {
        let q = symmetric(seed);
        let trace = grow_until_equality(&q).unwrap();
        let contains = |outer: &Polygon2, inner: &Polygon2| inner.vertices().iter().all(|x| outer.contains(x));
        let polar_q = polar2(&q).unwrap();
        let mut prev = q.clone();
        for step in &trace.steps {
            let cur = &step.polygon;
            prop_assert!(contains(&rot_polygon(cur), &rot_polygon(&prev)));
            prop_assert!(contains(&polar2(cur).unwrap(), &rot_polygon(cur)));
            prop_assert!(contains(&polar_q, &polar2(cur).unwrap()));
            prev = cur.clone();
        }
        prop_assert!(is_self_polar(&trace.result));
    }

    #[test]
    fn mu_is_convex(a in 1i64..20, extra in 0i64..20, l in prop::collection::btree_set(0i64..=64, 3)) {
        let (a, b) = (rat(a), rat(a + 1 + extra));
        let l: Vec<Rational> = l.into_iter().map(|v| ratio(v, 64)).collect();
        let mu: Vec<Rational> = l.iter().map(|x| mu_of_lambda(x, &a, &b).unwrap()).collect();
        let s1 = (&mu[1] - &mu[0]) / (&l[1] - &l[0]);
        let s2 = (&mu[2] - &mu[1]) / (&l[2] - &l[1]);
        prop_assert!(s2 >= s1);
    }

    #[test]
    fn area_proofs_replay(seed in any::<u64>()) {
        let q = symmetric(seed);
        let proof = verify_area_lower_bound(&q).unwrap();
        prop_assert!(proof.replay().is_ok());
        prop_assert!(proof.holds());
    }
}
