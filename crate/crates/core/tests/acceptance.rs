//! Acceptance suite: ten criteria, each printed as one PASS/FAIL line.
//! Runs without the libtest harness so the lines always reach the output.

use num_bigint::BigInt;
use num_traits::Zero;
use proxflat::generate::{
    bimodular_origin_only, lattice_free, lattice_free_bimodular, random_ilp, random_stell_point, rng,
    symmetric_polygon, IlpInstance,
};
use proxflat::hilbert::{complete_radius, kappa_tilde, kappa_vertex};
use proxflat::linalg::{delta_alpha, det, IntMatrix};
use proxflat::plane::{area2, grow_until_equality, hexagon, is_self_polar, p_lambda, polar2, verify_area_lower_bound};
use proxflat::polyhedra::HPolyhedron;
use proxflat::proximity::{
    check_theorem, prox_value, reduce_unique_ip, slice_transform, spindle_certificate, split_dim,
    volume_inequality_check, CheckOptions, ProxQuery, ProximityError, SliceFamily,
};
use proxflat::rational::{rat, ratio, Rational};
use proxflat::report::TheoremId;
use rand::Rng;
use std::time::{Duration, Instant};

struct Outcome {
    checked: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.checked += 1;
        self.failures.push(what);
    }
}

fn report(id: usize, name: &str, out: &Outcome, elapsed: Duration, limit: Option<Duration>) -> bool {
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let ok = out.failures.is_empty() && in_time;
    let limit_note = limit.map_or(String::new(), |l| format!(" (limit {} s)", l.as_secs()));
    println!(
        "criterion {id:>2} {}: {name}: {} checks, {} failures, {:.2} s{limit_note}",
        if ok { "PASS" } else { "FAIL" },
        out.checked,
        out.failures.len(),
        elapsed.as_secs_f64(),
    );
    for f in out.failures.iter().take(5) {
        println!("    {f}");
    }
    if !in_time {
        println!("    runtime limit exceeded");
    }
    ok
}

fn directions(inst: &IlpInstance) -> Vec<Vec<i64>> {
    let n = inst.p.n();
    let mut out: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let c: Vec<i64> = inst.c.iter().map(|v| v.to_integer().try_into().unwrap()).collect();
    if !out.contains(&c) {
        out.push(c);
    }
    out
}

/// Corpus instance translated so that its reduced form has the origin as its
/// only lattice point, and the plain translate `P - z*`.
struct Centred {
    reduced: HPolyhedron,
    shifted: HPolyhedron,
}

fn centre(inst: &IlpInstance) -> Result<Centred, ProximityError> {
    let red = reduce_unique_ip(&inst.p, &inst.c, None)?;
    Ok(Centred {
        reduced: red.p_bar.translate(&red.z_star)?,
        shifted: inst.p.translate(&red.z_star)?,
    })
}

fn corpus() -> Vec<IlpInstance> {
    let mut r = rng(20_240_501);
    (0..500)
        .map(|k| {
            let n = 2 + k % 2;
            let m = r.gen_range(n + 1..=8);
            random_ilp(&mut r, n, m, 5).expect("corpus instance")
        })
        .collect()
}

fn criterion_1() -> bool {
    let t = Instant::now();
    let mut out = Outcome::new();
    let h = hexagon();
    out.check(is_self_polar(&h), || "hexagon is not self-polar".into());
    out.check(area2(&h) == rat(3), || format!("hexagon area {}", area2(&h)));
    report(1, "hexagon exactness", &out, t.elapsed(), Some(Duration::from_secs(1)))
}

fn criterion_2() -> bool {
    let t = Instant::now();
    let mut out = Outcome::new();
    let mut r = rng(2);
    let mut count = 0;
    while count < 200 {
        let pts = r.gen_range(2..=6);
        let q = symmetric_polygon(&mut r, pts, 6).expect("polygon");
        count += 1;
        match verify_area_lower_bound(&q) {
            Ok(proof) => {
                out.check(proof.holds(), || format!("{q}: {:?}", proof.failures));
                out.check(proof.replay().is_ok(), || format!("{q}: replay fails"));
                let strict = proof.descent.iter().all(|s| s.next().len() < s.polygon.len());
                out.check(strict, || format!("{q}: vertex count did not drop"));
                out.check(q.len() <= 12, || format!("{q}: more than 12 vertices"));
            }
            Err(e) => out.fail(format!("{q}: {e}")),
        }
    }
    report(
        2,
        "polar area lower bound",
        &out,
        t.elapsed(),
        Some(Duration::from_secs(60)),
    )
}

fn criterion_3() -> bool {
    let t = Instant::now();
    let mut out = Outcome::new();
    let mut r = rng(3);
    let mut bases = vec![hexagon()];
    for _ in 0..20 {
        let q = symmetric_polygon(&mut r, 3, 5).expect("polygon");
        if let Ok(g) = grow_until_equality(&q) {
            bases.push(g.result);
        }
    }
    for k in 0..120 {
        let p = &bases[k % bases.len()];
        let Some((_, v)) = random_stell_point(&mut r, p) else {
            out.fail(format!("{p}: no stellar component"));
            continue;
        };
        let lambda = ratio(r.gen_range(1..=15), 16);
        match p_lambda(p, &v, &lambda) {
            Ok(pl) => out.check(pl.w_hat_lambda == pl.w_hat_from_mu, || {
                format!(
                    "{p}, v = {v}, λ = {lambda}: {} vs {}",
                    pl.w_hat_lambda, pl.w_hat_from_mu
                )
            }),
            Err(e) => out.fail(format!("{p}, v = {v}: {e}")),
        }
    }
    report(3, "mu formula", &out, t.elapsed(), Some(Duration::from_secs(10)))
}

fn criterion_4(corpus: &[IlpInstance], elapsed_corpus: Duration) -> bool {
    let t = Instant::now();
    let mut out = Outcome::new();
    let opts = CheckOptions::default();
    for inst in corpus {
        match check_theorem(&inst.p, Some(&inst.c), None, TheoremId::Thm2, &opts) {
            Ok(rs) => {
                for r in rs {
                    out.check(r.holds(), || r.to_string());
                }
            }
            Err(e) => out.fail(format!("{e}")),
        }
    }
    let limit = Some(Duration::from_secs(300));
    report(4, "infinity-norm proximity", &out, t.elapsed() + elapsed_corpus, limit)
}

fn criterion_5(corpus: &[IlpInstance], centred: &[Result<Centred, ProximityError>]) -> bool {
    let t = Instant::now();
    let mut out = Outcome::new();
    for (inst, c) in corpus.iter().zip(centred) {
        let c = match c {
            Ok(c) => c,
            Err(e) => {
                out.fail(format!("reduction: {e}"));
                continue;
            }
        };
        let p = &c.reduced;
        let n = p.n();
        let only_origin = p.integer_points(None).map(|pts| pts == [vec![0; n]]);
        out.check(matches!(only_origin, Ok(true)), || {
            "reduced instance has other lattice points".into()
        });
        let fam = match SliceFamily::new(p) {
            Ok(f) => f,
            Err(e) => {
                out.fail(format!("slices: {e}"));
                continue;
            }
        };
        for alpha in directions(inst) {
            for d in 1..=n {
                let limit = if d == 3 { ratio(4, 3) } else { rat(1) };
                match fam.prox_d(&alpha, d) {
                    Ok(v) => out.check(v.value < limit, || format!("prox_{d} = {} for α = {alpha:?}", v.value)),
                    Err(ProximityError::NoSliceOfDimension(_) | ProximityError::DegenerateDirection) => {}
                    Err(e) => out.fail(format!("prox_{d}: {e}")),
                }
            }
            if p.dimension().ok().flatten() == Some(n) {
                match volume_inequality_check(p, &alpha) {
                    Ok(r) => out.check(r.holds(), || r.to_string()),
                    Err(ProximityError::DegenerateDirection) => {}
                    Err(e) => out.fail(format!("volume: {e}")),
                }
            }
        }
    }
    report(5, "low-dimension prox lemmas", &out, t.elapsed(), None)
}

fn criterion_6(corpus: &[IlpInstance], centred: &[Result<Centred, ProximityError>]) -> bool {
    let t = Instant::now();
    let mut out = Outcome::new();
    for (inst, c) in corpus.iter().zip(centred) {
        let Ok(c) = c else { continue };
        let p = &c.shifted;
        let fam = SliceFamily::new(p).expect("origin lies in the translate");
        for alpha in directions(inst) {
            for s in &fam.slices {
                let original = ProxQuery::new(p.clone(), alpha.clone(), s.index.clone()).and_then(|q| prox_value(&q));
                let tr = match slice_transform(p, &alpha, &s.index) {
                    Ok(tr) => tr,
                    Err(e) => {
                        out.fail(format!("transform {:?}: {e}", s.index));
                        continue;
                    }
                };
                let delta_ok = if tr.alpha_hat.iter().all(|&v| v == 0) {
                    delta_alpha(p.a(), &alpha, &s.index)
                        .map(|d| d.is_zero())
                        .unwrap_or(false)
                } else {
                    delta_alpha(tr.p_hat.a(), &tr.alpha_hat, &[]).ok() == delta_alpha(p.a(), &alpha, &s.index).ok()
                };
                out.check(delta_ok, || format!("Δ mismatch on slice {:?}", s.index));
                let image = ProxQuery::new(tr.p_hat.clone(), tr.alpha_hat.clone(), vec![]).and_then(|q| prox_value(&q));
                match (original, image) {
                    (Ok(a), Ok(b)) => out.check(a.value == b.value, || {
                        format!("slice {:?}, α = {alpha:?}: {} vs {}", s.index, a.value, b.value)
                    }),
                    (Err(ProximityError::DegenerateDirection), Err(ProximityError::Argument(_))) => {
                        out.check(true, String::new)
                    }
                    (Err(ProximityError::Polyhedron(a)), Err(ProximityError::Polyhedron(b))) => out
                        .check(std::mem::discriminant(&a) == std::mem::discriminant(&b), || {
                            format!("slice {:?}: {a} vs {b}", s.index)
                        }),
                    (a, b) => out.fail(format!("slice {:?}, α = {alpha:?}: {a:?} vs {b:?}", s.index)),
                }
            }
        }
    }
    report(6, "lifting exactness", &out, t.elapsed(), None)
}

fn criterion_7(corpus: &[IlpInstance], centred: &[Result<Centred, ProximityError>]) -> bool {
    let t = Instant::now();
    let mut out = Outcome::new();
    for d in 2..=50 {
        match split_dim(d) {
            Ok((a, b)) => out.check(3 * a + 2 * b == d, || format!("split of {d}: ({a}, {b})")),
            Err(e) => out.fail(format!("split of {d}: {e}")),
        }
    }
    for (inst, c) in corpus.iter().zip(centred) {
        let Ok(c) = c else { continue };
        for alpha in directions(inst) {
            match spindle_certificate(&c.reduced, &alpha) {
                Ok(cert) => {
                    let telescopes = cert.steps.iter().map(|s| s.value.clone()).sum::<Rational>() == cert.total;
                    out.check(telescopes, || format!("α = {alpha:?}: chain does not telescope"));
                    out.check(cert.replay().is_ok(), || format!("α = {alpha:?}: {:?}", cert.replay()));
                }
                Err(e) => out.fail(format!("α = {alpha:?}: {e}")),
            }
        }
    }
    report(7, "certificate soundness", &out, t.elapsed(), None)
}

fn criterion_8() -> bool {
    let t = Instant::now();
    let mut out = Outcome::new();
    let mut r = rng(8);
    let opts = CheckOptions::default();
    for k in 0..100 {
        let n = 2 + k % 2;
        let m = r.gen_range(n + 1..=6);
        let p = lattice_free(&mut r, n, m, 5).expect("lattice-free instance");
        match check_theorem(&p, None, None, TheoremId::Thm4, &opts) {
            Ok(rs) => rs.iter().for_each(|x| out.check(x.holds(), || x.to_string())),
            Err(e) => out.fail(format!("{e}")),
        }
    }
    report(8, "facet width", &out, t.elapsed(), Some(Duration::from_secs(120)))
}

fn criterion_9() -> bool {
    let t = Instant::now();
    let mut out = Outcome::new();
    let mut r = rng(9);
    let opts = CheckOptions::default();
    for k in 0..100 {
        let n = 2 + k % 2;
        let m = r.gen_range(n + 1..=6);
        let inst = bimodular_origin_only(&mut r, n, m).expect("bimodular instance");
        let a = inst.p.a();
        let radius = complete_radius(a).expect("radius");
        for alpha in directions(&inst) {
            match kappa_vertex(&inst.p, &alpha) {
                Ok(kv) => out.check(kv.value <= ratio(1, 2), || {
                    format!("κ = {} for α = {alpha:?}", kv.value)
                }),
                Err(e) => out.fail(format!("κ: {e}")),
            }
            match kappa_tilde(a, &alpha, radius) {
                Ok(kt) => {
                    out.check(kt.value <= rat(1), || format!("κ̃ = {} for α = {alpha:?}", kt.value));
                    out.check(!kt.truncated, || "κ̃ truncated".into());
                }
                Err(e) => out.fail(format!("κ̃: {e}")),
            }
        }
        match check_theorem(&inst.p, Some(&inst.c), None, TheoremId::Thm7a, &opts) {
            Ok(rs) => rs.iter().for_each(|x| out.check(x.holds(), || x.to_string())),
            Err(e) => out.fail(format!("proximity: {e}")),
        }
    }
    for k in 0..100 {
        let n = 2 + k % 2;
        let m = r.gen_range(n + 1..=6);
        let p = lattice_free_bimodular(&mut r, n, m).expect("lattice-free bimodular instance");
        match check_theorem(&p, None, None, TheoremId::Thm7b, &opts) {
            Ok(rs) => rs.iter().for_each(|x| out.check(x.holds(), || x.to_string())),
            Err(e) => out.fail(format!("facet width: {e}")),
        }
    }
    report(9, "bimodular suite", &out, t.elapsed(), None)
}

fn cofactor_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] as i128 * cofactor_det(&minor)
        })
        .sum()
}

fn criterion_10(corpus: &[IlpInstance]) -> bool {
    let t = Instant::now();
    let mut out = Outcome::new();
    for inst in corpus {
        let lp = inst.p.lp_max(&inst.c).map(|o| o.value);
        let by_vertices = inst.p.vertices().map(|vs| {
            vs.iter()
                .map(|v| inst.c.iter().zip(&v.point).map(|(a, b)| a * b).sum::<Rational>())
                .max()
        });
        match (lp, by_vertices) {
            (Ok(a), Ok(Some(b))) => out.check(a == b, || format!("LP {a} vs vertices {b}")),
            (a, b) => out.fail(format!("LP {a:?} vs vertices {b:?}")),
        }
    }
    let mut r = rng(10);
    for _ in 0..100 {
        let pts = r.gen_range(2..=6);
        let q = symmetric_polygon(&mut r, pts, 6).expect("polygon");
        match polar2(&q).and_then(|p| polar2(&p)) {
            Ok(back) => out.check(back == q, || format!("{q}: double polar {back}")),
            Err(e) => out.fail(format!("{q}: {e}")),
        }
    }
    for _ in 0..1000 {
        let n = r.gen_range(1..=5);
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| r.gen_range(-9..=9)).collect()).collect();
        let m = IntMatrix::from_rows(&rows).expect("square");
        let fast = det(&m).expect("determinant");
        let slow = BigInt::from(cofactor_det(&rows));
        out.check(fast == slow, || format!("{rows:?}: {fast} vs {slow}"));
    }
    report(10, "oracle cross-checks", &out, t.elapsed(), None)
}

fn main() {
    let t = Instant::now();
    let corpus = corpus();
    let corpus_time = t.elapsed();
    let centred: Vec<_> = corpus.iter().map(centre).collect();
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(&corpus, corpus_time),
        criterion_5(&corpus, &centred),
        criterion_6(&corpus, &centred),
        criterion_7(&corpus, &centred),
        criterion_8(),
        criterion_9(),
        criterion_10(&corpus),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
