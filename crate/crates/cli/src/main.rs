mod instance;
mod report;
mod svg;

use clap::{Parser, Subcommand, ValueEnum};
use instance::{load_instance, Instance, InstanceFile, Metadata};
use num_traits::Signed;
use proxflat::generate::{
    bimodular_origin_only, is_bimodular, lattice_free, lattice_free_bimodular, random_ilp, rng, symmetric_polygon,
};
use proxflat::hilbert::{check_dim_free, transfer_bound_check};
use proxflat::plane::{
    check_rot_subset_polar, det, format_polygon, grow_until_equality, parse_polygon, verify_area_lower_bound,
    PlaneError, Polygon2,
};
use proxflat::polyhedra::IntBox;
use proxflat::proximity::{check_theorem, CheckOptions};
use proxflat::rational::{format_rational, rat};
use proxflat::report::{BoundReport, TheoremId};
use report::{Record, ReportFile};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(
    name = "proxflat",
    version,
    about = "Exact proximity, flatness and self-polar polygon checks"
)]
struct Cli {
    /// Omit timings so identical inputs give byte-identical output.
    #[arg(long, global = true)]
    stable: bool,
    /// Enumeration radius for Graver-based statistics.
    #[arg(long, global = true)]
    radius: Option<i64>,
    /// Integer search box, `lo:hi` for a cube or `l1,l2,..:h1,h2,..`.
    #[arg(long = "box", global = true, allow_hyphen_values = true)]
    search_box: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run theorem checks on an instance file and print a JSON report.
    Check {
        /// Comma-separated ids: thm2, thm4, thm5, thm7a, thm7b, volume, transfer.
        #[arg(long = "thm", value_delimiter = ',', default_value = "thm2")]
        thm: Vec<String>,
        file: PathBuf,
    },
    /// Emit a seeded instance (JSON) or polygon file.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Row count; defaults to `n + 2`.
        #[arg(long)]
        m: Option<usize>,
        /// Largest absolute entry.
        #[arg(long, default_value_t = 5)]
        max: i64,
        /// Generating points of a symmetric polygon.
        #[arg(long, default_value_t = 3)]
        points: usize,
    },
    /// Planar polygon tools.
    Polygon {
        #[arg(value_enum)]
        action: PolygonAction,
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    RandomIlp,
    Bimodular,
    LatticeFree,
    LatticeFreeBimodular,
    SymmetricPolygon,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolygonAction {
    Verify,
    Grow,
    Svg,
}

/// Exit status: all checks hold, some check failed, bad usage or input.
const HOLDS: u8 = 0;
const VIOLATED: u8 = 1;
const USAGE: u8 = 2;

struct Failure(u8, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(USAGE, msg.into())
}

fn parse_box(spec: &str, n: usize) -> Result<IntBox, Failure> {
    let bad = || usage(format!("--box {spec:?}: expected lo:hi or l1,..,ln:h1,..,hn"));
    let (lo, hi) = spec.split_once(':').ok_or_else(bad)?;
    let side = |s: &str| -> Result<Vec<i64>, Failure> {
        let v: Vec<i64> = s
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        match v.len() {
            1 => Ok(vec![v[0]; n]),
            k if k == n => Ok(v),
            _ => Err(bad()),
        }
    };
    IntBox::new(side(lo)?, side(hi)?).map_err(|e| usage(format!("--box: {e}")))
}

fn run_one(inst: &Instance, id: &str, cli: &Cli, opts: &CheckOptions) -> Vec<Record> {
    let Some(which) = TheoremId::parse(id) else {
        return vec![Record::error(id, "unknown theorem id")];
    };
    let p = &inst.p;
    let alpha = inst.file.alpha.as_deref();
    let result: Result<Vec<BoundReport>, String> = match (which, &inst.b_mat) {
        (TheoremId::Transfer, None) => Err("transfer needs a transform B in the instance".into()),
        (TheoremId::Transfer, Some(bm)) => match alpha {
            None => Err("transfer needs a direction alpha".into()),
            Some(alpha) => transfer_bound_check(p.a(), bm, p.b(), alpha, cli.radius)
                .map(|r| vec![r])
                .map_err(|e| e.to_string()),
        },
        (TheoremId::Thm7a | TheoremId::Thm7b, Some(bm)) => check_dim_free(p.a(), bm, p.b(), inst.c.as_deref())
            .map(|rs| rs.into_iter().filter(|r| r.theorem == which).collect())
            .map_err(|e| e.to_string())
            .and_then(|rs: Vec<_>| {
                if rs.is_empty() {
                    Err(format!("{which} does not apply to this right-hand side"))
                } else {
                    Ok(rs)
                }
            }),
        (TheoremId::PolarArea, _) => Err("polar-area runs on polygon files: use `polygon verify`".into()),
        _ => check_theorem(p, inst.c.as_deref(), alpha, which, opts).map_err(|e| e.to_string()),
    };
    match result {
        Ok(rs) => rs.iter().map(Record::from_report).collect(),
        Err(e) => vec![Record::error(id, e)],
    }
}

fn cmd_check(cli: &Cli, ids: &[String], file: &Path) -> Result<u8, Failure> {
    let inst = load_instance(file).map_err(|e| usage(e.to_string()))?;
    let search_box = cli
        .search_box
        .as_deref()
        .map(|s| parse_box(s, inst.p.n()))
        .transpose()?;
    let opts = CheckOptions { search_box };
    let mut records = Vec::new();
    for id in ids {
        let start = Instant::now();
        let mut recs = run_one(&inst, id.trim(), cli, &opts);
        if !cli.stable {
            let ms = start.elapsed().as_secs_f64() * 1e3;
            recs.iter_mut().for_each(|r| r.runtime_ms = Some(ms));
        }
        records.extend(recs);
    }
    let report = ReportFile::new(file.display().to_string(), records);
    print!("{}", report.to_json());
    Ok(if report.all_hold { HOLDS } else { VIOLATED })
}

fn cmd_gen(kind: GenKind, seed: u64, n: usize, m: Option<usize>, max: i64, points: usize) -> Result<u8, Failure> {
    let mut r = rng(seed);
    let m = m.unwrap_or(n + 2);
    let fail = |e: proxflat::generate::GenerationFailed| usage(e.to_string());
    let meta = |tag: &str| Metadata {
        seed: Some(seed),
        tags: vec![tag.to_string()],
    };
    let out = match kind {
        GenKind::RandomIlp => {
            let inst = random_ilp(&mut r, n, m, max).map_err(fail)?;
            InstanceFile::from_parts(&inst.p, Some(&inst.c), meta("random-ilp")).to_json()
        }
        GenKind::Bimodular => {
            let inst = bimodular_origin_only(&mut r, n, m).map_err(fail)?;
            if !is_bimodular(inst.p.a()) {
                return Err(Failure(
                    VIOLATED,
                    "generated matrix failed the bimodularity check".into(),
                ));
            }
            InstanceFile::from_parts(&inst.p, Some(&inst.c), meta("bimodular")).to_json()
        }
        GenKind::LatticeFree => {
            let p = lattice_free(&mut r, n, m, max).map_err(fail)?;
            InstanceFile::from_parts(&p, None, meta("lattice-free")).to_json()
        }
        GenKind::LatticeFreeBimodular => {
            let p = lattice_free_bimodular(&mut r, n, m).map_err(fail)?;
            InstanceFile::from_parts(&p, None, meta("lattice-free-bimodular")).to_json()
        }
        GenKind::SymmetricPolygon => {
            let q = symmetric_polygon(&mut r, points, max).map_err(fail)?;
            if !check_rot_subset_polar(&q) {
                return Err(Failure(VIOLATED, "generated polygon fails rot Q ⊆ Q°".into()));
            }
            format!("# symmetric polygon, seed {seed}\n{}", format_polygon(&q))
        }
    };
    print!("{out}");
    Ok(HOLDS)
}

/// The vertex pair with the largest `|det|`, which exceeds 1 when
/// `rot Q ⊆ Q°` fails.
fn det_witness(q: &Polygon2) -> Value {
    let v = q.vertices();
    let pair = (0..v.len())
        .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
        .max_by_key(|&(i, j)| det(&v[i], &v[j]).abs());
    match pair {
        Some((i, j)) => json!({
            "u": v[i].to_string(),
            "v": v[j].to_string(),
            "det": format_rational(&det(&v[i], &v[j])),
        }),
        None => Value::Null,
    }
}

fn hypothesis_failure(q: &Polygon2, e: &PlaneError) -> Value {
    let mut out = json!({ "polygon": format_polygon(q), "verdict": "violated", "error": e.to_string() });
    if matches!(e, PlaneError::HypothesisViolated) && !check_rot_subset_polar(q) {
        out["witness"] = det_witness(q);
    }
    out
}

fn cmd_polygon(action: PolygonAction, file: &Path) -> Result<u8, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let q = parse_polygon(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    match action {
        PolygonAction::Verify => {
            let proof = match verify_area_lower_bound(&q) {
                Ok(p) => p,
                Err(e) => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&hypothesis_failure(&q, &e)).expect("json")
                    );
                    return Ok(VIOLATED);
                }
            };
            let replay = proof.replay();
            let holds = proof.holds() && replay.is_ok();
            let descent: Vec<Value> = proof
                .descent
                .iter()
                .map(|s| {
                    json!({
                        "vertices": s.polygon.len(),
                        "area": format_rational(&s.area),
                        "vertex": s.vertex.to_string(),
                        "lambda": format_rational(&s.lambda),
                        "area_parent": format_rational(&s.area_p0),
                        "area_p1": format_rational(&s.area_p1),
                        "chosen": s.chosen,
                    })
                })
                .collect();
            let out = json!({
                "polygon": format_polygon(&q),
                "verdict": if holds { "holds" } else { "violated" },
                "measured": format_rational(&proof.polar_area),
                "bound": format_rational(&rat(3)),
                "strict": false,
                "self_polar": format_polygon(&proof.grow.result),
                "grow_steps": proof.grow.steps.len(),
                "descent": descent,
                "base": format_polygon(&proof.base),
                "replay": replay.map_or_else(|e| e.to_string(), |()| "ok".to_string()),
                "failures": proof.failures,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            Ok(if holds { HOLDS } else { VIOLATED })
        }
        PolygonAction::Grow => match grow_until_equality(&q) {
            Ok(trace) => {
                print!("{}", format_polygon(&trace.result));
                Ok(HOLDS)
            }
            Err(e) => {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&hypothesis_failure(&q, &e)).expect("json")
                );
                Ok(VIOLATED)
            }
        },
        PolygonAction::Svg => {
            let s = svg::render(&q).map_err(|e| Failure(VIOLATED, e.to_string()))?;
            print!("{s}");
            Ok(HOLDS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { HOLDS });
        }
    };
    let result = match &cli.command {
        Command::Check { thm, file } => cmd_check(&cli, thm, file),
        Command::Gen {
            kind,
            seed,
            n,
            m,
            max,
            points,
        } => cmd_gen(*kind, *seed, *n, *m, *max, *points),
        Command::Polygon { action, file } => cmd_polygon(*action, file),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
