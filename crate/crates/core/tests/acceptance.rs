//! The acceptance suite: one PASS/FAIL line per criterion. Each criterion
//! re-derives its numbers with the oracles in `common` rather than reading
//! back the pipeline's own checks.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;

use cremona::fixtures;
use cremona::maps::fit_inverse_exact;
use cremona::parse_polynomial;
use cremona::pipeline::{run_pipeline, CaseReport, Status, StepMap, SurfaceInput};
use cremona::report::ReportDocument;
use cremona::threshold::{effective_threshold, PicardModel, Threshold};
use cremona::QPoly;

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn run(input: &SurfaceInput) -> Result<CaseReport, String> {
    run_pipeline(input).map_err(|e| e.to_string())
}

fn prime_of(input: &SurfaceInput) -> u64 {
    input.options.prime
}

/// The final plane form of a report, as terms over `F_p` in the last
/// step's target variables.
fn plane_terms(report: &CaseReport, p: u64) -> Result<TermList, String> {
    let doc = ReportDocument::from_report(report);
    let names = &doc.steps.last().ok_or("no steps")?.target_variables;
    let src = report.final_cert.plane_form.as_ref().ok_or("no plane form")?;
    let g = parse_polynomial(src, names).map_err(|e| e.to_string())?;
    Ok(terms_of_q(&g, p))
}

fn chain(report: &CaseReport, upto: usize, p: u64) -> Vec<Vec<TermList>> {
    report.steps[..upto].iter().map(|s| step_terms(&s.map, p)).collect()
}

/// Random linear projection of points to `P^{k-1}`.
fn project(points: &[Vec<u64>], k: usize, p: u64, seed: u64) -> Vec<Vec<u64>> {
    let n = points[0].len();
    let rows = random_points(n, k, p, seed);
    let lin: Vec<TermList> = rows
        .iter()
        .map(|r| {
            (0..n)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    (e, r[i])
                })
                .collect()
        })
        .collect();
    push_terms(&[lin], points, p)
}

/// Smallest degree of a relation among surface points after a random
/// projection to `P^3`, with the number of such relations and the
/// leading coefficients on `probes` random lines.
fn surface_degree(points: &[Vec<u64>], p: u64, max: u32, probes: usize, seed: u64) -> Option<(u32, usize, usize)> {
    let proj = project(points, 4, p, seed);
    for k in 1..=max {
        let rows = monomial_rows(&proj, k, p);
        let kernel = kernel_mod_p(&rows, p as i128);
        if kernel.is_empty() {
            continue;
        }
        let form: TermList = exponents(4, k).into_iter().zip(&kernel[0]).map(|(e, &c)| (e, c as u64)).collect();
        // f(a + t b) has degree k exactly when f(b) != 0
        let full = random_points(4, probes, p, seed ^ 0x9e37)
            .iter()
            .filter(|b| eval_terms(&form, b, p) != 0)
            .count();
        return Some((k, kernel.len(), full));
    }
    None
}

fn timed(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:.2?}, limit {limit:?}");
    Ok(t)
}

fn frac(n: i64, d: i64) -> Threshold {
    Threshold::Value(BigRational::new(n.into(), d.into()))
}

fn thresholds() -> Outcome {
    let start = Instant::now();
    let table: [(&str, &[i64], Threshold); 5] = [
        ("p3", &[1], frac(1, 4)),
        ("blowup-p3-pt", &[1, -1], frac(0, 1)),
        ("p3", &[3], frac(3, 4)),
        ("p1xp2", &[3, 2], frac(2, 3)),
        ("wps1112", &[4], frac(4, 5)),
    ];
    let mut got = Vec::new();
    for (model, class, want) in table {
        let m = PicardModel::by_name(model).map_err(|e| e.to_string())?;
        let h: Vec<BigRational> = class.iter().map(|&c| q(c)).collect();
        let r = effective_threshold(&m, &h).map_err(|e| e.to_string())?;
        ensure!(r == want, "{model} {class:?}: got {}, want {}", r.describe(), want.describe());
        got.push(format!("{model}={}", r.describe()));
    }
    timed(Duration::from_secs(1), start)?;
    Ok(got.join(" "))
}

/// `inv(map(x))` is proportional to `x` at integer points off the base loci.
fn inverse_holds(map: &cremona::maps::RationalMap<cremona::Rationals>, inv: &[QPoly], seed: u64) -> Result<usize, String> {
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut good = 0;
    for _ in 0..40 {
        let x: Vec<BigRational> = (0..4).map(|_| q(rng.gen_range(-9..=9))).collect();
        let y: Vec<BigRational> = map.forms().iter().map(|f| f.eval(&x).unwrap()).collect();
        if y.iter().all(Zero::is_zero) {
            continue;
        }
        let z: Vec<BigRational> = inv.iter().map(|f| f.eval(&y).unwrap()).collect();
        if z.iter().all(Zero::is_zero) {
            continue;
        }
        for i in 0..4 {
            for j in 0..4 {
                ensure!(&z[i] * &x[j] == &z[j] * &x[i], "inverse fails at {x:?}");
            }
        }
        good += 1;
    }
    ensure!(good >= 20, "only {good} usable evaluation points");
    Ok(good)
}

fn monoids() -> Outcome {
    let mut cases = vec![("quadric".to_string(), fixtures::quadric().map_err(|e| e.to_string())?)];
    for k in 0..20u64 {
        let d = 2 + (k % 3) as u32;
        let s = fixtures::random_monoid(d, 1000 + k).map_err(|e| e.to_string())?;
        cases.push((format!("monoid d={d} seed={}", 1000 + k), s));
    }
    let mut slowest = Duration::ZERO;
    for (name, input) in &cases {
        let start = Instant::now();
        let report = run(input)?;
        ensure!(report.status == Status::Certified, "{name}: status {}", report.status.name());
        let StepMap::Q(map) = &report.steps[0].map else {
            return Err(format!("{name}: map not over Q"));
        };
        let d = input.degree();
        let inv = fit_inverse_exact(map, d, 7).map_err(|e| e.to_string())?;
        let t = timed(Duration::from_secs(1), start).map_err(|e| format!("{name}: {e}"))?;
        slowest = slowest.max(t);
        let inv = inv.ok_or(format!("{name}: no exact inverse"))?;

        let p = prime_of(input);
        let pts = surface_points(&input.equation, 100, p, 11);
        let img = push_terms(&chain(&report, 1, p), &pts, p);
        ensure!(img.len() >= 100, "{name}: {} image samples", img.len());
        ensure!(relations_of_degree(&img, 0, p) == 0, "{name}: a constant vanishes on the image");
        let lin = relations_of_degree(&img, 1, p);
        ensure!(lin == 1, "{name}: {lin} linear relations on the image");
        let plane = plane_terms(&report, p)?;
        ensure!(img.iter().all(|y| eval_terms(&plane, y, p) == 0), "{name}: reported plane misses samples");
        inverse_holds(map, &inv.forms, 5).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} surfaces, 100 held-out samples each, slowest {slowest:.2?}", cases.len()))
}

/// Point `C(t) + l C'(t)` of the tangent developable of the twisted cubic.
fn developable_point(t: u64, l: u64, p: u64) -> Vec<u64> {
    let m = |a: u64, b: u64| a * b % p;
    let c = [1, t, m(t, t), m(m(t, t), t)];
    let dc = [0, 1, m(2, t), m(3, m(t, t))];
    (0..4).map(|i| (c[i] + m(l, dc[i])) % p).collect()
}

fn twisted_cubic() -> Outcome {
    let start = Instant::now();
    let input = fixtures::tangent_developable().map_err(|e| e.to_string())?;
    let report = run(&input)?;
    ensure!(report.status == Status::Certified, "status {}", report.status.name());
    ensure!(report.steps.len() == 2, "{} steps", report.steps.len());
    let p = prime_of(&input);
    ensure!(p == 10007, "prime {p}");

    // cubics through the curve and its tangent lines at t = 0, 1, -1
    let mut cond: Vec<Vec<u64>> = (0..30).map(|t| developable_point(t, 0, p)).collect();
    for t in [0, 1, p - 1] {
        cond.extend((1..12).map(|l| developable_point(t, l, p)));
    }
    let rows = monomial_rows(&cond, 3, p);
    let dim = kernel_mod_p(&rows, p as i128).len() as i64 - 1;
    ensure!(dim == 3, "oracle system dimension {dim}");
    let forms = step_terms(&report.steps[0].map, p);
    ensure!(forms.len() == 4, "step has {} forms", forms.len());
    ensure!(
        forms.iter().all(|f| cond.iter().all(|x| eval_terms(f, x, p) == 0)),
        "a step form misses the base locus"
    );
    let coeffs: Vec<Vec<i128>> = forms
        .iter()
        .map(|f| {
            exponents(4, 3)
                .iter()
                .map(|e| f.iter().find(|(m, _)| m == e).map_or(0, |(_, c)| *c as i128))
                .collect()
        })
        .collect();
    ensure!(rank_mod_p(&coeffs, p as i128) == 4, "step forms are dependent");

    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let samples: Vec<Vec<u64>> = (0..120).map(|_| developable_point(rng.gen_range(0..p), rng.gen_range(0..p), p)).collect();
    let img = push_terms(&chain(&report, 1, p), &samples, p);
    ensure!(img.len() >= 100, "{} image samples", img.len());
    let (l1, l2) = (relations_of_degree(&img, 1, p), relations_of_degree(&img, 2, p));
    ensure!(l1 == 0 && l2 == 1, "image relations: {l1} linear, {l2} quadratic");
    let img2 = push_terms(&chain(&report, 2, p), &samples, p);
    let plane = relations_of_degree(&img2, 1, p);
    ensure!(plane == 1, "{plane} linear relations after the monoid step");
    let g = plane_terms(&report, p)?;
    ensure!(img2.iter().all(|y| eval_terms(&g, y, p) == 0), "reported plane misses samples");
    let t = timed(Duration::from_secs(30), start)?;
    Ok(format!(
        "dim 3, {} held-out samples: 0 linear / 1 quadric relation, plane after monoid step, {t:.2?}",
        img.len()
    ))
}

/// The typo-corrected explicit forms (final term of the first read as `2w^4`).
const CYCLIDE_FORMS: [&str; 4] = [
    "x^2*z*w + y^2*z*w + z^3*w + 2*x^2*w^2 + y^2*w^2 + x*z*w^2 - z^2*w^2 - 4*x*w^3 - 2*z*w^3 + 2*w^4",
    "x^2*y*w + y^3*w + y*z^2*w + x*y*w^2 - 2*y*w^3",
    "x^3*w + x*y^2*w + x*z^2*w - 2*x^2*w^2 - 2*y^2*w^2 + x*w^3",
    "x^4 + 2*x^2*y^2 + y^4 + 2*x^2*z^2 + 2*y^2*z^2 + z^4 - x^2*w^2 - y^2*w^2 - 3*z^2*w^2 - 2*x*w^3 + 2*w^4",
];

fn dupin() -> Outcome {
    let start = Instant::now();
    let input = fixtures::dupin_cyclide().map_err(|e| e.to_string())?;
    let report = run(&input)?;
    ensure!(report.status == Status::Certified, "status {}", report.status.name());
    let step = &report.steps[0];
    let StepMap::Q(map) = &step.map else {
        return Err("map not over Q".into());
    };
    ensure!(map.forms().len() == 4, "system has {} forms", map.forms().len());
    let vars = input.variables.clone();
    let reference: Vec<QPoly> = CYCLIDE_FORMS
        .iter()
        .map(|s| parse_polynomial(s, &vars))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let ours: Vec<Vec<BigRational>> = map.forms().iter().map(|f| coefficients(f, 4)).collect();
    let theirs: Vec<Vec<BigRational>> = reference.iter().map(|f| coefficients(f, 4)).collect();
    let both: Vec<Vec<BigRational>> = ours.iter().chain(&theirs).cloned().collect();
    let (r1, r2, r12) = (rank_over_q(&ours), rank_over_q(&theirs), rank_over_q(&both));
    ensure!(r1 == 4 && r2 == 4 && r12 == 4, "ranks: computed {r1}, reference {r2}, together {r12}");

    let p = prime_of(&input);
    let pts = surface_points(&input.equation, 130, p, 21);
    let img = push_terms(&chain(&report, 1, p), &pts, p);
    ensure!(img.len() >= 100, "{} image samples", img.len());
    let lin = relations_of_degree(&img, 1, p);
    ensure!(lin == 1, "{lin} linear relations on the image");
    let g = plane_terms(&report, p)?;
    ensure!(img.iter().all(|y| eval_terms(&g, y, p) == 0), "reported plane misses samples");

    let cert = step.injectivity.as_ref().ok_or("no injectivity certificate")?;
    ensure!(
        cert.trials >= 500 && cert.collisions == 0 && cert.verdict != cremona::maps::Verdict::Inconclusive,
        "injectivity: {} trials, {} collisions, {}",
        cert.trials,
        cert.collisions,
        cert.verdict.name()
    );
    // independent pair test on fresh points of P^3
    let a = random_points(4, 500, p, 31);
    let b = random_points(4, 500, p, 32);
    let fa = push_terms(&chain(&report, 1, p), &a, p);
    let fb = push_terms(&chain(&report, 1, p), &b, p);
    let proportional = |u: &Vec<u64>, v: &Vec<u64>| {
        (0..4).all(|i| (0..4).all(|j| (u[i] as u128 * v[j] as u128) % p as u128 == (u[j] as u128 * v[i] as u128) % p as u128))
    };
    let collisions = fa.iter().zip(&fb).filter(|(u, v)| proportional(u, v)).count();
    ensure!(collisions == 0, "{collisions} collisions among 500 fresh pairs");
    let t = timed(Duration::from_secs(60), start)?;
    Ok(format!(
        "dim 3, reference forms in span (rank 4), plane on {} held-out samples, 500 trials clean, {t:.2?}",
        img.len()
    ))
}

fn double_line() -> Outcome {
    let start = Instant::now();
    let input = fixtures::double_line().map_err(|e| e.to_string())?;
    let report = run(&input)?;
    ensure!(report.status.is_success(), "status {}", report.status.name());
    let p = prime_of(&input);
    let step = &report.steps[0];
    let forms = step_terms(&step.map, p);
    ensure!(forms.len() == 6, "system has {} quadrics", forms.len());
    ensure!(forms.iter().all(|f| f.iter().all(|(e, _)| e.iter().sum::<u32>() == 2)), "not quadrics");

    let segre: Vec<Vec<u32>> = (0..2)
        .flat_map(|i| {
            (0..3).map(move |j| {
                let mut e = vec![0; 5];
                e[i] = 1;
                e[2 + j] = 1;
                e
            })
        })
        .collect();
    let expected = monomial_quadric_relations(&segre);
    let threefold = push_terms(std::slice::from_ref(&forms), &random_points(4, 60, p, 41), p);
    let found = quadric_relations_on_points(&threefold, p);
    ensure!(found == expected && found == 3, "quadric relations {found}, Segre count {expected}");

    let pts = surface_points(&input.equation, 260, p, 43);
    let img = push_terms(&[forms], &pts, p);
    let (deg, count, full) = surface_degree(&img, p, 8, 10, 44).ok_or("no relation up to degree 8")?;
    ensure!(deg == 7 && count == 1 && full == 10, "degree {deg} ({count} forms), {full}/10 probes of full degree");
    let t = timed(Duration::from_secs(60), start)?;
    Ok(format!("3 quadric relations (Segre 21-18), degree 7 on 10/10 line probes, {t:.2?}"))
}

fn elliptic() -> Outcome {
    let start = Instant::now();
    let input = fixtures::elliptic_type1().map_err(|e| e.to_string())?;
    let report = run(&input)?;
    ensure!(report.status.is_success(), "status {}", report.status.name());
    ensure!(report.steps.len() >= 4, "{} steps", report.steps.len());
    let p = prime_of(&input);

    // quadrics of weighted order >= 2 for weights (2,1,1) on x1, x2, x3
    let lambda: Vec<Vec<u32>> = exponents(4, 2).into_iter().filter(|e| 2 * e[1] + e[2] + e[3] >= 2).collect();
    let forms = step_terms(&report.steps[0].map, p);
    ensure!(lambda.len() == 7 && forms.len() == 7, "oracle {} elements, system {}", lambda.len(), forms.len());
    ensure!(
        report.coordinate_changes.is_empty() || forms.iter().flatten().all(|(e, _)| lambda.contains(e)),
        "a system form has low weighted order"
    );

    // the cone over the Veronese surface: (u^2, uv, ..., w^2, t)
    let mut cone: Vec<Vec<u32>> = exponents(3, 2).into_iter().map(|mut e| {
        e.push(0);
        e
    }).collect();
    cone.push(vec![0, 0, 0, 1]);
    let expected = monomial_quadric_relations(&cone);
    let threefold = push_terms(&chain(&report, 1, p), &random_points(4, 60, p, 51), p);
    let found = quadric_relations_on_points(&threefold, p);
    ensure!(found == expected && found == 6, "quadric relations {found}, Veronese cone count {expected}");

    let pts = surface_points(&input.equation, 260, p, 53);
    let mut ledger = Vec::new();
    for k in 2..=4 {
        let img = push_terms(&chain(&report, k, p), &pts, p);
        let (deg, count, full) = surface_degree(&img, p, 8, 10, 54 + k as u64).ok_or("no relation up to degree 8")?;
        ensure!(count == 1 && full == 10, "step {k}: {count} forms, {full}/10 probes");
        ledger.push(deg);
    }
    ensure!(ledger == [6, 5, 4], "degree ledger {ledger:?}");

    let q4 = push_terms(&chain(&report, 3, p), &random_points(4, 60, p, 55), p);
    ensure!(q4[0].len() == 5, "third step lands in P^{}", q4[0].len() - 1);
    let kernel = kernel_mod_p(&monomial_rows(&q4, 2, p), p as i128);
    ensure!(kernel.len() == 1, "{} quadrics through the threefold in P^4", kernel.len());
    let mut sym = vec![vec![0i128; 5]; 5];
    for (e, c) in exponents(5, 2).iter().zip(&kernel[0]) {
        let idx: Vec<usize> = (0..5).flat_map(|i| std::iter::repeat_n(i, e[i] as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            sym[i][i] = 2 * c;
        } else {
            sym[i][j] = *c;
            sym[j][i] = *c;
        }
    }
    let rank = rank_mod_p(&sym, p as i128);
    ensure!(rank == 4, "quadric rank {rank}");
    let t = timed(Duration::from_secs(120), start)?;
    Ok(format!("|Lambda_1| = 7, 6 quadric relations (28-22), ledger 6 -> 5 -> 4, rank-4 quadric, {t:.2?}"))
}

fn properties() -> Outcome {
    let start = Instant::now();
    let suites: [(&str, fn(u32) -> Result<(), String>, u32); 9] = [
        ("ring", prop_ring_axioms, 1000),
        ("euler", prop_euler, 1000),
        ("nullspace", prop_nullspace, 1000),
        ("gcd", prop_gcd, 1000),
        ("roots", prop_roots, 1000),
        ("linsys post-hoc", prop_linsys_posthoc, 200),
        ("linsys monotone", prop_linsys_monotone, 200),
        ("rescaling", prop_rescaling, 500),
        ("held-out", prop_heldout_stability, 100),
    ];
    for (name, f, cases) in suites {
        f(cases).map_err(|e| format!("{name}: {e}"))?;
    }
    let (rejected, valid, false_accept) = hint_corruption(100, 2024);
    ensure!(false_accept == 0, "{false_accept} false acceptances");
    let t = timed(Duration::from_secs(120), start)?;
    Ok(format!(
        "9 suites passed; 100 corrupted hints: {rejected} rejected, {valid} still valid, 0 false, {t:.2?}"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("threshold table", thresholds),
        ("monoid linearization", monoids),
        ("twisted cubic", twisted_cubic),
        ("dupin cyclide", dupin),
        ("double line", double_line),
        ("elliptic type 1", elliptic),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name}: {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
