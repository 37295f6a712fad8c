//! Acceptance run: one PASS/FAIL line per criterion.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use radii_core::body::{minkowski_sum, PointBody};
use radii_core::colourful::{
    brute_force_max, detect_hexagon_equality, enumerate_tuples, greedy_select, minmax_center,
    random_balanced_set_with, selection_sum, BalancedSet,
};
use radii_core::gauge::{Gauge, HPolytope};
use radii_core::harness::{
    check_cylinder_equality, check_factor_j_gauge, check_sqrt_j, check_sum_of_squares,
    explore_lp_conjecture, explore_n_plus_one, random_instance, verify_conjecture_report, Suite,
    Verdict,
};
use radii_core::radii::{circumradius, extract_certificate, CircumResult};
use radii_core::tol::Limits;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Outcome = Result<String, String>;

/// Circumradius computations collected for the certificate criterion.
#[derive(Default)]
struct Pool {
    cases: Vec<(String, PointBody, Gauge, CircumResult)>,
}

impl Pool {
    fn radius(&mut self, label: &str, k: &PointBody, c: &Gauge) -> f64 {
        let r = circumradius(k, c).unwrap_or_else(|e| panic!("{label}: {e}"));
        let radius = r.radius;
        self.cases
            .push((label.to_string(), k.clone(), c.clone(), r));
        radius
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Gauge value computed from the definitions, without the library.
fn gauge_value(c: &Gauge, x: &[f64]) -> f64 {
    match c {
        Gauge::Euclidean => norm(x),
        Gauge::Lp(p) if p.is_infinite() => x.iter().fold(0.0, |m, v| m.max(v.abs())),
        Gauge::Lp(p) => {
            let p = p.value();
            x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
        }
        Gauge::Polytope(h) => h
            .normals()
            .iter()
            .map(|a| a.iter().zip(x).map(|(u, v)| u * v).sum::<f64>())
            .fold(0.0, f64::max),
    }
}

/// Radius of a centrally symmetric body about the origin: the optimal
/// center of a symmetric body under a symmetric gauge is its center.
fn symmetric_radius(k: &PointBody, c: &Gauge) -> f64 {
    k.points()
        .iter()
        .map(|p| gauge_value(c, p))
        .fold(0.0, f64::max)
}

fn cube_vertices(n: usize) -> PointBody {
    let pts = (0..1usize << n)
        .map(|m| {
            (0..n)
                .map(|i| if m >> i & 1 == 1 { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    PointBody::new(pts).unwrap()
}

fn kl_pair() -> (PointBody, PointBody) {
    let t = 2f64.sqrt() - 1.0;
    let k = PointBody::new(vec![
        vec![1.0, 0.0],
        vec![-1.0, 0.0],
        vec![0.0, t],
        vec![0.0, -t],
    ])
    .unwrap();
    let l = PointBody::new(vec![
        vec![0.0, 1.0],
        vec![0.0, -1.0],
        vec![t, 0.0],
        vec![-t, 0.0],
    ])
    .unwrap();
    (k, l)
}

fn orthogonal_segments(n: usize) -> Vec<PointBody> {
    (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            let m: Vec<f64> = e.iter().map(|x| -x).collect();
            PointBody::segment(m, e).unwrap()
        })
        .collect()
}

fn hexagon_sets(rotate_first: f64) -> Vec<BalancedSet> {
    (1..=3)
        .map(|i| {
            let t =
                i as f64 * std::f64::consts::FRAC_PI_3 + if i == 1 { rotate_first } else { 0.0 };
            BalancedSet::pair(vec![t.cos(), t.sin()]).unwrap()
        })
        .collect()
}

fn segments_and_square() -> (Vec<PointBody>, Gauge) {
    let sq = Gauge::Polytope(HPolytope::from_box(&[-0.5, -0.5], &[0.5, 0.5]).unwrap());
    let bodies = vec![
        PointBody::segment(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap(),
        PointBody::segment(vec![0.0, 0.0], vec![0.0, 1.0]).unwrap(),
    ];
    (bodies, sq)
}

fn c1(pool: &mut Pool) -> Outcome {
    let l = Limits::default();
    let (k, lb) = kl_pair();
    let sum = minkowski_sum(&[k.clone(), lb.clone()], &l).unwrap();
    let e = Gauge::Euclidean;
    let rk = pool.radius("kl/K", &k, &e);
    let rl = pool.radius("kl/L", &lb, &e);
    let rs = pool.radius("kl/K+L", &sum, &e);
    for (name, got, oracle, want) in [
        ("R(K)", rk, symmetric_radius(&k, &e), 1.0),
        ("R(L)", rl, symmetric_radius(&lb, &e), 1.0),
        ("R(K+L)", rs, symmetric_radius(&sum, &e), 2f64.sqrt()),
    ] {
        ensure(
            (got - want).abs() <= 1e-6 && (oracle - want).abs() <= 1e-12,
            || format!("{name} = {got}, oracle {oracle}, expected {want}"),
        )?;
    }
    let a = check_sqrt_j(&[k.clone(), lb.clone()], &l).map_err(|e| e.to_string())?;
    let b = check_sum_of_squares(&[k, lb], &l).map_err(|e| e.to_string())?;
    ensure(a.pass && a.equality_flag, || {
        format!("sqrt-j slack {} equality {}", a.slack, a.equality_flag)
    })?;
    ensure(b.pass && b.equality_flag, || {
        format!("squares slack {} equality {}", b.slack, b.equality_flag)
    })?;
    Ok(format!(
        "R(K)={rk:.9} R(L)={rl:.9} R(K+L)={rs:.9}, both suites at equality"
    ))
}

fn c2(pool: &mut Pool) -> Outcome {
    let l = Limits::default();
    let sets = hexagon_sets(0.0);
    let mm = minmax_center(&sets, &l).map_err(|e| e.to_string())?;
    ensure((mm.value - 2.0).abs() <= 1e-6, || {
        format!("minmax value {}", mm.value)
    })?;
    ensure(norm(&mm.center) <= 1e-6, || {
        format!("center {:?}", mm.center)
    })?;

    // u_1 - u_2 + u_3 = 0, with index 1 selecting the negated vector
    let zero = vec![0, 1, 0];
    let tuples = enumerate_tuples(&sets, &l).map_err(|e| e.to_string())?;
    ensure(tuples.contains(&zero), || {
        "zero-sum tuple not enumerated".into()
    })?;
    let s = selection_sum(&sets, &zero);
    let mut own = [0.0; 2];
    for (set, &i) in sets.iter().zip(&zero) {
        own[0] += set.vectors()[i][0];
        own[1] += set.vectors()[i][1];
    }
    ensure(norm(&s) <= 1e-12 && norm(&own) <= 1e-12, || {
        format!("zero tuple sums to {s:?}")
    })?;
    let b = brute_force_max(&sets, &[0.0, 0.0], &l).map_err(|e| e.to_string())?;
    ensure((b.achieved - 2.0).abs() <= 1e-9, || {
        format!("brute force {}", b.achieved)
    })?;

    ensure(
        detect_hexagon_equality(&sets, 1e-6).map_err(|e| e.to_string())?,
        || "hexagon not detected".into(),
    )?;
    let bent = hexagon_sets(1e-3);
    ensure(
        !detect_hexagon_equality(&bent, 1e-6).map_err(|e| e.to_string())?,
        || "perturbed hexagon still detected".into(),
    )?;

    let bodies: Vec<PointBody> = sets.iter().map(|s| s.to_body()).collect();
    let sum = minkowski_sum(&bodies, &l).unwrap();
    let r = pool.radius("hexagon/sum", &sum, &Gauge::Euclidean);
    ensure((r - 2.0).abs() <= 1e-6, || format!("sum radius {r}"))?;
    Ok(format!(
        "value {:.9}, |c*| {:.1e}, perturbed case rejected",
        mm.value,
        norm(&mm.center)
    ))
}

fn c3(pool: &mut Pool) -> Outcome {
    let mut worst_exact = 0.0f64;
    let mut worst_iter = 0.0f64;
    for n in [2usize, 3] {
        let cube = cube_vertices(n);
        for p in [1.0, 2.0, f64::INFINITY, 3.0] {
            let g = Gauge::lp(p).unwrap();
            let want = if p.is_infinite() {
                1.0
            } else {
                (n as f64).powf(1.0 / p)
            };
            let oracle = symmetric_radius(&cube, &g);
            ensure((oracle - want).abs() <= 1e-12, || {
                format!("oracle disagrees at n={n} p={p}")
            })?;
            let r = circumradius(&cube, &g).map_err(|e| e.to_string())?;
            pool.cases.push((
                format!("cube/n{n}/p{p}"),
                cube.clone(),
                g.clone(),
                r.clone(),
            ));
            let err = (r.radius - want).abs();
            if p == 3.0 {
                ensure(err <= 1e-4, || format!("n={n} p=3: {} vs {want}", r.radius))?;
                worst_iter = worst_iter.max(err);
            } else {
                ensure(r.method.is_exact(), || {
                    format!("n={n} p={p} took {:?}", r.method)
                })?;
                ensure(err <= 1e-6, || {
                    format!("n={n} p={p}: {} vs {want}", r.radius)
                })?;
                worst_exact = worst_exact.max(err);
            }
        }
    }
    Ok(format!(
        "max error {worst_exact:.1e} (exact), {worst_iter:.1e} (p=3)"
    ))
}

fn c4(pool: &mut Pool) -> Outcome {
    let l = Limits::default();
    for n in 2..=4 {
        let segs = orthogonal_segments(n);
        let sum = minkowski_sum(&segs, &l).unwrap();
        let r = pool.radius(&format!("orthogonal/n{n}"), &sum, &Gauge::Euclidean);
        let want = (n as f64).sqrt();
        ensure((r - want).abs() <= 1e-6, || format!("n={n}: R = {r}"))?;
        ensure(
            (symmetric_radius(&sum, &Gauge::Euclidean) - want).abs() <= 1e-12,
            || "oracle".into(),
        )?;
        for s in &segs {
            pool.radius(&format!("orthogonal/n{n}/segment"), s, &Gauge::Euclidean);
        }
        let a = check_sqrt_j(&segs, &l).map_err(|e| e.to_string())?;
        let b = check_sum_of_squares(&segs, &l).map_err(|e| e.to_string())?;
        ensure(a.equality_flag && b.equality_flag, || {
            format!(
                "n={n}: equality flags {} {}",
                a.equality_flag, b.equality_flag
            )
        })?;
    }
    Ok("R = sqrt(n) for n = 2, 3, 4; equality in both suites".into())
}

struct ColourInstance {
    sets: Vec<BalancedSet>,
    c: Vec<f64>,
}

fn colour_instance(seed: u64, id: u64) -> ColourInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ id);
    let n = rng.random_range(2..=4);
    let j = rng.random_range(1..=n);
    let sets = (0..j)
        .map(|_| {
            let k = rng.random_range(2..=n + 1);
            let r = rng.random_range(0.5..=2.0);
            random_balanced_set_with(n, r, k, &mut rng).unwrap()
        })
        .collect();
    let c = loop {
        let c: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..=2.0)).collect();
        if norm(&c) <= 2.0 {
            break c;
        }
    };
    ColourInstance { sets, c }
}

const COLOUR_SEED: u64 = 5;
const COLOUR_COUNT: u64 = 1000;

fn c5() -> Outcome {
    let l = Limits::default();
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for id in 0..COLOUR_COUNT {
        let inst = colour_instance(COLOUR_SEED, id);
        let bound = inst.c.iter().map(|x| x * x).sum::<f64>()
            + inst
                .sets
                .iter()
                .map(|s| s.radius() * s.radius())
                .sum::<f64>();
        let g = greedy_select(&inst.sets, &inst.c).map_err(|e| e.to_string())?;
        // recompute the selected sum from the vectors themselves
        let mut v: Vec<f64> = inst.c.iter().map(|x| -x).collect();
        for (s, &i) in inst.sets.iter().zip(&g.indices) {
            for (vi, ui) in v.iter_mut().zip(&s.vectors()[i]) {
                *vi += ui;
            }
        }
        let achieved = norm(&v);
        let b = brute_force_max(&inst.sets, &inst.c, &l).map_err(|e| e.to_string())?;
        min_margin = min_margin.min(achieved * achieved - bound);
        if (achieved - g.achieved).abs() > 1e-9
            || achieved * achieved < bound - 1e-6
            || b.achieved < g.achieved - 1e-12
        {
            violations += 1;
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!(
        "{COLOUR_COUNT} instances, min |sum-c|^2 - bound = {min_margin:.3e}"
    ))
}

fn c6(pool: &mut Pool) -> Outcome {
    let l = Limits::default();
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for id in 0..COLOUR_COUNT {
        let inst = colour_instance(COLOUR_SEED, id);
        let bound = inst
            .sets
            .iter()
            .map(|s| s.radius() * s.radius())
            .sum::<f64>()
            .sqrt();
        let mm = minmax_center(&inst.sets, &l).map_err(|e| e.to_string())?;
        // the value is the largest distance from the center to a tuple sum
        let far = enumerate_tuples(&inst.sets, &l)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|t| {
                let s = selection_sum(&inst.sets, t);
                norm(
                    &s.iter()
                        .zip(&mm.center)
                        .map(|(a, b)| a - b)
                        .collect::<Vec<_>>(),
                )
            })
            .fold(0.0, f64::max);
        min_margin = min_margin.min(mm.value - bound);
        if mm.value < bound - 1e-9 || (far - mm.value).abs() > 1e-9 {
            violations += 1;
        }
        if id % 10 == 0 {
            let bodies: Vec<PointBody> = inst.sets.iter().map(|s| s.to_body()).collect();
            let sum = minkowski_sum(&bodies, &l).unwrap();
            pool.radius(&format!("colourful/{id}"), &sum, &Gauge::Euclidean);
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!(
        "{COLOUR_COUNT} instances, min value - sqrt(sum r^2) = {min_margin:.3e}"
    ))
}

const FACTOR_SEED: u64 = 7;
const FACTOR_COUNT: u64 = 500;

fn c7(pool: &mut Pool) -> Outcome {
    let l = Limits::default();
    let mut failures = Vec::new();
    for id in 0..FACTOR_COUNT {
        let (bodies, gauge) = random_instance(Suite::FactorJ, FACTOR_SEED, id);
        let gauge = gauge.expect("factor-j instances carry a gauge");
        let radii: Vec<f64> = bodies
            .iter()
            .enumerate()
            .map(|(i, k)| pool.radius(&format!("factor-j/{id}/K{i}"), k, &gauge))
            .collect();
        let sum = minkowski_sum(&bodies, &l).unwrap();
        let rs = pool.radius(&format!("factor-j/{id}/sum"), &sum, &gauge);
        let lhs: f64 = radii.iter().sum();
        let rhs = bodies.len() as f64 * rs;
        let r = check_factor_j_gauge(&bodies, &gauge, &l).map_err(|e| e.to_string())?;
        let agrees =
            (r.lhs - lhs).abs() <= 1e-9 * (1.0 + lhs) && (r.rhs - rhs).abs() <= 1e-9 * (1.0 + rhs);
        if lhs > rhs + 1e-9 || !r.pass || !agrees {
            failures.push(id);
        }
    }
    ensure(failures.is_empty(), || {
        format!("failing instances {failures:?}")
    })?;

    let (bodies, sq) = segments_and_square();
    let r = check_factor_j_gauge(&bodies, &sq, &l).map_err(|e| e.to_string())?;
    ensure(r.slack.abs() <= 1e-9, || {
        format!("segments-and-square slack {}", r.slack)
    })?;
    let v = check_cylinder_equality(&bodies, &sq, &r).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::True, || {
        format!("cylinder verdict {:?}: {}", v.verdict, v.reason)
    })?;
    ensure(v.cylinders.len() == 2, || {
        format!("{} cylinders", v.cylinders.len())
    })?;
    for (i, cyl) in v.cylinders.iter().enumerate() {
        // a strip: every normal is parallel to the first
        let a = &cyl.normals[0];
        let strip = cyl
            .normals
            .iter()
            .all(|b| (a[0] * b[1] - a[1] * b[0]).abs() <= 1e-9);
        ensure(strip, || {
            format!("cylinder {i} is not a strip: {:?}", cyl.normals)
        })?;
    }
    for (i, k) in bodies.iter().enumerate() {
        pool.radius(&format!("segments-and-square/K{i}"), k, &sq);
    }
    Ok(format!(
        "{FACTOR_COUNT} instances pass; segments-and-square slack {:.1e}, two strips",
        r.slack
    ))
}

/// Checks a certificate against the definitions: positive weights summing
/// the normals to zero, touch points of `K` on the boundary of the scaled
/// gauge, support size in `[2, n+1]`, and `K` inside the scaled gauge.
fn check_certificate(k: &PointBody, c: &Gauge, r: &CircumResult) -> Result<(), String> {
    let cert = extract_certificate(k, c, r).map_err(|e| e.to_string())?;
    let n = k.dim();
    let m = cert.touch_points.len();
    ensure((2..=n + 1).contains(&m), || {
        format!("support size {m} in dimension {n}")
    })?;
    ensure(cert.normals.len() == m && cert.weights.len() == m, || {
        "ragged certificate".into()
    })?;
    ensure(cert.weights.iter().all(|&w| w > 0.0), || {
        format!("weights {:?}", cert.weights)
    })?;
    let scale: f64 = cert
        .weights
        .iter()
        .zip(&cert.normals)
        .map(|(w, u)| w * norm(u))
        .sum();
    let mut s = vec![0.0; n];
    for (w, u) in cert.weights.iter().zip(&cert.normals) {
        for (si, ui) in s.iter_mut().zip(u) {
            *si += w * ui;
        }
    }
    ensure(norm(&s) <= 1e-7 * scale.max(1.0), || {
        format!("sum of weighted normals {s:?}")
    })?;
    let tol = 1e-7 * r.radius.max(1.0);
    for t in &cert.touch_points {
        ensure(k.points().iter().any(|p| norm(&sub(p, t)) <= 1e-9), || {
            format!("{t:?} is not a point of K")
        })?;
        let g = gauge_value(c, &sub(t, &r.center));
        ensure((g - r.radius).abs() <= tol, || {
            format!("touch point at gauge {g}, radius {}", r.radius)
        })?;
    }
    for p in k.points() {
        let g = gauge_value(c, &sub(p, &r.center));
        ensure(g <= r.radius + tol, || {
            format!("{p:?} outside at gauge {g}")
        })?;
    }
    Ok(())
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn c8(pool: &Pool) -> Outcome {
    let mut checked = 0;
    let mut skipped = 0;
    let mut bad = Vec::new();
    for (label, k, c, r) in &pool.cases {
        if !r.method.is_exact() || r.radius <= 1e-12 {
            skipped += 1;
            continue;
        }
        checked += 1;
        if let Err(e) = check_certificate(k, c, r) {
            bad.push(format!("{label}: {e}"));
        }
    }
    ensure(bad.is_empty(), || {
        format!("{} bad, first: {}", bad.len(), bad[0])
    })?;
    Ok(format!(
        "{checked} certificates verified ({skipped} zero-radius or iterative skipped)"
    ))
}

fn c9() -> Outcome {
    let l = Limits::default();
    let mut notes = Vec::new();
    for n in [2usize, 3] {
        for p in [2.0, f64::INFINITY] {
            let rep = explore_lp_conjecture(n, p, 200, 11, &l).map_err(|e| e.to_string())?;
            let s = rep.min_observed_slack.ok_or("no trials recorded")?;
            ensure(s >= -1e-6 && rep.violations.is_empty(), || {
                format!("n={n} p={p}: min slack {s}")
            })?;
            let bad = verify_conjecture_report(&rep, 1e-6, &l).map_err(|e| e.to_string())?;
            ensure(bad.is_empty(), || format!("n={n} p={p}: {bad:?}"))?;
            notes.push(format!("lp n={n} p={p}: {s:.2e}"));
        }
    }
    let two = explore_n_plus_one(2, 50, 11, &l).map_err(|e| e.to_string())?;
    ensure(
        two.paper_candidates
            .iter()
            .any(|c| (c.value - 2.0).abs() <= 1e-6 && (c.target - 2.0).abs() <= 1e-12),
        || {
            format!(
                "n=2 candidates {:?}",
                two.paper_candidates
                    .iter()
                    .map(|c| c.value)
                    .collect::<Vec<_>>()
            )
        },
    )?;
    let three = explore_n_plus_one(3, 50, 11, &l).map_err(|e| e.to_string())?;
    let again = explore_n_plus_one(3, 50, 11, &l).map_err(|e| e.to_string())?;
    ensure(
        serde_json::to_string(&three).unwrap() == serde_json::to_string(&again).unwrap(),
        || "n=3 report is not deterministic".into(),
    )?;
    let cand = three
        .paper_candidates
        .iter()
        .find(|c| (c.target - 5f64.sqrt()).abs() <= 1e-12)
        .ok_or("no n=3 candidate against sqrt(5)")?;
    for rep in [&two, &three] {
        let bad = verify_conjecture_report(rep, 1e-6, &l).map_err(|e| e.to_string())?;
        ensure(bad.is_empty(), || format!("n={}: {bad:?}", rep.n))?;
    }
    notes.push(format!(
        "n=3 candidate {:.9} vs sqrt(5) {:.9}",
        cand.value,
        5f64.sqrt()
    ));
    Ok(notes.join("; "))
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn body_json(k: &PointBody) -> Value {
    json!({"dim": k.dim(), "points": k.points()})
}

fn sets_json(sets: &[BalancedSet], c: &[f64]) -> Value {
    json!({"dim": c.len(), "c": c, "sets": sets})
}

/// Every CLI call backing criteria 1-9.
fn invocations(dir: &Path) -> Vec<Vec<String>> {
    let l = Limits::default();
    let s = |p: PathBuf| p.display().to_string();
    let mut calls: Vec<Vec<&str>> = Vec::new();
    let mut owned: Vec<Vec<String>> = Vec::new();

    let (k, lb) = kl_pair();
    let sum = minkowski_sum(&[k.clone(), lb.clone()], &l).unwrap();
    for (name, b) in [("k", &k), ("l", &lb), ("kl", &sum)] {
        let f = s(write(dir, &format!("{name}.json"), &body_json(b)));
        owned.push(vec![
            "circumradius".into(),
            "--body".into(),
            f,
            "--certificate".into(),
        ]);
    }
    let kl = s(write(
        dir,
        "kl_instances.json",
        &json!({"instances": [{"bodies": [k, lb]}]}),
    ));
    for suite in ["sqrt-j", "squares"] {
        owned.push(
            ["check", "--suite", suite, "--instances", &kl]
                .map(String::from)
                .to_vec(),
        );
    }

    let hex = s(write(
        dir,
        "hexagon.json",
        &sets_json(&hexagon_sets(0.0), &[0.0, 0.0]),
    ));
    for mode in ["minmax", "brute", "greedy"] {
        owned.push(
            ["select", "--sets", &hex, "--mode", mode]
                .map(String::from)
                .to_vec(),
        );
    }

    for n in [2usize, 3] {
        let cube = s(write(
            dir,
            &format!("cube{n}.json"),
            &body_json(&cube_vertices(n)),
        ));
        for (tag, p) in [
            ("1", json!(1)),
            ("2", json!(2)),
            ("inf", json!("inf")),
            ("3", json!(3)),
        ] {
            let g = s(write(
                dir,
                &format!("l{tag}.json"),
                &json!({"type": "lp", "p": p}),
            ));
            owned.push(
                [
                    "circumradius",
                    "--body",
                    &cube,
                    "--gauge",
                    &g,
                    "--certificate",
                ]
                .map(String::from)
                .to_vec(),
            );
        }
    }

    let ortho: Vec<Value> = (2..=4)
        .map(|n| json!({"bodies": orthogonal_segments(n)}))
        .collect();
    let ortho = s(write(dir, "orthogonal.json", &json!({"instances": ortho})));
    for suite in ["sqrt-j", "squares"] {
        owned.push(
            ["check", "--suite", suite, "--instances", &ortho]
                .map(String::from)
                .to_vec(),
        );
    }

    for id in 0..5 {
        let inst = colour_instance(COLOUR_SEED, id);
        let f = s(write(
            dir,
            &format!("colour{id}.json"),
            &sets_json(&inst.sets, &inst.c),
        ));
        for mode in ["greedy", "brute", "minmax"] {
            owned.push(
                ["select", "--sets", &f, "--mode", mode]
                    .map(String::from)
                    .to_vec(),
            );
        }
    }

    let (bodies, sq) = segments_and_square();
    let ss = s(write(
        dir,
        "segsq.json",
        &json!({"instances": [{"bodies": bodies, "gauge": sq}]}),
    ));
    owned.push(
        ["check", "--suite", "factor-j", "--instances", &ss]
            .map(String::from)
            .to_vec(),
    );
    let count = FACTOR_COUNT.to_string();
    let seed = FACTOR_SEED.to_string();
    calls.push(vec![
        "check", "--suite", "factor-j", "--random", &count, "--seed", &seed,
    ]);

    for n in ["2", "3"] {
        for p in ["2", "inf"] {
            calls.push(vec![
                "explore",
                "--conjecture",
                "lp",
                "--n",
                n,
                "--p",
                p,
                "--trials",
                "200",
                "--seed",
                "11",
            ]);
        }
        calls.push(vec![
            "explore",
            "--conjecture",
            "n-plus-one",
            "--n",
            n,
            "--trials",
            "50",
            "--seed",
            "11",
        ]);
    }
    owned.extend(
        calls
            .into_iter()
            .map(|c| c.into_iter().map(String::from).collect()),
    );
    owned
}

fn run_cli(args: &[String]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_radii"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "`radii {}` exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stdout)
        ));
    }
    Ok(out.stdout)
}

fn c10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let calls = invocations(dir.path());
    for args in &calls {
        let a = run_cli(args)?;
        let b = run_cli(args)?;
        ensure(!a.is_empty(), || {
            format!("`radii {}` printed nothing", args.join(" "))
        })?;
        ensure(a == b, || {
            format!("`radii {}` differs between runs", args.join(" "))
        })?;
    }
    Ok(format!("{} invocations byte-identical", calls.len()))
}

fn main() {
    let mut pool = Pool::default();
    let mut failed = 0;
    let mut report = |id: u32, limit: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let mut res = f();
        let took = start.elapsed();
        if let (Ok(_), Some(limit)) = (&res, limit) {
            if took > limit {
                res = Err(format!("took {took:.2?}, limit {limit:?}"));
            }
        }
        match res {
            Ok(d) => println!("criterion {id:>2}: PASS  ({took:.2?}) {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {id:>2}: FAIL  ({took:.2?}) {d}");
            }
        }
    };
    let secs = |s| Some(Duration::from_secs(s));
    report(1, secs(1), &mut || c1(&mut pool));
    report(2, secs(1), &mut || c2(&mut pool));
    report(3, secs(5), &mut || c3(&mut pool));
    report(4, None, &mut || c4(&mut pool));
    report(5, secs(30), &mut c5);
    report(6, None, &mut || c6(&mut pool));
    report(7, secs(60), &mut || c7(&mut pool));
    report(8, None, &mut || c8(&pool));
    report(9, None, &mut c9);
    report(10, None, &mut c10);
    if failed > 0 {
        panic!("{failed} acceptance criteria failed");
    }
}
