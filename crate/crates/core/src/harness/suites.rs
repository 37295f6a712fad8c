//! Inequality suites for Minkowski sums of bodies.

use rand::Rng;

use super::generate::{
    instance_rng, random_body, random_gauge, random_unit_planar_body, BodyParams,
};
use super::report::{
    Artifacts, Cylinder, CylinderVerdict, EqualityCheck, HexagonCheck, InstanceReport, Suite,
    Verdict, SCHEMA,
};
use crate::body::{minkowski_sum, PointBody};
use crate::colourful::{detect_hexagon_equality, BalancedSet};
use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::hull::in_hull;
use crate::linalg::{dot, norm2, scale};
use crate::lp::{LinearProgram, LpStatus, Relation, Sense};
use crate::radii::circumradius;
use crate::tol::{Limits, EPS_CERT, EPS_EQ, EPS_FEAS};

fn measure(bodies: &[PointBody], gauge: &Gauge, limits: &Limits) -> Result<Artifacts> {
    if bodies.is_empty() {
        return Err(Error::input("an instance needs at least one body"));
    }
    let sum = minkowski_sum(bodies, limits)?;
    let radii = bodies
        .iter()
        .map(|k| circumradius(k, gauge).map(|r| r.radius))
        .collect::<Result<Vec<f64>>>()?;
    let total = circumradius(&sum, gauge)?;
    Ok(Artifacts {
        bodies: bodies.to_vec(),
        gauge: None,
        radii,
        sum_radius: total.radius,
        sum_center: total.center,
    })
}

fn finish(suite: Suite, lhs: f64, rhs: f64, artifacts: Artifacts) -> InstanceReport {
    let slack = rhs - lhs;
    InstanceReport {
        schema: SCHEMA.to_string(),
        instance_id: 0,
        seed: None,
        theorem_tag: suite,
        lhs,
        rhs,
        slack,
        ratio: (rhs != 0.0).then(|| lhs / rhs),
        pass: slack >= -EPS_FEAS,
        equality_flag: slack.abs() <= EPS_EQ,
        artifacts,
        equality: None,
    }
}

/// `sum cir(K_i) <= sqrt(j) cir(K_1 + ... + K_j)`, Euclidean.
pub fn check_sqrt_j(bodies: &[PointBody], limits: &Limits) -> Result<InstanceReport> {
    let a = measure(bodies, &Gauge::Euclidean, limits)?;
    let lhs = a.radii.iter().sum();
    let rhs = (bodies.len() as f64).sqrt() * a.sum_radius;
    Ok(finish(Suite::SqrtJ, lhs, rhs, a))
}

/// `sum cir(K_i)^2 <= cir(K_1 + ... + K_j)^2`, Euclidean.
pub fn check_sum_of_squares(bodies: &[PointBody], limits: &Limits) -> Result<InstanceReport> {
    let a = measure(bodies, &Gauge::Euclidean, limits)?;
    let lhs = a.radii.iter().map(|r| r * r).sum();
    let rhs = a.sum_radius * a.sum_radius;
    Ok(finish(Suite::Squares, lhs, rhs, a))
}

/// `sum cir(K_i, C) <= j cir(K_1 + ... + K_j, C)`. When the bound is
/// attained the cylinder construction is checked too.
pub fn check_factor_j_gauge(
    bodies: &[PointBody],
    c: &Gauge,
    limits: &Limits,
) -> Result<InstanceReport> {
    let mut a = measure(bodies, c, limits)?;
    a.gauge = Some(c.clone());
    let lhs = a.radii.iter().sum();
    let rhs = bodies.len() as f64 * a.sum_radius;
    let mut report = finish(Suite::FactorJ, lhs, rhs, a);
    if report.equality_flag {
        let v = check_cylinder_equality(bodies, c, &report)?;
        report.equality = Some(EqualityCheck::Cylinder(v));
    }
    Ok(report)
}

/// `max cir(K_i, C) <= cir(K_1 + ... + K_j, C)`.
pub fn check_max_lower_bound(
    bodies: &[PointBody],
    c: &Gauge,
    limits: &Limits,
) -> Result<InstanceReport> {
    let mut a = measure(bodies, c, limits)?;
    a.gauge = Some(c.clone());
    let lhs = a.radii.iter().copied().fold(0.0, f64::max);
    let rhs = a.sum_radius;
    Ok(finish(Suite::MaxBound, lhs, rhs, a))
}

/// `cir(K_1 + K_2 + K_3) >= 2` for planar bodies of circumradius 1
/// inside the unit disk. At equality the touch points are tested for the
/// hexagon configuration.
pub fn check_planar_three(bodies: &[PointBody], limits: &Limits) -> Result<InstanceReport> {
    if bodies.len() != 3 {
        return Err(Error::input(format!(
            "planar-three needs 3 bodies, got {}",
            bodies.len()
        )));
    }
    for (i, k) in bodies.iter().enumerate() {
        if k.dim() != 2 {
            return Err(Error::input(format!("body {i} is not planar")));
        }
        let far = k.points().iter().map(|p| norm2(p)).fold(0.0, f64::max);
        if far > 1.0 + EPS_CERT {
            return Err(Error::input(format!(
                "body {i} leaves the unit disk (max point norm {far})"
            )));
        }
    }
    let a = measure(bodies, &Gauge::Euclidean, limits)?;
    if let Some(i) = a.radii.iter().position(|r| (r - 1.0).abs() > EPS_EQ) {
        return Err(Error::input(format!(
            "body {i} has circumradius {}, expected 1",
            a.radii[i]
        )));
    }
    let mut report = finish(Suite::PlanarThree, 2.0, a.sum_radius, a);
    if report.equality_flag {
        report.equality = Some(EqualityCheck::Hexagon(hexagon_check(bodies)?));
    }
    Ok(report)
}

fn hexagon_check(bodies: &[PointBody]) -> Result<HexagonCheck> {
    let mut sets = Vec::with_capacity(3);
    for k in bodies {
        let r = circumradius(k, &Gauge::Euclidean)?;
        let cert = r
            .certificate
            .ok_or_else(|| Error::NoCertificate("unit-radius body without certificate".into()))?;
        sets.push(BalancedSet::new(1.0, cert.normals, Some(cert.weights))?);
    }
    let detected = detect_hexagon_equality(&sets, EPS_EQ)?;
    let segments_contained = bodies
        .iter()
        .zip(&sets)
        .map(|(k, s)| {
            let u = &s.vectors()[0];
            Ok(s.len() == 2 && in_hull(k.points(), u)? && in_hull(k.points(), &scale(u, -1.0))?)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(HexagonCheck {
        sets,
        detected,
        segments_contained,
    })
}

/// `min lambda  s.t.  a_l . z + lambda s_l >= h_K(a_l)`: the smallest
/// homothet of `{a_l . x <= s_l}` containing a translate of `K`.
fn scaled_container(k: &[&PointBody], normals: &[Vec<f64>], s: &[f64]) -> Result<Option<f64>> {
    let n = normals[0].len();
    let mut obj = vec![0.0; n + 1];
    obj[n] = 1.0;
    let mut lp = LinearProgram::new(Sense::Minimize, obj);
    for (a, &sl) in normals.iter().zip(s) {
        let h: f64 = k.iter().map(|b| b.support(a).0).sum();
        let mut row = a.clone();
        row.push(sl);
        lp.add(row, Relation::Ge, h);
    }
    let sol = lp.solve()?;
    Ok((sol.status == LpStatus::Optimal).then_some(sol.objective))
}

/// Builds the cylinders `C_i` from the certificates of `cir(K_i, C)` and
/// checks the equality characterization: `cir(K_i, C_i) = 1`, the sum of
/// the other bodies is flat along the normals of `C_i`, and the sum fits
/// in `z + lambda C` inside every `C_i`.
pub fn check_cylinder_equality(
    bodies: &[PointBody],
    c: &Gauge,
    report: &InstanceReport,
) -> Result<CylinderVerdict> {
    if !report.equality_flag {
        return Err(Error::input("cylinder check needs an instance at equality"));
    }
    let inconclusive = |reason: &str| CylinderVerdict {
        verdict: Verdict::Inconclusive,
        reason: reason.to_string(),
        cylinders: Vec::new(),
        cylinder_radii: Vec::new(),
        orthogonality_defect: Vec::new(),
        containment_scale: None,
    };
    let n = bodies[0].dim();
    let Some(poly) = c.as_polytope(n) else {
        return Ok(inconclusive("gauge is not polyhedral"));
    };
    let mut cylinders = Vec::with_capacity(bodies.len());
    let mut cylinder_radii = Vec::with_capacity(bodies.len());
    let mut relative = Vec::with_capacity(bodies.len());
    for k in bodies {
        let r = circumradius(k, c)?;
        let Some(cert) = r.certificate.filter(|x| !x.approximate) else {
            return Ok(inconclusive("a body has no exact certificate"));
        };
        let offsets: Vec<f64> = cert
            .normals
            .iter()
            .zip(&cert.touch_points)
            .map(|(a, p)| dot(a, p))
            .collect();
        // Offsets relative to the optimal center, which is interior.
        let s: Vec<f64> = cert
            .normals
            .iter()
            .zip(&offsets)
            .map(|(a, o)| o - dot(a, &r.center))
            .collect();
        let lam = scaled_container(&[k], &cert.normals, &s)?
            .ok_or_else(|| Error::solver("cylinder radius LP did not solve"))?;
        cylinder_radii.push(lam);
        relative.push((cert.normals.clone(), s));
        cylinders.push(Cylinder {
            normals: cert.normals,
            offsets,
        });
    }
    let scale_ref = 1.0 + report.artifacts.sum_radius;
    let mut defects = Vec::with_capacity(bodies.len());
    for (i, cyl) in cylinders.iter().enumerate() {
        let mut worst: f64 = 0.0;
        for a in &cyl.normals {
            let neg = scale(a, -1.0);
            let width: f64 = bodies
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != i)
                .map(|(_, k)| k.support(a).0 + k.support(&neg).0)
                .sum();
            worst = worst.max(width / norm2(a));
        }
        defects.push(worst);
    }
    // lambda C must fit in every cylinder: lambda h_C(a) <= s_a.
    let mut bound = f64::INFINITY;
    for (normals, s) in &relative {
        for (a, sa) in normals.iter().zip(s) {
            bound = bound.min(sa / c.support(a)?);
        }
    }
    let refs: Vec<&PointBody> = bodies.iter().collect();
    let ones = vec![1.0; poly.normals().len()];
    let lam_sum = scaled_container(&refs, poly.normals(), &ones)?
        .ok_or_else(|| Error::solver("containment LP did not solve"))?;
    let containment = lam_sum / bound;

    let mut verdict = CylinderVerdict {
        verdict: Verdict::True,
        reason: "all three conditions hold".into(),
        cylinders,
        cylinder_radii,
        orthogonality_defect: defects,
        containment_scale: Some(containment),
    };
    if let Some(i) = verdict
        .cylinder_radii
        .iter()
        .position(|r| (r - 1.0).abs() > EPS_EQ)
    {
        verdict.verdict = Verdict::False;
        verdict.reason = format!(
            "cir(K_{}, C_{}) = {}",
            i + 1,
            i + 1,
            verdict.cylinder_radii[i]
        );
    } else if let Some(i) = verdict
        .orthogonality_defect
        .iter()
        .position(|d| *d > EPS_EQ * scale_ref)
    {
        verdict.verdict = Verdict::False;
        verdict.reason = format!(
            "the other bodies are not flat along the normals of C_{}",
            i + 1
        );
    } else if containment > 1.0 + EPS_EQ {
        verdict.verdict = Verdict::False;
        verdict.reason =
            format!("no homothet of C fits the sum inside the cylinders (scale {containment})");
    }
    Ok(verdict)
}

/// Runs one suite; gauge suites default to the Euclidean ball.
pub fn run_suite(
    suite: Suite,
    bodies: &[PointBody],
    gauge: Option<&Gauge>,
    limits: &Limits,
) -> Result<InstanceReport> {
    let euclid = Gauge::Euclidean;
    let c = gauge.unwrap_or(&euclid);
    match suite {
        Suite::SqrtJ => check_sqrt_j(bodies, limits),
        Suite::Squares => check_sum_of_squares(bodies, limits),
        Suite::FactorJ => check_factor_j_gauge(bodies, c, limits),
        Suite::MaxBound => check_max_lower_bound(bodies, c, limits),
        Suite::PlanarThree => check_planar_three(bodies, limits),
    }
}

/// Recomputes a report from its embedded artifacts.
pub fn replay(report: &InstanceReport, limits: &Limits) -> Result<InstanceReport> {
    let mut r = run_suite(
        report.theorem_tag,
        &report.artifacts.bodies,
        report.artifacts.gauge.as_ref(),
        limits,
    )?;
    r.instance_id = report.instance_id;
    r.seed = report.seed;
    Ok(r)
}

/// Whether replaying reproduces `lhs` and `rhs` within `EPS_FEAS`.
pub fn replay_matches(report: &InstanceReport, limits: &Limits) -> Result<bool> {
    let r = replay(report, limits)?;
    let close = |a: f64, b: f64| (a - b).abs() <= EPS_FEAS * (1.0 + a.abs());
    Ok(close(r.lhs, report.lhs) && close(r.rhs, report.rhs))
}

/// Bodies (and gauge) of random instance `id` for a suite.
pub fn random_instance(suite: Suite, seed: u64, id: u64) -> (Vec<PointBody>, Option<Gauge>) {
    let mut rng = instance_rng(seed, id);
    let params = BodyParams::default();
    match suite {
        Suite::SqrtJ | Suite::Squares => {
            let n = rng.random_range(1..=4);
            let j = rng.random_range(1..=4);
            (
                (0..j).map(|_| random_body(&mut rng, n, &params)).collect(),
                None,
            )
        }
        Suite::FactorJ | Suite::MaxBound => {
            let n = rng.random_range(1..=3);
            let j = rng.random_range(1..=3);
            let bodies = (0..j).map(|_| random_body(&mut rng, n, &params)).collect();
            (bodies, Some(random_gauge(&mut rng, n)))
        }
        Suite::PlanarThree => (
            (0..3).map(|_| random_unit_planar_body(&mut rng)).collect(),
            None,
        ),
    }
}

/// Runs `count` random instances; a fixed `gauge` replaces the random
/// ones and must match every instance's dimension.
pub fn run_random(
    suite: Suite,
    count: u64,
    seed: u64,
    gauge: Option<&Gauge>,
    limits: &Limits,
) -> Result<Vec<InstanceReport>> {
    (0..count)
        .map(|id| {
            let (mut bodies, random_gauge) = random_instance(suite, seed, id);
            let g = match gauge {
                Some(g) => {
                    if let Some(d) = g.dim() {
                        bodies = fit_dimension(bodies, d);
                    }
                    Some(g.clone())
                }
                None => random_gauge,
            };
            let mut r = run_suite(suite, &bodies, g.as_ref(), limits)?;
            r.instance_id = id;
            r.seed = Some(seed);
            Ok(r)
        })
        .collect()
}

/// Pads or truncates coordinates so random bodies match a fixed gauge.
fn fit_dimension(bodies: Vec<PointBody>, d: usize) -> Vec<PointBody> {
    bodies
        .into_iter()
        .map(|b| {
            if b.dim() == d {
                return b;
            }
            let pts = b
                .points()
                .iter()
                .map(|p| (0..d).map(|k| p.get(k).copied().unwrap_or(0.0)).collect())
                .collect();
            PointBody::with_dim(d, pts).expect("resized body is valid")
        })
        .collect()
}
