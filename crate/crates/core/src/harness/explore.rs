//! Numeric explorers for the two open conjectures. They only report.

use rand::Rng;

use super::generate::{instance_rng, random_body, BodyParams};
use super::report::{Candidate, ConjectureReport, ConjectureTag, Trial, SCHEMA};
use crate::body::{minkowski_sum, PointBody};
use crate::colourful::{minmax_center, random_balanced_set_with, BalancedSet};
use crate::descent::DescentOptions;
use crate::error::{Error, Result};
use crate::gauge::{Gauge, PExponent};
use crate::linalg::{axpy, dot, norm2, norm_p, orthonormal_basis, scale, unit};
use crate::radii::{circumradius_descent, circumradius_with, CircumResult};
use crate::tol::{Limits, EPS_FEAS};

/// Number of lowest-slack trials kept in a report.
pub const EXTREMAL_KEEP: usize = 5;
/// Violation threshold on iterative solver paths.
pub const ITERATIVE_VIOLATION: f64 = 1e-6;

const LP_NOTE: &str = "random bodies, j in 2..=3; slack = cir(sum, B_p) - |(cir(K_i, B_p))_i|_p";
const N_PLUS_ONE_NOTE: &str = "n+1 random balanced sets on the unit sphere, k_i in 2..=n+1; \
slack = minmax value - sqrt(n+2). The body-level bound cir(K_1 + ... + K_{n+1}) >= sqrt(n+2) \
for unit-radius bodies is suggested as a consequence but is not checked here.";

fn violation_threshold(exact: bool, scale_ref: f64) -> f64 {
    if exact {
        -EPS_FEAS * (1.0 + scale_ref.abs())
    } else {
        -ITERATIVE_VIOLATION
    }
}

fn keep_extremal(kept: &mut Vec<Trial>, t: &Trial) {
    kept.push(t.clone());
    kept.sort_by(|a, b| a.slack.total_cmp(&b.slack).then(a.trial.cmp(&b.trial)));
    kept.truncate(EXTREMAL_KEEP);
}

/// `|x|_p` with `p = inf` allowed.
fn p_norm(x: &[f64], p: PExponent) -> f64 {
    norm_p(x, p.value())
}

struct LpEval {
    radii: Vec<f64>,
    bound: f64,
    value: f64,
    exact: bool,
}

fn eval_lp(
    bodies: &[PointBody],
    p: PExponent,
    opts: &DescentOptions,
    limits: &Limits,
) -> Result<LpEval> {
    let c = Gauge::Lp(p);
    let radius = |k: &PointBody| -> Result<CircumResult> { circumradius_with(k, &c, opts) };
    let mut exact = true;
    let mut radii = Vec::with_capacity(bodies.len());
    for k in bodies {
        let r = radius(k)?;
        exact &= r.method.is_exact();
        radii.push(r.radius);
    }
    let sum = minkowski_sum(bodies, limits)?;
    let r = radius(&sum)?;
    exact &= r.method.is_exact();
    Ok(LpEval {
        bound: p_norm(&radii, p),
        radii,
        value: r.radius,
        exact,
    })
}

/// Second opinion for a suspected violation at `p = 2`: every radius
/// through the iterative solver instead of Welzl.
fn eval_l2_by_descent(
    bodies: &[PointBody],
    opts: &DescentOptions,
    limits: &Limits,
) -> Result<(f64, f64)> {
    let radii = bodies
        .iter()
        .map(|k| circumradius_descent(k, 2.0, opts).map(|r| r.radius))
        .collect::<Result<Vec<f64>>>()?;
    let sum = minkowski_sum(bodies, limits)?;
    let value = circumradius_descent(&sum, 2.0, opts)?.radius;
    Ok((norm2(&radii), value))
}

/// The tightness example `K_i = [-e_i, e_i]`, `i = 1..n`.
pub fn lp_tightness_candidate(n: usize, p: PExponent, limits: &Limits) -> Result<Candidate> {
    let bodies: Vec<PointBody> = (0..n)
        .map(|i| PointBody::segment(unit(n, i), scale(&unit(n, i), -1.0)))
        .collect::<Result<_>>()?;
    let e = eval_lp(&bodies, p, &DescentOptions::default(), limits)?;
    Ok(Candidate {
        label: "coordinate segments".into(),
        k: None,
        directions: Vec::new(),
        bodies,
        value: e.value,
        target: e.bound,
        slack: e.value - e.bound,
        signed_sum_norm: None,
    })
}

/// Random bodies for trial `id` of the `l_p` explorer.
pub fn lp_trial_bodies(n: usize, seed: u64, id: u64) -> Vec<PointBody> {
    let mut rng = instance_rng(seed, id);
    let j = rng.random_range(2..=3);
    (0..j)
        .map(|_| random_body(&mut rng, n, &BodyParams::default()))
        .collect()
}

/// Samples `cir(sum K_i, B_p) - |(cir(K_i, B_p))_i|_p` over random bodies.
pub fn explore_lp_conjecture(
    n: usize,
    p: f64,
    trials: u64,
    seed: u64,
    limits: &Limits,
) -> Result<ConjectureReport> {
    let pe = PExponent::new(p)?;
    if !(p >= 2.0) {
        return Err(Error::input(format!(
            "p = {p} is outside the conjectured range [2, inf]"
        )));
    }
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    let opts = DescentOptions::default();
    let tight = opts.tightened();
    let mut min: Option<(f64, u64)> = None;
    let mut violations = Vec::new();
    let mut rejected = 0;
    let mut extremal = Vec::new();
    for id in 0..trials {
        let bodies = lp_trial_bodies(n, seed, id);
        let e = eval_lp(&bodies, pe, &opts, limits)?;
        let slack = e.value - e.bound;
        let trial = Trial {
            trial: id,
            bodies,
            sets: Vec::new(),
            radii: e.radii,
            bound: e.bound,
            value: e.value,
            slack,
        };
        if min.is_none_or(|(s, _)| slack < s) {
            min = Some((slack, id));
        }
        if slack < violation_threshold(e.exact, e.bound) {
            let again = eval_lp(&trial.bodies, pe, &tight, limits)?;
            let mut confirmed =
                again.value - again.bound < violation_threshold(again.exact, again.bound);
            if confirmed && p == 2.0 {
                let (bound, value) = eval_l2_by_descent(&trial.bodies, &tight, limits)?;
                confirmed = value - bound < -ITERATIVE_VIOLATION;
            }
            if confirmed {
                violations.push(trial.clone());
            } else {
                rejected += 1;
            }
        }
        keep_extremal(&mut extremal, &trial);
    }
    Ok(ConjectureReport {
        schema: SCHEMA.to_string(),
        conjecture_tag: ConjectureTag::LpSuperadditivity,
        n,
        p: Some(pe),
        seed,
        trials,
        min_observed_slack: min.map(|m| m.0),
        argmin_trial: min.map(|m| m.1),
        violations,
        rejected_candidates: rejected,
        extremal_candidates: extremal,
        paper_candidates: vec![lp_tightness_candidate(n, pe, limits)?],
        note: LP_NOTE.into(),
    })
}

/// Vertices of a regular simplex inscribed in the unit sphere of `R^d`.
pub fn regular_simplex(d: usize) -> Vec<Vec<f64>> {
    let m = d + 1;
    let centred: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|k| if k == i { 1.0 } else { 0.0 } - 1.0 / m as f64)
                .collect()
        })
        .collect();
    let (basis, _) = orthonormal_basis(&centred, 1e-12);
    centred
        .iter()
        .map(|v| {
            let x: Vec<f64> = basis.iter().map(|b| dot(b, v)).collect();
            let nx = norm2(&x);
            scale(&x, 1.0 / nx)
        })
        .collect()
}

/// Candidate directions: a regular `2k`-simplex in the first `2k`
/// coordinates followed by the remaining unit vectors. Even `n` uses
/// `2k = n`.
pub fn n_plus_one_directions(n: usize, k: usize) -> Result<Vec<Vec<f64>>> {
    if k == 0 || 2 * k > n {
        return Err(Error::input(format!(
            "simplex size k = {k} is not admissible for n = {n}"
        )));
    }
    let mut dirs: Vec<Vec<f64>> = regular_simplex(2 * k)
        .into_iter()
        .map(|mut v| {
            v.resize(n, 0.0);
            v
        })
        .collect();
    dirs.extend((2 * k..n).map(|i| unit(n, i)));
    Ok(dirs)
}

/// `|u^1 + ... + u^{k+1} - u^{k+2} - ... - u^{2k+1} + u^{2k+2} + ... |`.
pub fn signed_sum_norm(dirs: &[Vec<f64>], k: usize) -> f64 {
    let mut s = vec![0.0; dirs[0].len()];
    for (i, u) in dirs.iter().enumerate() {
        let sign = if i > k && i <= 2 * k { -1.0 } else { 1.0 };
        axpy(sign, u, &mut s);
    }
    norm2(&s)
}

/// The admissible simplex sizes: `n / 2` for even `n`, every
/// `k = 1..=(n-1)/2` for odd `n`.
pub fn admissible_k(n: usize) -> Vec<usize> {
    if n % 2 == 0 {
        vec![n / 2]
    } else {
        (1..=(n - 1) / 2).collect()
    }
}

pub fn n_plus_one_candidate(n: usize, k: usize, limits: &Limits) -> Result<Candidate> {
    let dirs = n_plus_one_directions(n, k)?;
    let sets: Vec<BalancedSet> = dirs
        .iter()
        .map(|u| BalancedSet::pair(u.clone()))
        .collect::<Result<_>>()?;
    let value = minmax_center(&sets, limits)?.value;
    let target = ((n + 2) as f64).sqrt();
    let label = if n % 2 == 0 {
        format!("regular {n}-simplex")
    } else {
        format!("regular {}-simplex plus {} orthonormal", 2 * k, n - 2 * k)
    };
    Ok(Candidate {
        label,
        k: (n % 2 == 1).then_some(k),
        signed_sum_norm: Some(signed_sum_norm(&dirs, k)),
        directions: dirs,
        bodies: Vec::new(),
        value,
        target,
        slack: value - target,
    })
}

/// Random balanced sets for trial `id` of the `n+1` explorer.
pub fn n_plus_one_trial_sets(n: usize, seed: u64, id: u64) -> Result<Vec<BalancedSet>> {
    let mut rng = instance_rng(seed, id);
    (0..=n)
        .map(|_| {
            let k = rng.random_range(2..=n + 1);
            random_balanced_set_with(n, 1.0, k, &mut rng)
        })
        .collect()
}

/// Samples `min_c max |u^1 + ... + u^{n+1} - c| - sqrt(n+2)` over random
/// balanced families and evaluates the conjectured extremal families.
pub fn explore_n_plus_one(
    n: usize,
    trials: u64,
    seed: u64,
    limits: &Limits,
) -> Result<ConjectureReport> {
    if n < 2 {
        return Err(Error::input(format!("n = {n}, need n >= 2")));
    }
    let target = ((n + 2) as f64).sqrt();
    let tight = DescentOptions::default().tightened();
    let mut min: Option<(f64, u64)> = None;
    let mut violations = Vec::new();
    let mut rejected = 0;
    let mut extremal = Vec::new();
    for id in 0..trials {
        let sets = n_plus_one_trial_sets(n, seed, id)?;
        let value = minmax_center(&sets, limits)?.value;
        let slack = value - target;
        let trial = Trial {
            trial: id,
            bodies: Vec::new(),
            sets,
            radii: Vec::new(),
            bound: target,
            value,
            slack,
        };
        if min.is_none_or(|(s, _)| slack < s) {
            min = Some((slack, id));
        }
        if slack < violation_threshold(true, target) {
            let bodies: Vec<PointBody> = trial.sets.iter().map(BalancedSet::to_body).collect();
            let sum = minkowski_sum(&bodies, limits)?;
            let second = circumradius_descent(&sum, 2.0, &tight)?.radius;
            if second - target < -ITERATIVE_VIOLATION {
                violations.push(trial.clone());
            } else {
                rejected += 1;
            }
        }
        keep_extremal(&mut extremal, &trial);
    }
    let paper_candidates = admissible_k(n)
        .into_iter()
        .map(|k| n_plus_one_candidate(n, k, limits))
        .collect::<Result<_>>()?;
    Ok(ConjectureReport {
        schema: SCHEMA.to_string(),
        conjecture_tag: ConjectureTag::NPlusOneSets,
        n,
        p: None,
        seed,
        trials,
        min_observed_slack: min.map(|m| m.0),
        argmin_trial: min.map(|m| m.1),
        violations,
        rejected_candidates: rejected,
        extremal_candidates: extremal,
        paper_candidates,
        note: N_PLUS_ONE_NOTE.into(),
    })
}

/// Re-derives every number in a conjecture report from the instances it
/// embeds. Returns one message per claim that does not reproduce within
/// `tol` (relative to `1 + |value|`).
pub fn verify_conjecture_report(
    report: &ConjectureReport,
    tol: f64,
    limits: &Limits,
) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let check = |bad: &mut Vec<String>, what: String, got: f64, want: f64| {
        if !((got - want).abs() <= tol * (1.0 + got.abs().max(want.abs()))) {
            bad.push(format!("{what}: recomputed {got}, report says {want}"));
        }
    };
    let opts = DescentOptions::default();
    for (label, trials) in [
        ("extremal", &report.extremal_candidates),
        ("violation", &report.violations),
    ] {
        for t in trials.iter() {
            let name = format!("{label} trial {}", t.trial);
            check(
                &mut bad,
                format!("{name} slack"),
                t.value - t.bound,
                t.slack,
            );
            match report.conjecture_tag {
                ConjectureTag::LpSuperadditivity => {
                    let p = report
                        .p
                        .ok_or_else(|| Error::input("lp report without p"))?;
                    let e = eval_lp(&t.bodies, p, &opts, limits)?;
                    check(&mut bad, format!("{name} value"), e.value, t.value);
                    check(&mut bad, format!("{name} bound"), e.bound, t.bound);
                    if lp_trial_bodies(report.n, report.seed, t.trial) != t.bodies {
                        bad.push(format!("{name}: bodies do not match the seeded stream"));
                    }
                }
                ConjectureTag::NPlusOneSets => {
                    let value = minmax_center(&t.sets, limits)?.value;
                    check(&mut bad, format!("{name} value"), value, t.value);
                    check(
                        &mut bad,
                        format!("{name} bound"),
                        ((report.n + 2) as f64).sqrt(),
                        t.bound,
                    );
                    if n_plus_one_trial_sets(report.n, report.seed, t.trial)? != t.sets {
                        bad.push(format!("{name}: sets do not match the seeded stream"));
                    }
                }
            }
        }
    }
    if let Some(m) = report.min_observed_slack {
        let best = report.extremal_candidates.first().map(|t| t.slack);
        check(
            &mut bad,
            "min_observed_slack".into(),
            best.unwrap_or(f64::NAN),
            m,
        );
    }
    for c in &report.paper_candidates {
        check(
            &mut bad,
            format!("{} slack", c.label),
            c.value - c.target,
            c.slack,
        );
        match report.conjecture_tag {
            ConjectureTag::LpSuperadditivity => {
                let p = report
                    .p
                    .ok_or_else(|| Error::input("lp report without p"))?;
                let fresh = lp_tightness_candidate(report.n, p, limits)?;
                check(&mut bad, format!("{} value", c.label), fresh.value, c.value);
                check(
                    &mut bad,
                    format!("{} target", c.label),
                    fresh.target,
                    c.target,
                );
            }
            ConjectureTag::NPlusOneSets => {
                let k = c.k.unwrap_or(report.n / 2);
                let sets: Vec<BalancedSet> = c
                    .directions
                    .iter()
                    .map(|u| BalancedSet::pair(u.clone()))
                    .collect::<Result<_>>()?;
                check(
                    &mut bad,
                    format!("{} value", c.label),
                    minmax_center(&sets, limits)?.value,
                    c.value,
                );
                check(
                    &mut bad,
                    format!("{} target", c.label),
                    ((report.n + 2) as f64).sqrt(),
                    c.target,
                );
                if let Some(s) = c.signed_sum_norm {
                    check(
                        &mut bad,
                        format!("{} signed sum", c.label),
                        signed_sum_norm(&c.directions, k),
                        s,
                    );
                }
            }
        }
    }
    Ok(bad)
}
