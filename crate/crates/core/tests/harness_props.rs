use radii_core::body::PointBody;
use radii_core::gauge::Gauge;
use radii_core::harness::generate::{
    instance_rng, random_body, random_gauge, random_unit_planar_body, BodyParams,
};
use radii_core::harness::report::InstanceReport;
use radii_core::harness::{
    check_sqrt_j, check_sum_of_squares, explore_lp_conjecture, explore_n_plus_one, replay_matches,
    run_suite, Suite,
};
use radii_core::radii::circumradius;
use radii_core::tol::{Limits, EPS_FEAS};
use rand::Rng;

const TRIALS: u64 = 1000;

/// Bodies for the wider sweep: `n <= 4`, `j <= 4` for every suite.
fn wide_instance(suite: Suite, seed: u64, id: u64) -> (Vec<PointBody>, Option<Gauge>) {
    let mut rng = instance_rng(seed, id);
    if suite == Suite::PlanarThree {
        return (
            (0..3).map(|_| random_unit_planar_body(&mut rng)).collect(),
            None,
        );
    }
    let n = rng.random_range(1..=4);
    let j = rng.random_range(1..=4);
    let bodies = (0..j)
        .map(|_| random_body(&mut rng, n, &BodyParams::default()))
        .collect();
    let gauge = suite.uses_gauge().then(|| random_gauge(&mut rng, n));
    (bodies, gauge)
}

fn sweep(suite: Suite) {
    let l = Limits::default();
    let mut failures = Vec::new();
    for id in 0..TRIALS {
        let (bodies, gauge) = wide_instance(suite, 0xa11ce, id);
        let r = run_suite(suite, &bodies, gauge.as_ref(), &l).unwrap();
        if !r.pass {
            failures.push((id, r.slack));
        }
        assert_eq!(r.pass, r.slack >= -EPS_FEAS);
        if id % 10 == 0 {
            assert!(
                replay_matches(&r, &l).unwrap(),
                "instance {id} does not replay"
            );
            // the embedded artifacts survive serialization
            let back: InstanceReport =
                serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
            assert!(replay_matches(&back, &l).unwrap());
        }
    }
    assert!(failures.is_empty(), "{suite:?} violations: {failures:?}");
}

#[test]
fn sqrt_j_never_fails() {
    sweep(Suite::SqrtJ);
}

#[test]
fn squares_never_fails() {
    sweep(Suite::Squares);
}

#[test]
fn factor_j_never_fails() {
    sweep(Suite::FactorJ);
}

#[test]
fn max_bound_never_fails() {
    sweep(Suite::MaxBound);
}

#[test]
fn planar_three_never_fails() {
    sweep(Suite::PlanarThree);
}

#[test]
fn squares_and_sqrt_j_agree_for_equal_radii() {
    let l = Limits::default();
    for id in 0..300 {
        let (bodies, _) = wide_instance(Suite::SqrtJ, 77, id);
        let bodies: Vec<PointBody> = bodies
            .iter()
            .map(|k| {
                let r = circumradius(k, &Gauge::Euclidean).unwrap().radius;
                if r > 0.0 {
                    k.scale(1.0 / r)
                } else {
                    k.clone()
                }
            })
            .collect();
        let sq = check_sum_of_squares(&bodies, &l).unwrap();
        let sj = check_sqrt_j(&bodies, &l).unwrap();
        if sq.pass {
            assert!(sj.pass, "instance {id}");
        }
        // sum r_i <= sqrt(j) sqrt(sum r_i^2) <= sqrt(j) R
        let j = bodies.len() as f64;
        assert!(sj.lhs <= j.sqrt() * sq.lhs.sqrt() + 1e-12);
        assert!((sj.rhs - j.sqrt() * sq.rhs.sqrt()).abs() <= 1e-9 * (1.0 + sj.rhs));
    }
}

#[test]
fn explorers_are_deterministic() {
    let l = Limits::default();
    let a = explore_lp_conjecture(2, 4.0, 15, 9, &l).unwrap();
    let b = explore_lp_conjecture(2, 4.0, 15, 9, &l).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let a = explore_n_plus_one(3, 15, 9, &l).unwrap();
    let b = explore_n_plus_one(3, 15, 9, &l).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert!(a.violations.is_empty());
}
