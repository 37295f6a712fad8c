use proptest::prelude::*;
use radii_core::body::{minkowski_sum, PointBody};
use radii_core::descent::DescentOptions;
use radii_core::gauge::{Gauge, HPolytope};
use radii_core::radii::{circumradius, circumradius_descent, verify_certificate};
use radii_core::tol::{Limits, EPS_FEAS};

fn body_strategy(n: usize) -> impl Strategy<Value = PointBody> {
    prop::collection::vec(prop::collection::vec(-1.0..1.0f64, n), 1..8)
        .prop_map(|pts| PointBody::new(pts).unwrap())
}

fn sized_body() -> impl Strategy<Value = PointBody> {
    (1usize..=4).prop_flat_map(body_strategy)
}

/// Random polytope with the origin inside: random normals plus the
/// coordinate cross to keep it bounded.
fn gauge_strategy(n: usize) -> impl Strategy<Value = Gauge> {
    prop::collection::vec((prop::collection::vec(-1.0..1.0f64, n), 0.3..2.0f64), 0..6).prop_map(
        move |rows| {
            let mut a: Vec<Vec<f64>> = Vec::new();
            let mut b = Vec::new();
            for k in 0..n {
                for s in [1.0, -1.0] {
                    let mut e = vec![0.0; n];
                    e[k] = s;
                    a.push(e);
                    b.push(1.5);
                }
            }
            for (row, rhs) in rows {
                a.push(row);
                b.push(rhs);
            }
            Gauge::polytope(a, b).unwrap()
        },
    )
}

fn any_gauge(n: usize) -> impl Strategy<Value = Gauge> {
    prop_oneof![
        Just(Gauge::Euclidean),
        Just(Gauge::lp(1.0).unwrap()),
        Just(Gauge::lp(f64::INFINITY).unwrap()),
        gauge_strategy(n),
    ]
}

fn body_and_gauge() -> impl Strategy<Value = (PointBody, Gauge)> {
    (1usize..=3).prop_flat_map(|n| (body_strategy(n), any_gauge(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn translation_invariance((k, c) in body_and_gauge(), t in prop::collection::vec(-3.0..3.0f64, 3)) {
        let t = &t[..k.dim()];
        let r0 = circumradius(&k, &c).unwrap();
        let r1 = circumradius(&k.translate(t), &c).unwrap();
        prop_assert!((r0.radius - r1.radius).abs() <= 1e-8 * (1.0 + r0.radius));
    }

    #[test]
    fn scaling_covariance((k, c) in body_and_gauge(), s in 0.1..10.0f64) {
        let r0 = circumradius(&k, &c).unwrap().radius;
        let r1 = circumradius(&k.scale(s), &c).unwrap().radius;
        prop_assert!((r1 - s * r0).abs() <= 1e-8 * (1.0 + s * r0));
    }

    #[test]
    fn monotone_under_adding_points((k, c) in body_and_gauge(), extra in prop::collection::vec(-1.5..1.5f64, 3)) {
        let bigger = k.with_points(&[extra[..k.dim()].to_vec()]).unwrap();
        let r0 = circumradius(&k, &c).unwrap().radius;
        let r1 = circumradius(&bigger, &c).unwrap().radius;
        prop_assert!(r0 <= r1 + EPS_FEAS);
    }

    #[test]
    fn containment_and_certificates((k, c) in body_and_gauge()) {
        let r = circumradius(&k, &c).unwrap();
        if r.radius > 0.0 {
            for v in k.points() {
                let x: Vec<f64> = v.iter().zip(&r.center).map(|(a, b)| (a - b) / r.radius).collect();
                prop_assert!(c.value(&x) <= 1.0 + 1e-7);
            }
            let cert = r.certificate.as_ref().expect("exact paths carry certificates");
            prop_assert!(verify_certificate(&k, &c, &r, cert, 1e-7).is_ok(),
                "{:?}", verify_certificate(&k, &c, &r, cert, 1e-7));
        }
    }

    #[test]
    fn lp_extremes_match_their_polytopes(k in (1usize..=3).prop_flat_map(body_strategy)) {
        let n = k.dim();
        for (p, h) in [(1.0, HPolytope::cross_polytope(n)), (f64::INFINITY, HPolytope::cube(n))] {
            let a = circumradius(&k, &Gauge::lp(p).unwrap()).unwrap().radius;
            let b = circumradius(&k, &Gauge::Polytope(h)).unwrap().radius;
            prop_assert!((a - b).abs() <= EPS_FEAS);
        }
    }

    #[test]
    fn subadditive(
        (ks, c) in (1usize..=3).prop_flat_map(|n| (prop::collection::vec(body_strategy(n), 1..=3), any_gauge(n)))
    ) {
        let sum = minkowski_sum(&ks, &Limits::default()).unwrap();
        let lhs = circumradius(&sum, &c).unwrap().radius;
        let rhs: f64 = ks.iter().map(|k| circumradius(k, &c).unwrap().radius).sum();
        prop_assert!(lhs <= rhs + EPS_FEAS * (1.0 + rhs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn iterative_l2_agrees_with_welzl(k in sized_body()) {
        let exact = circumradius(&k, &Gauge::Euclidean).unwrap().radius;
        let iter = circumradius_descent(&k, 2.0, &DescentOptions::default()).unwrap().radius;
        prop_assert!((exact - iter).abs() <= 1e-6, "welzl {exact} descent {iter}");
    }

    #[test]
    fn iterative_lp_is_between_its_neighbours(k in (1usize..=3).prop_flat_map(body_strategy), p in 1.2..6.0f64) {
        // B_1 in B_p in B_inf, so radii are ordered the other way
        let r1 = circumradius(&k, &Gauge::lp(1.0).unwrap()).unwrap().radius;
        let rp = circumradius(&k, &Gauge::lp(p).unwrap()).unwrap().radius;
        let ri = circumradius(&k, &Gauge::lp(f64::INFINITY).unwrap()).unwrap().radius;
        prop_assert!(ri <= rp + 1e-6 && rp <= r1 + 1e-6, "{ri} {rp} {r1}");
    }
}
