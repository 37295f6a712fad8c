//! Circumradius `cir(K, C)` of a point body with respect to a gauge, with
//! optimal-containment certificates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ball::min_enclosing_ball;
use crate::body::PointBody;
use crate::descent::{lp_gradient, minimize_max_lp, DescentOptions};
use crate::error::{Error, Result};
use crate::gauge::{Gauge, HPolytope};
use crate::hull::{caratheodory_reduce, in_hull};
use crate::linalg::{axpy, dot, norm2, random_unit, scale, sub};
use crate::lp::{LinearProgram, LpStatus, Relation, Sense};
use crate::tol::{EPS_CERT, EPS_POS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Radius zero, no solver needed.
    Trivial,
    Welzl,
    Lp,
    Descent,
}

impl Method {
    /// Whether the radius and certificate come from an exact solver path.
    pub fn is_exact(self) -> bool {
        !matches!(self, Method::Descent)
    }
}

/// Witness of optimal containment: `sum_i weights[i] * normals[i] = 0`,
/// each normal an outer normal of `center + radius * C` at its touch point.
///
/// Normals are gradients of the gauge function at `(p - center) / radius`:
/// unit vectors for the Euclidean ball, facet normals `a_i` for polytopes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub touch_points: Vec<Vec<f64>>,
    pub normals: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub approximate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircumResult {
    pub radius: f64,
    pub center: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    pub method: Method,
}

fn check_dim(k: &PointBody, c: &Gauge) -> Result<()> {
    match c.dim() {
        Some(d) if d != k.dim() => Err(Error::input(format!(
            "dimension mismatch: body has dimension {}, gauge has dimension {d}",
            k.dim()
        ))),
        _ => Ok(()),
    }
}

fn degenerate(k: &PointBody) -> Option<CircumResult> {
    let first = &k.points()[0];
    if k.points().iter().all(|p| p == first) {
        Some(CircumResult {
            radius: 0.0,
            center: first.clone(),
            certificate: None,
            method: Method::Trivial,
        })
    } else {
        None
    }
}

/// `cir(K, C)` with an optimal center and, for radius > 0, a certificate.
pub fn circumradius(k: &PointBody, c: &Gauge) -> Result<CircumResult> {
    circumradius_with(k, c, &DescentOptions::default())
}

/// As [`circumradius`], with explicit options for the iterative path.
pub fn circumradius_with(k: &PointBody, c: &Gauge, opts: &DescentOptions) -> Result<CircumResult> {
    check_dim(k, c)?;
    if let Some(r) = degenerate(k) {
        return Ok(r);
    }
    match c {
        Gauge::Euclidean => euclidean(k),
        Gauge::Lp(p) if p.value() == 2.0 => euclidean(k),
        Gauge::Lp(p) => match c.as_polytope(k.dim()) {
            Some(h) => polytope(k, &h),
            None => descent(k, p.value(), opts),
        },
        Gauge::Polytope(h) => polytope(k, h),
    }
}

/// `cir(K, B_p)` through the iterative solver, whatever `p` is.
pub fn circumradius_descent(k: &PointBody, p: f64, opts: &DescentOptions) -> Result<CircumResult> {
    if let Some(r) = degenerate(k) {
        return Ok(r);
    }
    descent(k, p, opts)
}

fn euclidean(k: &PointBody) -> Result<CircumResult> {
    let ball = min_enclosing_ball(k)?;
    let pts = k.points();
    let touch_points: Vec<Vec<f64>> = ball.support.iter().map(|&i| pts[i].clone()).collect();
    let normals = touch_points
        .iter()
        .map(|p| scale(&sub(p, &ball.center), 1.0 / ball.radius))
        .collect();
    Ok(CircumResult {
        radius: ball.radius,
        center: ball.center,
        certificate: Some(Certificate {
            touch_points,
            normals,
            weights: ball.weights,
            approximate: false,
        }),
        method: Method::Welzl,
    })
}

/// `min rho  s.t.  a_i . z + rho >= h_K(a_i)` for every facet `i`.
fn polytope(k: &PointBody, h: &HPolytope) -> Result<CircumResult> {
    let n = k.dim();
    let normals = h.normals();
    let supports: Vec<(f64, usize)> = normals.iter().map(|a| k.support(a)).collect();
    let mut obj = vec![0.0; n + 1];
    obj[n] = 1.0;
    let mut lp = LinearProgram::new(Sense::Minimize, obj);
    for (a, &(hv, _)) in normals.iter().zip(&supports) {
        let mut row = a.clone();
        row.push(1.0);
        lp.add(row, Relation::Ge, hv);
    }
    let sol = lp.solve()?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::solver(format!(
            "circumradius LP ended {:?}",
            sol.status
        )));
    }
    let center = sol.x[..n].to_vec();
    // Recompute from the center so containment holds exactly.
    let radius = k
        .points()
        .iter()
        .map(|v| h.gauge(&sub(v, &center)))
        .fold(0.0, f64::max);
    let mut active: Vec<usize> = (0..normals.len())
        .filter(|&i| sol.duals[i] > EPS_POS)
        .collect();
    let mut weights: Vec<f64> = active.iter().map(|&i| sol.duals[i]).collect();
    if active.len() > n + 1 {
        let act: Vec<Vec<f64>> = active.iter().map(|&i| normals[i].clone()).collect();
        let comb = caratheodory_reduce(&act, &vec![0.0; n])?;
        active = comb.indices.iter().map(|&j| active[j]).collect();
        weights = comb.weights;
    }
    let total: f64 = weights.iter().sum();
    let certificate = (radius > 0.0 && active.len() >= 2).then(|| Certificate {
        touch_points: active
            .iter()
            .map(|&i| k.points()[supports[i].1].clone())
            .collect(),
        normals: active.iter().map(|&i| normals[i].clone()).collect(),
        weights: weights.iter().map(|w| w / total).collect(),
        approximate: false,
    });
    Ok(CircumResult {
        radius,
        center,
        certificate,
        method: Method::Lp,
    })
}

fn descent(k: &PointBody, p: f64, opts: &DescentOptions) -> Result<CircumResult> {
    let out = minimize_max_lp(k.points(), p, opts)?;
    let certificate = if out.active.is_empty() {
        approximate_certificate(k, p, &out.center, out.radius)
    } else {
        Some(Certificate {
            touch_points: out.active.iter().map(|&i| k.points()[i].clone()).collect(),
            normals: out
                .active
                .iter()
                .map(|&i| lp_gradient(&sub(&k.points()[i], &out.center), p))
                .collect(),
            weights: out.weights,
            approximate: true,
        })
    };
    Ok(CircumResult {
        radius: out.radius,
        center: out.center,
        certificate,
        method: Method::Descent,
    })
}

/// Certificate from the points within `EPS_CERT` of the boundary, with
/// weights making the normal combination as small as possible.
fn approximate_certificate(
    k: &PointBody,
    p: f64,
    center: &[f64],
    radius: f64,
) -> Option<Certificate> {
    let n = k.dim();
    let near: Vec<usize> = (0..k.len())
        .filter(|&i| {
            crate::linalg::norm_p(&sub(&k.points()[i], center), p) >= radius * (1.0 - EPS_CERT)
        })
        .collect();
    let normals: Vec<Vec<f64>> = near
        .iter()
        .map(|&i| lp_gradient(&sub(&k.points()[i], center), p))
        .collect();
    // min s  s.t. -s <= (sum w_i u_i)_k <= s,  sum w = 1,  w >= 0
    let m = near.len();
    let mut obj = vec![0.0; m + 1];
    obj[m] = 1.0;
    let mut lp = LinearProgram::new(Sense::Minimize, obj);
    lp.all_nonnegative();
    for d in 0..n {
        let mut row: Vec<f64> = normals.iter().map(|u| u[d]).collect();
        row.push(-1.0);
        lp.add(row.clone(), Relation::Le, 0.0);
        row[m] = 1.0;
        lp.add(row, Relation::Ge, 0.0);
    }
    let mut ones = vec![1.0; m];
    ones.push(0.0);
    lp.add(ones, Relation::Eq, 1.0);
    let sol = lp.solve().ok()?;
    if !sol.is_optimal() {
        return None;
    }
    let mut target = vec![0.0; n];
    for (w, u) in sol.x[..m].iter().zip(&normals) {
        axpy(*w, u, &mut target);
    }
    let comb = caratheodory_reduce(&normals, &target).ok()?;
    if comb.indices.len() < 2 {
        return None;
    }
    Some(Certificate {
        touch_points: comb
            .indices
            .iter()
            .map(|&j| k.points()[near[j]].clone())
            .collect(),
        normals: comb.indices.iter().map(|&j| normals[j].clone()).collect(),
        weights: comb.weights,
        approximate: true,
    })
}

/// Certificate for an optimal `result`. Fails with `NoCertificate` for
/// radius-zero bodies and when `result` is not optimal for `(K, C)`.
pub fn extract_certificate(k: &PointBody, c: &Gauge, result: &CircumResult) -> Result<Certificate> {
    if result.radius == 0.0 {
        return Err(Error::NoCertificate("radius is zero".into()));
    }
    if let Some(cert) = &result.certificate {
        return Ok(cert.clone());
    }
    let fresh = circumradius(k, c)?;
    let tol = crate::tol::EPS_EQ * fresh.radius.max(1.0);
    if (fresh.radius - result.radius).abs() > tol {
        return Err(Error::NoCertificate(format!(
            "result radius {} is not optimal ({})",
            result.radius, fresh.radius
        )));
    }
    fresh
        .certificate
        .ok_or_else(|| Error::NoCertificate("solver produced no certificate".into()))
}

/// Re-checks every certificate invariant from scratch; returns the first
/// violation found.
pub fn verify_certificate(
    k: &PointBody,
    c: &Gauge,
    result: &CircumResult,
    cert: &Certificate,
    tol: f64,
) -> std::result::Result<(), String> {
    let n = k.dim();
    let m = cert.touch_points.len();
    if cert.normals.len() != m || cert.weights.len() != m {
        return Err("certificate lists have different lengths".into());
    }
    if !(2..=n + 1).contains(&m) {
        return Err(format!("certificate size {m} outside [2, {}]", n + 1));
    }
    let r = result.radius;
    if !(r > 0.0) {
        return Err("certificate for a radius-zero body".into());
    }
    let z = &result.center;
    let mut sum = vec![0.0; n];
    for i in 0..m {
        let p = &cert.touch_points[i];
        let u = &cert.normals[i];
        let w = cert.weights[i];
        if !(w > EPS_POS) {
            return Err(format!("weight {i} = {w} is not positive"));
        }
        if !k.points().iter().any(|x| x == p) {
            return Err(format!("touch point {i} is not a point of K"));
        }
        let g = c.value(&scale(&sub(p, z), 1.0 / r));
        if (g - 1.0).abs() > tol {
            return Err(format!("touch point {i} has gauge value {g}"));
        }
        let un = norm2(u);
        if un == 0.0 {
            return Err(format!("normal {i} is zero"));
        }
        // outer normal of z + rC at p: u . (p - z) = r h_C(u)
        let h = c.support(u).map_err(|e| e.to_string())?;
        let gap = dot(u, &sub(p, z)) - r * h;
        if gap.abs() > tol * r.max(1.0) * un {
            return Err(format!(
                "normal {i} does not support the scaled gauge at its touch point ({gap})"
            ));
        }
        for x in k.points() {
            if dot(u, &sub(x, p)) > tol * r.max(1.0) * un {
                return Err(format!("normal {i} does not support K"));
            }
        }
        axpy(w, u, &mut sum);
    }
    let total: f64 = cert.weights.iter().sum();
    let mag: f64 = cert
        .weights
        .iter()
        .zip(&cert.normals)
        .map(|(w, u)| w * norm2(u))
        .sum::<f64>()
        .max(total);
    if norm2(&sum) > tol * mag {
        return Err(format!("weighted normal sum has norm {}", norm2(&sum)));
    }
    Ok(())
}

/// Whether every closed half-sphere `{x . a >= 0}` meets the point set,
/// for points on the unit sphere. Decided exactly by `0 in conv(K)`;
/// `samples` random directions are tried first as a quick refutation.
pub fn check_condition_4(k: &PointBody, samples: usize) -> Result<bool> {
    for (i, p) in k.points().iter().enumerate() {
        if (norm2(p) - 1.0).abs() > EPS_CERT {
            return Err(Error::input(format!(
                "point {i} has norm {}, expected a point of the unit sphere",
                norm2(p)
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0d4);
    for _ in 0..samples {
        let a = random_unit(k.dim(), &mut rng);
        if k.points().iter().all(|x| dot(x, &a) < -EPS_CERT) {
            return Ok(false);
        }
    }
    in_hull(k.points(), &vec![0.0; k.dim()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::minkowski_sum;
    use crate::tol::Limits;

    fn cube(n: usize) -> PointBody {
        let pairs: Vec<PointBody> = (0..n)
            .map(|i| {
                let mut a = vec![0.0; n];
                a[i] = 1.0;
                PointBody::segment(a.clone(), scale(&a, -1.0)).unwrap()
            })
            .collect();
        minkowski_sum(&pairs, &Limits::default()).unwrap()
    }

    fn body(p: &[&[f64]]) -> PointBody {
        PointBody::new(p.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn cube_identity_exact_paths() {
        for n in [2, 3] {
            for p in [1.0, 2.0, f64::INFINITY] {
                let c = Gauge::lp(p).unwrap();
                let r = circumradius(&cube(n), &c).unwrap();
                let want = (n as f64).powf(1.0 / p);
                assert!((r.radius - want).abs() < 1e-9, "n={n} p={p}: {}", r.radius);
                assert!(r.method.is_exact());
                let cert = r.certificate.clone().unwrap();
                verify_certificate(&cube(n), &c, &r, &cert, 1e-7).unwrap();
            }
        }
    }

    #[test]
    fn cube_identity_l3() {
        for n in [2, 3] {
            let c = Gauge::lp(3.0).unwrap();
            let r = circumradius(&cube(n), &c).unwrap();
            assert!((r.radius - (n as f64).powf(1.0 / 3.0)).abs() < 1e-6);
            assert_eq!(r.method, Method::Descent);
            let cert = r.certificate.clone().unwrap();
            assert!(cert.approximate);
            verify_certificate(&cube(n), &c, &r, &cert, 1e-6).unwrap();
        }
    }

    #[test]
    fn segment_in_unit_square() {
        let sq = Gauge::Polytope(HPolytope::from_box(&[-0.5, -0.5], &[0.5, 0.5]).unwrap());
        let k = body(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let r = circumradius(&k, &sq).unwrap();
        assert!((r.radius - 1.0).abs() < 1e-12);
        verify_certificate(&k, &sq, &r, r.certificate.as_ref().unwrap(), 1e-7).unwrap();
    }

    #[test]
    fn single_point() {
        let k = body(&[&[2.0, 3.0]]);
        for c in [
            Gauge::Euclidean,
            Gauge::lp(3.0).unwrap(),
            Gauge::lp(1.0).unwrap(),
        ] {
            let r = circumradius(&k, &c).unwrap();
            assert_eq!(r.radius, 0.0);
            assert_eq!(r.center, vec![2.0, 3.0]);
            assert!(r.certificate.is_none());
            assert!(matches!(
                extract_certificate(&k, &c, &r),
                Err(Error::NoCertificate(_))
            ));
        }
    }

    #[test]
    fn dimension_mismatch() {
        let c = Gauge::Polytope(HPolytope::cube(3));
        assert!(matches!(
            circumradius(&body(&[&[0.0, 1.0]]), &c),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn antipodal_certificate() {
        let k = body(&[&[1.0, 0.0], &[-1.0, 0.0]]);
        let r = circumradius(&k, &Gauge::Euclidean).unwrap();
        let cert = extract_certificate(&k, &Gauge::Euclidean, &r).unwrap();
        assert_eq!(cert.touch_points, vec![vec![1.0, 0.0], vec![-1.0, 0.0]]);
        assert_eq!(cert.normals, vec![vec![1.0, 0.0], vec![-1.0, 0.0]]);
        assert!((cert.weights[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rhombus_certificate() {
        let t = 2f64.sqrt() - 1.0;
        let k = body(&[&[1.0, 0.0], &[-1.0, 0.0], &[0.0, t], &[0.0, -t]]);
        let r = circumradius(&k, &Gauge::Euclidean).unwrap();
        assert!((r.radius - 1.0).abs() < 1e-12);
        let cert = r.certificate.unwrap();
        let mut tp = cert.touch_points.clone();
        tp.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert_eq!(tp, vec![vec![-1.0, 0.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn square_under_cross_polytope() {
        let k = cube(2);
        let c = Gauge::lp(1.0).unwrap();
        let r = circumradius(&k, &c).unwrap();
        assert!((r.radius - 2.0).abs() < 1e-12);
        let cert = r.certificate.clone().unwrap();
        verify_certificate(&k, &c, &r, &cert, 1e-7).unwrap();
        for u in &cert.normals {
            // facet normals of 2 B_1 are parallel to (+-1/2, +-1/2)
            assert!((u[0].abs() - u[1].abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn verifier_rejects_a_bad_certificate() {
        let k = body(&[&[1.0, 0.0], &[-1.0, 0.0], &[0.0, 0.5]]);
        let r = circumradius(&k, &Gauge::Euclidean).unwrap();
        let mut cert = r.certificate.clone().unwrap();
        cert.weights[0] *= 2.0;
        assert!(verify_certificate(&k, &Gauge::Euclidean, &r, &cert, 1e-7).is_err());
    }

    #[test]
    fn condition_4_examples() {
        assert!(check_condition_4(&body(&[&[1.0, 0.0], &[-1.0, 0.0]]), 16).unwrap());
        assert!(!check_condition_4(&body(&[&[1.0, 0.0], &[0.0, 1.0]]), 16).unwrap());
        assert!(!check_condition_4(&body(&[&[1.0, 0.0], &[0.0, 1.0]]), 0).unwrap());
        let t = std::f64::consts::FRAC_PI_3;
        assert!(
            check_condition_4(&body(&[&[t.cos(), t.sin()], &[-t.cos(), -t.sin()]]), 16).unwrap()
        );
        assert!(check_condition_4(&body(&[&[2.0, 0.0]]), 4).is_err());
    }
}
