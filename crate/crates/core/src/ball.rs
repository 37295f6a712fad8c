//! Euclidean minimum enclosing ball.
//!
//! Move-to-front Welzl in any dimension, followed by a clean-up pass: the
//! near-boundary points are reduced to an affinely independent support
//! whose convex hull contains the center, and the center is recomputed as
//! the exact circumcenter of that support.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::body::PointBody;
use crate::error::{Error, Result};
use crate::hull::caratheodory_reduce;
use crate::linalg::{axpy, dist2, dot, orthonormal_basis, solve, sub};
use crate::tol::EPS_CERT;

/// Smallest Euclidean ball containing a point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Indices of an affinely independent set of boundary points with the
    /// center in their convex hull, ascending.
    pub support: Vec<usize>,
    /// Convex weights of the center with respect to `support`.
    pub weights: Vec<f64>,
}

impl Ball {
    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        dist2(p, &self.center) <= self.radius + tol
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    center: Vec<f64>,
    radius: f64,
}

/// Smallest sphere through `pts` with center in their affine hull.
/// Affinely dependent points beyond the first independent ones are ignored.
fn sphere_through(pts: &[&[f64]], dim: usize) -> Candidate {
    match pts.len() {
        0 => Candidate {
            center: vec![0.0; dim],
            radius: -1.0,
        },
        1 => Candidate {
            center: pts[0].to_vec(),
            radius: 0.0,
        },
        _ => {
            let q0 = pts[0];
            let diffs: Vec<Vec<f64>> = pts[1..].iter().map(|p| sub(p, q0)).collect();
            let (_, kept) = orthonormal_basis(&diffs, 1e-10);
            let d: Vec<&Vec<f64>> = kept.iter().map(|&k| &diffs[k]).collect();
            let gram: Vec<Vec<f64>> = d
                .iter()
                .map(|a| d.iter().map(|b| 2.0 * dot(a, b)).collect())
                .collect();
            let h: Vec<f64> = d.iter().map(|a| dot(a, a)).collect();
            let beta = solve(gram, h).unwrap_or_else(|| vec![0.0; d.len()]);
            let mut center = q0.to_vec();
            for (b, v) in beta.iter().zip(&d) {
                axpy(*b, v, &mut center);
            }
            let radius = pts.iter().map(|p| dist2(p, &center)).fold(0.0, f64::max);
            Candidate { center, radius }
        }
    }
}

struct Welzl<'a> {
    pts: &'a [Vec<f64>],
    dim: usize,
    tol: f64,
}

impl Welzl<'_> {
    fn outside(&self, c: &Candidate, p: &[f64]) -> bool {
        c.radius < 0.0 || dist2(p, &c.center) > c.radius + self.tol
    }

    fn mtf(&self, list: &mut [usize], end: usize, support: &mut Vec<usize>) -> Candidate {
        let sp: Vec<&[f64]> = support.iter().map(|&i| self.pts[i].as_slice()).collect();
        let mut ball = sphere_through(&sp, self.dim);
        if support.len() == self.dim + 1 {
            return ball;
        }
        for i in 0..end {
            let p = list[i];
            if self.outside(&ball, &self.pts[p]) {
                support.push(p);
                ball = self.mtf(list, i, support);
                support.pop();
                list[..=i].rotate_right(1);
            }
        }
        ball
    }
}

/// Minimum enclosing ball of the body's points.
pub fn min_enclosing_ball(body: &PointBody) -> Result<Ball> {
    let pts = body.points();
    let dim = body.dim();
    let scale = pts.iter().flatten().fold(1.0_f64, |m, x| m.max(x.abs()));
    let w = Welzl {
        pts,
        dim,
        tol: 1e-13 * scale,
    };
    let mut list: Vec<usize> = (0..pts.len()).collect();
    // Fixed-seed shuffle: expected linear time without hidden state.
    list.shuffle(&mut ChaCha8Rng::seed_from_u64(pts.len() as u64));
    let mut ball = w.mtf(&mut list, pts.len(), &mut Vec::new());
    // Pivot any point that round-off left outside to the front and rerun.
    for _ in 0..8 {
        let worst = (0..pts.len())
            .max_by(|&a, &b| dist2(&pts[a], &ball.center).total_cmp(&dist2(&pts[b], &ball.center)))
            .unwrap();
        if dist2(&pts[worst], &ball.center) <= ball.radius + 1e-12 * scale {
            break;
        }
        let pos = list.iter().position(|&i| i == worst).unwrap();
        list[..=pos].rotate_right(1);
        ball = w.mtf(&mut list, pts.len(), &mut Vec::new());
    }
    finalize(pts, ball)
}

fn finalize(pts: &[Vec<f64>], cand: Candidate) -> Result<Ball> {
    let radius = pts
        .iter()
        .map(|p| dist2(p, &cand.center))
        .fold(0.0, f64::max);
    if radius == 0.0 {
        return Ok(Ball {
            center: cand.center,
            radius: 0.0,
            support: vec![0],
            weights: vec![1.0],
        });
    }
    let mut band = EPS_CERT * radius.max(1.0);
    let near: Vec<usize> = loop {
        let near: Vec<usize> = (0..pts.len())
            .filter(|&i| dist2(&pts[i], &cand.center) >= radius - band)
            .collect();
        let near_pts: Vec<Vec<f64>> = near.iter().map(|&i| pts[i].clone()).collect();
        match caratheodory_reduce(&near_pts, &cand.center) {
            Ok(comb) => break comb.indices.iter().map(|&k| near[k]).collect(),
            Err(Error::NotInHull { .. }) | Err(Error::SolverFailure { .. })
                if band < 1e-3 * radius =>
            {
                band *= 10.0;
            }
            Err(e) => return Err(e),
        }
    };
    let mut support = near;
    support.sort_unstable();

    // Exact circumcenter of the support in its affine hull.
    let sp: Vec<&[f64]> = support.iter().map(|&i| pts[i].as_slice()).collect();
    let polished = sphere_through(&sp, pts[0].len());
    let polished_r = pts
        .iter()
        .map(|p| dist2(p, &polished.center))
        .fold(0.0, f64::max);
    let (center, radius) = if polished_r <= radius {
        (polished.center, polished_r)
    } else {
        (cand.center, radius)
    };
    let sup_pts: Vec<Vec<f64>> = support.iter().map(|&i| pts[i].clone()).collect();
    let comb = caratheodory_reduce(&sup_pts, &center)?;
    let support: Vec<usize> = comb.indices.iter().map(|&k| support[k]).collect();
    Ok(Ball {
        center,
        radius,
        support,
        weights: comb.weights,
    })
}
