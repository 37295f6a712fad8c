//! Seeded instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body::PointBody;
use crate::colourful::random_balanced_set_with;
use crate::gauge::{Gauge, HPolytope};
use crate::linalg::{dot, random_orthogonal, random_unit, scale};

/// Stream for instance `id` of a run seeded with `seed`. Streams are
/// disjoint, so instances can be produced in any order.
pub fn instance_rng(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyParams {
    pub min_points: usize,
    pub max_points: usize,
    /// Chance of projecting the body onto a random proper subspace.
    pub flat_probability: f64,
}

impl Default for BodyParams {
    fn default() -> Self {
        BodyParams {
            min_points: 3,
            max_points: 8,
            flat_probability: 0.25,
        }
    }
}

/// Points drawn uniformly from `[-1, 1]^n`, sometimes flattened onto a
/// random linear subspace.
pub fn random_body<R: Rng + ?Sized>(rng: &mut R, n: usize, params: &BodyParams) -> PointBody {
    let k = rng.random_range(params.min_points..=params.max_points);
    let mut pts: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    if n >= 2 && rng.random_bool(params.flat_probability) {
        let d = rng.random_range(1..n);
        let q = random_orthogonal(n, rng);
        let basis = &q[..d];
        pts = pts
            .iter()
            .map(|p| {
                let mut out = vec![0.0; n];
                for b in basis {
                    let c = dot(b, p);
                    for (o, bi) in out.iter_mut().zip(b) {
                        *o += c * bi;
                    }
                }
                out
            })
            .collect();
    }
    PointBody::new(pts).expect("generated body is valid")
}

/// Random polytope with the origin inside: unit normals at random
/// distances in `[0.5, 1.5]`, redrawn until bounded.
pub fn random_polytope<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HPolytope {
    loop {
        let m = rng.random_range(n + 1..=2 * n + 4);
        let a: Vec<Vec<f64>> = (0..m).map(|_| random_unit(n, rng)).collect();
        let b: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..1.5)).collect();
        if let Ok(h) = HPolytope::new(a, b) {
            return h;
        }
    }
}

/// Planar body inside the unit disk with circumradius 1: a balanced set
/// of 2 or 3 unit vectors plus a few interior points.
pub fn random_unit_planar_body<R: Rng + ?Sized>(rng: &mut R) -> PointBody {
    let k = rng.random_range(2..=3);
    let set = random_balanced_set_with(2, 1.0, k, rng).expect("valid parameters");
    let mut pts = set.vectors().to_vec();
    for _ in 0..rng.random_range(0..=4) {
        let r = 0.95 * rng.random::<f64>().sqrt();
        pts.push(scale(&random_unit(2, rng), r));
    }
    PointBody::new(pts).expect("generated body is valid")
}

/// Random gauge for the gauge suites.
pub fn random_gauge<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Gauge {
    Gauge::Polytope(random_polytope(rng, n))
}
