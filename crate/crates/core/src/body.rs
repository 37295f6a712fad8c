//! Convex bodies given by finite point sets (V-representation).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add, all_finite, dot, sub};
use crate::tol::Limits;

/// A convex body represented as the convex hull of `points`.
///
/// Duplicate and interior points are allowed; everything computed from a
/// body depends only on support values `max_v a . v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBody")]
pub struct PointBody {
    dim: usize,
    points: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawBody {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl TryFrom<RawBody> for PointBody {
    type Error = Error;

    fn try_from(raw: RawBody) -> Result<Self> {
        PointBody::with_dim(raw.dim, raw.points)
    }
}

impl PointBody {
    /// Builds a body, inferring the dimension from the first point.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::input("a body needs at least one point"))?;
        Self::with_dim(dim, points)
    }

    pub fn with_dim(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("dimension must be at least 1"));
        }
        if points.is_empty() {
            return Err(Error::input("a body needs at least one point"));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::input(format!(
                    "point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if !all_finite(p) {
                return Err(Error::input(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
        }
        Ok(PointBody { dim, points })
    }

    /// Single-point body.
    pub fn point(p: Vec<f64>) -> Result<Self> {
        Self::new(vec![p])
    }

    /// The segment `[a, b]`.
    pub fn segment(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<Vec<f64>> {
        self.points
    }

    /// `max_v dir . v` and the lowest index attaining it.
    pub fn support(&self, dir: &[f64]) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, p) in self.points.iter().enumerate() {
            let v = dot(dir, p);
            if v > best.0 {
                best = (v, i);
            }
        }
        best
    }

    pub fn translate(&self, t: &[f64]) -> PointBody {
        PointBody {
            dim: self.dim,
            points: self.points.iter().map(|p| add(p, t)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> PointBody {
        PointBody {
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|x| x * s).collect())
                .collect(),
        }
    }

    /// Applies `x -> m x` to every point; `m` is given by rows.
    pub fn linear_map(&self, m: &[Vec<f64>]) -> PointBody {
        PointBody {
            dim: m.len(),
            points: self
                .points
                .iter()
                .map(|p| m.iter().map(|r| dot(r, p)).collect())
                .collect(),
        }
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for p in &self.points {
            for (ci, pi) in c.iter_mut().zip(p) {
                *ci += pi;
            }
        }
        let k = self.points.len() as f64;
        c.iter_mut().for_each(|x| *x /= k);
        c
    }

    /// Body with `extra` appended to the point list.
    pub fn with_points(&self, extra: &[Vec<f64>]) -> Result<PointBody> {
        let mut pts = self.points.clone();
        pts.extend_from_slice(extra);
        PointBody::with_dim(self.dim, pts)
    }

    /// Largest Euclidean distance between two listed points.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                d = d.max(crate::linalg::norm2(&sub(p, q)));
            }
        }
        d
    }
}

/// Size of the full Cartesian product of point counts, or a budget error.
pub fn product_size(
    counts: impl IntoIterator<Item = usize>,
    limits: &Limits,
    what: &'static str,
) -> Result<usize> {
    let mut total: u128 = 1;
    for c in counts {
        total = total.saturating_mul(c as u128);
    }
    if total > limits.max_sum_points as u128 {
        return Err(Error::Budget {
            what,
            needed: total,
            cap: limits.max_sum_points,
        });
    }
    Ok(total as usize)
}

/// Vector sum of bodies as the full product point set.
///
/// Points are ordered lexicographically by index tuple with the first
/// body varying slowest. No hull pruning is performed.
pub fn minkowski_sum(bodies: &[PointBody], limits: &Limits) -> Result<PointBody> {
    let first = bodies
        .first()
        .ok_or_else(|| Error::input("Minkowski sum of an empty family"))?;
    let dim = first.dim;
    if let Some(b) = bodies.iter().find(|b| b.dim != dim) {
        return Err(Error::input(format!(
            "dimension mismatch in Minkowski sum: {} vs {dim}",
            b.dim
        )));
    }
    let total = product_size(bodies.iter().map(PointBody::len), limits, "Minkowski sum")?;
    let mut acc: Vec<Vec<f64>> = Vec::with_capacity(total);
    acc.push(vec![0.0; dim]);
    for b in bodies {
        let mut next = Vec::with_capacity(acc.len() * b.len());
        for s in &acc {
            for p in &b.points {
                next.push(add(s, p));
            }
        }
        acc = next;
    }
    Ok(PointBody { dim, points: acc })
}
