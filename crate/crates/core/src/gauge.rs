//! Gauge bodies: the Euclidean ball, `l_p` balls and H-polytopes with the
//! origin in their interior.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{all_finite, dot, norm2, norm_p, scale};
use crate::lp::{LinearProgram, LpStatus, Relation, Sense};

/// Polytope `{x : a_i . x <= 1}`, stored with every right-hand side
/// normalized to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    dim: usize,
    normals: Vec<Vec<f64>>,
}

impl HPolytope {
    /// Builds `{x : a_i . x <= b_i}`. Requires `b_i > 0` (origin interior)
    /// and boundedness; rows are rescaled to `b_i = 1`.
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::input(format!(
                "A has {} rows but b has {} entries",
                a.len(),
                b.len()
            )));
        }
        let dim = a
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::input("polytope needs at least one row"))?;
        if dim == 0 {
            return Err(Error::input("dimension must be at least 1"));
        }
        let mut normals = Vec::with_capacity(a.len());
        for (i, (row, &bi)) in a.iter().zip(&b).enumerate() {
            if row.len() != dim {
                return Err(Error::input(format!("row {i} has the wrong dimension")));
            }
            if !all_finite(row) || !bi.is_finite() {
                return Err(Error::input(format!("row {i} has non-finite data")));
            }
            if bi <= 0.0 {
                return Err(Error::input(format!(
                    "origin not interior: row {i} has b = {bi}"
                )));
            }
            if norm2(row) == 0.0 {
                // 0 . x <= b with b > 0 is vacuous
                continue;
            }
            normals.push(scale(row, 1.0 / bi));
        }
        let p = HPolytope { dim, normals };
        p.check_bounded()?;
        Ok(p)
    }

    /// Bounded iff every coordinate is bounded above and below, which
    /// takes `2n` LPs.
    fn check_bounded(&self) -> Result<()> {
        if self.normals.is_empty() {
            return Err(Error::input("polytope is unbounded"));
        }
        for k in 0..self.dim {
            for s in [1.0, -1.0] {
                let mut obj = vec![0.0; self.dim];
                obj[k] = s;
                let mut lp = LinearProgram::new(Sense::Maximize, obj);
                for a in &self.normals {
                    lp.add(a.clone(), Relation::Le, 1.0);
                }
                let sol = lp.solve()?;
                if sol.status != LpStatus::Optimal {
                    return Err(Error::input(format!(
                        "polytope is unbounded in direction {}e{}",
                        if s > 0.0 { "+" } else { "-" },
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// `[-1, 1]^n`.
    pub fn cube(n: usize) -> Self {
        let mut normals = Vec::with_capacity(2 * n);
        for k in 0..n {
            for s in [1.0, -1.0] {
                let mut a = vec![0.0; n];
                a[k] = s;
                normals.push(a);
            }
        }
        HPolytope { dim: n, normals }
    }

    /// `{x : |x|_1 <= 1}` via its `2^n` facets.
    pub fn cross_polytope(n: usize) -> Self {
        let normals = (0..1usize << n)
            .map(|mask| {
                (0..n)
                    .map(|k| if mask & (1 << k) != 0 { -1.0 } else { 1.0 })
                    .collect()
            })
            .collect();
        HPolytope { dim: n, normals }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Facet normals `a_i` of the normalized description `a_i . x <= 1`.
    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    /// Minkowski functional `max_i a_i . x`.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        self.normals
            .iter()
            .map(|a| dot(a, x))
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0)
    }

    /// Translate of the polytope `[lo, hi]` given by its bounds; fails if
    /// the origin is not interior.
    pub fn from_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let n = lo.len();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for k in 0..n {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            a.push(e.clone());
            b.push(hi[k]);
            e[k] = -1.0;
            a.push(e);
            b.push(-lo[k]);
        }
        HPolytope::new(a, b)
    }
}

/// Exponent of an `l_p` ball, `p` in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::input(format!("p must lie in [1, inf], got {p}")));
        }
        Ok(PExponent(p))
    }

    pub const INFINITY: PExponent = PExponent(f64::INFINITY);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl Serialize for PExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for PExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        let p = match Raw::deserialize(d)? {
            Raw::Num(v) => v,
            Raw::Str(s) if s == "inf" => f64::INFINITY,
            Raw::Str(s) => return Err(serde::de::Error::custom(format!("invalid p \"{s}\""))),
        };
        PExponent::new(p).map_err(serde::de::Error::custom)
    }
}

/// The unit ball `C` against which radii are measured.
#[derive(Debug, Clone, PartialEq)]
pub enum Gauge {
    Euclidean,
    Lp(PExponent),
    Polytope(HPolytope),
}

impl Gauge {
    pub fn lp(p: f64) -> Result<Self> {
        Ok(Gauge::Lp(PExponent::new(p)?))
    }

    pub fn polytope(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        Ok(Gauge::Polytope(HPolytope::new(a, b)?))
    }

    /// Fixed dimension, if the gauge has one.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Gauge::Polytope(p) => Some(p.dim()),
            _ => None,
        }
    }

    /// Minkowski functional `gamma_C(x)`.
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Gauge::Euclidean => norm2(x),
            Gauge::Lp(p) => norm_p(x, p.value()),
            Gauge::Polytope(h) => h.gauge(x),
        }
    }

    /// The polytope realizing this gauge in dimension `n`, when it is polyhedral.
    pub fn as_polytope(&self, n: usize) -> Option<HPolytope> {
        match self {
            Gauge::Polytope(h) => Some(h.clone()),
            Gauge::Lp(p) if p.value() == 1.0 => Some(HPolytope::cross_polytope(n)),
            Gauge::Lp(p) if p.is_infinite() => Some(HPolytope::cube(n)),
            _ => None,
        }
    }

    /// Support function `h_C(d) = max_{x in C} d . x`.
    pub fn support(&self, d: &[f64]) -> Result<f64> {
        match self {
            Gauge::Euclidean => Ok(norm2(d)),
            Gauge::Lp(p) => {
                let p = p.value();
                let q = if p == 1.0 {
                    f64::INFINITY
                } else if p.is_infinite() {
                    1.0
                } else {
                    p / (p - 1.0)
                };
                Ok(norm_p(d, q))
            }
            Gauge::Polytope(h) => {
                let mut lp = LinearProgram::new(Sense::Maximize, d.to_vec());
                for a in h.normals() {
                    lp.add(a.clone(), Relation::Le, 1.0);
                }
                let sol = lp.solve()?;
                if sol.status != LpStatus::Optimal {
                    return Err(Error::solver(
                        "support LP of a bounded polytope did not solve",
                    ));
                }
                Ok(sol.objective)
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Gauge::Euclidean => "euclidean".into(),
            Gauge::Lp(p) if p.is_infinite() => "lp(inf)".into(),
            Gauge::Lp(p) => format!("lp({})", p.value()),
            Gauge::Polytope(h) => format!("hpoly({} facets)", h.normals().len()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawGauge {
    Euclidean,
    Lp {
        p: PExponent,
    },
    Hpoly {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
}

impl Serialize for Gauge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = match self {
            Gauge::Euclidean => RawGauge::Euclidean,
            Gauge::Lp(p) => RawGauge::Lp { p: *p },
            Gauge::Polytope(h) => RawGauge::Hpoly {
                a: h.normals.clone(),
                b: vec![1.0; h.normals.len()],
            },
        };
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Gauge {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawGauge::deserialize(d)? {
            RawGauge::Euclidean => Ok(Gauge::Euclidean),
            RawGauge::Lp { p } => Ok(Gauge::Lp(p)),
            RawGauge::Hpoly { a, b } => HPolytope::new(a, b)
                .map(Gauge::Polytope)
                .map_err(serde::de::Error::custom),
        }
    }
}
