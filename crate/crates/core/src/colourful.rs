//! Balanced vector families on spheres and colourful selection: one
//! vector per family so that the (shifted) sum is long.

use std::f64::consts::FRAC_PI_3;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ball::min_enclosing_ball;
use crate::body::{minkowski_sum, product_size, PointBody};
use crate::error::{Error, Result};
use crate::hull::separating_direction;
use crate::linalg::{add, axpy, dist2, dot, norm2, random_unit, rank, rotate2, scale, sub};
use crate::lp::{LinearProgram, LpStatus, Relation, Sense};
use crate::tol::{Limits, EPS_CERT, EPS_FEAS, EPS_POS};

/// Vectors `u_1..u_k` on `r S^{n-1}` with positive `lambda` summing
/// `lambda_l u_l` to zero, `2 <= k <= n + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSet")]
pub struct BalancedSet {
    radius: f64,
    vectors: Vec<Vec<f64>>,
    lambdas: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSet {
    radius: f64,
    vectors: Vec<Vec<f64>>,
    #[serde(default)]
    lambdas: Option<Vec<f64>>,
}

impl TryFrom<RawSet> for BalancedSet {
    type Error = Error;

    fn try_from(raw: RawSet) -> Result<Self> {
        BalancedSet::new(raw.radius, raw.vectors, raw.lambdas)
    }
}

impl BalancedSet {
    /// Validates a family. Missing `lambdas` are found by an LP that
    /// maximizes the smallest coefficient.
    pub fn new(radius: f64, vectors: Vec<Vec<f64>>, lambdas: Option<Vec<f64>>) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::input(format!(
                "radius must be positive, got {radius}"
            )));
        }
        let n = vectors
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::input("a balanced set needs vectors"))?;
        let k = vectors.len();
        if n == 0 || k < 2 || k > n + 1 {
            return Err(Error::input(format!(
                "a balanced set in dimension {n} needs between 2 and {} vectors, got {k}",
                n + 1
            )));
        }
        for (l, v) in vectors.iter().enumerate() {
            if v.len() != n || !crate::linalg::all_finite(v) {
                return Err(Error::input(format!("vector {l} is malformed")));
            }
            let len = norm2(v);
            if (len - radius).abs() > EPS_CERT * radius.max(1.0) {
                return Err(Error::input(format!(
                    "vector {l} has norm {len}, expected {radius}"
                )));
            }
        }
        let lambdas = match lambdas {
            Some(l) => l,
            None => solve_lambdas(&vectors)?,
        };
        if lambdas.len() != k {
            return Err(Error::input(format!(
                "{} lambdas for {k} vectors",
                lambdas.len()
            )));
        }
        if let Some(l) = lambdas
            .iter()
            .position(|&x| !(x > EPS_POS) || !x.is_finite())
        {
            return Err(Error::input(format!("lambda {l} is not positive")));
        }
        let set = BalancedSet {
            radius,
            vectors,
            lambdas,
        };
        let resid = set.balance_residual();
        if resid > EPS_CERT * radius.max(1.0) {
            return Err(Error::input(format!(
                "set is not balanced: |sum lambda u| / sum lambda = {resid}"
            )));
        }
        Ok(set)
    }

    /// Antipodal pair `{u, -u}` scaled to the norm of `u`.
    pub fn pair(u: Vec<f64>) -> Result<Self> {
        let r = norm2(&u);
        let m = scale(&u, -1.0);
        BalancedSet::new(r, vec![u, m], Some(vec![1.0, 1.0]))
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `|sum lambda_l u_l| / sum lambda_l`.
    pub fn balance_residual(&self) -> f64 {
        let mut s = vec![0.0; self.dim()];
        for (l, v) in self.lambdas.iter().zip(&self.vectors) {
            axpy(*l, v, &mut s);
        }
        norm2(&s) / self.lambdas.iter().sum::<f64>()
    }

    /// The set with every vector mapped by `m` (rows); the caller keeps
    /// `m` orthogonal.
    pub fn transformed(&self, m: &[Vec<f64>]) -> Result<Self> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| m.iter().map(|r| dot(r, v)).collect())
            .collect();
        BalancedSet::new(self.radius, vectors, Some(self.lambdas.clone()))
    }

    pub fn to_body(&self) -> PointBody {
        PointBody::new(self.vectors.clone()).expect("validated vectors")
    }
}

/// Coefficients with `sum lambda u = 0`, `sum lambda = 1`, maximizing the
/// smallest one.
fn solve_lambdas(vectors: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = vectors[0].len();
    let k = vectors.len();
    if let Some(a) = separating_direction(vectors, &vec![0.0; n])? {
        return Err(Error::input(format!(
            "0 is not in the convex hull of the vectors; separator {a:?}"
        )));
    }
    // variables (lambda, t): max t  s.t.  lambda_l >= t
    let mut obj = vec![0.0; k + 1];
    obj[k] = 1.0;
    let mut lp = LinearProgram::new(Sense::Maximize, obj);
    for d in 0..n {
        let mut row: Vec<f64> = vectors.iter().map(|v| v[d]).collect();
        row.push(0.0);
        lp.add(row, Relation::Eq, 0.0);
    }
    let mut ones = vec![1.0; k];
    ones.push(0.0);
    lp.add(ones, Relation::Eq, 1.0);
    for l in 0..k {
        let mut row = vec![0.0; k + 1];
        row[l] = 1.0;
        row[k] = -1.0;
        lp.add(row, Relation::Ge, 0.0);
    }
    let sol = lp.solve()?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::solver("coefficient LP did not solve"));
    }
    if sol.objective <= EPS_POS {
        let l = (0..k)
            .min_by(|&a, &b| sol.x[a].total_cmp(&sol.x[b]))
            .unwrap_or(0);
        return Err(Error::input(format!(
            "vector {l} cannot carry a positive coefficient in any balancing combination"
        )));
    }
    Ok(sol.x[..k].to_vec())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// One index per set.
    pub indices: Vec<usize>,
    /// `|sum_i u^i_{m_i} - c|`.
    pub achieved: f64,
    /// `sqrt(|c|^2 + sum_i r_i^2)`.
    pub guarantee: f64,
}

fn check_family(sets: &[BalancedSet], c: &[f64]) -> Result<()> {
    if sets.is_empty() {
        return Err(Error::input("no sets given"));
    }
    let n = c.len();
    if let Some(i) = sets.iter().position(|s| s.dim() != n) {
        return Err(Error::input(format!(
            "set {i} has dimension {}, expected {n}",
            sets[i].dim()
        )));
    }
    Ok(())
}

/// `sum_i u^i_{idx_i}` in set order.
pub fn selection_sum(sets: &[BalancedSet], idx: &[usize]) -> Vec<f64> {
    let mut s = vec![0.0; sets[0].dim()];
    for (set, &l) in sets.iter().zip(idx) {
        for (a, b) in s.iter_mut().zip(&set.vectors[l]) {
            *a += b;
        }
    }
    s
}

/// `|sum_i u^i_{idx_i} - c|`, the value both selectors maximize.
pub fn selection_value(sets: &[BalancedSet], idx: &[usize], c: &[f64]) -> f64 {
    dist2(&selection_sum(sets, idx), c)
}

pub fn guarantee(sets: &[BalancedSet], c: &[f64]) -> f64 {
    (dot(c, c) + sets.iter().map(|s| s.radius * s.radius).sum::<f64>()).sqrt()
}

/// The constructive selection: `m_1` minimizes `u . c`, then each `m_t`
/// maximizes `u . (partial sum - c)`; ties go to the lowest index.
pub fn greedy_select(sets: &[BalancedSet], c: &[f64]) -> Result<SelectionResult> {
    check_family(sets, c)?;
    let mut indices = Vec::with_capacity(sets.len());
    let mut partial = scale(c, -1.0);
    for (t, set) in sets.iter().enumerate() {
        let d = if t == 0 { c.to_vec() } else { partial.clone() };
        let scores: Vec<f64> = set.vectors.iter().map(|u| dot(u, &d)).collect();
        let pick = if t == 0 {
            (0..scores.len()).fold(0, |b, l| if scores[l] < scores[b] { l } else { b })
        } else {
            (0..scores.len()).fold(0, |b, l| if scores[l] > scores[b] { l } else { b })
        };
        // Balance holds up to the residual, so the sign test gets that much room.
        let slack = EPS_FEAS * (1.0 + set.radius * norm2(&d)) + set.balance_residual() * norm2(&d);
        let ok = if t == 0 {
            scores[pick] <= slack
        } else {
            scores[pick] >= -slack
        };
        if !ok {
            return Err(Error::InvariantViolation(format!(
                "set {t} has no vector on the required side (best score {}); it is not balanced",
                scores[pick]
            )));
        }
        indices.push(pick);
        partial = add(&partial, &set.vectors[pick]);
    }
    let achieved = selection_value(sets, &indices, c);
    let guarantee = guarantee(sets, c);
    Ok(SelectionResult {
        indices,
        achieved,
        guarantee,
    })
}

/// Every index tuple in lexicographic order, first set slowest.
pub fn enumerate_tuples(sets: &[BalancedSet], limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let total = product_size(
        sets.iter().map(BalancedSet::len),
        limits,
        "selection tuples",
    )?;
    let mut out: Vec<Vec<usize>> = Vec::with_capacity(total);
    out.push(Vec::new());
    for s in sets {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..s.len()).map(move |l| {
                    let mut t = t.clone();
                    t.push(l);
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

/// Exact maximum of `|sum_i u^i_{l_i} - c|` over all tuples; the first
/// maximizing tuple in lexicographic order is reported.
pub fn brute_force_max(
    sets: &[BalancedSet],
    c: &[f64],
    limits: &Limits,
) -> Result<SelectionResult> {
    check_family(sets, c)?;
    let mut best: Option<(Vec<usize>, f64)> = None;
    for t in enumerate_tuples(sets, limits)? {
        let v = selection_value(sets, &t, c);
        if best.as_ref().is_none_or(|b| v > b.1) {
            best = Some((t, v));
        }
    }
    let (indices, achieved) = best.expect("nonempty product");
    Ok(SelectionResult {
        indices,
        achieved,
        guarantee: guarantee(sets, c),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMax {
    pub center: Vec<f64>,
    pub value: f64,
}

/// `min_c max_tuples |sum - c|`: the Euclidean circumradius of the sum of
/// the sets viewed as point bodies.
pub fn minmax_center(sets: &[BalancedSet], limits: &Limits) -> Result<MinMax> {
    check_family(sets, &vec![0.0; sets.first().map_or(0, BalancedSet::dim)])?;
    let bodies: Vec<PointBody> = sets.iter().map(BalancedSet::to_body).collect();
    let sum = minkowski_sum(&bodies, limits)?;
    let ball = min_enclosing_ball(&sum)?;
    Ok(MinMax {
        center: ball.center,
        value: ball.radius,
    })
}

/// Random balanced set of `k` vectors on `r S^{n-1}`.
pub fn random_balanced_set(n: usize, r: f64, k: usize, seed: u64) -> Result<BalancedSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_balanced_set_with(n, r, k, &mut rng)
}

/// As [`random_balanced_set`], drawing from a caller-owned stream.
pub fn random_balanced_set_with<R: Rng + ?Sized>(
    n: usize,
    r: f64,
    k: usize,
    rng: &mut R,
) -> Result<BalancedSet> {
    if n == 0 || k < 2 || k > n + 1 {
        return Err(Error::input(format!("k = {k} outside [2, {}]", n + 1)));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::input(format!("radius must be positive, got {r}")));
    }
    loop {
        let mut vectors: Vec<Vec<f64>> =
            (0..k - 1).map(|_| scale(&random_unit(n, rng), r)).collect();
        let mut lambdas: Vec<f64> = (0..k - 1).map(|_| rng.random_range(0.1..1.0)).collect();
        let mut w = vec![0.0; n];
        for (l, v) in lambdas.iter().zip(&vectors) {
            axpy(*l, v, &mut w);
        }
        let wn = norm2(&w);
        if wn < 1e-8 {
            continue;
        }
        vectors.push(scale(&w, -r / wn));
        lambdas.push(wn / r);
        if let Ok(set) = BalancedSet::new(r, vectors, Some(lambdas)) {
            return Ok(set);
        }
    }
}

/// Pairwise orthogonality across sets plus `sum_i dim span(U_i) <= n`.
pub fn detect_orthogonal_equality(sets: &[BalancedSet], tol: f64) -> bool {
    let Some(n) = sets.first().map(BalancedSet::dim) else {
        return false;
    };
    for (a, sa) in sets.iter().enumerate() {
        for sb in &sets[a + 1..] {
            for u in &sa.vectors {
                for v in &sb.vectors {
                    if dot(u, v).abs() > tol * sa.radius * sb.radius {
                        return false;
                    }
                }
            }
        }
    }
    let dims: usize = sets
        .iter()
        .map(|s| {
            let unit: Vec<Vec<f64>> = s.vectors.iter().map(|v| scale(v, 1.0 / s.radius)).collect();
            rank(&unit, tol.max(1e-12))
        })
        .sum();
    dims <= n
}

/// Whether three planar unit families are, after a common rotation and
/// relabelling, the pairs `{+-(cos(i pi/3), sin(i pi/3))}`.
pub fn detect_hexagon_equality(sets: &[BalancedSet], tol: f64) -> Result<bool> {
    if sets.len() != 3 {
        return Err(Error::input(format!("expected 3 sets, got {}", sets.len())));
    }
    for (i, s) in sets.iter().enumerate() {
        if s.dim() != 2 {
            return Err(Error::input(format!("set {i} is not planar")));
        }
        if (s.radius - 1.0).abs() > EPS_CERT {
            return Err(Error::input(format!(
                "set {i} does not lie on the unit circle"
            )));
        }
    }
    // Each set must be an antipodal pair.
    let mut dirs = Vec::with_capacity(3);
    for s in sets {
        if s.len() != 2 || norm2(&add(&s.vectors[0], &s.vectors[1])) > tol {
            return Ok(false);
        }
        dirs.push(s.vectors[0].clone());
    }
    let template = |i: f64| vec![(i * FRAC_PI_3).cos(), (i * FRAC_PI_3).sin()];
    let theta = FRAC_PI_3 - dirs[0][1].atan2(dirs[0][0]);
    let d2 = rotate2(&dirs[1], theta);
    let d3 = rotate2(&dirs[2], theta);
    let matches = |d: &[f64], t: &[f64]| norm2(&sub(d, t)) <= tol || norm2(&add(d, t)) <= tol;
    let (t2, t3) = (template(2.0), template(3.0));
    Ok((matches(&d2, &t2) && matches(&d3, &t3)) || (matches(&d2, &t3) && matches(&d3, &t2)))
}

/// Whether a family meets the hypotheses of the planar three-set bound:
/// three sets in the plane, unit radius, at most three vectors each.
pub fn in_three_set_theorem(sets: &[BalancedSet]) -> bool {
    sets.len() == 3
        && sets
            .iter()
            .all(|s| s.dim() == 2 && (s.radius - 1.0).abs() <= EPS_CERT && s.len() <= 3)
}
