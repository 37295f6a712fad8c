//! Convex-combination machinery: hull membership, separating directions
//! and Carathéodory support reduction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, solve};
use crate::lp::{LinearProgram, LpStatus, Relation, Sense};
use crate::tol::{EPS_FEAS, EPS_POS};

/// A convex combination `sum_k weights[k] * points[indices[k]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexCombination {
    pub indices: Vec<usize>,
    pub weights: Vec<f64>,
}

fn check_dims(points: &[Vec<f64>], target: &[f64]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::input("empty point family"));
    }
    let n = target.len();
    if let Some((i, _)) = points.iter().enumerate().find(|(_, p)| p.len() != n) {
        return Err(Error::input(format!(
            "point {i} does not have dimension {n}"
        )));
    }
    Ok(())
}

/// A direction `a` with `a . target > max_i a . points_i`, normalized to
/// `max |a_k| = 1`, if one exists with a margin above `EPS_FEAS`.
pub fn separating_direction(points: &[Vec<f64>], target: &[f64]) -> Result<Option<Vec<f64>>> {
    check_dims(points, target)?;
    let n = target.len();
    // variables (a, t): max a.target - t  s.t.  a.p_i <= t,  -1 <= a_k <= 1
    let mut obj = target.to_vec();
    obj.push(-1.0);
    let mut lp = LinearProgram::new(Sense::Maximize, obj);
    for p in points {
        let mut row = p.clone();
        row.push(-1.0);
        lp.add(row, Relation::Le, 0.0);
    }
    for k in 0..n {
        let mut row = vec![0.0; n + 1];
        row[k] = 1.0;
        lp.add(row.clone(), Relation::Le, 1.0);
        lp.add(row, Relation::Ge, -1.0);
    }
    let sol = lp.solve()?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::solver("separation LP did not reach an optimum"));
    }
    if sol.objective > EPS_FEAS {
        let a = sol.x[..n].to_vec();
        let m = a.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        Ok(Some(a.iter().map(|x| x / m).collect()))
    } else {
        Ok(None)
    }
}

/// Convex weights expressing `target` from `points`, as a basic solution
/// (at most `n + 1` nonzero weights). Fails with [`Error::NotInHull`].
pub fn convex_weights(points: &[Vec<f64>], target: &[f64]) -> Result<Vec<f64>> {
    check_dims(points, target)?;
    let n = target.len();
    let k = points.len();
    let mut lp = LinearProgram::new(Sense::Minimize, vec![0.0; k]);
    lp.all_nonnegative();
    for c in 0..n {
        lp.add(
            points.iter().map(|p| p[c]).collect(),
            Relation::Eq,
            target[c],
        );
    }
    lp.add(vec![1.0; k], Relation::Eq, 1.0);
    let sol = lp.solve()?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.x.iter().map(|w| w.max(0.0)).collect()),
        _ => match separating_direction(points, target)? {
            Some(separator) => Err(Error::NotInHull { separator }),
            // Infeasible only by round-off: the target is on the hull boundary.
            None => Err(Error::solver("hull membership is numerically undecidable")),
        },
    }
}

/// `true` iff `target` lies in `conv(points)` up to LP tolerance.
pub fn in_hull(points: &[Vec<f64>], target: &[f64]) -> Result<bool> {
    match convex_weights(points, target) {
        Ok(_) => Ok(true),
        Err(Error::NotInHull { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Nonzero `alpha` with `sum alpha_k [p_k; 1] = 0`, if the lifted columns
/// are linearly dependent.
fn affine_dependence(cols: &[&Vec<f64>]) -> Option<Vec<f64>> {
    let n = cols[0].len();
    let rows = n + 1;
    let k = cols.len();
    let mut m: Vec<Vec<f64>> = (0..rows)
        .map(|r| {
            (0..k)
                .map(|c| if r < n { cols[c][r] } else { 1.0 })
                .collect()
        })
        .collect();
    let scale = m.iter().flatten().fold(1.0_f64, |s, x| s.max(x.abs()));
    // reduced row echelon form
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        if r == rows {
            break;
        }
        let piv = (r..rows).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))?;
        if m[piv][c].abs() <= 1e-10 * scale {
            continue;
        }
        m.swap(r, piv);
        let p = m[r][c];
        m[r].iter_mut().for_each(|x| *x /= p);
        for i in 0..rows {
            if i != r {
                let f = m[i][c];
                if f != 0.0 {
                    for j in 0..k {
                        m[i][j] -= f * m[r][j];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..k).find(|c| !pivots.contains(c))?;
    let mut alpha = vec![0.0; k];
    alpha[free] = 1.0;
    for (row, &pc) in pivots.iter().enumerate() {
        alpha[pc] = -m[row][free];
    }
    Some(alpha)
}

/// Least-squares polish of the weights on a fixed affinely independent
/// support; returns `None` if the result would leave the simplex.
fn polish(points: &[Vec<f64>], target: &[f64], idx: &[usize]) -> Option<Vec<f64>> {
    let n = target.len();
    let k = idx.len();
    let col = |c: usize, r: usize| if r < n { points[idx[c]][r] } else { 1.0 };
    let mut rhs = target.to_vec();
    rhs.push(1.0);
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| (0..=n).map(|r| col(a, r) * col(b, r)).sum())
                .collect()
        })
        .collect();
    let mt_rhs: Vec<f64> = (0..k)
        .map(|a| (0..=n).map(|r| col(a, r) * rhs[r]).sum())
        .collect();
    let w = solve(gram, mt_rhs)?;
    if w.iter().any(|&x| x <= EPS_POS) {
        return None;
    }
    Some(w)
}

/// Reduces a convex representation of `target` to at most `n + 1`
/// points with strictly positive weights.
///
/// Fails with [`Error::NotInHull`] (carrying a separating direction) when
/// `target` is outside `conv(points)`.
pub fn caratheodory_reduce(points: &[Vec<f64>], target: &[f64]) -> Result<ConvexCombination> {
    let w = convex_weights(points, target)?;
    let n = target.len();
    let mut idx: Vec<usize> = (0..points.len()).filter(|&i| w[i] > EPS_POS).collect();
    let mut wts: Vec<f64> = idx.iter().map(|&i| w[i]).collect();

    // Classical elimination along affine dependences.
    loop {
        let cols: Vec<&Vec<f64>> = idx.iter().map(|&i| &points[i]).collect();
        let Some(alpha) = affine_dependence(&cols) else {
            break;
        };
        let alpha = if alpha.iter().any(|&a| a > 0.0) {
            alpha
        } else {
            alpha.iter().map(|a| -a).collect()
        };
        let mut t = f64::INFINITY;
        let mut drop = 0;
        for (k, (&a, &wk)) in alpha.iter().zip(&wts).enumerate() {
            if a > 0.0 && wk / a < t {
                t = wk / a;
                drop = k;
            }
        }
        for (wk, a) in wts.iter_mut().zip(&alpha) {
            *wk -= t * a;
        }
        wts[drop] = 0.0;
        let keep: Vec<usize> = (0..idx.len()).filter(|&k| wts[k] > EPS_POS).collect();
        idx = keep.iter().map(|&k| idx[k]).collect();
        wts = keep.iter().map(|&k| wts[k]).collect();
    }
    debug_assert!(idx.len() <= n + 1);

    if let Some(p) = polish(points, target, &idx) {
        wts = p;
    }
    let s: f64 = wts.iter().sum();
    wts.iter_mut().for_each(|x| *x /= s);
    Ok(ConvexCombination {
        indices: idx,
        weights: wts,
    })
}

/// Residual `|sum w_k p_k - target|_inf` of a convex combination.
pub fn combination_residual(points: &[Vec<f64>], target: &[f64], comb: &ConvexCombination) -> f64 {
    let mut acc = vec![0.0; target.len()];
    for (&i, &w) in comb.indices.iter().zip(&comb.weights) {
        for (a, p) in acc.iter_mut().zip(&points[i]) {
            *a += w * p;
        }
    }
    acc.iter()
        .zip(target)
        .fold(0.0_f64, |m, (a, t)| m.max((a - t).abs()))
}

/// `a . target - max_i a . points_i`; positive means `a` separates.
pub fn separation_margin(points: &[Vec<f64>], target: &[f64], a: &[f64]) -> f64 {
    dot(a, target)
        - points
            .iter()
            .map(|p| dot(a, p))
            .fold(f64::NEG_INFINITY, f64::max)
}
