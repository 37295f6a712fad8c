//! Minimization of `f(z) = max_v |v - z|_p` for finite `p > 1`.
//!
//! Multi-start subgradient descent with a Polyak step toward an adaptive
//! target level, refined by a trust-region sequential LP and finished by a
//! Newton solve of the optimality system on the active points. The Newton result is kept only when it is a
//! genuine KKT point that does not increase `f`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2, norm_p, random_unit, solve, sub};
use crate::lp::{LinearProgram, Relation, Sense};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentOptions {
    /// Iteration cap per start.
    pub max_iters: usize,
    pub starts: usize,
    /// Stop once the best value improved by less than this (relative)
    /// over `window` iterations.
    pub stall_tol: f64,
    pub window: usize,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions {
            max_iters: 20_000,
            starts: 5,
            stall_tol: 1e-10,
            window: 50,
        }
    }
}

impl DescentOptions {
    /// Tolerances tightened 100x.
    pub fn tightened(self) -> Self {
        DescentOptions {
            stall_tol: self.stall_tol * 1e-2,
            max_iters: self.max_iters * 5,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentOutcome {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Near-active point indices and KKT weights, present when the Newton
    /// polish succeeded.
    pub active: Vec<usize>,
    pub weights: Vec<f64>,
    pub iterations: usize,
}

/// Gradient of `|x|_p` at `x != 0`.
pub fn lp_gradient(x: &[f64], p: f64) -> Vec<f64> {
    let n = norm_p(x, p);
    if n == 0.0 {
        return vec![0.0; x.len()];
    }
    x.iter()
        .map(|&xi| {
            let y = xi / n;
            y.signum() * y.abs().powf(p - 1.0)
        })
        .collect()
}

/// Hessian of `|x|_p` at `x != 0`; entries may be infinite for `p < 2`
/// when some coordinate vanishes.
fn lp_hessian(x: &[f64], p: f64) -> Vec<Vec<f64>> {
    let n = norm_p(x, p);
    let g = lp_gradient(x, p);
    let d = x.len();
    let mut h = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            let diag = if i == j {
                (x[i] / n).abs().powf(p - 2.0)
            } else {
                0.0
            };
            h[i][j] = (p - 1.0) / n * (diag - g[i] * g[j]);
        }
    }
    h
}

struct Problem<'a> {
    pts: &'a [Vec<f64>],
    p: f64,
}

impl Problem<'_> {
    fn value(&self, z: &[f64]) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, v) in self.pts.iter().enumerate() {
            let d = norm_p(&sub(v, z), self.p);
            if d > best.0 {
                best = (d, i);
            }
        }
        best
    }

    /// A subgradient of `f` at `z`: minus the norm gradient at the first
    /// maximizing point.
    fn subgradient(&self, z: &[f64], arg: usize) -> Vec<f64> {
        lp_gradient(&sub(&self.pts[arg], z), self.p)
            .into_iter()
            .map(|x| -x)
            .collect()
    }

    fn run(&self, z0: Vec<f64>, opts: &DescentOptions) -> (Vec<f64>, f64, usize, bool) {
        let mut z = z0;
        let (mut f, mut arg) = self.value(&z);
        let mut best = (z.clone(), f);
        let mut f_rec = f;
        let mut delta = 0.1 * f.max(f64::MIN_POSITIVE);
        let floor = 1e-14 * f.max(1.0);
        let mut stalled = 0;
        let mut history = vec![f];
        for it in 0..opts.max_iters {
            let g = self.subgradient(&z, arg);
            let gg = dot(&g, &g);
            if gg == 0.0 {
                return (best.0, best.1, it, true);
            }
            let level = f_rec - delta;
            let step = (f - level) / gg;
            axpy(-step, &g, &mut z);
            (f, arg) = self.value(&z);
            if f < best.1 {
                best = (z.clone(), f);
            }
            if best.1 <= f_rec - 0.5 * delta {
                f_rec = best.1;
                delta *= 1.5;
                stalled = 0;
            } else {
                stalled += 1;
                if stalled >= 10 {
                    delta = (delta * 0.5).max(floor);
                    f_rec = best.1;
                    stalled = 0;
                    z.clone_from(&best.0);
                    (f, arg) = self.value(&z);
                }
            }
            history.push(best.1);
            if history.len() > opts.window {
                let old = history[history.len() - 1 - opts.window];
                if old - best.1 < opts.stall_tol * best.1.max(1.0) && delta <= 1e3 * floor {
                    return (best.0, best.1, it + 1, true);
                }
            }
        }
        (best.0, best.1, opts.max_iters, false)
    }

    /// Trust-region sequential LP on the linearized distances. Returns the
    /// improved point and the indices whose LP duals are positive.
    fn slp(&self, z0: &[f64], f0: f64) -> (Vec<f64>, f64, Vec<usize>) {
        let n = z0.len();
        let mut z = z0.to_vec();
        let mut f = f0;
        let mut radius = 0.1 * f0.max(f64::MIN_POSITIVE);
        let mut active = Vec::new();
        for _ in 0..200 {
            // min t  s.t.  f_v + g_v . d <= t,  |d_k| <= radius
            let mut obj = vec![0.0; n + 1];
            obj[n] = 1.0;
            let mut lp = LinearProgram::new(Sense::Minimize, obj);
            let lin: Vec<(f64, Vec<f64>)> = self
                .pts
                .iter()
                .map(|v| {
                    let x = sub(v, &z);
                    (norm_p(&x, self.p), lp_gradient(&x, self.p))
                })
                .collect();
            // Rows that stay below max_v (f_v - |g_v|_1 radius) inside the
            // box cannot bind.
            let reach = |g: &[f64]| radius * g.iter().map(|x| x.abs()).sum::<f64>();
            let lower = lin
                .iter()
                .map(|(fv, g)| fv - reach(g))
                .fold(f64::NEG_INFINITY, f64::max);
            let rows: Vec<usize> = (0..lin.len())
                .filter(|&i| lin[i].0 + reach(&lin[i].1) >= lower)
                .collect();
            for &i in &rows {
                let mut row: Vec<f64> = lin[i].1.iter().map(|g| -g).collect();
                row.push(-1.0);
                lp.add(row, Relation::Le, -lin[i].0);
            }
            for k in 0..n {
                let mut row = vec![0.0; n + 1];
                row[k] = 1.0;
                lp.add(row.clone(), Relation::Le, radius);
                lp.add(row, Relation::Ge, -radius);
            }
            let Ok(sol) = lp.solve() else { break };
            if !sol.is_optimal() {
                break;
            }
            active = rows
                .iter()
                .enumerate()
                .filter(|&(r, _)| sol.duals[r] > 1e-9)
                .map(|(_, &i)| i)
                .collect();
            let predicted = f - sol.objective;
            if predicted <= 1e-15 * f.max(1.0) {
                break;
            }
            let cand: Vec<f64> = z.iter().zip(&sol.x[..n]).map(|(a, b)| a + b).collect();
            let (fc, _) = self.value(&cand);
            let ratio = (f - fc) / predicted;
            if ratio > 0.1 {
                z = cand;
                f = fc;
                if ratio > 0.75 {
                    radius *= 2.0;
                }
            } else {
                radius *= 0.25;
            }
            if radius < 1e-15 * f.max(1.0) {
                break;
            }
        }
        (z, f, active)
    }

    /// Newton on `|v - z|_p = t (v in A)`, `sum mu_v grad_v = 0`,
    /// `sum mu_v = 1`, first on the active set reported by the sequential
    /// LP, then on the `k` farthest points.
    fn polish(&self, z0: &[f64], f0: f64) -> (Vec<f64>, f64, Vec<usize>, Vec<f64>) {
        let n = z0.len();
        let (z1, f1, active) = self.slp(z0, f0);
        if (2..=n + 1).contains(&active.len()) {
            if let Some(sol) = self.newton(&z1, f1, &active) {
                return sol;
            }
        }
        let dists: Vec<f64> = self
            .pts
            .iter()
            .map(|v| norm_p(&sub(v, &z1), self.p))
            .collect();
        let mut order: Vec<usize> = (0..self.pts.len()).collect();
        order.sort_by(|&a, &b| dists[b].total_cmp(&dists[a]).then(a.cmp(&b)));
        for k in 2..=(n + 1).min(order.len()) {
            let mut active = order[..k].to_vec();
            active.sort_unstable();
            if let Some(sol) = self.newton(&z1, f1, &active) {
                return sol;
            }
        }
        (z1, f1, Vec::new(), Vec::new())
    }

    fn newton(
        &self,
        z0: &[f64],
        f0: f64,
        active: &[usize],
    ) -> Option<(Vec<f64>, f64, Vec<usize>, Vec<f64>)> {
        let n = z0.len();
        let m = active.len();
        let dim = n + 1 + m;
        let mut z = z0.to_vec();
        let mut t = f0;
        let mut mu = vec![1.0 / m as f64; m];
        for _ in 0..50 {
            let mut jac = vec![vec![0.0; dim]; dim];
            let mut res = vec![0.0; dim];
            let mut stat = vec![0.0; n];
            for (r, &i) in active.iter().enumerate() {
                let x = sub(&self.pts[i], &z);
                let g = lp_gradient(&x, self.p);
                let h = lp_hessian(&x, self.p);
                res[r] = norm_p(&x, self.p) - t;
                for k in 0..n {
                    jac[r][k] = -g[k];
                }
                jac[r][n] = -1.0;
                axpy(mu[r], &g, &mut stat);
                for a in 0..n {
                    for b in 0..n {
                        jac[m + a][b] -= mu[r] * h[a][b];
                    }
                    jac[m + a][n + 1 + r] = g[a];
                }
                jac[m + n][n + 1 + r] = 1.0;
            }
            res[m..m + n].copy_from_slice(&stat);
            res[m + n] = mu.iter().sum::<f64>() - 1.0;
            if !res.iter().all(|x| x.is_finite()) || !jac.iter().flatten().all(|x| x.is_finite()) {
                return None;
            }
            if norm2(&res) < 1e-14 * t.max(1.0) {
                break;
            }
            let step = solve(jac, res.iter().map(|x| -x).collect())?;
            for k in 0..n {
                z[k] += step[k];
            }
            t += step[n];
            for r in 0..m {
                mu[r] += step[n + 1 + r];
            }
        }
        if mu.iter().any(|&w| !(w > 0.0)) {
            return None;
        }
        let (f, _) = self.value(&z);
        if !(f <= f0) || (f - t).abs() > 1e-9 * t.max(1.0) {
            return None;
        }
        Some((z, f, active.to_vec(), mu))
    }
}

/// Minimizes `max_v |v - z|_p` over `z` for finite `p > 1`.
pub fn minimize_max_lp(
    points: &[Vec<f64>],
    p: f64,
    opts: &DescentOptions,
) -> Result<DescentOutcome> {
    if !(p > 1.0) || p.is_infinite() {
        return Err(Error::input(format!(
            "descent requires finite p > 1, got {p}"
        )));
    }
    let first = points
        .first()
        .ok_or_else(|| Error::input("empty point set"))?;
    let n = first.len();
    let prob = Problem { pts: points, p };
    let mut centroid = vec![0.0; n];
    for v in points {
        axpy(1.0 / points.len() as f64, v, &mut centroid);
    }
    let spread = points
        .iter()
        .map(|v| norm2(&sub(v, &centroid)))
        .fold(0.0, f64::max);
    if spread == 0.0 {
        return Ok(DescentOutcome {
            center: first.clone(),
            radius: 0.0,
            active: Vec::new(),
            weights: Vec::new(),
            iterations: 0,
        });
    }
    // Starting points: the centroid and fixed pseudo-random perturbations.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ad1_u64 ^ n as u64);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut iterations = 0;
    let mut all_converged = true;
    for s in 0..opts.starts.max(1) {
        let mut z0 = centroid.clone();
        if s > 0 {
            axpy(0.1 * spread, &random_unit(n, &mut rng), &mut z0);
        }
        let (z, f, its, conv) = prob.run(z0, opts);
        iterations += its;
        all_converged &= conv;
        if best.as_ref().is_none_or(|b| f < b.1) {
            best = Some((z, f));
        }
    }
    let (z, f) = best.expect("at least one start");
    let (z, f, active, weights) = prob.polish(&z, f);
    if active.is_empty() && !all_converged {
        return Err(Error::SolverFailure {
            message: format!(
                "l_{p} descent did not converge in {} iterations",
                opts.max_iters
            ),
            incumbent: Some(f),
            incumbent_point: Some(z),
        });
    }
    Ok(DescentOutcome {
        center: z,
        radius: f,
        active,
        weights,
        iterations,
    })
}
