//! Dense two-phase simplex with dual multipliers.
//!
//! Problems here are tiny (at most a few hundred rows, about ten
//! variables), so the solver keeps a full tableau, prices with Dantzig's
//! rule and switches to Bland's rule once a run of degenerate pivots
//! suggests cycling. Primal values and duals are recomputed from the
//! original data on the final basis, which removes most of the round-off
//! accumulated by pivoting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{all_finite, dot, solve};
use crate::tol::EPS_FEAS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// One row `coeffs . x (relation) rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of [`solve_lp`].
///
/// Dual convention: `duals[i] >= 0` for every inequality row, and at an
/// optimum `c = sum_i sign_i * duals[i] * a_i` with
/// `sign_i = +1` for rows that push against the optimization direction
/// (`>=` when minimizing, `<=` when maximizing) and `-1` otherwise.
/// Equality rows count as `+1` and carry a free-sign dual. The same
/// signs give the dual objective `sum_i sign_i * duals[i] * b_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub duals: Vec<f64>,
}

impl LpSolution {
    fn without_point(status: LpStatus) -> Self {
        LpSolution {
            status,
            x: Vec::new(),
            objective: f64::NAN,
            duals: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Sign attached to row `i`'s dual in the stationarity and dual-objective
/// identities documented on [`LpSolution`].
pub fn dual_sign(sense: Sense, relation: Relation) -> f64 {
    match (sense, relation) {
        (_, Relation::Eq) => 1.0,
        (Sense::Minimize, Relation::Ge) | (Sense::Maximize, Relation::Le) => 1.0,
        _ => -1.0,
    }
}

/// Solves `min|max c . x` subject to `rows`, all variables free.
pub fn solve_lp(objective: &[f64], rows: &[Constraint], sense: Sense) -> Result<LpSolution> {
    let mut lp = LinearProgram::new(sense, objective.to_vec());
    for r in rows {
        lp.push(r.clone());
    }
    lp.solve()
}

/// LP builder with optional per-variable sign restrictions.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    sense: Sense,
    objective: Vec<f64>,
    rows: Vec<Constraint>,
    nonneg: Vec<bool>,
}

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;
const DEGENERATE_RUN: usize = 50;

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            rows: Vec::new(),
            nonneg: vec![false; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, row: Constraint) -> &mut Self {
        self.rows.push(row);
        self
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.push(Constraint::new(coeffs, relation, rhs))
    }

    /// Restrict variable `j` to `x_j >= 0` without spending a row on it.
    pub fn nonnegative(&mut self, j: usize) -> &mut Self {
        self.nonneg[j] = true;
        self
    }

    pub fn all_nonnegative(&mut self) -> &mut Self {
        self.nonneg.iter_mut().for_each(|b| *b = true);
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if n == 0 {
            return Err(Error::input("LP needs at least one variable"));
        }
        if !all_finite(&self.objective) {
            return Err(Error::input("non-finite objective coefficient"));
        }
        for (i, r) in self.rows.iter().enumerate() {
            if r.coeffs.len() != n {
                return Err(Error::input(format!(
                    "row {i} has {} coefficients, expected {n}",
                    r.coeffs.len()
                )));
            }
            if !all_finite(&r.coeffs) || !r.rhs.is_finite() {
                return Err(Error::input(format!("row {i} has non-finite data")));
            }
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpSolution> {
        self.validate()?;
        let sf = StandardForm::build(self);
        let outcome = sf.run()?;
        match outcome {
            Outcome::Infeasible => Ok(LpSolution::without_point(LpStatus::Infeasible)),
            Outcome::Unbounded => Ok(LpSolution::without_point(LpStatus::Unbounded)),
            Outcome::Optimal {
                basis,
                active_rows,
                tableau_xb,
                tableau_y,
            } => self.finish(&sf, &basis, &active_rows, (tableau_xb, tableau_y)),
        }
    }

    fn finish(
        &self,
        sf: &StandardForm,
        basis: &[usize],
        active_rows: &[usize],
        tableau: (Vec<f64>, Vec<f64>),
    ) -> Result<LpSolution> {
        let m = active_rows.len();
        // B x_B = b and B^T y = c_B on the kept rows, recomputed from the
        // original data; the tableau values stand in when B is too
        // ill-conditioned for that.
        let bmat: Vec<Vec<f64>> = active_rows
            .iter()
            .map(|&i| basis.iter().map(|&j| sf.a[i][j]).collect())
            .collect();
        let rhs: Vec<f64> = active_rows.iter().map(|&i| sf.b[i]).collect();
        let bt: Vec<Vec<f64>> = (0..m)
            .map(|c| (0..m).map(|r| bmat[r][c]).collect())
            .collect();
        let cb: Vec<f64> = basis.iter().map(|&j| sf.cost[j]).collect();
        let (xb, y) = match (solve(bmat, rhs), solve(bt, cb)) {
            (Some(xb), Some(y_active)) => {
                let mut y = vec![0.0; sf.b.len()];
                for (k, &i) in active_rows.iter().enumerate() {
                    y[i] = y_active[k];
                }
                (xb, y)
            }
            _ => tableau,
        };
        let mut xs = vec![0.0; sf.ncols];
        for (k, &j) in basis.iter().enumerate() {
            if j < sf.ncols {
                xs[j] = xb[k];
            }
        }

        let n = self.objective.len();
        let x: Vec<f64> = (0..n)
            .map(|j| {
                let (pos, neg) = sf.var_cols[j];
                xs[pos] - neg.map_or(0.0, |c| xs[c])
            })
            .collect();
        let duals: Vec<f64> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                // internal min form: c_min = sum y_i s_i a_i; tau = +1 for >=/=, -1 for <=.
                let tau = if r.relation == Relation::Le {
                    -1.0
                } else {
                    1.0
                };
                let mu = y[i] * sf.row_sign[i] * tau;
                if r.relation == Relation::Eq && self.sense == Sense::Maximize {
                    -mu
                } else {
                    mu
                }
            })
            .collect();
        let objective = dot(&self.objective, &x);

        let sol = LpSolution {
            status: LpStatus::Optimal,
            x,
            objective,
            duals,
        };
        self.check_optimality(&sol)?;
        Ok(sol)
    }

    /// Rejects optima whose certificate is visibly broken by round-off.
    fn check_optimality(&self, sol: &LpSolution) -> Result<()> {
        let scale = 1.0
            + self
                .rows
                .iter()
                .map(|r| r.rhs.abs())
                .fold(0.0, f64::max)
                .max(sol.x.iter().fold(0.0, |m, v| m.max(v.abs())));
        let tol = 1e3 * EPS_FEAS * scale;
        for (i, r) in self.rows.iter().enumerate() {
            let lhs = dot(&r.coeffs, &sol.x);
            let viol = match r.relation {
                Relation::Le => lhs - r.rhs,
                Relation::Ge => r.rhs - lhs,
                Relation::Eq => (lhs - r.rhs).abs(),
            };
            if viol > tol {
                return Err(Error::solver(format!(
                    "row {i} violated by {viol:e} after simplex"
                )));
            }
        }
        for (j, &nn) in self.nonneg.iter().enumerate() {
            if nn && sol.x[j] < -tol {
                return Err(Error::solver(format!(
                    "variable {j} negative after simplex"
                )));
            }
        }
        Ok(())
    }
}

enum Outcome {
    Optimal {
        basis: Vec<usize>,
        active_rows: Vec<usize>,
        /// Basic values and row duals read off the final tableau.
        tableau_xb: Vec<f64>,
        tableau_y: Vec<f64>,
    },
    Infeasible,
    Unbounded,
}

/// `min cost . x_s  s.t.  a x_s = b, x_s >= 0` with `b >= 0`.
struct StandardForm {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    cost: Vec<f64>,
    ncols: usize,
    /// Column of `x_j^+` and, for free variables, of `x_j^-`.
    var_cols: Vec<(usize, Option<usize>)>,
    /// +1 or -1: the factor row `i` was multiplied by to make `b_i >= 0`.
    row_sign: Vec<f64>,
    /// Slack column with a +1 entry in row `i`, usable as an initial basic variable.
    unit_col: Vec<Option<usize>>,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.objective.len();
        let m = lp.rows.len();
        let mut var_cols = Vec::with_capacity(n);
        let mut col = 0;
        for j in 0..n {
            if lp.nonneg[j] {
                var_cols.push((col, None));
                col += 1;
            } else {
                var_cols.push((col, Some(col + 1)));
                col += 2;
            }
        }
        let mut slack_col = vec![None; m];
        for (i, r) in lp.rows.iter().enumerate() {
            if r.relation != Relation::Eq {
                slack_col[i] = Some(col);
                col += 1;
            }
        }
        let ncols = col;
        let sgn = if lp.sense == Sense::Minimize {
            1.0
        } else {
            -1.0
        };
        let mut cost = vec![0.0; ncols];
        for j in 0..n {
            let (p, q) = var_cols[j];
            cost[p] = sgn * lp.objective[j];
            if let Some(q) = q {
                cost[q] = -sgn * lp.objective[j];
            }
        }
        let mut a = vec![vec![0.0; ncols]; m];
        let mut b = vec![0.0; m];
        let mut row_sign = vec![1.0; m];
        let mut unit_col = vec![None; m];
        for (i, r) in lp.rows.iter().enumerate() {
            let s = if r.rhs < 0.0 { -1.0 } else { 1.0 };
            row_sign[i] = s;
            for j in 0..n {
                let (p, q) = var_cols[j];
                a[i][p] = s * r.coeffs[j];
                if let Some(q) = q {
                    a[i][q] = -s * r.coeffs[j];
                }
            }
            if let Some(sc) = slack_col[i] {
                let coef = if r.relation == Relation::Le {
                    1.0
                } else {
                    -1.0
                };
                a[i][sc] = s * coef;
                if s * coef > 0.0 {
                    unit_col[i] = Some(sc);
                }
            }
            b[i] = s * r.rhs;
        }
        StandardForm {
            a,
            b,
            cost,
            ncols,
            var_cols,
            row_sign,
            unit_col,
        }
    }

    fn run(&self) -> Result<Outcome> {
        let m = self.b.len();
        let mut art_of_row = vec![None; m];
        let mut nart = 0;
        for i in 0..m {
            if self.unit_col[i].is_none() {
                art_of_row[i] = Some(self.ncols + nart);
                nart += 1;
            }
        }
        let total = self.ncols + nart;
        let mut tab = Tableau::new(m, total);
        let mut basis = vec![0; m];
        for i in 0..m {
            for j in 0..self.ncols {
                tab.set(i, j, self.a[i][j]);
            }
            if let Some(ac) = art_of_row[i] {
                tab.set(i, ac, 1.0);
                basis[i] = ac;
            } else {
                basis[i] = self.unit_col[i].unwrap();
            }
            tab.set(i, total, self.b[i]);
        }
        tab.basis = basis;
        tab.row_alive = vec![true; m];

        let max_iters = 20_000 + 100 * (m + total);
        let bscale = 1.0 + self.b.iter().fold(0.0_f64, |s, v| s.max(v.abs()));

        if nart > 0 {
            let mut c1 = vec![0.0; total];
            for c in c1.iter_mut().skip(self.ncols) {
                *c = 1.0;
            }
            let allowed = vec![true; total];
            match tab.optimize(&c1, &allowed, max_iters)? {
                Phase::Optimal => {}
                Phase::Unbounded => return Err(Error::solver("phase one reported unbounded")),
            }
            let infeas: f64 = (0..m)
                .filter(|&i| tab.basis[i] >= self.ncols)
                .map(|i| tab.get(i, total))
                .sum();
            if infeas > 1e-9 * bscale {
                return Ok(Outcome::Infeasible);
            }
            // Drive zero-level artificials out of the basis; rows where
            // that is impossible are redundant.
            for i in 0..m {
                if tab.basis[i] < self.ncols {
                    continue;
                }
                let best = (0..self.ncols)
                    .filter(|j| !tab.basis.contains(j))
                    .max_by(|&p, &q| tab.get(i, p).abs().total_cmp(&tab.get(i, q).abs()));
                match best {
                    Some(j) if tab.get(i, j).abs() > 1e-9 => tab.pivot(i, j),
                    _ => tab.row_alive[i] = false,
                }
            }
        }

        let mut c2 = vec![0.0; total];
        c2[..self.ncols].copy_from_slice(&self.cost);
        let mut allowed = vec![false; total];
        allowed[..self.ncols].iter_mut().for_each(|a| *a = true);
        match tab.optimize(&c2, &allowed, max_iters)? {
            Phase::Unbounded => Ok(Outcome::Unbounded),
            Phase::Optimal => {
                let active_rows: Vec<usize> = (0..m).filter(|&i| tab.row_alive[i]).collect();
                let basis = active_rows.iter().map(|&i| tab.basis[i]).collect();
                let tableau_xb = active_rows.iter().map(|&i| tab.get(i, total)).collect();
                // Identity columns of the start basis carry B^-1, so their
                // reduced costs are -y.
                let d = tab.reduced_costs(&c2);
                let tableau_y = (0..m)
                    .map(|i| {
                        if !tab.row_alive[i] {
                            return 0.0;
                        }
                        let id = self.unit_col[i]
                            .or(art_of_row[i])
                            .expect("every row has a start column");
                        -d[id]
                    })
                    .collect();
                Ok(Outcome::Optimal {
                    basis,
                    active_rows,
                    tableau_xb,
                    tableau_y,
                })
            }
        }
    }
}

enum Phase {
    Optimal,
    Unbounded,
}

struct Tableau {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    row_alive: Vec<bool>,
}

impl Tableau {
    fn new(rows: usize, cols: usize) -> Self {
        Tableau {
            rows,
            cols,
            data: vec![0.0; rows * (cols + 1)],
            basis: Vec::new(),
            row_alive: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.cols + 1) + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * (self.cols + 1) + j] = v;
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.get(pr, pc);
        for k in 0..w {
            self.data[pr * w + k] /= p;
        }
        self.set(pr, pc, 1.0);
        let prow: Vec<f64> = self.data[pr * w..(pr + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == pr || !self.row_alive[i] {
                continue;
            }
            let f = self.get(i, pc);
            if f == 0.0 {
                continue;
            }
            let row = &mut self.data[i * w..(i + 1) * w];
            for (r, pv) in row.iter_mut().zip(&prow) {
                *r -= f * pv;
            }
            row[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for i in 0..self.rows {
            if !self.row_alive[i] {
                continue;
            }
            let cb = cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                *dj -= cb * self.get(i, j);
            }
        }
        d
    }

    fn optimize(&mut self, cost: &[f64], allowed: &[bool], max_iters: usize) -> Result<Phase> {
        let rhs = self.cols;
        let mut bland = false;
        let mut degenerate_run = 0;
        for _ in 0..max_iters {
            // Reduced costs are recomputed each iteration; cheaper than
            // it sounds at these sizes and avoids drift in an objective row.
            let d = self.reduced_costs(cost);
            let cscale = 1.0 + cost.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
            let candidates = (0..self.cols)
                .filter(|&j| allowed[j] && !self.is_basic(j) && d[j] < -COST_TOL * cscale);
            let entering = if bland {
                candidates.min()
            } else {
                candidates.min_by(|&p, &q| d[p].total_cmp(&d[q]).then(p.cmp(&q)))
            };
            let Some(pc) = entering else {
                return Ok(Phase::Optimal);
            };

            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                if !self.row_alive[i] {
                    continue;
                }
                let aij = self.get(i, pc);
                if aij <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.get(i, rhs).max(0.0) / aij;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                        let better = if tie {
                            if bland {
                                self.basis[i] < self.basis[bi]
                            } else {
                                aij > self.get(bi, pc)
                            }
                        } else {
                            ratio < br
                        };
                        if better {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((pr, step)) = leave else {
                return Ok(Phase::Unbounded);
            };
            if step <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run > DEGENERATE_RUN {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(pr, pc);
        }
        Err(Error::solver(format!(
            "simplex made no progress within {max_iters} pivots"
        )))
    }

    fn is_basic(&self, j: usize) -> bool {
        self.basis
            .iter()
            .zip(&self.row_alive)
            .any(|(&b, &alive)| alive && b == j)
    }
}
