//! Dense bounded-variable dual simplex.
//!
//! The engine is dual simplex only: every basis it touches is dual feasible
//! by construction (slack start with costs on nonbasics at their cheap
//! bound), and the branch-and-bound driver only ever changes bounds, adds
//! rows, or changes the right-hand side — all of which preserve dual
//! feasibility of the current basis. Re-solves therefore warm start from
//! wherever the previous solve stopped.

use super::{Model, Row, Sense, VarId};
use std::sync::atomic::{AtomicU64, Ordering};

pub static PIVOTS: AtomicU64 = AtomicU64::new(0);
pub static LP_SOLVES: AtomicU64 = AtomicU64::new(0);
pub static LP_NANOS: AtomicU64 = AtomicU64::new(0);

const PRIMAL_TOL: f64 = 1e-7;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-7;
const DEGENERATE_STREAK: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Optimal { objective: f64, values: Vec<f64> },
    Infeasible,
}

/// Replaceable LP-relaxation contract: load a model, then interleave bound
/// changes, row additions and re-solves.
pub trait LpBackend {
    fn load(&mut self, model: &Model);
    fn set_bounds(&mut self, var: VarId, lb: f64, ub: f64);
    fn add_row(&mut self, row: &Row);
    fn solve(&mut self) -> LpResult;
    fn n_rows(&self) -> usize;
    /// Structural variables whose reduced cost at the current basis exceeds
    /// `gap`: moving them off their bound cannot reach a better solution.
    /// Returns (column, sits at upper bound).
    fn rc_fixes(&self, gap: f64) -> Vec<(usize, bool)>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ColStatus {
    Basic(usize),
    AtLower,
    AtUpper,
}

#[derive(Debug, Default)]
pub struct DenseSimplex {
    n_struct: usize,
    /// Tableau rows over all columns (structurals then slacks): B^-1 [A | I].
    tab: Vec<Vec<f64>>,
    /// Original structural coefficients and rhs per row, for refreshes.
    orig: Vec<(Vec<(usize, f64)>, f64)>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    cost: Vec<f64>,
    status: Vec<ColStatus>,
    basis: Vec<usize>,
    xb: Vec<f64>,
    /// Reduced costs.
    d: Vec<f64>,
    refreshed: bool,
}

impl DenseSimplex {
    pub fn new() -> DenseSimplex {
        DenseSimplex::default()
    }

    fn ncols(&self) -> usize {
        self.n_struct + self.tab.len()
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.status[j] {
            ColStatus::AtLower => self.lb[j],
            ColStatus::AtUpper => self.ub[j],
            ColStatus::Basic(r) => self.xb[r],
        }
    }

    fn initial_status(&self, j: usize) -> ColStatus {
        let c = self.cost[j];
        if c > 0.0 {
            assert!(
                self.lb[j].is_finite(),
                "positive cost on variable without lower bound"
            );
            ColStatus::AtLower
        } else if c < 0.0 {
            assert!(
                self.ub[j].is_finite(),
                "negative cost on variable without upper bound"
            );
            ColStatus::AtUpper
        } else if self.lb[j].is_finite() {
            ColStatus::AtLower
        } else {
            assert!(self.ub[j].is_finite(), "free variables are unsupported");
            ColStatus::AtUpper
        }
    }
}

impl LpBackend for DenseSimplex {
    fn load(&mut self, model: &Model) {
        let n = model.n_vars();
        let m = model.rows.len();
        self.n_struct = n;
        self.lb = Vec::with_capacity(n + m);
        self.ub = Vec::with_capacity(n + m);
        self.cost = Vec::with_capacity(n + m);
        for v in &model.vars {
            self.lb.push(v.lb);
            self.ub.push(v.ub);
            self.cost.push(v.obj);
        }
        self.orig = Vec::with_capacity(m);
        self.tab = Vec::with_capacity(m);
        self.basis = Vec::with_capacity(m);
        for row in &model.rows {
            self.push_row_internal(row);
        }
        self.status = (0..n).map(|j| self.initial_status(j)).collect();
        for (r, _) in self.orig.iter().enumerate() {
            self.status.push(ColStatus::Basic(r));
        }
        self.d = self.cost.clone();
        self.refreshed = false;
        self.rebuild_xb();
    }

    fn set_bounds(&mut self, var: VarId, lb: f64, ub: f64) {
        let j = var.0;
        match self.status[j] {
            ColStatus::Basic(_) => {
                self.lb[j] = lb;
                self.ub[j] = ub;
            }
            ColStatus::AtLower => {
                assert!(lb.is_finite(), "nonbasic anchor must stay finite");
                let delta = lb - self.lb[j];
                self.lb[j] = lb;
                self.ub[j] = ub;
                if delta != 0.0 {
                    self.shift_nonbasic(j, delta);
                }
            }
            ColStatus::AtUpper => {
                assert!(ub.is_finite(), "nonbasic anchor must stay finite");
                let delta = ub - self.ub[j];
                self.lb[j] = lb;
                self.ub[j] = ub;
                if delta != 0.0 {
                    self.shift_nonbasic(j, delta);
                }
            }
        }
    }

    fn add_row(&mut self, row: &Row) {
        #[cfg(debug_assertions)]
        self.check_consistency("pre-add-row");
        let r_new = self.tab.len();
        // extend existing rows with the new slack column
        let insert_at = self.n_struct + r_new;
        for t in &mut self.tab {
            t.insert(insert_at, 0.0);
        }
        self.d.insert(insert_at, 0.0);
        let (slack_lb, slack_ub) = slack_bounds(row.sense);
        self.lb.insert(insert_at, slack_lb);
        self.ub.insert(insert_at, slack_ub);
        self.cost.insert(insert_at, 0.0);
        self.status.insert(insert_at, ColStatus::Basic(r_new));

        // build the tableau row: original coefficients, then eliminate the
        // current basic variables (tableau basis columns are unit vectors)
        let (coeffs, rhs) = Self::scaled(row);
        let mut t = vec![0.0; self.ncols() + 1];
        for &(j, c) in &coeffs {
            t[j] += c;
        }
        t[insert_at] = 1.0;
        for i in 0..r_new {
            let f = t[self.basis[i]];
            if f != 0.0 {
                for (tv, sv) in t.iter_mut().zip(self.tab[i].iter()) {
                    *tv -= f * sv;
                }
            }
        }
        // slack value from the current solution
        let mut activity = 0.0;
        for &(j, c) in &coeffs {
            activity += c * self.nonbasic_value(j);
        }
        let slack_val = rhs - activity;
        self.tab.push(t);
        self.orig.push((coeffs, rhs));
        self.basis.push(insert_at);
        self.xb.push(slack_val);
        self.refreshed = false;
    }

    fn solve(&mut self) -> LpResult {
        let _t0 = std::time::Instant::now();
        LP_SOLVES.fetch_add(1, Ordering::Relaxed);
        let result = self.solve_inner();
        LP_NANOS.fetch_add(_t0.elapsed().as_nanos() as u64, Ordering::Relaxed);
        result
    }

    fn n_rows(&self) -> usize {
        self.tab.len()
    }

    fn rc_fixes(&self, gap: f64) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for j in 0..self.n_struct {
            match self.status[j] {
                ColStatus::AtLower if self.d[j] > gap => out.push((j, false)),
                ColStatus::AtUpper if self.d[j] < -gap => out.push((j, true)),
                _ => {}
            }
        }
        out
    }
}

impl DenseSimplex {
    fn solve_inner(&mut self) -> LpResult {
        let mut degenerate = 0usize;
        let mut bland = false;
        let size = self.ncols() + self.tab.len();
        let soft_cap = 2_000 + 20 * size;
        let hard_cap = 2 * soft_cap;
        let max_iters = 10 * hard_cap + 100_000;
        for iter in 0..max_iters {
            // escalating anti-stall: clean the numerics, then restart from
            // the slack basis under smallest-index selection, which cannot
            // cycle
            if iter == soft_cap && !self.refreshed {
                self.refresh();
            }
            if iter == hard_cap {
                self.reset_to_slack_basis();
                bland = true;
            }
            let strict = bland || degenerate >= DEGENERATE_STREAK;
            let mut leave: Option<(usize, bool, f64)> = None;
            for r in 0..self.tab.len() {
                let v = self.basis[r];
                let x = self.xb[r];
                let (viol, to_lower) = if x < self.lb[v] - PRIMAL_TOL {
                    (self.lb[v] - x, true)
                } else if x > self.ub[v] + PRIMAL_TOL {
                    (x - self.ub[v], false)
                } else {
                    continue;
                };
                let better = match leave {
                    None => true,
                    // Bland-style: smallest basis variable index
                    Some((rr, _, w)) => {
                        if strict {
                            v < self.basis[rr]
                        } else {
                            viol > w
                        }
                    }
                };
                if better {
                    leave = Some((r, to_lower, viol));
                }
            }
            let Some((r, to_lower, _)) = leave else {
                return LpResult::Optimal {
                    objective: self.objective(),
                    values: self.values(),
                };
            };

            match self.choose_entering(r, to_lower, strict) {
                Some(q) => {
                    if self.d[q].abs() <= DUAL_TOL {
                        degenerate += 1;
                    } else {
                        degenerate = 0;
                    }
                    self.pivot(r, q, to_lower);
                    self.refreshed = false;
                }
                None => {
                    // protect against numerically induced infeasibility
                    if !self.refreshed {
                        self.refresh();
                        continue;
                    }
                    return LpResult::Infeasible;
                }
            }
        }
        panic!("simplex did not terminate within the iteration bound");
    }
}

fn slack_bounds(sense: Sense) -> (f64, f64) {
    match sense {
        Sense::Le => (0.0, f64::INFINITY),
        Sense::Ge => (f64::NEG_INFINITY, 0.0),
        Sense::Eq => (0.0, 0.0),
    }
}

impl DenseSimplex {
    /// Rows are stored scaled to unit infinity norm so pivot tolerances
    /// mean the same thing across constraint families.
    fn scaled(row: &Row) -> (Vec<(usize, f64)>, f64) {
        let norm = row
            .coeffs
            .iter()
            .map(|&(_, c)| c.abs())
            .fold(0.0f64, f64::max);
        let k = if norm > 0.0 { 1.0 / norm } else { 1.0 };
        (
            row.coeffs.iter().map(|&(v, c)| (v.0, c * k)).collect(),
            row.rhs * k,
        )
    }

    fn push_row_internal(&mut self, row: &Row) {
        let r = self.tab.len();
        let (coeffs, rhs) = Self::scaled(row);
        let (slb, sub) = slack_bounds(row.sense);
        self.lb.push(slb);
        self.ub.push(sub);
        self.cost.push(0.0);
        self.orig.push((coeffs, rhs));
        self.basis.push(self.n_struct + r);
        self.tab.push(Vec::new()); // filled on first full build
    }

    /// Build the tableau assuming the all-slack basis recorded by load().
    fn rebuild_xb(&mut self) {
        let m = self.orig.len();
        let ncols = self.n_struct + m;
        for (r, t) in self.tab.iter_mut().enumerate() {
            t.clear();
            t.resize(ncols, 0.0);
            for &(j, c) in &self.orig[r].0 {
                t[j] += c;
            }
            t[self.n_struct + r] = 1.0;
        }
        self.xb = (0..m)
            .map(|r| {
                let mut activity = 0.0;
                for &(j, c) in &self.orig[r].0 {
                    activity += c * self.nonbasic_value(j);
                }
                self.orig[r].1 - activity
            })
            .collect();
    }

    fn shift_nonbasic(&mut self, j: usize, delta: f64) {
        for r in 0..self.tab.len() {
            let a = self.tab[r][j];
            if a != 0.0 {
                self.xb[r] -= a * delta;
            }
        }
    }

    /// Dual ratio test. `bland` switches to smallest-index selection to
    /// break degeneracy streaks.
    fn choose_entering(&self, r: usize, to_lower: bool, bland: bool) -> Option<usize> {
        let row = &self.tab[r];
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.ncols() {
            let alpha = row[j];
            if alpha.abs() <= PIVOT_TOL {
                continue;
            }
            let eligible = match self.status[j] {
                ColStatus::Basic(_) => false,
                ColStatus::AtLower => {
                    if to_lower {
                        alpha < 0.0
                    } else {
                        alpha > 0.0
                    }
                }
                ColStatus::AtUpper => {
                    if to_lower {
                        alpha > 0.0
                    } else {
                        alpha < 0.0
                    }
                }
            };
            if !eligible {
                continue;
            }
            if bland {
                return Some(j);
            }
            let ratio = self.d[j].abs() / alpha.abs();
            match best {
                None => best = Some((j, ratio, alpha.abs())),
                Some((_, br, ba)) => {
                    if ratio < br - 1e-12 || (ratio < br + 1e-12 && alpha.abs() > ba) {
                        best = Some((j, ratio, alpha.abs()));
                    }
                }
            }
        }
        best.map(|(j, _, _)| j)
    }

    #[cfg(debug_assertions)]
    fn check_consistency(&self, context: &str) {
        let mut seen = std::collections::HashSet::new();
        for (r, &v) in self.basis.iter().enumerate() {
            assert!(seen.insert(v), "{context}: duplicate basis var {v}");
            assert!(
                matches!(self.status[v], ColStatus::Basic(row) if row == r),
                "{context}: basis/status mismatch at row {r} var {v}: {:?}",
                self.status[v]
            );
        }
        let basic_count = self
            .status
            .iter()
            .filter(|s| matches!(s, ColStatus::Basic(_)))
            .count();
        assert_eq!(basic_count, self.basis.len(), "{context}: stray basic status");
    }

    fn pivot(&mut self, r: usize, q: usize, to_lower: bool) {
        PIVOTS.fetch_add(1, Ordering::Relaxed);
        #[cfg(debug_assertions)]
        self.check_consistency("pre-pivot");
        let leaving = self.basis[r];
        let target = if to_lower { self.lb[leaving] } else { self.ub[leaving] };
        let alpha_rq = self.tab[r][q];
        let delta = (self.xb[r] - target) / alpha_rq;

        // value updates
        let entering_old = self.nonbasic_value(q);
        for i in 0..self.tab.len() {
            if i != r {
                let a = self.tab[i][q];
                if a != 0.0 {
                    self.xb[i] -= a * delta;
                }
            }
        }
        self.xb[r] = entering_old + delta;

        // row reduction
        let mut prow = std::mem::take(&mut self.tab[r]);
        let inv = 1.0 / alpha_rq;
        for v in prow.iter_mut() {
            *v *= inv;
        }
        for (i, row) in self.tab.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[q];
            if f != 0.0 {
                for (rv, pv) in row.iter_mut().zip(prow.iter()) {
                    *rv -= f * pv;
                }
                row[q] = 0.0;
            }
        }
        let fd = self.d[q];
        if fd != 0.0 {
            for (dv, pv) in self.d.iter_mut().zip(prow.iter()) {
                *dv -= fd * pv;
            }
            self.d[q] = 0.0;
        }
        self.tab[r] = prow;

        self.status[leaving] = if to_lower {
            ColStatus::AtLower
        } else {
            ColStatus::AtUpper
        };
        self.status[q] = ColStatus::Basic(r);
        self.basis[r] = q;
    }

    fn objective(&self) -> f64 {
        (0..self.ncols())
            .map(|j| self.cost[j] * self.nonbasic_value(j))
            .sum()
    }

    /// Structural variable values of the current basis.
    pub fn values(&self) -> Vec<f64> {
        (0..self.n_struct).map(|j| self.nonbasic_value(j)).collect()
    }

    /// Rebuild the tableau, basic values and reduced costs from the original
    /// data under the current basis (Gauss-Jordan on the basis columns).
    fn refresh(&mut self) {
        let m = self.tab.len();
        let ncols = self.ncols();
        // aug = [B | A I b], eliminated in place
        let mut aug: Vec<Vec<f64>> = (0..m)
            .map(|r| {
                let mut row = vec![0.0; m + ncols + 1];
                for (k, &bv) in self.basis.iter().enumerate() {
                    row[k] = self.col_coeff(r, bv);
                }
                for &(j, c) in &self.orig[r].0 {
                    row[m + j] += c;
                }
                row[m + self.n_struct + r] = 1.0;
                row[m + ncols] = self.orig[r].1;
                row
            })
            .collect();
        for k in 0..m {
            // partial pivot
            let mut piv = k;
            for i in k + 1..m {
                if aug[i][k].abs() > aug[piv][k].abs() {
                    piv = i;
                }
            }
            aug.swap(k, piv);
            let p = aug[k][k];
            if p.abs() <= 1e-11 {
                // drift pivoted on a phantom entry; restart from the slack
                // basis, which is always valid and dual feasible
                self.reset_to_slack_basis();
                return;
            }
            let prow = std::mem::take(&mut aug[k]);
            let inv = 1.0 / p;
            let prow: Vec<f64> = prow.into_iter().map(|v| v * inv).collect();
            for (i, row) in aug.iter_mut().enumerate() {
                if i != k {
                    let f = row[k];
                    if f != 0.0 {
                        for (rv, pv) in row.iter_mut().zip(prow.iter()) {
                            *rv -= f * pv;
                        }
                    }
                }
            }
            aug[k] = prow;
        }
        let mut binv_b = vec![0.0; m];
        for r in 0..m {
            self.tab[r].clear();
            self.tab[r].extend_from_slice(&aug[r][m..m + ncols]);
            binv_b[r] = aug[r][m + ncols];
        }
        // xb = B^-1 b - sum_nonbasic T_j x_j
        for r in 0..m {
            let mut v = binv_b[r];
            for j in 0..ncols {
                if !matches!(self.status[j], ColStatus::Basic(_)) {
                    let a = self.tab[r][j];
                    if a != 0.0 {
                        v -= a * self.nonbasic_value(j);
                    }
                }
            }
            self.xb[r] = v;
        }
        // reduced costs d = c - c_B B^-1 A
        let cb: Vec<f64> = self.basis.iter().map(|&v| self.cost[v]).collect();
        let any_cb = cb.iter().any(|&c| c != 0.0);
        for j in 0..ncols {
            let mut dj = self.cost[j];
            if any_cb {
                for r in 0..m {
                    if cb[r] != 0.0 {
                        dj -= cb[r] * self.tab[r][j];
                    }
                }
            }
            self.d[j] = dj;
        }
        // re-anchor nonbasics whose recomputed reduced cost drifted to the
        // dual-infeasible side, when the opposite bound exists
        for j in 0..ncols {
            match self.status[j] {
                ColStatus::AtLower if self.d[j] < -DUAL_TOL && self.ub[j].is_finite() => {
                    let delta = self.ub[j] - self.lb[j];
                    self.status[j] = ColStatus::AtUpper;
                    if delta != 0.0 {
                        self.shift_nonbasic(j, delta);
                    }
                }
                ColStatus::AtUpper if self.d[j] > DUAL_TOL && self.lb[j].is_finite() => {
                    let delta = self.lb[j] - self.ub[j];
                    self.status[j] = ColStatus::AtLower;
                    if delta != 0.0 {
                        self.shift_nonbasic(j, delta);
                    }
                }
                _ => {}
            }
        }
        self.refreshed = true;
    }

    fn reset_to_slack_basis(&mut self) {
        let m = self.tab.len();
        for j in 0..self.ncols() {
            self.status[j] = if j >= self.n_struct {
                ColStatus::Basic(j - self.n_struct)
            } else {
                self.initial_status(j)
            };
        }
        self.basis = (0..m).map(|r| self.n_struct + r).collect();
        self.rebuild_xb();
        self.d = self.cost.clone();
        self.refreshed = true;
    }

    /// Original coefficient of column `col` in row `r`.
    fn col_coeff(&self, r: usize, col: usize) -> f64 {
        if col >= self.n_struct {
            return if col - self.n_struct == r { 1.0 } else { 0.0 };
        }
        self.orig[r]
            .0
            .iter()
            .filter(|&&(j, _)| j == col)
            .map(|&(_, c)| c)
            .sum()
    }
}
