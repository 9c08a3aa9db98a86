//! Exact branch-and-bound over the LP backend, with lazy constraints via an
//! incumbent callback and optional warm-start guidance.

use super::simplex::{DenseSimplex, LpBackend, LpResult};
use super::{Model, Row, VarId, VarKind, FEAS_TOL, INT_TOL};
use std::sync::atomic::{AtomicU64, Ordering as AtOrd};
use std::time::Instant;

pub static NODES_TOTAL: AtomicU64 = AtomicU64::new(0);

/// Absolute slack added to reduced-cost fixing thresholds.
const RC_SAFETY: f64 = f64::INFINITY; // bisect: disable fixing
pub static CB_NANOS: AtomicU64 = AtomicU64::new(0);
pub static CB_CALLS: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MipStatus {
    Optimal,
    Infeasible,
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchRule {
    MostFractional,
    FirstFractional,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub branch_rule: BranchRule,
    pub node_limit: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            branch_rule: BranchRule::MostFractional,
            node_limit: None,
            deadline: None,
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub status: MipStatus,
    /// Incumbent assignment over all variables, when one exists.
    pub values: Option<Vec<f64>>,
    /// Exact incumbent objective; integral models only carry integers.
    pub objective: Option<f64>,
    /// Proven lower bound (equals the objective for `Optimal`).
    pub best_bound: f64,
    pub nodes: usize,
    /// Rows returned by the callback during this solve, in arrival order.
    pub cuts: Vec<Row>,
}

/// An incumbent callback maps a candidate integer assignment to violated
/// rows; empty means the candidate is accepted.
pub type IncumbentCallback<'a> = dyn FnMut(&[f64]) -> Vec<Row> + 'a;

struct Node {
    bound: f64,
    depth: u32,
    changes: Vec<(usize, f64, f64)>,
}

/// Solve a model to proven optimality (zero gap at the integrality and
/// feasibility tolerances).
///
/// * `callback`: lazy-constraint hook invoked on every integer-feasible
///   candidate; returned rows are added globally and the node is re-solved.
///   A candidate only becomes the incumbent once the callback returns empty.
/// * `warm_start`: assignment used to seed the incumbent when it is feasible
///   for the current constraint set; otherwise its values still steer the
///   branching direction.
pub fn solve(
    model: &Model,
    mut callback: Option<&mut IncumbentCallback<'_>>,
    warm_start: Option<&[f64]>,
    options: &SolveOptions,
) -> Outcome {
    let mut backend = DenseSimplex::new();
    backend.load(model);
    let integral = model.objective_is_integral();

    let mut cuts: Vec<Row> = Vec::new();
    let mut incumbent: Option<(Vec<f64>, f64)> = None;
    let mut hint: Option<Vec<f64>> = None;

    if let Some(w) = warm_start {
        if model.is_integer_feasible(w) {
            // the callback vets warm starts exactly like branch-and-bound
            // candidates; a vetoed start still guides branching
            let mut accepted = true;
            if let Some(cb) = callback.as_mut() {
                let new_cuts = cb(w);
                if !new_cuts.is_empty() {
                    accepted = false;
                    for cut in new_cuts {
                        assert!(
                            !cut.satisfied(w, FEAS_TOL),
                            "callback returned a cut not violated by the candidate"
                        );
                        backend.add_row(&cut);
                        cuts.push(cut);
                    }
                }
            }
            if accepted {
                let obj = exact_objective(model, w, integral);
                incumbent = Some((w.to_vec(), obj));
            }
        }
        hint = Some(w.to_vec());
    }

    let root: Vec<(f64, f64)> = model.vars.iter().map(|v| (v.lb, v.ub)).collect();
    let mut current = root.clone();

    // depth-first: keeps consecutive node LPs a single bound change apart,
    // so the dual warm start stays close
    let mut stack: Vec<Node> = vec![Node {
        bound: f64::NEG_INFINITY,
        depth: 0,
        changes: Vec::new(),
    }];

    let mut nodes = 0usize;
    let mut status = MipStatus::Optimal;

    'search: while let Some(node) = stack.pop() {
        if let Some(limit) = options.node_limit {
            if nodes >= limit {
                status = MipStatus::Limit;
                stack.push(node);
                break 'search;
            }
        }
        if let Some(deadline) = options.deadline {
            if Instant::now() >= deadline {
                status = MipStatus::Limit;
                stack.push(node);
                break 'search;
            }
        }
        if pruned(node.bound, &incumbent, integral) {
            continue;
        }
        nodes += 1;
        NODES_TOTAL.fetch_add(1, AtOrd::Relaxed);

        // activate this node's bounds
        let mut target = root.clone();
        for &(j, lo, hi) in &node.changes {
            target[j] = (lo, hi);
        }
        for (j, (&t, c)) in target.iter().zip(current.iter_mut()).enumerate() {
            if t != *c {
                backend.set_bounds(VarId(j), t.0, t.1);
                *c = t;
            }
        }

        // solve, letting the callback veto integer candidates
        let lp = 'resolve: loop {
            match backend.solve() {
                LpResult::Infeasible => break 'resolve None,
                LpResult::Optimal { objective, values } => {
                    if pruned(objective, &incumbent, integral) {
                        break 'resolve None;
                    }
                    let frac = pick_branch_var(model, &values, options.branch_rule);
                    if frac.is_some() {
                        break 'resolve Some((objective, values, frac));
                    }
                    let snapped = snap(model, &values);
                    debug_assert!(
                        model.is_integer_feasible(&snapped)
                            && cuts.iter().all(|r| r.satisfied(&snapped, FEAS_TOL)),
                        "integral LP solution fails row verification"
                    );
                    if let Some(cb) = callback.as_mut() {
                        let _t0 = Instant::now();
                        CB_CALLS.fetch_add(1, AtOrd::Relaxed);
                        let new_cuts = cb(&snapped);
                        CB_NANOS.fetch_add(_t0.elapsed().as_nanos() as u64, AtOrd::Relaxed);
                        if !new_cuts.is_empty() {
                            for cut in new_cuts {
                                assert!(
                                    !cut.satisfied(&snapped, FEAS_TOL),
                                    "callback returned a cut not violated by the candidate"
                                );
                                backend.add_row(&cut);
                                cuts.push(cut);
                            }
                            continue 'resolve;
                        }
                    }
                    // accepted incumbent
                    let obj = exact_objective(model, &snapped, integral);
                    if incumbent.as_ref().map_or(true, |(_, best)| obj < *best) {
                        incumbent = Some((snapped, obj));
                    }
                    break 'resolve None;
                }
            }
        };

        let Some((bound, values, frac)) = lp else {
            continue;
        };
        let var = frac.expect("branching variable");
        let x = values[var];
        let prefer_up = match &hint {
            Some(h) => h[var] >= 0.5,
            None => x >= 0.5,
        };
        // with an incumbent, binaries whose reduced cost already closes the
        // gap can be fixed at their bound for the whole subtree
        let mut inherited = node.changes.clone();
        if let Some((_, best)) = &incumbent {
            let cutoff = if integral { *best - 1.0 } else { *best };
            // the margin keeps reduced-cost drift from fixing variables
            // whose true reduced cost is zero (ties are common once the
            // objective floor pins the bound to the cutoff)
            let gap = cutoff - bound + RC_SAFETY;
            if gap.is_finite() {
                for (j, up) in backend.rc_fixes(gap) {
                    if model.vars[j].kind == VarKind::Binary && current[j].0 != current[j].1 {
                        let b = if up { 1.0 } else { 0.0 };
                        inherited.push((j, b, b));
                    }
                }
            }
        }
        let mk_child = |fix_up: bool| {
            let mut changes = inherited.clone();
            if fix_up {
                changes.push((var, 1.0, 1.0));
            } else {
                changes.push((var, 0.0, 0.0));
            }
            Node {
                bound,
                depth: node.depth + 1,
                changes,
            }
        };
        // the preferred child is pushed last so the dive follows the hint
        stack.push(mk_child(!prefer_up));
        stack.push(mk_child(prefer_up));
    }

    let open_bound = stack
        .iter()
        .map(|n| n.bound)
        .fold(f64::INFINITY, f64::min);
    let best_bound = match (&incumbent, status) {
        (Some((_, obj)), MipStatus::Limit) => open_bound.min(*obj),
        (Some((_, obj)), _) => *obj,
        (None, MipStatus::Limit) => open_bound,
        (None, _) => f64::INFINITY,
    };
    let (status, values, objective) = match incumbent {
        Some((vals, obj)) => (status, Some(vals), Some(obj)),
        None => (
            if status == MipStatus::Limit {
                MipStatus::Limit
            } else {
                MipStatus::Infeasible
            },
            None,
            None,
        ),
    };
    Outcome {
        status,
        values,
        objective,
        best_bound,
        nodes,
        cuts,
    }
}

fn exact_objective(model: &Model, values: &[f64], integral: bool) -> f64 {
    if integral {
        model.integral_objective(values) as f64
    } else {
        model
            .vars
            .iter()
            .zip(values)
            .map(|(v, &x)| v.obj * x)
            .sum()
    }
}

fn pruned(bound: f64, incumbent: &Option<(Vec<f64>, f64)>, integral: bool) -> bool {
    match incumbent {
        None => false,
        Some((_, best)) => {
            if integral {
                (bound - FEAS_TOL).ceil() >= *best
            } else {
                bound >= *best - 1e-9
            }
        }
    }
}

fn snap(model: &Model, values: &[f64]) -> Vec<f64> {
    model
        .vars
        .iter()
        .zip(values)
        .map(|(v, &x)| {
            if v.kind == VarKind::Binary {
                x.round()
            } else {
                x
            }
        })
        .collect()
}

fn pick_branch_var(model: &Model, values: &[f64], rule: BranchRule) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, v) in model.vars.iter().enumerate() {
        if v.kind != VarKind::Binary {
            continue;
        }
        let x = values[j];
        let frac = (x - x.round()).abs();
        if frac <= INT_TOL {
            continue;
        }
        match rule {
            BranchRule::FirstFractional => return Some(j),
            BranchRule::MostFractional => {
                let score = 0.5 - (x - x.floor() - 0.5).abs();
                if best.map_or(true, |(_, s)| score > s + 1e-12) {
                    best = Some((j, score));
                }
            }
        }
    }
    best.map(|(j, _)| j)
}
