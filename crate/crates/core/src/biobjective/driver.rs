//! Shared machinery for the enumeration schemes: one bounded lexicographic
//! or weighted solve at a time, with separation attached for the binary
//! reformulation and cuts optionally carried across solves.

use super::{trips_by_mot, ParetoPoint};
use crate::instance::Instance;
use crate::mip::{self, BranchRule, MipStatus, Row, SolveOptions};
use crate::models::{AssembledProblem, Formulation, Objective};
use crate::multigraph::Graph;
use crate::separation::{CutEvent, M4bSeparator};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    CostFirst,
    PrefFirst,
}

impl Direction {
    pub fn primary(self) -> Objective {
        match self {
            Direction::CostFirst => Objective::Cost,
            Direction::PrefFirst => Objective::Pref,
        }
    }

    pub fn secondary(self) -> Objective {
        match self {
            Direction::CostFirst => Objective::Pref,
            Direction::PrefFirst => Objective::Cost,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct EnumerateConfig {
    pub propagate_cuts: bool,
    /// Seed the first solve (and hint later ones) with this assignment.
    pub warm_start: Option<Vec<f64>>,
    pub node_limit: Option<usize>,
    pub deadline: Option<Instant>,
}

pub struct FrontierInputs<'a> {
    pub problem: &'a AssembledProblem,
    pub graph: &'a Graph,
    pub instance: &'a Instance,
}

impl<'a> FrontierInputs<'a> {
    pub fn needs_separation(&self) -> bool {
        self.problem.formulation == Formulation::M4b
    }
}

/// Outcome of one single-objective MIP under the carried cut pool.
pub(super) enum SolveOutcome {
    Solved {
        values: Vec<f64>,
        objective: i64,
    },
    Infeasible,
    Budget,
}

pub(super) struct Driver<'a> {
    pub inputs: &'a FrontierInputs<'a>,
    pub config: &'a EnumerateConfig,
    /// Cuts carried into every subsequent model when propagation is on.
    pub carried: Vec<Row>,
    carried_keys: std::collections::HashSet<(Vec<(usize, i64)>, u8, i64)>,
    pub cut_events: Vec<(usize, CutEvent)>,
    pub iteration: usize,
    pub mip_solves: usize,
    /// Last accepted assignment, used as a branching hint.
    pub hint: Option<Vec<f64>>,
    /// Cut counts of the current iteration, by stage.
    pub stage_counts: [usize; 3],
}

impl<'a> Driver<'a> {
    pub fn new(inputs: &'a FrontierInputs<'a>, config: &'a EnumerateConfig) -> Self {
        Driver {
            inputs,
            config,
            carried: Vec::new(),
            carried_keys: std::collections::HashSet::new(),
            cut_events: Vec::new(),
            iteration: 0,
            mip_solves: 0,
            hint: config.warm_start.clone(),
            stage_counts: [0; 3],
        }
    }

    /// Minimize `w_cost, w_pref` over the base problem plus `bounds` rows
    /// plus the carried cuts.
    pub fn solve_weighted(
        &mut self,
        w_cost: i64,
        w_pref: i64,
        bounds: &[Row],
    ) -> SolveOutcome {
        let mut problem = self.inputs.problem.clone();
        problem.set_objective(w_cost, w_pref);
        for row in bounds {
            problem.model.add_row(row.clone());
        }
        for row in &self.carried {
            problem.model.add_row(row.clone());
        }
        let options = SolveOptions {
            branch_rule: BranchRule::MostFractional,
            node_limit: self.config.node_limit,
            deadline: self.config.deadline,
        };
        self.mip_solves += 1;
        let outcome = if self.inputs.needs_separation() {
            let mut separator =
                M4bSeparator::new(self.inputs.graph, self.inputs.instance, &problem);
            let mut cb = |values: &[f64]| separator.separate(values);
            let out = mip::solve(&problem.model, Some(&mut cb), self.hint.as_deref(), &options);
            drop(cb);
            for e in separator.events.drain(..) {
                self.stage_counts[match e.stage {
                    crate::separation::Stage::User => 0,
                    crate::separation::Stage::Car => 1,
                    crate::separation::Stage::Sync => 2,
                }] += 1;
                self.cut_events.push((self.iteration, e));
            }
            if self.config.propagate_cuts {
                for cut in &out.cuts {
                    if self.carried_keys.insert(cut.dedup_key()) {
                        self.carried.push(cut.clone());
                    }
                }
            }
            out
        } else {
            mip::solve(&problem.model, None, self.hint.as_deref(), &options)
        };
        match outcome.status {
            MipStatus::Optimal => {
                let values = outcome.values.expect("optimal solution present");
                let objective = outcome.objective.expect("integral objective") as i64;
                self.hint = Some(values.clone());
                SolveOutcome::Solved { values, objective }
            }
            MipStatus::Infeasible => SolveOutcome::Infeasible,
            MipStatus::Limit => SolveOutcome::Budget,
        }
    }

    /// Lexicographic solve: minimize `primary`, then minimize the secondary
    /// with the primary fixed at its optimum.
    pub fn lexicographic(
        &mut self,
        primary: Objective,
        bound: Option<(Objective, i64)>,
    ) -> Result<Option<ParetoPoint>, Budget> {
        let rows = bound
            .map(|(o, rhs)| vec![self.inputs.problem.objective_row(o, rhs)])
            .unwrap_or_default();
        self.lexicographic_rows(primary, rows)
    }

    /// Lexicographic solve under explicit extra rows.
    pub fn lexicographic_rows(
        &mut self,
        primary: Objective,
        bound_rows: Vec<Row>,
    ) -> Result<Option<ParetoPoint>, Budget> {
        let started = Instant::now();
        self.stage_counts = [0; 3];
        let (wc, wp) = match primary {
            Objective::Cost => (1, 0),
            Objective::Pref => (0, 1),
        };
        let first = match self.solve_weighted(wc, wp, &bound_rows) {
            SolveOutcome::Infeasible => return Ok(None),
            SolveOutcome::Budget => return Err(Budget),
            SolveOutcome::Solved { objective, .. } => objective,
        };
        let mut rows = bound_rows;
        rows.push(self.inputs.problem.objective_row(primary, first));
        let secondary = match primary {
            Objective::Cost => Objective::Pref,
            Objective::Pref => Objective::Cost,
        };
        let (wc, wp) = match secondary {
            Objective::Cost => (1, 0),
            Objective::Pref => (0, 1),
        };
        match self.solve_weighted(wc, wp, &rows) {
            SolveOutcome::Infeasible => {
                unreachable!("second lexicographic stage cannot be infeasible")
            }
            SolveOutcome::Budget => Err(Budget),
            SolveOutcome::Solved { values, .. } => {
                Ok(Some(self.point_from(&values, started.elapsed().as_secs_f64())))
            }
        }
    }

    pub fn point_from(&self, values: &[f64], solve_seconds: f64) -> ParetoPoint {
        let problem = self.inputs.problem;
        let (cost, pref) = problem.objective_pair(values);
        let legs = problem.selected_legs(values);
        let [trips_car, trips_bike, trips_public] = trips_by_mot(self.inputs.graph, &legs);
        ParetoPoint {
            cost,
            pref,
            legs,
            solve_seconds,
            cuts_user: self.stage_counts[0],
            cuts_car: self.stage_counts[1],
            cuts_sync: self.stage_counts[2],
            trips_car,
            trips_bike,
            trips_public,
        }
    }
}

/// The node or time budget ran out mid-enumeration.
pub(super) struct Budget;
