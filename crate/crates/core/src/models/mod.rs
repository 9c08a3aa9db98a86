//! Assembles the model variants as mixed binary/continuous programs over a
//! leg graph: cover and per-mode flow constraints for the fixed-sequence
//! variants, departure-time sequencing with big-M rows for the flexible
//! ones, interval coupling for the time-expanded variant, and the
//! binary-only reformulation whose timing rules live in lazy cuts.

mod valid_ineq;
mod warm;

pub use valid_ineq::{add_valid_inequalities, ViLevel};
pub use warm::reference_warm_start;

use crate::instance::{Instance, Mot};
use crate::mip::{Model, Row, VarId};
use crate::multigraph::{Graph, Leg, LegId, LegKind, NodeId, Variant};
use std::fmt;
use thiserror::Error;

/// Which formulation a problem was assembled as. `M2` shares the `M1`
/// constraint matrix; `M4b` is the binary reformulation of `M4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    M1,
    M2,
    M3,
    M4,
    M4b,
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Formulation::M1 => "m1",
            Formulation::M2 => "m2",
            Formulation::M3 => "m3",
            Formulation::M4 => "m4",
            Formulation::M4b => "m4b",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Cost,
    Pref,
}

#[derive(Debug, Error)]
pub enum AssembleError {
    #[error("trip {0} has {1} tasks; subtour enumeration is capped at {2}")]
    TooManyTasks(crate::instance::TripId, usize, usize),
    #[error("graph variant {0} cannot back formulation {1}")]
    VariantMismatch(Variant, Formulation),
}

/// Cap on tasks per trip for full subtour enumeration (2^tasks subsets).
pub const MAX_SEC_TASKS: usize = 8;

#[derive(Debug, Clone)]
pub struct AssembledProblem {
    pub model: Model,
    pub formulation: Formulation,
    /// One binary per leg, leg id order.
    pub x_vars: Vec<VarId>,
    /// One departure-time variable per leg for the continuous-time variants.
    pub tau_vars: Vec<Option<VarId>>,
    /// Integer objective vectors per leg.
    pub cost: Vec<i64>,
    pub pref: Vec<i64>,
    pub big_m: i64,
    pub vi_level: ViLevel,
}

impl AssembledProblem {
    /// Point the model's linear objective at `w_cost * cost + w_pref * pref`.
    pub fn set_objective(&mut self, w_cost: i64, w_pref: i64) {
        for (l, &x) in self.x_vars.iter().enumerate() {
            self.model.vars[x.0].obj = (w_cost * self.cost[l] + w_pref * self.pref[l]) as f64;
        }
    }

    pub fn set_single_objective(&mut self, objective: Objective) {
        match objective {
            Objective::Cost => self.set_objective(1, 0),
            Objective::Pref => self.set_objective(0, 1),
        }
    }

    /// Row bounding one objective: `sum coeff x <= rhs`.
    pub fn objective_row(&self, objective: Objective, rhs: i64) -> Row {
        Row::le(self.objective_coeffs(objective), rhs as f64)
    }

    /// Row flooring one objective: `sum coeff x >= rhs`. Valid between
    /// adjacent frontier points, where it lets bound pruning bite at the
    /// optimum immediately.
    pub fn objective_floor(&self, objective: Objective, rhs: i64) -> Row {
        Row::ge(self.objective_coeffs(objective), rhs as f64)
    }

    fn objective_coeffs(&self, objective: Objective) -> Vec<(VarId, f64)> {
        self.x_vars
            .iter()
            .enumerate()
            .filter_map(|(l, &x)| {
                let c = match objective {
                    Objective::Cost => self.cost[l],
                    Objective::Pref => self.pref[l],
                };
                (c != 0).then_some((x, c as f64))
            })
            .collect()
    }

    pub fn selected_legs(&self, values: &[f64]) -> Vec<LegId> {
        self.x_vars
            .iter()
            .enumerate()
            .filter_map(|(l, &x)| (values[x.0].round() == 1.0).then_some(LegId(l)))
            .collect()
    }

    /// Exact objective pair of an integral assignment.
    pub fn objective_pair(&self, values: &[f64]) -> (i64, i64) {
        let mut cost = 0;
        let mut pref = 0;
        for (l, &x) in self.x_vars.iter().enumerate() {
            if values[x.0].round() == 1.0 {
                cost += self.cost[l];
                pref += self.pref[l];
            }
        }
        (cost, pref)
    }

    /// No-good row over a set of legs: at most `rhs` of them selected.
    pub fn leg_cut(&self, legs: &[LegId], rhs: i64) -> Row {
        Row::le(
            legs.iter().map(|&l| (self.x_vars[l.0], 1.0)).collect(),
            rhs as f64,
        )
    }
}

struct Assembler<'a> {
    graph: &'a Graph,
    instance: &'a Instance,
    problem: AssembledProblem,
}

impl<'a> Assembler<'a> {
    fn new(graph: &'a Graph, instance: &'a Instance, formulation: Formulation) -> Self {
        let mut model = Model::new();
        let mut x_vars = Vec::with_capacity(graph.legs.len());
        let mut cost = Vec::with_capacity(graph.legs.len());
        let mut pref = Vec::with_capacity(graph.legs.len());
        for leg in &graph.legs {
            x_vars.push(model.add_binary(format!("x{}", leg.id), leg.cost as f64));
            cost.push(leg.cost);
            pref.push(leg.pref);
        }
        let max_s = graph.nodes.iter().map(|n| n.service_time).max().unwrap_or(0);
        let max_t = graph.legs.iter().map(|l| l.time).max().unwrap_or(0);
        let big_m = graph.horizon + max_s + max_t + instance.max_wait;
        Assembler {
            graph,
            instance,
            problem: AssembledProblem {
                model,
                formulation,
                x_vars,
                tau_vars: vec![None; graph.legs.len()],
                cost,
                pref,
                big_m,
                vi_level: ViLevel::None,
            },
        }
    }

    fn x(&self, leg: &Leg) -> VarId {
        self.problem.x_vars[leg.id.0]
    }

    fn trip_nodes(&self) -> impl Iterator<Item = &crate::multigraph::Node> + '_ {
        self.graph.nodes.iter().filter(|n| n.trip.is_some())
    }

    /// Cover (each trip node left exactly once), per-mode flow conservation,
    /// and the car pool limits at both horizon ends.
    fn cover_and_flow(&mut self) {
        let trip_node_ids: Vec<NodeId> = self.trip_nodes().map(|n| n.id).collect();
        let mut rows: Vec<Row> = Vec::new();
        for &v in &trip_node_ids {
            let coeffs: Vec<_> = Mot::ALL
                .iter()
                .flat_map(|&k| self.graph.out_mot(v, k))
                .map(|l| (self.x(l), 1.0))
                .collect();
            rows.push(Row::eq(coeffs, 1.0));
        }
        for &v in &trip_node_ids {
            for k in Mot::ALL {
                let mut coeffs: Vec<_> =
                    self.graph.in_mot(v, k).map(|l| (self.x(l), 1.0)).collect();
                coeffs.extend(self.graph.out_mot(v, k).map(|l| (self.x(l), -1.0)));
                if !coeffs.is_empty() {
                    rows.push(Row::eq(coeffs, 0.0));
                }
            }
        }
        // only the shared-car pool is capacity bounded
        for depot in self.graph.depot_nodes() {
            let spec = match depot.kind {
                crate::multigraph::NodeKind::Depot(d) => self.instance.depot(d),
                _ => unreachable!(),
            };
            let out: Vec<_> = self
                .graph
                .out_mot(depot.id, Mot::Car)
                .map(|l| (self.x(l), 1.0))
                .collect();
            if !out.is_empty() {
                rows.push(Row::le(out, spec.car_start as f64));
            }
            let inn: Vec<_> = self
                .graph
                .in_mot(depot.id, Mot::Car)
                .map(|l| (self.x(l), 1.0))
                .collect();
            if !inn.is_empty() {
                rows.push(Row::le(inn, spec.car_end as f64));
            }
        }
        for row in rows {
            self.problem.model.add_row(row);
        }
    }

    /// User routing: leave the source once, enter the sink once, and tie the
    /// user flow to the mot flow at trip starts and ends.
    fn user_flow(&mut self) {
        let mut rows: Vec<Row> = Vec::new();
        for user in &self.instance.users {
            let p = user.id;
            let source = self.graph.user_source(p).expect("user source node");
            let sink = self.graph.user_sink(p).expect("user sink node");
            let out: Vec<_> = self
                .graph
                .out_user(source, p)
                .map(|l| (self.x(l), 1.0))
                .collect();
            rows.push(Row::eq(out, 1.0));
            let inn: Vec<_> = self
                .graph
                .in_user(sink, p)
                .map(|l| (self.x(l), 1.0))
                .collect();
            rows.push(Row::eq(inn, 1.0));
            for &r in &user.trip_ids {
                let a = self.trip_start_node(r);
                let b = self.trip_end_node(r);
                // user flow into the trip start equals total mot flow out
                let mut coeffs: Vec<_> = self
                    .graph
                    .in_user(a, p)
                    .filter(|l| !matches!(l.kind, LegKind::Trip))
                    .map(|l| (self.x(l), 1.0))
                    .collect();
                coeffs.extend(
                    Mot::ALL
                        .iter()
                        .flat_map(|&k| self.graph.out_mot(a, k))
                        .map(|l| (self.x(l), -1.0)),
                );
                rows.push(Row::eq(coeffs, 0.0));
                // total mot flow into the trip end equals user flow out
                let mut coeffs: Vec<_> = Mot::ALL
                    .iter()
                    .flat_map(|&k| self.graph.in_mot(b, k))
                    .map(|l| (self.x(l), 1.0))
                    .collect();
                coeffs.extend(
                    self.graph
                        .out_user(b, p)
                        .filter(|l| !matches!(l.kind, LegKind::Trip))
                        .map(|l| (self.x(l), -1.0)),
                );
                rows.push(Row::eq(coeffs, 0.0));
            }
        }
        for row in rows {
            self.problem.model.add_row(row);
        }
    }

    fn trip_start_node(&self, r: crate::instance::TripId) -> NodeId {
        self.graph
            .nodes
            .iter()
            .find(|n| n.kind == crate::multigraph::NodeKind::TripStart(r))
            .expect("trip start node")
            .id
    }

    fn trip_end_node(&self, r: crate::instance::TripId) -> NodeId {
        self.graph
            .nodes
            .iter()
            .find(|n| n.kind == crate::multigraph::NodeKind::TripEnd(r))
            .expect("trip end node")
            .id
    }

    /// Departure-time variables plus horizon coupling `tau <= H x`.
    fn tau_variables(&mut self) {
        for li in 0..self.graph.legs.len() {
            let leg = &self.graph.legs[li];
            let (id, e) = (leg.id, leg.e);
            let x = self.problem.x_vars[li];
            let ub = e.min(self.graph.horizon) as f64;
            let tau = self
                .problem
                .model
                .add_continuous(format!("tau{id}"), 0.0, 0.0, ub.max(0.0));
            self.problem.tau_vars[li] = Some(tau);
            self.problem.model.add_row(Row::le(
                vec![(tau, 1.0), (x, -(self.graph.horizon as f64))],
                0.0,
            ));
        }
    }

    fn tau(&self, leg: &Leg) -> VarId {
        self.problem.tau_vars[leg.id.0].expect("tau variable")
    }

    /// Big-M sequencing row: if both legs are chosen, `n` departs after `l`
    /// arrives and serves, and (second row) within the waiting allowance.
    fn sequencing_pair(&mut self, l: &Leg, n: &Leg, s_v: i64) {
        let m = self.problem.big_m as f64;
        let tau_l = self.tau(l);
        let tau_n = self.tau(n);
        let x_l = self.x(l);
        let x_n = self.x(n);
        self.problem.model.add_row(Row::le(
            vec![(tau_l, 1.0), (tau_n, -1.0), (x_l, m), (x_n, m)],
            2.0 * m - (l.time + s_v) as f64,
        ));
        self.problem.model.add_row(Row::le(
            vec![(tau_n, 1.0), (tau_l, -1.0), (x_l, m), (x_n, m)],
            2.0 * m + (l.time + s_v + self.instance.max_wait) as f64,
        ));
    }

    /// Sequencing rows over co-selectable in/out pairs: per mode at every
    /// trip node, and per user at trip starts/ends (sources and sinks have
    /// no in/out pairs).
    fn sequencing(&mut self) {
        let node_ids: Vec<(NodeId, i64, Option<crate::instance::UserId>)> = self
            .trip_nodes()
            .map(|n| (n.id, n.service_time, n.user))
            .collect();
        for (v, s_v, owner) in node_ids {
            for k in Mot::ALL {
                let ins: Vec<LegId> = self.graph.in_mot(v, k).map(|l| l.id).collect();
                let outs: Vec<LegId> = self.graph.out_mot(v, k).map(|l| l.id).collect();
                for &li in &ins {
                    for &ni in &outs {
                        let l = self.graph.leg(li).clone();
                        let n = self.graph.leg(ni).clone();
                        self.sequencing_pair(&l, &n, s_v);
                    }
                }
            }
            if let Some(p) = owner {
                let ins: Vec<LegId> = self
                    .graph
                    .in_user(v, p)
                    .filter(|l| !matches!(l.kind, LegKind::Trip))
                    .map(|l| l.id)
                    .collect();
                let outs: Vec<LegId> = self
                    .graph
                    .out_user(v, p)
                    .map(|l| l.id)
                    .collect();
                for &li in &ins {
                    for &ni in &outs {
                        let l = self.graph.leg(li).clone();
                        let n = self.graph.leg(ni).clone();
                        self.sequencing_pair(&l, &n, s_v);
                    }
                }
                // trip legs into a trip end, user-structure legs out
                let ins: Vec<LegId> = self
                    .graph
                    .in_user(v, p)
                    .filter(|l| matches!(l.kind, LegKind::Trip))
                    .map(|l| l.id)
                    .collect();
                let outs: Vec<LegId> = self
                    .graph
                    .out_user(v, p)
                    .filter(|l| !matches!(l.kind, LegKind::Trip))
                    .map(|l| l.id)
                    .collect();
                for &li in &ins {
                    for &ni in &outs {
                        let l = self.graph.leg(li).clone();
                        let n = self.graph.leg(ni).clone();
                        self.sequencing_pair(&l, &n, s_v);
                    }
                }
            }
        }
    }

    /// Interval coupling `o x <= tau <= e` for time-expanded legs (upper
    /// side is the variable bound set in tau_variables).
    fn interval_rows(&mut self) {
        for li in 0..self.graph.legs.len() {
            let o = self.graph.legs[li].o;
            if o > 0 {
                let tau = self.problem.tau_vars[li].expect("tau variable");
                let x = self.problem.x_vars[li];
                self.problem
                    .model
                    .add_row(Row::le(vec![(x, o as f64), (tau, -1.0)], 0.0));
            }
        }
    }

    /// Fully enumerated subtour rows over task subsets of each trip.
    fn subtour_rows(&mut self) -> Result<(), AssembleError> {
        for (idx, trip) in self.instance.trips.iter().enumerate() {
            let n = trip.tasks.len();
            if n > MAX_SEC_TASKS {
                return Err(AssembleError::TooManyTasks(trip.id, n, MAX_SEC_TASKS));
            }
            if n < 2 {
                continue;
            }
            let tasks: Vec<NodeId> = self
                .graph
                .nodes
                .iter()
                .filter(|nd| {
                    nd.trip == Some(crate::instance::TripId(idx))
                        && matches!(nd.kind, crate::multigraph::NodeKind::Task(_))
                })
                .map(|nd| nd.id)
                .collect();
            let mut rows: Vec<Row> = Vec::new();
            for mask in 1u32..(1 << n) {
                if (mask.count_ones() as usize) < 2 {
                    continue;
                }
                let subset: Vec<NodeId> = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| tasks[i])
                    .collect();
                let mut coeffs = Vec::new();
                for &u in &subset {
                    for &w in &subset {
                        if u != w {
                            for leg in self.graph.legs_between(u, w) {
                                coeffs.push((self.x(leg), 1.0));
                            }
                        }
                    }
                }
                if !coeffs.is_empty() {
                    rows.push(Row::le(coeffs, subset.len() as f64 - 1.0));
                }
            }
            for row in rows {
                self.problem.model.add_row(row);
            }
        }
        Ok(())
    }
}

/// Fixed sequences: cover, flow conservation and car pool limits only.
/// Accepts the m1 and m2 graphs (same topology, different weights).
pub fn assemble_m1(graph: &Graph, instance: &Instance) -> Result<AssembledProblem, AssembleError> {
    let formulation = match graph.variant {
        Variant::M1 => Formulation::M1,
        Variant::M2 => Formulation::M2,
        v => return Err(AssembleError::VariantMismatch(v, Formulation::M1)),
    };
    let mut a = Assembler::new(graph, instance, formulation);
    a.cover_and_flow();
    Ok(a.problem)
}

/// Free sequences with departure-time variables and sequencing big-Ms.
pub fn assemble_m3(graph: &Graph, instance: &Instance) -> Result<AssembledProblem, AssembleError> {
    if graph.variant != Variant::M3 {
        return Err(AssembleError::VariantMismatch(graph.variant, Formulation::M3));
    }
    let mut a = Assembler::new(graph, instance, Formulation::M3);
    a.cover_and_flow();
    a.user_flow();
    a.tau_variables();
    a.sequencing();
    Ok(a.problem)
}

/// The time-expanded continuous-time variant: m3 rows plus interval
/// coupling per duplicate.
pub fn assemble_m4(graph: &Graph, instance: &Instance) -> Result<AssembledProblem, AssembleError> {
    if graph.variant != Variant::M4 {
        return Err(AssembleError::VariantMismatch(graph.variant, Formulation::M4));
    }
    let mut a = Assembler::new(graph, instance, Formulation::M4);
    a.cover_and_flow();
    a.user_flow();
    a.tau_variables();
    a.sequencing();
    a.interval_rows();
    Ok(a.problem)
}

/// Binary-only reformulation: cover/flow/user rows plus fully enumerated
/// subtour constraints. Infeasible-path rules are left to lazy separation.
pub fn assemble_m4b(graph: &Graph, instance: &Instance) -> Result<AssembledProblem, AssembleError> {
    if graph.variant != Variant::M4 {
        return Err(AssembleError::VariantMismatch(graph.variant, Formulation::M4b));
    }
    let mut a = Assembler::new(graph, instance, Formulation::M4b);
    a.cover_and_flow();
    a.user_flow();
    a.subtour_rows()?;
    Ok(a.problem)
}

#[cfg(test)]
mod test;
