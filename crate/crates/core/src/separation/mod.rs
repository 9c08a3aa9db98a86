//! Incumbent separation for the binary reformulation: rebuilds user and car
//! routes from a candidate, checks their departure-time feasibility with a
//! forward-slack sweep, checks user/car synchronization with a small LP, and
//! emits strengthened infeasible-path cuts.
//!
//! Route feasibility is the projection of the continuous-time rows onto one
//! route: departures chain by travel plus service time, each node allows at
//! most `h` minutes of waiting, and every leg departs inside its interval.
//! The sweep maintains the earliest feasible departure `tau` and the forward
//! slack `F = W + Delta` (waiting headroom at the current node plus
//! shiftable slack); `tau + F` is exactly the latest feasible departure, so
//! the verdict matches exhaustive departure-time search.

use crate::instance::{Instance, UserId};
use crate::mip::{lp_feasible, Model, Row};
use crate::models::AssembledProblem;
use crate::multigraph::{Graph, Leg, LegId, LegKind, NodeId};
use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

/// Sweep state at the current leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouteState {
    /// Earliest feasible departure of the current leg.
    pub tau: i64,
    /// Waiting headroom at the current node (capped by `h` and the interval).
    pub wait: i64,
    /// Additional delay the whole prefix can absorb.
    pub slack: i64,
    /// Forward slack `W + Delta`: total usable delay of the current leg.
    pub forward: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationMode {
    /// The leg's interval cannot be reached even with maximal delay.
    TooEarly,
    /// The earliest possible departure already misses the interval.
    TooLate,
}

#[derive(Debug, Clone)]
pub struct Violation {
    /// The full route, in order.
    pub route: Vec<LegId>,
    /// The checked prefix, ending at the failing leg.
    pub prefix: Vec<LegId>,
    pub failing: LegId,
    pub failing_tau: i64,
    pub mode: ViolationMode,
}

#[derive(Debug, Clone)]
pub enum RouteCheck {
    Feasible,
    Violated(Violation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    User,
    Car,
    Sync,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::User => "user",
            Stage::Car => "car",
            Stage::Sync => "sync",
        };
        f.write_str(s)
    }
}

/// One emitted cut: which stage produced it and its support size.
#[derive(Debug, Clone, Copy)]
pub struct CutEvent {
    pub stage: Stage,
    pub size: usize,
}

/// Cut log CSV: `iteration,stage,size`.
pub fn write_cut_log<W: Write>(mut w: W, events: &[(usize, CutEvent)]) -> io::Result<()> {
    writeln!(w, "iteration,stage,size")?;
    for (iteration, e) in events {
        writeln!(w, "{},{},{}", iteration, e.stage, e.size)?;
    }
    Ok(())
}

/// Departure-time feasibility of one route. Legs must chain (`to` of one is
/// `from` of the next); the first leg departs freely within its interval.
pub fn check_route_time_feasibility(graph: &Graph, route: &[LegId], h: i64) -> RouteCheck {
    assert!(!route.is_empty());
    let first = graph.leg(route[0]);
    let mut state = RouteState {
        tau: first.o.max(0),
        wait: 0,
        slack: first.e - first.o.max(0),
        forward: first.e - first.o.max(0),
    };
    for i in 1..route.len() {
        let prev = graph.leg(route[i - 1]);
        let leg = graph.leg(route[i]);
        debug_assert_eq!(prev.to, leg.from, "route legs must chain");
        let step = prev.time + graph.node(leg.from).service_time;
        let tau = state.tau + step;
        // latest feasible departure: previous latest, plus waiting here,
        // capped by the interval end
        let latest = (state.tau + state.forward + step + h).min(leg.e);
        if tau > leg.e {
            return RouteCheck::Violated(Violation {
                route: route.to_vec(),
                prefix: route[..=i].to_vec(),
                failing: leg.id,
                failing_tau: tau,
                mode: ViolationMode::TooLate,
            });
        }
        if leg.o > latest {
            return RouteCheck::Violated(Violation {
                route: route.to_vec(),
                prefix: route[..=i].to_vec(),
                failing: leg.id,
                failing_tau: latest,
                mode: ViolationMode::TooEarly,
            });
        }
        let tau = tau.max(leg.o);
        let forward = latest - tau;
        let wait = forward.min(h).min((leg.e - tau).max(0));
        state = RouteState {
            tau,
            wait,
            slack: forward - wait,
            forward,
        };
    }
    RouteCheck::Feasible
}

/// Walk a user's selected legs from source to sink.
pub fn extract_user_route(
    graph: &Graph,
    selected: &[bool],
    user: UserId,
) -> Result<Vec<LegId>, BrokenRoute> {
    let source = graph.user_source(user).expect("user source");
    let sink = graph.user_sink(user).expect("user sink");
    let mut route = Vec::new();
    let mut v = source;
    while v != sink {
        let next = graph
            .out_legs(v)
            .find(|l| l.is_user_flow() && l.user == Some(user) && selected[l.id.0]);
        match next {
            Some(leg) => {
                route.push(leg.id);
                v = leg.to;
            }
            None => {
                return Err(BrokenRoute {
                    at: v,
                    what: "user route stalls",
                })
            }
        }
        if route.len() > graph.legs.len() {
            return Err(BrokenRoute {
                at: v,
                what: "user route loops",
            });
        }
    }
    Ok(route)
}

/// The walk reached a node with no usable continuation. Signals a model
/// bug, not a cut.
#[derive(Debug, Clone)]
pub struct BrokenRoute {
    pub at: NodeId,
    pub what: &'static str,
}

impl fmt::Display for BrokenRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at node {}", self.what, self.at)
    }
}

/// Car routes rooted at depots, one per selected depot-out car leg. Legs are
/// consumed so parallel cars from one depot stay distinct. The second
/// element counts trips on the route.
pub fn extract_car_routes(
    graph: &Graph,
    selected: &[bool],
) -> Result<(Vec<(Vec<LegId>, usize)>, Vec<LegId>), BrokenRoute> {
    let car = crate::instance::Mot::Car;
    let mut used = vec![false; graph.legs.len()];
    let mut routes = Vec::new();
    for depot in graph.depot_nodes() {
        let starts: Vec<LegId> = graph
            .out_mot(depot.id, car)
            .filter(|l| selected[l.id.0])
            .map(|l| l.id)
            .collect();
        for start in starts {
            let mut route = vec![start];
            used[start.0] = true;
            let mut trips = 0usize;
            let mut v = graph.leg(start).to;
            loop {
                if graph.node(v).is_trip_start() {
                    trips += 1;
                }
                if graph.node(v).is_depot() {
                    break;
                }
                let next = graph
                    .out_mot(v, car)
                    .find(|l| selected[l.id.0] && !used[l.id.0]);
                match next {
                    Some(leg) => {
                        route.push(leg.id);
                        used[leg.id.0] = true;
                        v = leg.to;
                    }
                    None => {
                        return Err(BrokenRoute {
                            at: v,
                            what: "car route stalls",
                        })
                    }
                }
                if route.len() > graph.legs.len() {
                    return Err(BrokenRoute {
                        at: v,
                        what: "car route loops",
                    });
                }
            }
            routes.push((route, trips));
        }
    }
    // anything car-flow still selected but unreached lies on a depot-less
    // cycle; the base rows admit those, timing rows never do
    let leftover: Vec<LegId> = graph
        .legs
        .iter()
        .filter(|l| {
            selected[l.id.0]
                && !used[l.id.0]
                && l.is_mot_flow()
                && l.mot == Some(car)
                && !matches!(l.kind, LegKind::DepotOut | LegKind::DepotIn)
        })
        .map(|l| l.id)
        .collect();
    Ok((routes, leftover))
}

/// Strengthened infeasible-path rows for one violation: the full route and
/// the checked prefix, both widened by interval siblings of the failing leg
/// and of the prefix legs in the direction that provably stays infeasible.
pub fn strengthen_violation(
    violation: &Violation,
    graph: &Graph,
    problem: &AssembledProblem,
) -> Vec<Row> {
    let failing = graph.leg(violation.failing);
    let mut extras: Vec<LegId> = Vec::new();
    // siblings of the failing leg on the doomed side
    for dup in graph.duplicates_of(failing.base) {
        let include = match violation.mode {
            ViolationMode::TooLate => dup.o < failing.o,
            ViolationMode::TooEarly => dup.o > failing.o,
        };
        if include && dup.id != failing.id {
            extras.push(dup.id);
        }
    }
    // siblings of the prefix legs: earlier intervals keep an unreachable
    // window unreachable, later intervals keep a missed window missed
    for &li in violation.prefix.iter().take(violation.prefix.len() - 1) {
        let leg = graph.leg(li);
        for dup in graph.duplicates_of(leg.base) {
            let include = match violation.mode {
                ViolationMode::TooEarly => dup.o <= leg.o && dup.e <= leg.e,
                ViolationMode::TooLate => dup.o >= leg.o && dup.e >= leg.e,
            };
            if include && dup.id != leg.id {
                extras.push(dup.id);
            }
        }
    }
    let mut rows = Vec::new();
    for base in [&violation.route, &violation.prefix] {
        let mut legs = base.clone();
        legs.extend(extras.iter().copied());
        legs.sort_unstable_by_key(|l| l.0);
        legs.dedup();
        rows.push(problem.leg_cut(&legs, base.len() as i64 - 1));
    }
    rows
}

/// Joint feasibility of the selected legs' departure times: car precedence
/// and waiting rows per node, user precedence and waiting rows per node,
/// interval bounds on every involved leg. Car handovers couple the two
/// systems through shared trip legs. On infeasibility returns the selected
/// car and user-connection legs for the cutoff row.
pub fn check_synchronization(
    graph: &Graph,
    instance: &Instance,
    selected: &[bool],
) -> Option<Vec<LegId>> {
    let car = crate::instance::Mot::Car;
    let involved = |l: &Leg| l.mot == Some(car) || l.user.is_some();
    let mut lp = Model::new();
    let mut tau: HashMap<LegId, crate::mip::VarId> = HashMap::new();
    for leg in &graph.legs {
        if selected[leg.id.0] && involved(leg) {
            let v = lp.add_continuous(
                format!("tau{}", leg.id),
                0.0,
                leg.o as f64,
                leg.e as f64,
            );
            tau.insert(leg.id, v);
        }
    }
    let h = instance.max_wait as f64;
    let add_pair = |lp: &mut Model, l: &Leg, n: &Leg, s_v: i64| {
        let (tl, tn) = (tau[&l.id], tau[&n.id]);
        let gap = (l.time + s_v) as f64;
        lp.add_row(Row::le(vec![(tl, 1.0), (tn, -1.0)], -gap));
        lp.add_row(Row::le(vec![(tn, 1.0), (tl, -1.0)], gap + h));
    };
    for v in graph.nodes.iter().filter(|n| n.trip.is_some()) {
        let s_v = v.service_time;
        let car_ins: Vec<&Leg> = graph
            .in_mot(v.id, car)
            .filter(|l| selected[l.id.0])
            .collect();
        let car_outs: Vec<&Leg> = graph
            .out_mot(v.id, car)
            .filter(|l| selected[l.id.0])
            .collect();
        for &l in &car_ins {
            for &n in &car_outs {
                add_pair(&mut lp, l, n, s_v);
            }
        }
        if let Some(p) = v.user {
            let user_ins: Vec<&Leg> = graph
                .in_user(v.id, p)
                .filter(|l| selected[l.id.0])
                .collect();
            let user_outs: Vec<&Leg> = graph
                .out_user(v.id, p)
                .filter(|l| selected[l.id.0])
                .collect();
            for &l in &user_ins {
                for &n in &user_outs {
                    if l.id != n.id {
                        add_pair(&mut lp, l, n, s_v);
                    }
                }
            }
        }
    }
    if lp_feasible(&lp) {
        return None;
    }
    let cut: Vec<LegId> = graph
        .legs
        .iter()
        .filter(|l| {
            selected[l.id.0] && (l.mot == Some(car) || l.kind == LegKind::UserConnect)
        })
        .map(|l| l.id)
        .collect();
    Some(cut)
}

/// The full incumbent callback for the binary reformulation: user routes,
/// then car routes, then synchronization, returning all cuts found at the
/// first failing stage.
pub struct M4bSeparator<'a> {
    pub graph: &'a Graph,
    pub instance: &'a Instance,
    pub problem: &'a AssembledProblem,
    /// (stage, support size) per emitted cut, drained by the frontier layer.
    pub events: Vec<CutEvent>,
}

impl<'a> M4bSeparator<'a> {
    pub fn new(graph: &'a Graph, instance: &'a Instance, problem: &'a AssembledProblem) -> Self {
        M4bSeparator {
            graph,
            instance,
            problem,
            events: Vec::new(),
        }
    }

    pub fn separate(&mut self, values: &[f64]) -> Vec<Row> {
        let mut selected = vec![false; self.graph.legs.len()];
        for (l, &x) in self.problem.x_vars.iter().enumerate() {
            selected[l] = values[x.0].round() == 1.0;
        }
        let h = self.instance.max_wait;

        // stage 1: user routes
        let mut cuts = Vec::new();
        let mut consumed = vec![false; self.graph.legs.len()];
        for user in &self.instance.users {
            let route = extract_user_route(self.graph, &selected, user.id)
                .expect("user flow rows guarantee a source-to-sink walk");
            for &l in &route {
                consumed[l.0] = true;
            }
            if let RouteCheck::Violated(v) =
                check_route_time_feasibility(self.graph, &route, h)
            {
                for row in strengthen_violation(&v, self.graph, self.problem) {
                    self.events.push(CutEvent {
                        stage: Stage::User,
                        size: row.coeffs.len(),
                    });
                    cuts.push(row);
                }
            }
        }
        // user legs never reached from the source lie on parallel-trip
        // cycles (possible from three trips up); timing rows forbid those
        for user in &self.instance.users {
            let pool: Vec<bool> = self
                .graph
                .legs
                .iter()
                .map(|l| {
                    selected[l.id.0]
                        && !consumed[l.id.0]
                        && l.is_user_flow()
                        && l.user == Some(user.id)
                })
                .collect();
            for cycle in chase_cycles(self.graph, &pool) {
                self.events.push(CutEvent {
                    stage: Stage::User,
                    size: cycle.len(),
                });
                let rhs = cycle.len() as i64 - 1;
                cuts.push(self.problem.leg_cut(&cycle, rhs));
            }
        }
        if !cuts.is_empty() {
            return cuts;
        }

        // stage 2: car routes
        let (routes, leftover) = extract_car_routes(self.graph, &selected)
            .expect("flow rows guarantee depot-rooted car walks");
        for (route, trips) in &routes {
            if *trips < 2 {
                continue;
            }
            if let RouteCheck::Violated(v) =
                check_route_time_feasibility(self.graph, route, h)
            {
                for row in strengthen_violation(&v, self.graph, self.problem) {
                    self.events.push(CutEvent {
                        stage: Stage::Car,
                        size: row.coeffs.len(),
                    });
                    cuts.push(row);
                }
            }
        }
        if !leftover.is_empty() {
            // depot-less car cycles
            let mut pool = vec![false; self.graph.legs.len()];
            for &l in &leftover {
                pool[l.0] = true;
            }
            for cycle in chase_cycles(self.graph, &pool) {
                self.events.push(CutEvent {
                    stage: Stage::Car,
                    size: cycle.len(),
                });
                let rhs = cycle.len() as i64 - 1;
                cuts.push(self.problem.leg_cut(&cycle, rhs));
            }
        }
        if !cuts.is_empty() {
            return cuts;
        }

        // stage 3: synchronization
        if let Some(sync_legs) = check_synchronization(self.graph, self.instance, &selected) {
            self.events.push(CutEvent {
                stage: Stage::Sync,
                size: sync_legs.len(),
            });
            let rhs = sync_legs.len() as i64 - 1;
            cuts.push(self.problem.leg_cut(&sync_legs, rhs));
        }
        cuts
    }
}

/// Decompose a pooled leg set into the cycles its flow forms. Flow
/// conservation gives every touched node exactly one pooled out-leg, so the
/// walk from any pooled leg closes on its own start node.
fn chase_cycles(graph: &Graph, pool: &[bool]) -> Vec<Vec<LegId>> {
    let mut cycles = Vec::new();
    let mut seen = vec![false; graph.legs.len()];
    for leg in &graph.legs {
        if !pool[leg.id.0] || seen[leg.id.0] {
            continue;
        }
        let start = leg.from;
        let mut cycle = Vec::new();
        let mut v = start;
        loop {
            let next = graph
                .out_legs(v)
                .find(|l| pool[l.id.0] && !seen[l.id.0]);
            let Some(next) = next else { break };
            seen[next.id.0] = true;
            cycle.push(next.id);
            v = next.to;
            if v == start {
                break;
            }
        }
        if cycle.len() >= 2 {
            cycles.push(cycle);
        }
    }
    cycles
}
