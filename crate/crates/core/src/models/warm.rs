//! Reference warm start: the stored task order on public transport for
//! every trip, trips in stored order, no cars. Departure times follow the
//! walk with zero waiting, which keeps every sequencing row tight.

use super::AssembledProblem;
use crate::instance::{Instance, Mot};
use crate::multigraph::{Graph, LegId, LegKind, NodeId, NodeKind, Variant};
use std::collections::HashMap;

/// Build the assignment, or None when the schedule cannot be placed (a
/// loaded instance whose walk overruns the horizon).
pub fn reference_warm_start(
    problem: &AssembledProblem,
    graph: &Graph,
    instance: &Instance,
) -> Option<Vec<f64>> {
    let mut values = vec![0.0; problem.model.n_vars()];
    let select = |leg: LegId, tau: i64, values: &mut Vec<f64>| -> bool {
        values[problem.x_vars[leg.0].0] = 1.0;
        if let Some(tv) = problem.tau_vars[leg.0] {
            values[tv.0] = tau as f64;
        }
        let leg = graph.leg(leg);
        tau >= leg.o && tau <= leg.e
    };

    // node lookup by kind
    let mut start_of: HashMap<usize, NodeId> = HashMap::new();
    let mut end_of: HashMap<usize, NodeId> = HashMap::new();
    for n in &graph.nodes {
        match n.kind {
            NodeKind::TripStart(r) => {
                start_of.insert(r.0, n.id);
            }
            NodeKind::TripEnd(r) => {
                end_of.insert(r.0, n.id);
            }
            _ => {}
        }
    }

    // pick the duplicate of a base connection whose interval contains tau
    let pick = |from: NodeId, to: NodeId, kind: LegKind, mot: Option<Mot>, tau: i64| -> Option<LegId> {
        graph
            .out_legs(from)
            .find(|l| {
                l.to == to
                    && l.kind == kind
                    && l.mot == mot
                    && l.o <= tau
                    && (tau < l.e || (tau == l.e && l.e == graph.horizon))
            })
            .map(|l| l.id)
    };

    let has_user_nodes = matches!(graph.variant, Variant::M3 | Variant::M4);
    for user in &instance.users {
        let mut clock: i64 = 0;
        let mut prev_end: Option<NodeId> = None;
        for (ti, &r) in user.trip_ids.iter().enumerate() {
            let trip = instance.trip(r);
            let a = start_of[&r.0];
            let b = end_of[&r.0];
            // user-structure leg into the trip start
            if has_user_nodes {
                if ti == 0 {
                    let source = graph.user_source(user.id)?;
                    let leg = pick(source, a, LegKind::UserSource, None, clock)?;
                    if !select(leg, clock, &mut values) {
                        return None;
                    }
                } else {
                    let leg = pick(prev_end?, a, LegKind::UserConnect, None, clock)?;
                    if !select(leg, clock, &mut values) {
                        return None;
                    }
                }
            }
            // mode supply from the depot
            let depot = graph
                .nodes
                .iter()
                .find(|n| n.kind == NodeKind::Depot(trip.start_depot))?
                .id;
            let leg = pick(depot, a, LegKind::DepotOut, Some(Mot::Public), clock)?;
            if !select(leg, clock, &mut values) {
                return None;
            }
            // walk the stored order by public transport
            let mut here = a;
            let mut here_loc = instance.depot(trip.start_depot).location;
            for task in &trip.tasks {
                let q = graph
                    .nodes
                    .iter()
                    .find(|n| n.kind == NodeKind::Task(task.id))?
                    .id;
                let leg_id = select_trip_leg(graph, problem, here, q, clock)?;
                if !select(leg_id, clock, &mut values) {
                    return None;
                }
                clock += graph.leg(leg_id).time + task.service_time;
                here = q;
                here_loc = task.location;
            }
            let _ = here_loc;
            let leg_id = select_trip_leg(graph, problem, here, b, clock)?;
            if !select(leg_id, clock, &mut values) {
                return None;
            }
            clock += graph.leg(leg_id).time;
            // return the mode to the pool
            let depot = graph
                .nodes
                .iter()
                .find(|n| n.kind == NodeKind::Depot(trip.end_depot))?
                .id;
            let leg = pick(b, depot, LegKind::DepotIn, Some(Mot::Public), clock)?;
            if !select(leg, clock, &mut values) {
                return None;
            }
            if has_user_nodes && ti + 1 == user.trip_ids.len() {
                let sink = graph.user_sink(user.id)?;
                let leg = pick(b, sink, LegKind::UserSink, None, clock)?;
                if !select(leg, clock, &mut values) {
                    return None;
                }
            }
            prev_end = Some(b);
            if clock > graph.horizon {
                return None;
            }
        }
    }
    Some(values)
}

/// The public-mode duplicate of the trip leg `from -> to` usable at `tau`.
fn select_trip_leg(
    graph: &Graph,
    _problem: &AssembledProblem,
    from: NodeId,
    to: NodeId,
    tau: i64,
) -> Option<LegId> {
    let untimed = graph.variant != Variant::M4;
    graph
        .out_legs(from)
        .find(|l| {
            l.to == to
                && l.kind == LegKind::Trip
                && l.mot == Some(Mot::Public)
                && (untimed
                    || (l.o <= tau && (tau < l.e || (tau == l.e && l.e == graph.horizon))))
        })
        .map(|l| l.id)
}
