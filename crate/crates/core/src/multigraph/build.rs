//! Graph builders for the four variants and the duplicate-merging reduction.

use super::{BaseLegId, Graph, Leg, LegId, LegKind, Node, NodeId, NodeKind, Variant};
use crate::instance::{Instance, Mot, TripId, UserId};

struct Builder<'a> {
    instance: &'a Instance,
    nodes: Vec<Node>,
    legs: Vec<Leg>,
    depot_node: Vec<NodeId>,
    trip_start: Vec<NodeId>,
    trip_end: Vec<NodeId>,
    task_nodes: Vec<Vec<NodeId>>,
}

impl<'a> Builder<'a> {
    fn new(instance: &'a Instance) -> Self {
        let mut b = Builder {
            instance,
            nodes: Vec::new(),
            legs: Vec::new(),
            depot_node: Vec::new(),
            trip_start: Vec::new(),
            trip_end: Vec::new(),
            task_nodes: Vec::new(),
        };
        for depot in &instance.depots {
            let id = b.push_node(NodeKind::Depot(depot.id), depot.location, 0, None, None);
            b.depot_node.push(id);
        }
        for trip in &instance.trips {
            let user = Some(trip.user_id);
            let a = b.push_node(
                NodeKind::TripStart(trip.id),
                instance.depot(trip.start_depot).location,
                0,
                user,
                Some(trip.id),
            );
            b.trip_start.push(a);
            let mut tasks = Vec::with_capacity(trip.tasks.len());
            for task in &trip.tasks {
                tasks.push(b.push_node(
                    NodeKind::Task(task.id),
                    task.location,
                    task.service_time,
                    user,
                    Some(trip.id),
                ));
            }
            b.task_nodes.push(tasks);
            let end = b.push_node(
                NodeKind::TripEnd(trip.id),
                instance.depot(trip.end_depot).location,
                0,
                user,
                Some(trip.id),
            );
            b.trip_end.push(end);
        }
        b
    }

    fn push_node(
        &mut self,
        kind: NodeKind,
        location: crate::instance::Point,
        service_time: i64,
        user: Option<UserId>,
        trip: Option<TripId>,
    ) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            id,
            kind,
            location,
            service_time,
            user,
            trip,
        });
        id
    }

    fn push_leg(
        &mut self,
        kind: LegKind,
        user: Option<UserId>,
        from: NodeId,
        to: NodeId,
        mot: Option<Mot>,
        cost: i64,
        pref: i64,
        time: i64,
    ) {
        let id = LegId(self.legs.len());
        self.legs.push(Leg {
            id,
            base: BaseLegId(id.0),
            kind,
            user,
            from,
            to,
            mot,
            cost,
            pref,
            time,
            o: 0,
            e: self.instance.horizon,
        });
    }

    /// Base-weight trip leg: static cost/time, static preference score.
    fn push_trip_leg_base(&mut self, user: UserId, from: NodeId, to: NodeId, mot: Mot) {
        let (_, time, cost) = self.instance.travel_metrics(
            self.nodes[from.0].location,
            self.nodes[to.0].location,
            mot,
        );
        let pref = self
            .instance
            .base_preference(self.instance.user(user), mot);
        self.push_leg(LegKind::Trip, Some(user), from, to, Some(mot), cost, pref, time);
    }

    /// Time-dependent trip leg evaluated at a known departure time.
    fn push_trip_leg_at(&mut self, user: UserId, from: NodeId, to: NodeId, mot: Mot, departure: i64) {
        let (cost, pref, time) = evaluate_trip_leg(
            self.instance,
            self.instance.user(user),
            self.nodes[from.0].location,
            self.nodes[to.0].location,
            mot,
            departure,
        );
        self.push_leg(LegKind::Trip, Some(user), from, to, Some(mot), cost, pref, time);
    }

    fn depot_legs(&mut self, trip_idx: usize) {
        let trip = &self.instance.trips[trip_idx];
        let d_start = self.depot_node[trip.start_depot.0];
        let d_end = self.depot_node[trip.end_depot.0];
        let a = self.trip_start[trip_idx];
        let b = self.trip_end[trip_idx];
        for mot in Mot::ALL {
            self.push_leg(LegKind::DepotOut, None, d_start, a, Some(mot), 0, 0, 0);
        }
        for mot in Mot::ALL {
            self.push_leg(LegKind::DepotIn, None, b, d_end, Some(mot), 0, 0, 0);
        }
    }

    fn finish(self, variant: Variant) -> Graph {
        let base_count = self.legs.len();
        Graph::from_parts(
            variant,
            self.nodes,
            self.legs,
            self.instance.horizon,
            self.instance.alpha,
            self.instance.users.len(),
            base_count,
        )
    }
}

/// Per-period values of a trip leg, for the time-dependent variants: cost
/// scaled by beta, preference shifted by the period delta.
fn period_values(
    instance: &Instance,
    user: &crate::instance::User,
    base_cost: i64,
    mot: Mot,
) -> (Vec<i64>, Vec<i64>) {
    let costs = instance
        .periods
        .iter()
        .map(|p| instance.apply_beta(base_cost, 0, mot, p).0)
        .collect();
    let prefs = instance
        .periods
        .iter()
        .map(|p| instance.period_preference(user, mot, p))
        .collect();
    (costs, prefs)
}

/// Evaluate a trip leg departing at `departure`: travel time takes the beta
/// factor of the departure period, cost and preference are weighted averages
/// over the traversal span.
fn evaluate_trip_leg(
    instance: &Instance,
    user: &crate::instance::User,
    from: crate::instance::Point,
    to: crate::instance::Point,
    mot: Mot,
    departure: i64,
) -> (i64, i64, i64) {
    let (_, base_time, base_cost) = instance.travel_metrics(from, to, mot);
    let dep = departure.clamp(0, instance.horizon);
    let period = instance.period_at(dep);
    let (_, time) = instance.apply_beta(0, base_time, mot, period);
    let (costs, prefs) = period_values(instance, user, base_cost, mot);
    let cost = super::weighted_leg_value(&instance.periods, &costs, dep, time);
    let pref = super::weighted_leg_value(&instance.periods, &prefs, dep, time);
    (cost, pref, time)
}

/// Reference schedule of a trip under a given mode: departure time of each
/// leg of the stored sequence, plus the trip's start/end instants.
fn fixed_departures(instance: &Instance, trip_idx: usize, mot: Mot) -> (Vec<i64>, i64, i64) {
    let trip = &instance.trips[trip_idx];
    let depot_loc = instance.depot(trip.start_depot).location;
    let first = &trip.tasks[0];
    let (_, t_first, _) = instance.travel_metrics(depot_loc, first.location, mot);
    let start = first.fixed_start - t_first;

    let mut deps = Vec::with_capacity(trip.tasks.len() + 1);
    deps.push(start);
    for task in &trip.tasks {
        deps.push(task.fixed_start + task.service_time);
    }
    let last = trip.tasks.last().unwrap();
    let end_loc = instance.depot(trip.end_depot).location;
    let (_, t_last, _) = instance.travel_metrics(last.location, end_loc, mot);
    let end = last.fixed_start + last.service_time + t_last;
    (deps, start, end)
}

/// Fixed sequences, static weights. One leg per mode between consecutive
/// nodes of each trip, depot legs, and zero-weight car connections between
/// co-located trip ends/starts compatible in the reference schedule.
pub fn build_graph_m1(instance: &Instance) -> Graph {
    build_fixed(instance, Variant::M1)
}

/// Same topology as m1; trip-leg weights are evaluated at their reference
/// departure times against the period tables.
pub fn build_graph_m2(instance: &Instance) -> Graph {
    build_fixed(instance, Variant::M2)
}

fn build_fixed(instance: &Instance, variant: Variant) -> Graph {
    let mut b = Builder::new(instance);
    for (idx, trip) in instance.trips.iter().enumerate() {
        b.depot_legs(idx);
        let chain: Vec<NodeId> = std::iter::once(b.trip_start[idx])
            .chain(b.task_nodes[idx].iter().copied())
            .chain(std::iter::once(b.trip_end[idx]))
            .collect();
        for hop in 0..chain.len() - 1 {
            for mot in Mot::ALL {
                match variant {
                    Variant::M1 => {
                        b.push_trip_leg_base(trip.user_id, chain[hop], chain[hop + 1], mot)
                    }
                    Variant::M2 => {
                        let (deps, _, _) = fixed_departures(instance, idx, mot);
                        b.push_trip_leg_at(trip.user_id, chain[hop], chain[hop + 1], mot, deps[hop])
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
    // Car connections: co-located pairs where the successor's reference
    // start is not earlier than the predecessor's reference end (car times).
    let car_windows: Vec<(i64, i64)> = (0..instance.trips.len())
        .map(|idx| {
            let (_, start, end) = fixed_departures(instance, idx, Mot::Car);
            (start, end)
        })
        .collect();
    for (i, from_trip) in instance.trips.iter().enumerate() {
        for (j, to_trip) in instance.trips.iter().enumerate() {
            if i == j {
                continue;
            }
            let co_located = from_trip.end_depot == to_trip.start_depot;
            if co_located && car_windows[j].0 >= car_windows[i].1 {
                let from = b.trip_end[i];
                let to = b.trip_start[j];
                b.push_leg(LegKind::CarConnect, None, from, to, Some(Mot::Car), 0, 0, 0);
            }
        }
    }
    b.finish(variant)
}

/// Free sequences, static weights: all intra-trip node pairs per mode
/// (start/end roles preserved), user source/sink/connection legs, car
/// connections between all co-located trip ends/starts.
pub fn build_graph_m3(instance: &Instance) -> Graph {
    let mut b = Builder::new(instance);
    for (idx, trip) in instance.trips.iter().enumerate() {
        b.depot_legs(idx);
        let a = b.trip_start[idx];
        let end = b.trip_end[idx];
        let tasks = b.task_nodes[idx].clone();
        for &q in &tasks {
            for mot in Mot::ALL {
                b.push_trip_leg_base(trip.user_id, a, q, mot);
            }
        }
        for &q in &tasks {
            for &q2 in &tasks {
                if q == q2 {
                    continue;
                }
                for mot in Mot::ALL {
                    b.push_trip_leg_base(trip.user_id, q, q2, mot);
                }
            }
        }
        for &q in &tasks {
            for mot in Mot::ALL {
                b.push_trip_leg_base(trip.user_id, q, end, mot);
            }
        }
    }
    for (i, from_trip) in instance.trips.iter().enumerate() {
        for (j, to_trip) in instance.trips.iter().enumerate() {
            if i != j && from_trip.end_depot == to_trip.start_depot {
                let from = b.trip_end[i];
                let to = b.trip_start[j];
                b.push_leg(LegKind::CarConnect, None, from, to, Some(Mot::Car), 0, 0, 0);
            }
        }
    }
    for user in &instance.users {
        let first_loc = b.nodes[b.trip_start[user.trip_ids[0].0].0].location;
        let source = b.push_node(NodeKind::UserSource(user.id), first_loc, 0, Some(user.id), None);
        let last_loc = b.nodes[b.trip_end[user.trip_ids.last().unwrap().0].0].location;
        let sink = b.push_node(NodeKind::UserSink(user.id), last_loc, 0, Some(user.id), None);
        for &r in &user.trip_ids {
            let a = b.trip_start[r.0];
            b.push_leg(LegKind::UserSource, Some(user.id), source, a, None, 0, 0, 0);
        }
        for &r in &user.trip_ids {
            let end = b.trip_end[r.0];
            b.push_leg(LegKind::UserSink, Some(user.id), end, sink, None, 0, 0, 0);
        }
        for &r in &user.trip_ids {
            for &r2 in &user.trip_ids {
                if r != r2 {
                    let from = b.trip_end[r.0];
                    let to = b.trip_start[r2.0];
                    b.push_leg(LegKind::UserConnect, Some(user.id), from, to, None, 0, 0, 0);
                }
            }
        }
    }
    b.finish(Variant::M3)
}

/// Free sequences, time-dependent weights: the m3 topology with every leg
/// duplicated per discretization interval. Duplicate weights are evaluated
/// at the interval start.
pub fn build_graph_m4(instance: &Instance) -> Graph {
    let m3 = build_graph_m3(instance);
    let slots = instance.horizon / instance.alpha;
    let mut legs: Vec<Leg> = Vec::with_capacity(m3.legs.len() * slots as usize);
    for base_leg in &m3.legs {
        for i in 0..slots {
            let o = i * instance.alpha;
            let e = (i + 1) * instance.alpha;
            let (cost, pref, time) = if base_leg.kind == LegKind::Trip {
                let user = instance.user(base_leg.user.unwrap());
                evaluate_trip_leg(
                    instance,
                    user,
                    m3.node(base_leg.from).location,
                    m3.node(base_leg.to).location,
                    base_leg.mot.unwrap(),
                    o,
                )
            } else {
                (0, 0, 0)
            };
            legs.push(Leg {
                id: LegId(legs.len()),
                base: BaseLegId(base_leg.id.0),
                kind: base_leg.kind,
                user: base_leg.user,
                from: base_leg.from,
                to: base_leg.to,
                mot: base_leg.mot,
                cost,
                pref,
                time,
                o,
                e,
            });
        }
    }
    Graph::from_parts(
        Variant::M4,
        m3.nodes,
        legs,
        instance.horizon,
        instance.alpha,
        instance.users.len(),
        m3.base_count,
    )
}

/// Merge maximal runs of consecutive-interval duplicates with identical
/// weights and travel time into one interval-spanning leg. Frontier
/// equivalent to the input graph.
pub fn reduce_graph(graph: &Graph) -> Graph {
    assert_eq!(graph.variant, Variant::M4);
    let mut legs: Vec<Leg> = Vec::new();
    for base in 0..graph.base_count {
        let mut run: Option<Leg> = None;
        for dup in graph.duplicates_of(BaseLegId(base)) {
            match run.as_mut() {
                Some(current)
                    if current.e == dup.o
                        && current.cost == dup.cost
                        && current.pref == dup.pref
                        && current.time == dup.time =>
                {
                    current.e = dup.e;
                }
                Some(current) => {
                    let mut done = current.clone();
                    done.id = LegId(legs.len());
                    legs.push(done);
                    run = Some(dup.clone());
                }
                None => run = Some(dup.clone()),
            }
        }
        if let Some(mut last) = run {
            last.id = LegId(legs.len());
            legs.push(last);
        }
    }
    Graph::from_parts(
        Variant::M4,
        graph.nodes.clone(),
        legs,
        graph.horizon,
        graph.alpha,
        graph.n_users,
        graph.base_count,
    )
}
