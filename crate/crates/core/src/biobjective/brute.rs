//! Brute-force frontier oracle: exhaustive enumeration over mode
//! assignments, task orders, trip orders, car chain partitions and
//! interval choices, with departure times checked as a difference-constraint
//! system. Independent of the MIP path end to end.

use super::{Frontier, ParetoPoint};
use crate::instance::{Instance, Mot, TripId, UserId};
use crate::models::Formulation;
use crate::multigraph::{
    build_graph_m1, build_graph_m2, build_graph_m3, build_graph_m4, reduce_graph, Graph,
    LegId, LegKind, NodeId, NodeKind,
};
use std::collections::HashMap;
use thiserror::Error;

/// Hard caps: the oracle enumerates everything, so it only accepts small
/// instances.
pub const ORACLE_LIMITS: OracleLimits = OracleLimits {
    users: 3,
    trips_per_user: 2,
    tasks_per_trip: 3,
    depots: 2,
};

#[derive(Debug, Clone, Copy)]
pub struct OracleLimits {
    pub users: usize,
    pub trips_per_user: usize,
    pub tasks_per_trip: usize,
    pub depots: usize,
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance exceeds oracle limits: {0}")]
    OverLimit(String),
    #[error("oracle work cap exceeded; instance too entangled for enumeration")]
    WorkCap,
}

const WORK_CAP: u64 = 200_000_000;

pub fn brute_force_frontier(
    instance: &Instance,
    formulation: Formulation,
) -> Result<Frontier, OracleError> {
    check_limits(instance)?;
    let graph = match formulation {
        Formulation::M1 => build_graph_m1(instance),
        Formulation::M2 => build_graph_m2(instance),
        Formulation::M3 => build_graph_m3(instance),
        Formulation::M4 | Formulation::M4b => reduce_graph(&build_graph_m4(instance)),
    };
    let timed = matches!(formulation, Formulation::M3 | Formulation::M4 | Formulation::M4b);
    let free_order = timed;
    let mut oracle = Oracle::new(instance, &graph, timed, free_order)?;
    oracle.run()?;
    let mut points: Vec<(i64, i64, Vec<LegId>)> = oracle.found;
    points.sort_by_key(|p| (p.0, p.1));
    let mut frontier = Frontier {
        method: "oracle".into(),
        ..Default::default()
    };
    let mut best_pref = i64::MAX;
    for (cost, pref, legs) in points {
        if pref < best_pref {
            best_pref = pref;
            let [trips_car, trips_bike, trips_public] = super::trips_by_mot(&graph, &legs);
            frontier.points.push(ParetoPoint {
                cost,
                pref,
                legs,
                solve_seconds: 0.0,
                cuts_user: 0,
                cuts_car: 0,
                cuts_sync: 0,
                trips_car,
                trips_bike,
                trips_public,
            });
        }
    }
    Ok(frontier)
}

fn check_limits(instance: &Instance) -> Result<(), OracleError> {
    let l = ORACLE_LIMITS;
    if instance.users.len() > l.users {
        return Err(OracleError::OverLimit(format!(
            "{} users > {}",
            instance.users.len(),
            l.users
        )));
    }
    if instance.depots.len() > l.depots {
        return Err(OracleError::OverLimit(format!(
            "{} depots > {}",
            instance.depots.len(),
            l.depots
        )));
    }
    for u in &instance.users {
        if u.trip_ids.len() > l.trips_per_user {
            return Err(OracleError::OverLimit(format!(
                "user {} has {} trips > {}",
                u.id,
                u.trip_ids.len(),
                l.trips_per_user
            )));
        }
    }
    for t in &instance.trips {
        if t.tasks.len() > l.tasks_per_trip {
            return Err(OracleError::OverLimit(format!(
                "trip {} has {} tasks > {}",
                t.id,
                t.tasks.len(),
                l.tasks_per_trip
            )));
        }
    }
    Ok(())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn rec(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(k + 1, items, out);
            items.swap(k, i);
        }
    }
    rec(0, &mut items, &mut out);
    out.sort();
    out
}

/// Trip legs of one trip in a given task order and mode, as graph base legs.
struct TripLegs {
    legs: Vec<LegId>,
}

struct Oracle<'a> {
    instance: &'a Instance,
    graph: &'a Graph,
    timed: bool,
    free_order: bool,
    start_node: HashMap<TripId, NodeId>,
    end_node: HashMap<TripId, NodeId>,
    task_node: Vec<Vec<NodeId>>,
    /// (from, to, mot) -> duplicates in interval order.
    trip_leg_index: HashMap<(NodeId, NodeId, Mot), Vec<LegId>>,
    conn_index: HashMap<(NodeId, NodeId), LegId>,
    user_leg_index: HashMap<(NodeId, NodeId, UserId), LegId>,
    found: Vec<(i64, i64, Vec<LegId>)>,
    work: u64,
}

impl<'a> Oracle<'a> {
    fn new(
        instance: &'a Instance,
        graph: &'a Graph,
        timed: bool,
        free_order: bool,
    ) -> Result<Self, OracleError> {
        let mut start_node = HashMap::new();
        let mut end_node = HashMap::new();
        let mut task_node = vec![Vec::new(); instance.trips.len()];
        for n in &graph.nodes {
            match n.kind {
                NodeKind::TripStart(r) => {
                    start_node.insert(r, n.id);
                }
                NodeKind::TripEnd(r) => {
                    end_node.insert(r, n.id);
                }
                NodeKind::Task(_) => {
                    task_node[n.trip.expect("task has a trip").0].push(n.id);
                }
                _ => {}
            }
        }
        let mut trip_leg_index: HashMap<(NodeId, NodeId, Mot), Vec<LegId>> = HashMap::new();
        let mut conn_index = HashMap::new();
        let mut user_leg_index = HashMap::new();
        for leg in &graph.legs {
            match leg.kind {
                LegKind::Trip => trip_leg_index
                    .entry((leg.from, leg.to, leg.mot.unwrap()))
                    .or_default()
                    .push(leg.id),
                LegKind::CarConnect => {
                    conn_index.entry((leg.from, leg.to)).or_insert(leg.id);
                }
                LegKind::UserSource | LegKind::UserSink | LegKind::UserConnect => {
                    user_leg_index
                        .entry((leg.from, leg.to, leg.user.unwrap()))
                        .or_insert(leg.id);
                }
                _ => {}
            }
        }
        Ok(Oracle {
            instance,
            graph,
            timed,
            free_order,
            start_node,
            end_node,
            task_node,
            trip_leg_index,
            conn_index,
            user_leg_index,
            found: Vec::new(),
            work: 0,
        })
    }

    fn run(&mut self) -> Result<(), OracleError> {
        let n_trips = self.instance.trips.len();
        // per-trip candidate task orders
        let orders: Vec<Vec<Vec<usize>>> = self
            .instance
            .trips
            .iter()
            .map(|t| {
                if self.free_order {
                    permutations(t.tasks.len())
                } else {
                    vec![(0..t.tasks.len()).collect()]
                }
            })
            .collect();
        // per-user candidate trip orders
        let user_orders: Vec<Vec<Vec<TripId>>> = self
            .instance
            .users
            .iter()
            .map(|u| {
                if self.free_order {
                    permutations(u.trip_ids.len())
                        .into_iter()
                        .map(|perm| perm.iter().map(|&i| u.trip_ids[i]).collect())
                        .collect()
                } else {
                    vec![u.trip_ids.clone()]
                }
            })
            .collect();

        let mut mots = vec![Mot::Car; n_trips];
        let mut order_pick = vec![0usize; n_trips];
        let mut user_pick = vec![0usize; self.instance.users.len()];
        self.enumerate_mots(0, &mut mots, &orders, &mut order_pick, &user_orders, &mut user_pick)
    }

    fn enumerate_mots(
        &mut self,
        trip: usize,
        mots: &mut Vec<Mot>,
        orders: &Vec<Vec<Vec<usize>>>,
        order_pick: &mut Vec<usize>,
        user_orders: &Vec<Vec<Vec<TripId>>>,
        user_pick: &mut Vec<usize>,
    ) -> Result<(), OracleError> {
        if trip == mots.len() {
            return self.enumerate_orders(0, mots, orders, order_pick, user_orders, user_pick);
        }
        for mot in Mot::ALL {
            mots[trip] = mot;
            self.enumerate_mots(trip + 1, mots, orders, order_pick, user_orders, user_pick)?;
        }
        Ok(())
    }

    fn enumerate_orders(
        &mut self,
        trip: usize,
        mots: &Vec<Mot>,
        orders: &Vec<Vec<Vec<usize>>>,
        order_pick: &mut Vec<usize>,
        user_orders: &Vec<Vec<Vec<TripId>>>,
        user_pick: &mut Vec<usize>,
    ) -> Result<(), OracleError> {
        if trip == order_pick.len() {
            return self.enumerate_user_orders(0, mots, orders, order_pick, user_orders, user_pick);
        }
        for pick in 0..orders[trip].len() {
            order_pick[trip] = pick;
            self.enumerate_orders(trip + 1, mots, orders, order_pick, user_orders, user_pick)?;
        }
        Ok(())
    }

    fn enumerate_user_orders(
        &mut self,
        user: usize,
        mots: &Vec<Mot>,
        orders: &Vec<Vec<Vec<usize>>>,
        order_pick: &mut Vec<usize>,
        user_orders: &Vec<Vec<Vec<TripId>>>,
        user_pick: &mut Vec<usize>,
    ) -> Result<(), OracleError> {
        if user == user_pick.len() {
            let task_orders: Vec<&Vec<usize>> = (0..orders.len())
                .map(|t| &orders[t][order_pick[t]])
                .collect();
            let trip_orders: Vec<&Vec<TripId>> = (0..user_orders.len())
                .map(|u| &user_orders[u][user_pick[u]])
                .collect();
            return self.enumerate_chains(mots, &task_orders, &trip_orders);
        }
        for pick in 0..user_orders[user].len() {
            user_pick[user] = pick;
            self.enumerate_user_orders(user + 1, mots, orders, order_pick, user_orders, user_pick)?;
        }
        Ok(())
    }

    /// Enumerate successor assignments over the car trips (chains), check
    /// pool capacities, then evaluate the fully specified structure.
    fn enumerate_chains(
        &mut self,
        mots: &[Mot],
        task_orders: &[&Vec<usize>],
        trip_orders: &[&Vec<TripId>],
    ) -> Result<(), OracleError> {
        let car_trips: Vec<TripId> = (0..mots.len())
            .filter(|&t| mots[t] == Mot::Car)
            .map(TripId)
            .collect();
        let k = car_trips.len();
        let elig: Vec<Vec<bool>> = car_trips
            .iter()
            .map(|&a| {
                car_trips
                    .iter()
                    .map(|&b| {
                        a != b
                            && self
                                .conn_index
                                .contains_key(&(self.end_node[&a], self.start_node[&b]))
                    })
                    .collect()
            })
            .collect();
        let mut succ: Vec<Option<usize>> = vec![None; k];
        let mut has_pred = vec![false; k];
        self.assign_successors(
            0,
            &car_trips,
            &elig,
            &mut succ,
            &mut has_pred,
            mots,
            task_orders,
            trip_orders,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_successors(
        &mut self,
        i: usize,
        car_trips: &[TripId],
        elig: &[Vec<bool>],
        succ: &mut Vec<Option<usize>>,
        has_pred: &mut Vec<bool>,
        mots: &[Mot],
        task_orders: &[&Vec<usize>],
        trip_orders: &[&Vec<TripId>],
    ) -> Result<(), OracleError> {
        if i == car_trips.len() {
            // decode chains; reject cyclic successor maps
            let k = car_trips.len();
            let mut chains: Vec<Vec<TripId>> = Vec::new();
            let mut on_chain = vec![false; k];
            for head in 0..k {
                if has_pred[head] {
                    continue;
                }
                let mut chain = Vec::new();
                let mut cur = Some(head);
                while let Some(c) = cur {
                    chain.push(car_trips[c]);
                    on_chain[c] = true;
                    cur = succ[c];
                }
                chains.push(chain);
            }
            if on_chain.iter().any(|&b| !b) {
                return Ok(()); // a successor cycle, not a set of chains
            }
            // pool capacities at both horizon ends
            let mut starts: HashMap<crate::instance::DepotId, i64> = HashMap::new();
            let mut ends: HashMap<crate::instance::DepotId, i64> = HashMap::new();
            for chain in &chains {
                let head = self.instance.trip(chain[0]);
                let tail = self.instance.trip(*chain.last().unwrap());
                *starts.entry(head.start_depot).or_default() += 1;
                *ends.entry(tail.end_depot).or_default() += 1;
            }
            for (d, n) in starts {
                if n > self.instance.depot(d).car_start {
                    return Ok(());
                }
            }
            for (d, n) in ends {
                if n > self.instance.depot(d).car_end {
                    return Ok(());
                }
            }
            return self.evaluate(mots, task_orders, trip_orders, &chains);
        }
        // no successor
        succ[i] = None;
        self.assign_successors(
            i + 1,
            car_trips,
            elig,
            succ,
            has_pred,
            mots,
            task_orders,
            trip_orders,
        )?;
        for j in 0..car_trips.len() {
            if j != i && !has_pred[j] && elig[i][j] {
                succ[i] = Some(j);
                has_pred[j] = true;
                self.assign_successors(
                    i + 1,
                    car_trips,
                    elig,
                    succ,
                    has_pred,
                    mots,
                    task_orders,
                    trip_orders,
                )?;
                has_pred[j] = false;
            }
        }
        succ[i] = None;
        Ok(())
    }

    /// Trip legs of one trip under the structure.
    fn trip_legs(&self, trip: usize, mot: Mot, order: &[usize]) -> Option<TripLegs> {
        let r = TripId(trip);
        let mut nodes = vec![self.start_node[&r]];
        for &i in order {
            nodes.push(self.task_node[trip][i]);
        }
        nodes.push(self.end_node[&r]);
        let mut legs = Vec::with_capacity(nodes.len() - 1);
        for w in nodes.windows(2) {
            let dups = self.trip_leg_index.get(&(w[0], w[1], mot))?;
            legs.push(dups[0]);
        }
        Some(TripLegs { legs })
    }

    fn evaluate(
        &mut self,
        mots: &[Mot],
        task_orders: &[&Vec<usize>],
        trip_orders: &[&Vec<TripId>],
        chains: &[Vec<TripId>],
    ) -> Result<(), OracleError> {
        // assemble per-trip legs (first duplicate as the base representative)
        let mut per_trip: Vec<TripLegs> = Vec::with_capacity(mots.len());
        for t in 0..mots.len() {
            match self.trip_legs(t, mots[t], task_orders[t]) {
                Some(l) => per_trip.push(l),
                None => return Ok(()), // no such leg in a fixed-order graph
            }
        }

        // user paths: source leg, trips with connections, sink leg
        let mut user_paths: Vec<Vec<LegId>> = Vec::new();
        for (u, order) in trip_orders.iter().enumerate() {
            let user = UserId(u);
            let source = self.graph.user_source(user);
            let mut path = Vec::new();
            if self.timed {
                let source = source.expect("user nodes exist in timed graphs");
                let first = self.start_node[&order[0]];
                path.push(self.user_leg_index[&(source, first, user)]);
            }
            for (i, &r) in order.iter().enumerate() {
                path.extend(per_trip[r.0].legs.iter().copied());
                if i + 1 < order.len() {
                    let from = self.end_node[&r];
                    let to = self.start_node[&order[i + 1]];
                    if self.timed {
                        path.push(self.user_leg_index[&(from, to, user)]);
                    }
                }
            }
            if self.timed {
                let sink = self.graph.user_sink(user).expect("user sink");
                let last = self.end_node[order.last().unwrap()];
                path.push(self.user_leg_index[&(last, sink, user)]);
            }
            user_paths.push(path);
        }

        // car chain paths: trips joined by connection legs
        let mut chain_paths: Vec<Vec<LegId>> = Vec::new();
        for chain in chains {
            let mut path = Vec::new();
            for (i, &r) in chain.iter().enumerate() {
                path.extend(per_trip[r.0].legs.iter().copied());
                if i + 1 < chain.len() {
                    let from = self.end_node[&r];
                    let to = self.start_node[&chain[i + 1]];
                    path.push(self.conn_index[&(from, to)]);
                }
            }
            chain_paths.push(path);
        }

        if !self.timed {
            // static variants: weights decided, no departure times
            let mut legs: Vec<LegId> = Vec::new();
            for p in &user_paths {
                legs.extend(p.iter().copied());
            }
            for p in &chain_paths {
                for &l in p {
                    if self.graph.leg(l).kind == LegKind::CarConnect {
                        legs.push(l);
                    }
                }
            }
            let (cost, pref) = self.weigh(&legs);
            self.record(cost, pref, legs);
            return Ok(());
        }

        // timed variants: enumerate interval duplicates per trip leg under
        // the difference-constraint system
        let system = TimingSystem::build(self, &user_paths, &chain_paths);
        system.search(self)
    }

    fn weigh(&self, legs: &[LegId]) -> (i64, i64) {
        let mut cost = 0;
        let mut pref = 0;
        for &l in legs {
            let leg = self.graph.leg(l);
            cost += leg.cost;
            pref += leg.pref;
        }
        (cost, pref)
    }

    fn record(&mut self, cost: i64, pref: i64, legs: Vec<LegId>) {
        // keep only nondominated entries (with witnesses)
        if self
            .found
            .iter()
            .any(|&(c, p, _)| c <= cost && p <= pref)
        {
            return;
        }
        self.found.retain(|&(c, p, _)| !(cost <= c && pref <= p));
        self.found.push((cost, pref, legs));
    }

    fn dominated_or_found(&self, cost: i64, pref: i64) -> bool {
        self.found.iter().any(|&(c, p, _)| c <= cost && p <= pref)
    }

    fn charge(&mut self, units: u64) -> Result<(), OracleError> {
        self.work += units;
        if self.work > WORK_CAP {
            return Err(OracleError::WorkCap);
        }
        Ok(())
    }
}

/// Difference-constraint system over the selected legs of one structure.
/// Variables are departure times; edges `(a, b, w)` read `tau_a <= tau_b + w`
/// with an extra origin node for the interval bounds.
struct TimingSystem {
    /// Per variable: candidate duplicates (artificial legs keep a single
    /// candidate spanning the horizon).
    candidates: Vec<Vec<LegId>>,
    /// Consecutive pairs (prev var, next var, service time between).
    pairs: Vec<(usize, usize, i64)>,
    /// Travel-time range over each variable's candidates.
    time_range: Vec<(i64, i64)>,
    /// Optimistic per-variable weight minima for the Pareto prune.
    min_cost: Vec<i64>,
    min_pref: Vec<i64>,
}

impl TimingSystem {
    fn build(oracle: &Oracle<'_>, user_paths: &[Vec<LegId>], chain_paths: &[Vec<LegId>]) -> Self {
        let graph = oracle.graph;
        let mut var_of: HashMap<LegId, usize> = HashMap::new();
        let mut candidates: Vec<Vec<LegId>> = Vec::new();
        let mut time_range = Vec::new();
        let mut min_cost = Vec::new();
        let mut min_pref = Vec::new();
        let mut add_var = |leg_id: LegId,
                           var_of: &mut HashMap<LegId, usize>,
                           candidates: &mut Vec<Vec<LegId>>| {
            if var_of.contains_key(&leg_id) {
                return;
            }
            let leg = graph.leg(leg_id);
            let dups: Vec<LegId> = if leg.kind == LegKind::Trip {
                graph.duplicates_of(leg.base).map(|l| l.id).collect()
            } else {
                vec![leg_id]
            };
            let times: Vec<i64> = dups.iter().map(|&d| graph.leg(d).time).collect();
            time_range.push((
                *times.iter().min().unwrap(),
                *times.iter().max().unwrap(),
            ));
            min_cost.push(dups.iter().map(|&d| graph.leg(d).cost).min().unwrap());
            min_pref.push(dups.iter().map(|&d| graph.leg(d).pref).min().unwrap());
            var_of.insert(leg_id, candidates.len());
            candidates.push(dups);
        };
        let mut pairs = Vec::new();
        for path in user_paths.iter().chain(chain_paths.iter()) {
            for &l in path {
                add_var(l, &mut var_of, &mut candidates);
            }
            for w in path.windows(2) {
                let between = graph.node(graph.leg(w[0]).to).service_time;
                pairs.push((var_of[&w[0]], var_of[&w[1]], between));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        TimingSystem {
            candidates,
            pairs,
            time_range,
            min_cost,
            min_pref,
        }
    }

    /// Feasibility of a partial assignment. Assigned variables carry their
    /// duplicate's interval and travel time; unassigned ones relax to the
    /// full horizon and their loosest travel times, so a failure here prunes
    /// every completion.
    fn feasible(
        &self,
        oracle: &mut Oracle<'_>,
        assign: &[Option<LegId>],
    ) -> Result<bool, OracleError> {
        let n = self.candidates.len();
        let h = oracle.instance.max_wait;
        let horizon = oracle.graph.horizon;
        let mut edges: Vec<(usize, usize, i64)> = Vec::new();
        for (v, a) in assign.iter().enumerate() {
            let (o, e) = match a {
                Some(leg) => {
                    let l = oracle.graph.leg(*leg);
                    (l.o, l.e)
                }
                None => (0, horizon),
            };
            edges.push((v, n, e));
            edges.push((n, v, -o));
        }
        for &(prev, next, s_v) in &self.pairs {
            let (t_min, t_max) = match assign[prev] {
                Some(leg) => {
                    let t = oracle.graph.leg(leg).time;
                    (t, t)
                }
                None => self.time_range[prev],
            };
            // tau_next >= tau_prev + t + s
            edges.push((prev, next, -(t_min + s_v)));
            // tau_next <= tau_prev + t + s + h
            edges.push((next, prev, t_max + s_v + h));
        }
        oracle.charge((n as u64 + 1) * edges.len() as u64 / 8 + 1)?;
        let mut dist = vec![0i64; n + 1];
        for _ in 0..=n + 1 {
            let mut improved = false;
            for &(a, b, w) in &edges {
                if dist[b] + w < dist[a] {
                    dist[a] = dist[b] + w;
                    improved = true;
                }
            }
            if !improved {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn search(&self, oracle: &mut Oracle<'_>) -> Result<(), OracleError> {
        let n = self.candidates.len();
        let mut assign: Vec<Option<LegId>> = vec![None; n];
        let mut fixed_cost = 0;
        let mut fixed_pref = 0;
        for v in 0..n {
            if self.candidates[v].len() == 1 {
                let leg = oracle.graph.leg(self.candidates[v][0]);
                assign[v] = Some(self.candidates[v][0]);
                fixed_cost += leg.cost;
                fixed_pref += leg.pref;
            }
        }
        if !self.feasible(oracle, &assign)? {
            return Ok(());
        }
        // branch on multi-candidate variables in path order
        let order: Vec<usize> = (0..n).filter(|&v| self.candidates[v].len() > 1).collect();
        self.dfs(oracle, &order, 0, &mut assign, fixed_cost, fixed_pref)
    }

    fn dfs(
        &self,
        oracle: &mut Oracle<'_>,
        order: &[usize],
        depth: usize,
        assign: &mut Vec<Option<LegId>>,
        acc_cost: i64,
        acc_pref: i64,
    ) -> Result<(), OracleError> {
        if depth == order.len() {
            let mut legs: Vec<LegId> = assign.iter().map(|a| a.unwrap()).collect();
            legs.sort_unstable_by_key(|l| l.0);
            oracle.record(acc_cost, acc_pref, legs);
            return Ok(());
        }
        // optimistic completion for the Pareto prune
        let mut opt_cost = acc_cost;
        let mut opt_pref = acc_pref;
        for &w in &order[depth..] {
            opt_cost += self.min_cost[w];
            opt_pref += self.min_pref[w];
        }
        if oracle.dominated_or_found(opt_cost, opt_pref) {
            return Ok(());
        }
        let v = order[depth];
        for &cand in &self.candidates[v] {
            let leg_cost = oracle.graph.leg(cand).cost;
            let leg_pref = oracle.graph.leg(cand).pref;
            assign[v] = Some(cand);
            if self.feasible(oracle, assign)? {
                self.dfs(
                    oracle,
                    order,
                    depth + 1,
                    assign,
                    acc_cost + leg_cost,
                    acc_pref + leg_pref,
                )?;
            }
        }
        assign[v] = None;
        Ok(())
    }
}
