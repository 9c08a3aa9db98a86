//! Shared helpers for unit tests.

use crate::instance::{
    tables, Depot, DepotId, Instance, Mot, MotAccess, Point, TaskId, TaskSpec, TimePeriod,
    TripId, TripSpec, User, UserId,
};
use crate::multigraph::{BaseLegId, Graph, Leg, LegId, LegKind, Node, NodeId, NodeKind, Variant};

/// Hand-built instance: one trip per entry, each entry being
/// (user, start_depot, end_depot, tasks as (x, y, service, fixed_start)).
pub fn manual_instance(
    n_depots: usize,
    trips: &[(usize, usize, usize, Vec<(i64, i64, i64, i64)>)],
) -> Instance {
    let depots: Vec<Depot> = (0..n_depots)
        .map(|i| Depot {
            id: DepotId(i),
            location: Point::new(1000 * i as i64, 0),
            car_start: 4,
            car_end: 8,
        })
        .collect();
    let n_users = trips.iter().map(|t| t.0).max().unwrap() + 1;
    let mut users: Vec<User> = (0..n_users)
        .map(|u| User {
            id: UserId(u),
            mot_access: MotAccess {
                car: true,
                public: true,
                ..Default::default()
            },
            trip_ids: vec![],
        })
        .collect();
    let mut out_trips = Vec::new();
    let mut next_task = 0;
    for (i, (user, start, end, tasks)) in trips.iter().enumerate() {
        let id = TripId(i);
        users[*user].trip_ids.push(id);
        out_trips.push(TripSpec {
            id,
            user_id: UserId(*user),
            start_depot: DepotId(*start),
            end_depot: DepotId(*end),
            tasks: tasks
                .iter()
                .map(|&(x, y, service_time, fixed_start)| {
                    let t = TaskSpec {
                        id: TaskId(next_task),
                        location: Point::new(x, y),
                        service_time,
                        fixed_start,
                    };
                    next_task += 1;
                    t
                })
                .collect(),
            given_order_is_reference: true,
        });
    }
    let instance = Instance {
        users,
        depots,
        trips: out_trips,
        periods: tables::default_periods(),
        mots: crate::instance::generate::default_mot_params(),
        horizon: 720,
        max_wait: 30,
        alpha: 15,
    };
    instance.validate().unwrap();
    instance
}

/// Neutral periods: zero deltas, unit betas.
pub fn flat_periods() -> Vec<TimePeriod> {
    tables::default_periods()
        .into_iter()
        .map(|mut p| {
            p.pref_delta = [0, 0, 0];
            p.beta_num = [10, 10, 10];
            p.beta_den = [10, 10, 10];
            p
        })
        .collect()
}

/// Hand-assembled graph with explicit nodes and legs, for separation tests
/// that need full control over intervals and travel times.
pub struct GraphSketch {
    pub nodes: Vec<Node>,
    pub legs: Vec<Leg>,
    pub n_users: usize,
}

impl GraphSketch {
    pub fn new(n_users: usize) -> Self {
        GraphSketch {
            nodes: Vec::new(),
            legs: Vec::new(),
            n_users,
        }
    }

    pub fn node(&mut self, kind: NodeKind, service_time: i64) -> NodeId {
        let id = NodeId(self.nodes.len());
        let (user, trip) = match kind {
            NodeKind::TripStart(r) | NodeKind::TripEnd(r) => (None, Some(r)),
            NodeKind::Task(_) => (None, None),
            NodeKind::UserSource(p) | NodeKind::UserSink(p) => (Some(p), None),
            NodeKind::Depot(_) => (None, None),
        };
        self.nodes.push(Node {
            id,
            kind,
            location: Point::new(0, 0),
            service_time,
            user,
            trip,
        });
        id
    }

    /// Node with explicit trip/user ownership.
    pub fn owned_node(
        &mut self,
        kind: NodeKind,
        service_time: i64,
        user: Option<UserId>,
        trip: Option<TripId>,
    ) -> NodeId {
        let id = self.node(kind, service_time);
        self.nodes[id.0].user = user;
        self.nodes[id.0].trip = trip;
        id
    }

    #[allow(clippy::too_many_arguments)]
    pub fn leg(
        &mut self,
        kind: LegKind,
        user: Option<UserId>,
        from: NodeId,
        to: NodeId,
        mot: Option<Mot>,
        time: i64,
        o: i64,
        e: i64,
    ) -> LegId {
        self.leg_with_base(kind, user, from, to, mot, time, o, e, None)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn leg_with_base(
        &mut self,
        kind: LegKind,
        user: Option<UserId>,
        from: NodeId,
        to: NodeId,
        mot: Option<Mot>,
        time: i64,
        o: i64,
        e: i64,
        base: Option<BaseLegId>,
    ) -> LegId {
        let id = LegId(self.legs.len());
        self.legs.push(Leg {
            id,
            base: base.unwrap_or(BaseLegId(id.0)),
            kind,
            user,
            from,
            to,
            mot,
            cost: 0,
            pref: 0,
            time,
            o,
            e,
        });
        id
    }

    pub fn build(self) -> Graph {
        let base_count = self
            .legs
            .iter()
            .map(|l| l.base.0 + 1)
            .max()
            .unwrap_or(0)
            .max(self.legs.len());
        Graph::from_parts(
            Variant::M4,
            self.nodes,
            self.legs,
            720,
            15,
            self.n_users,
            base_count,
        )
    }
}
