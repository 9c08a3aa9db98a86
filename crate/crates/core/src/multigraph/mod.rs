//! Leg multigraphs for the model variants.
//!
//! Nodes are depots, trip starts/ends, tasks, and (for the flexible
//! variants) per-user source/sink nodes. A leg is one weighted arc option:
//! `(user, from, to, mot, cost, pref, time, o, e)`. Untimed legs carry
//! `(o, e) = (0, H)`; the time-expanded variant duplicates every leg per
//! discretization interval.
//!
//! Two leg families overlap on trip legs:
//!
//! * mot-flow legs (trip, depot in/out, car connections) drive the cover and
//!   per-mode flow-conservation constraints;
//! * user-flow legs (trip, user source/sink, user connections) drive the
//!   per-user routing constraints.

mod build;

pub use build::{build_graph_m1, build_graph_m2, build_graph_m3, build_graph_m4, reduce_graph};

use crate::instance::{DepotId, Mot, Point, TaskId, TripId, UserId};
use std::fmt;
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LegId(pub usize);

/// Identity of a leg before time expansion; duplicates of one base leg share
/// it. Strengthened cuts sweep over a violating leg's siblings through this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseLegId(pub usize);

macro_rules! impl_display_usize {
    ($($name:ident),*) => {
        $(impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        })*
    };
}
impl_display_usize!(NodeId, LegId, BaseLegId);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Depot(DepotId),
    TripStart(TripId),
    Task(TaskId),
    TripEnd(TripId),
    UserSource(UserId),
    UserSink(UserId),
}

#[derive(Debug, Clone)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    pub location: Point,
    pub service_time: i64,
    /// Owning user for trip and user nodes.
    pub user: Option<UserId>,
    /// Owning trip for trip nodes.
    pub trip: Option<TripId>,
}

impl Node {
    pub fn is_depot(&self) -> bool {
        matches!(self.kind, NodeKind::Depot(_))
    }

    pub fn is_trip_start(&self) -> bool {
        matches!(self.kind, NodeKind::TripStart(_))
    }

    pub fn is_trip_end(&self) -> bool {
        matches!(self.kind, NodeKind::TripEnd(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegKind {
    /// Between two nodes of one trip, per mode; both mot- and user-flow.
    Trip,
    /// Depot node to a trip start, per mode; mot-flow.
    DepotOut,
    /// Trip end to a depot node, per mode; mot-flow.
    DepotIn,
    /// Trip end to another trip's start, zero weight, car only.
    CarConnect,
    /// User source to one of the user's trip starts.
    UserSource,
    /// One of the user's trip ends to the user sink.
    UserSink,
    /// Trip end to another trip start of the same user.
    UserConnect,
}

#[derive(Debug, Clone)]
pub struct Leg {
    pub id: LegId,
    pub base: BaseLegId,
    pub kind: LegKind,
    pub user: Option<UserId>,
    pub from: NodeId,
    pub to: NodeId,
    pub mot: Option<Mot>,
    pub cost: i64,
    pub pref: i64,
    /// Travel time, minutes.
    pub time: i64,
    /// Departure interval start.
    pub o: i64,
    /// Departure interval end.
    pub e: i64,
}

impl Leg {
    /// Participates in cover / per-mode flow constraints.
    pub fn is_mot_flow(self: &Leg) -> bool {
        matches!(
            self.kind,
            LegKind::Trip | LegKind::DepotOut | LegKind::DepotIn | LegKind::CarConnect
        )
    }

    /// Participates in per-user routing constraints.
    pub fn is_user_flow(&self) -> bool {
        matches!(
            self.kind,
            LegKind::Trip | LegKind::UserSource | LegKind::UserSink | LegKind::UserConnect
        )
    }

    /// Artificial legs carry no cost or preference.
    pub fn is_artificial(&self) -> bool {
        !matches!(self.kind, LegKind::Trip)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    M1,
    M2,
    M3,
    M4,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::M1 => "m1",
            Variant::M2 => "m2",
            Variant::M3 => "m3",
            Variant::M4 => "m4",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Graph {
    pub variant: Variant,
    pub nodes: Vec<Node>,
    pub legs: Vec<Leg>,
    pub horizon: i64,
    pub alpha: i64,
    pub n_users: usize,
    /// Number of base legs (pre-expansion); base ids index into this range.
    pub base_count: usize,
    out: Vec<Vec<LegId>>,
    inn: Vec<Vec<LegId>>,
    by_base: Vec<Vec<LegId>>,
}

impl Graph {
    /// Assemble a graph from explicit parts. The builders cover the model
    /// variants; this is for synthetic graphs in harnesses and tests.
    pub fn from_parts(
        variant: Variant,
        nodes: Vec<Node>,
        legs: Vec<Leg>,
        horizon: i64,
        alpha: i64,
        n_users: usize,
        base_count: usize,
    ) -> Graph {
        let mut out = vec![Vec::new(); nodes.len()];
        let mut inn = vec![Vec::new(); nodes.len()];
        let mut by_base = vec![Vec::new(); base_count];
        for leg in &legs {
            out[leg.from.0].push(leg.id);
            inn[leg.to.0].push(leg.id);
            by_base[leg.base.0].push(leg.id);
        }
        Graph {
            variant,
            nodes,
            legs,
            horizon,
            alpha,
            n_users,
            base_count,
            out,
            inn,
            by_base,
        }
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn leg(&self, id: LegId) -> &Leg {
        &self.legs[id.0]
    }

    /// All outgoing legs of a node.
    pub fn out_legs(&self, v: NodeId) -> impl Iterator<Item = &Leg> + '_ {
        self.out[v.0].iter().map(move |&l| self.leg(l))
    }

    /// All ingoing legs of a node.
    pub fn in_legs(&self, v: NodeId) -> impl Iterator<Item = &Leg> + '_ {
        self.inn[v.0].iter().map(move |&l| self.leg(l))
    }

    /// Outgoing mot-flow legs of `v` by mode.
    pub fn out_mot(&self, v: NodeId, k: Mot) -> impl Iterator<Item = &Leg> + '_ {
        self.out_legs(v).filter(move |l| l.is_mot_flow() && l.mot == Some(k))
    }

    /// Ingoing mot-flow legs of `v` by mode.
    pub fn in_mot(&self, v: NodeId, k: Mot) -> impl Iterator<Item = &Leg> + '_ {
        self.in_legs(v).filter(move |l| l.is_mot_flow() && l.mot == Some(k))
    }

    /// Outgoing user-flow legs of `v` for one user.
    pub fn out_user(&self, v: NodeId, p: UserId) -> impl Iterator<Item = &Leg> + '_ {
        self.out_legs(v)
            .filter(move |l| l.is_user_flow() && l.user == Some(p))
    }

    /// Ingoing user-flow legs of `v` for one user.
    pub fn in_user(&self, v: NodeId, p: UserId) -> impl Iterator<Item = &Leg> + '_ {
        self.in_legs(v)
            .filter(move |l| l.is_user_flow() && l.user == Some(p))
    }

    /// All legs of one user (trip legs plus user-structure legs).
    pub fn user_legs(&self, p: UserId) -> impl Iterator<Item = &Leg> + '_ {
        self.legs
            .iter()
            .filter(move |l| l.is_user_flow() && l.user == Some(p))
    }

    /// Trip legs of one trip.
    pub fn trip_legs(&self, r: TripId) -> impl Iterator<Item = &Leg> + '_ {
        self.legs.iter().filter(move |l| {
            l.kind == LegKind::Trip && self.node(l.from).trip == Some(r)
        })
    }

    /// Legs from `v` to `w`.
    pub fn legs_between(&self, v: NodeId, w: NodeId) -> impl Iterator<Item = &Leg> + '_ {
        self.out_legs(v).filter(move |l| l.to == w)
    }

    /// Duplicates sharing a base leg, in construction (interval) order.
    pub fn duplicates_of(&self, base: BaseLegId) -> impl Iterator<Item = &Leg> + '_ {
        self.by_base[base.0].iter().map(move |&l| self.leg(l))
    }

    pub fn depot_nodes(&self) -> impl Iterator<Item = &Node> + '_ {
        self.nodes.iter().filter(|n| n.is_depot())
    }

    pub fn user_source(&self, p: UserId) -> Option<NodeId> {
        self.nodes
            .iter()
            .find(|n| n.kind == NodeKind::UserSource(p))
            .map(|n| n.id)
    }

    pub fn user_sink(&self, p: UserId) -> Option<NodeId> {
        self.nodes
            .iter()
            .find(|n| n.kind == NodeKind::UserSink(p))
            .map(|n| n.id)
    }

    /// Debug dump of all legs, one line per leg: `id,u,y,z,m,c,theta,t,o,e`.
    pub fn write_legs_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "id,u,y,z,m,c,theta,t,o,e")?;
        for leg in &self.legs {
            let u = leg.user.map(|u| u.to_string()).unwrap_or_default();
            let m = leg.mot.map(|m| m.to_string()).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{}",
                leg.id, u, leg.from, leg.to, m, leg.cost, leg.pref, leg.time, leg.o, leg.e
            )?;
        }
        Ok(())
    }
}

/// Weighted average of per-period values over `[departure, departure +
/// duration)`, rounded half up. Zero duration evaluates the period containing
/// the departure; time at or past the horizon counts toward the last period.
pub fn weighted_leg_value(
    periods: &[crate::instance::TimePeriod],
    values: &[i64],
    departure: i64,
    duration: i64,
) -> i64 {
    assert_eq!(periods.len(), values.len());
    assert!(duration >= 0);
    if duration == 0 {
        let idx = periods
            .iter()
            .position(|p| p.start <= departure && departure < p.end)
            .unwrap_or(periods.len() - 1);
        return values[idx];
    }
    let span_end = departure + duration;
    let mut num = 0i64;
    for (i, p) in periods.iter().enumerate() {
        let end = if i + 1 == periods.len() { i64::MAX } else { p.end };
        let lo = p.start.max(departure);
        let hi = end.min(span_end);
        if hi > lo {
            num += (hi - lo) * values[i];
        }
    }
    crate::instance::div_round_half_up(num, duration)
}

#[cfg(test)]
mod test;
